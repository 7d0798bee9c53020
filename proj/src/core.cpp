#include "uwar/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string_view>

namespace uwar {

Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return m;
}

Quaternion canonical(const Quaternion& q) {
  if (q.w() < 0.0) return Quaternion(-q.w(), -q.x(), -q.y(), -q.z());
  return q;
}

Quaternion quat_from_rotvec(const Vec3& r) {
  const double angle = r.norm();
  Quaternion q;
  if (angle < 1e-8) {
    // Second-order Taylor expansion of cos(a/2) and sin(a/2)/a.
    const double a2 = angle * angle;
    q.w() = 1.0 - a2 / 8.0;
    q.vec() = r * (0.5 - a2 / 48.0);
  } else {
    q.w() = std::cos(0.5 * angle);
    q.vec() = r * (std::sin(0.5 * angle) / angle);
  }
  q.normalize();
  return canonical(q);
}

Vec3 rotvec_from_quat(const Quaternion& q_in) {
  const Quaternion q = canonical(q_in.normalized());
  const double n = q.vec().norm();
  if (n == 0.0) return Vec3::Zero();
  const double angle = 2.0 * std::atan2(n, q.w());
  return q.vec() * (angle / n);
}

Vec3 rotate_vector(const Quaternion& q, const Vec3& v) {
  if (std::abs(q.norm() - 1.0) > kUnitNormTolerance) {
    throw std::invalid_argument("rotate_vector: quaternion is not unit-norm");
  }
  return q.toRotationMatrix() * v;
}

double quat_error(const Quaternion& q_est, const Quaternion& q_true) {
  const Quaternion rel = q_true.conjugate() * q_est;
  return 2.0 * std::atan2(rel.vec().norm(), std::abs(rel.w()));
}

Quaternion slerp(const Quaternion& a, const Quaternion& b, double s) {
  const Vec3 delta = rotvec_from_quat(a.conjugate() * b);
  Quaternion q = a * quat_from_rotvec(s * delta);
  q.normalize();
  return q;
}

Mat3 right_jacobian(const Vec3& r) {
  const double angle = r.norm();
  const Mat3 k = skew(r);
  if (angle < 1e-6) {
    return Mat3::Identity() - 0.5 * k + (1.0 / 6.0) * k * k;
  }
  const double a2 = angle * angle;
  return Mat3::Identity() - ((1.0 - std::cos(angle)) / a2) * k +
         ((angle - std::sin(angle)) / (a2 * angle)) * k * k;
}

namespace {

void validate_pose(const Pose& pose) {
  if (!std::isfinite(pose.t) || pose.t < 0.0) {
    throw std::invalid_argument("pose timestamp must be finite and non-negative");
  }
  if (!pose.p.allFinite() || !pose.q.coeffs().allFinite()) {
    throw std::invalid_argument("pose contains non-finite values");
  }
  if (std::abs(pose.q.norm() - 1.0) > kUnitNormTolerance) {
    throw std::invalid_argument("pose orientation is not unit-norm");
  }
}

}  // namespace

Trajectory::Trajectory(std::vector<Pose> samples) {
  samples_.reserve(samples.size());
  for (const auto& s : samples) push_back(s);
}

void Trajectory::push_back(const Pose& pose) {
  validate_pose(pose);
  if (!samples_.empty() && !(pose.t > samples_.back().t)) {
    throw std::invalid_argument("trajectory timestamps must be strictly increasing");
  }
  samples_.push_back(pose);
}

double Trajectory::start_time() const {
  if (samples_.empty()) throw std::out_of_range("empty trajectory");
  return samples_.front().t;
}

double Trajectory::end_time() const {
  if (samples_.empty()) throw std::out_of_range("empty trajectory");
  return samples_.back().t;
}

Pose Trajectory::sample_at(double t) const {
  if (samples_.empty() || !(t >= samples_.front().t) || !(t <= samples_.back().t)) {
    throw std::out_of_range("sample_at: time outside trajectory span");
  }
  auto it = std::upper_bound(samples_.begin(), samples_.end(), t,
                             [](double value, const Pose& p) { return value < p.t; });
  const Pose& prev = *(it - 1);
  if (prev.t == t || it == samples_.end()) return prev;
  const Pose& next = *it;
  const double s = (t - prev.t) / (next.t - prev.t);
  Pose out;
  out.t = t;
  out.p = prev.p + s * (next.p - prev.p);
  out.q = slerp(prev.q, next.q, s);
  return out;
}

std::string format_fixed(double value) {
  std::string out;
  append_fixed(out, value);
  return out;
}

void append_fixed(std::string& out, double value) {
  char buf[64];
  int n = std::snprintf(buf, sizeof(buf), "%.9f", value);
  const char* start = buf;
  // Collapse "-0.000000000" so that sign noise below the print precision
  // does not leak into byte comparisons.
  if (buf[0] == '-' && std::string_view(buf + 1, n - 1).find_first_not_of("0.") ==
                           std::string_view::npos) {
    ++start;
    --n;
  }
  out.append(start, static_cast<std::size_t>(n));
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(current);
      current.clear();
    } else if (c != '\r') {
      current.push_back(c);
    }
  }
  fields.push_back(current);
  return fields;
}

double parse_double(const std::string& field) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(field, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("invalid numeric field '" + field + "'");
  }
  if (used != field.size()) throw std::invalid_argument("invalid numeric field '" + field + "'");
  return v;
}

void append_pose_fields(std::string& out, const Pose& pose) {
  append_fixed(out, pose.t);
  for (double v : {pose.p.x(), pose.p.y(), pose.p.z(), pose.q.w(), pose.q.x(), pose.q.y(),
                   pose.q.z()}) {
    out.push_back(',');
    append_fixed(out, v);
  }
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  std::string buf = kTrajectoryCsvHeader;
  buf.push_back('\n');
  for (const Pose& pose : traj.samples()) {
    append_pose_fields(buf, pose);
    buf.push_back('\n');
  }
  os << buf;
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_trajectory_csv(os, traj);
  if (!os) throw std::runtime_error("write failed for '" + path + "'");
}

Trajectory read_trajectory_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind(kTrajectoryCsvHeader, 0) != 0) {
    throw std::invalid_argument("trajectory CSV: missing header");
  }
  Trajectory traj;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() < 8) throw std::invalid_argument("trajectory CSV: short row");
    Pose pose;
    pose.t = parse_double(f[0]);
    pose.p = Vec3(parse_double(f[1]), parse_double(f[2]), parse_double(f[3]));
    pose.q = Quaternion(parse_double(f[4]), parse_double(f[5]), parse_double(f[6]),
                        parse_double(f[7]));
    traj.push_back(pose);
  }
  return traj;
}

Trajectory read_trajectory_csv(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open '" + path + "'");
  return read_trajectory_csv(is);
}

}  // namespace uwar
