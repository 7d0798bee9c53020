#include "uwar/sim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace uwar::sim {

const Vec2& QuadVertices::operator[](char name) const {
  switch (name) {
    case 'A': return a;
    case 'B': return b;
    case 'C': return c;
    case 'D': return d;
    default: throw std::invalid_argument(std::string("unknown vertex '") + name + "'");
  }
}

namespace {

double cross2(const Vec2& u, const Vec2& v) { return u.x() * v.y() - u.y() * v.x(); }
Vec2 left_normal(const Vec2& d) { return Vec2(-d.y(), d.x()); }

void check_triangle(double a, double b, double c, const char* name) {
  if (!(a > 0.0 && b > 0.0 && c > 0.0) || !(a < b + c) || !(b < a + c) || !(c < a + b)) {
    throw std::invalid_argument(std::string("infeasible quadrilateral lengths: triangle ") + name +
                                " violates the triangle inequality");
  }
}

Vec2 rotate2(const Vec2& v, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return Vec2(c * v.x() - s * v.y(), s * v.x() + c * v.y());
}

Quaternion yaw_quaternion(double yaw) {
  return Quaternion(std::cos(0.5 * yaw), 0.0, 0.0, std::sin(0.5 * yaw));
}

// Piecewise line/arc path parameterised by arc length.
class CoursePath {
 public:
  CoursePath(const std::vector<Vec2>& points, double radius) {
    if (points.size() < 2) throw std::invalid_argument("course needs at least two points");
    Vec2 cursor = points.front();
    for (std::size_t i = 1; i + 1 < points.size(); ++i) {
      const Vec2& prev = points[i - 1];
      const Vec2& v = points[i];
      const Vec2& next = points[i + 1];
      const Vec2 d1 = (v - prev).normalized();
      const Vec2 d2 = (next - v).normalized();
      const double turn = std::atan2(cross2(d1, d2), d1.dot(d2));
      const double tangent = radius * std::tan(0.5 * std::abs(turn));
      if (tangent > 0.5 * (v - prev).norm() + 1e-12 || tangent > 0.5 * (next - v).norm() + 1e-12) {
        throw std::invalid_argument("corner radius too large for the course sides");
      }
      const Vec2 arc_start = v - d1 * tangent;
      add_line(cursor, arc_start);
      if (radius > 0.0 && std::abs(turn) > 1e-12) {
        Piece arc;
        arc.is_arc = true;
        arc.sign = turn > 0.0 ? 1.0 : -1.0;
        arc.radius = radius;
        arc.center = arc_start + arc.sign * radius * left_normal(d1);
        arc.start_angle = std::atan2(arc_start.y() - arc.center.y(), arc_start.x() - arc.center.x());
        arc.yaw0 = std::atan2(d1.y(), d1.x());
        arc.length = radius * std::abs(turn);
        push(arc);
      }
      cursor = v + d2 * tangent;
    }
    add_line(cursor, points.back());
  }

  double length() const { return total_; }

  void evaluate(double s, Vec2& pos, double& yaw) const {
    s = std::clamp(s, 0.0, total_);
    auto it = std::upper_bound(starts_.begin(), starts_.end(), s);
    std::size_t idx = static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, it - starts_.begin() - 1));
    const Piece& piece = pieces_[idx];
    const double local = std::min(s - starts_[idx], piece.length);
    if (!piece.is_arc) {
      pos = piece.start + piece.dir * local;
      yaw = piece.yaw0;
    } else {
      const double angle = piece.start_angle + piece.sign * local / piece.radius;
      pos = piece.center + piece.radius * Vec2(std::cos(angle), std::sin(angle));
      yaw = piece.yaw0 + piece.sign * local / piece.radius;
    }
  }

 private:
  struct Piece {
    bool is_arc = false;
    Vec2 start = Vec2::Zero();
    Vec2 dir = Vec2::UnitX();
    Vec2 center = Vec2::Zero();
    double radius = 0.0;
    double start_angle = 0.0;
    double sign = 1.0;
    double yaw0 = 0.0;
    double length = 0.0;
  };

  void add_line(const Vec2& from, const Vec2& to) {
    const double len = (to - from).norm();
    if (len <= 0.0) return;
    Piece line;
    line.start = from;
    line.dir = (to - from) / len;
    line.yaw0 = std::atan2(line.dir.y(), line.dir.x());
    line.length = len;
    push(line);
  }

  void push(const Piece& p) {
    starts_.push_back(total_);
    pieces_.push_back(p);
    total_ += p.length;
  }

  std::vector<Piece> pieces_;
  std::vector<double> starts_;
  double total_ = 0.0;
};

std::vector<Vec2> lap_points(const QuadVertices& v, int laps) {
  std::vector<Vec2> pts;
  for (int lap = 0; lap < laps; ++lap) {
    pts.push_back(v.a);
    pts.push_back(v.b);
    pts.push_back(v.c);
    pts.push_back(v.d);
  }
  pts.push_back(v.a);
  return pts;
}

void validate_course(const CourseMotion& course) {
  if (!(course.speed > 0.0)) throw std::invalid_argument("course speed must be positive");
  if (course.laps < 1) throw std::invalid_argument("course needs at least one lap");
  if (course.corner_radius < 0.0) throw std::invalid_argument("corner radius must be >= 0");
}

std::size_t sample_count(double duration, double rate) {
  return static_cast<std::size_t>(std::floor(duration * rate + 1e-9)) + 1;
}

}  // namespace

QuadVertices solve_quadrilateral(const QuadLengths& L) {
  check_triangle(L.ab, L.ad, L.bd, "ABD");
  check_triangle(L.ac, L.cd, L.ad, "ACD");

  QuadVertices q;
  q.a = Vec2::Zero();
  q.b = Vec2(L.ab, 0.0);
  const double dx = (L.ab * L.ab + L.ad * L.ad - L.bd * L.bd) / (2.0 * L.ab);
  q.d = Vec2(dx, std::sqrt(std::max(0.0, L.ad * L.ad - dx * dx)));

  const Vec2 u = q.d / L.ad;
  const double along = (L.ac * L.ac - L.cd * L.cd + L.ad * L.ad) / (2.0 * L.ad);
  const double h = std::sqrt(std::max(0.0, L.ac * L.ac - along * along));
  const double side = cross2(u, q.b) > 0.0 ? 1.0 : -1.0;
  q.c = along * u + side * h * left_normal(u);
  return q;
}

double course_rotation(const QuadVertices& local, double heading_offset_deg) {
  const double current = std::atan2(local.c.y() - local.a.y(), local.c.x() - local.a.x());
  const double target = 0.5 * std::numbers::pi - heading_offset_deg * std::numbers::pi / 180.0;
  return target - current;
}

QuadVertices course_vertices(const CourseMotion& course) {
  const QuadVertices local = solve_quadrilateral(course.lengths);
  const double rot = course_rotation(local, course.heading_offset_deg);
  return {rotate2(local.a, rot), rotate2(local.b, rot), rotate2(local.c, rot),
          rotate2(local.d, rot)};
}

double course_length(const CourseMotion& course) {
  validate_course(course);
  return CoursePath(lap_points(course_vertices(course), course.laps), course.corner_radius)
      .length();
}

Trajectory build_course(const CourseMotion& course, double rate) {
  validate_course(course);
  if (!(rate > 0.0)) throw std::invalid_argument("sampling rate must be positive");
  const CoursePath path(lap_points(course_vertices(course), course.laps), course.corner_radius);
  const double duration = path.length() / course.speed;
  const std::size_t n = sample_count(duration, rate);

  Trajectory traj;
  traj.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / rate;
    Vec2 xy;
    double yaw = 0.0;
    path.evaluate(course.speed * t, xy, yaw);
    traj.push_back(Pose{t, Vec3(xy.x(), xy.y(), -course.depth), canonical(yaw_quaternion(yaw))});
  }
  return traj;
}

Trajectory build_hover(const HoverMotion& hover, double rate) {
  if (!(hover.duration > 0.0)) throw std::invalid_argument("hover duration must be positive");
  if (!(rate > 0.0)) throw std::invalid_argument("sampling rate must be positive");
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  const std::size_t n = sample_count(hover.duration, rate);
  Trajectory traj;
  traj.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / rate;
    Pose pose;
    pose.t = t;
    for (int i = 0; i < 3; ++i) {
      pose.p[i] = hover.center[i] + hover.amplitude[i] * std::sin(kTwoPi * hover.frequency[i] * t);
    }
    Vec3 euler;
    for (int i = 0; i < 3; ++i) {
      euler[i] = hover.tilt_amplitude[i] * std::sin(kTwoPi * hover.tilt_frequency[i] * t);
    }
    pose.q = Quaternion(Eigen::AngleAxisd(euler.z(), Vec3::UnitZ()) *
                        Eigen::AngleAxisd(euler.y(), Vec3::UnitY()) *
                        Eigen::AngleAxisd(euler.x(), Vec3::UnitX()));
    pose.q = canonical(pose.q.normalized());
    traj.push_back(pose);
  }
  return traj;
}

Trajectory build_truth(const Scenario& scenario) {
  const double rate = std::max(scenario.sensors.imu_rate, scenario.sensors.vio_rate);
  return std::visit(
      [rate](const auto& motion) -> Trajectory {
        using T = std::decay_t<decltype(motion)>;
        if constexpr (std::is_same_v<T, CourseMotion>) {
          return build_course(motion, rate);
        } else {
          return build_hover(motion, rate);
        }
      },
      scenario.motion);
}

}  // namespace uwar::sim
