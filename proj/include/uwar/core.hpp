#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace uwar {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Hamilton, scalar-first, body-to-world.
using Quaternion = Eigen::Quaterniond;

// Inputs further than this from unit norm violate the rotation contracts.
inline constexpr double kUnitNormTolerance = 1e-6;

Mat3 skew(const Vec3& v);

// Sign-fixes q so that w >= 0. Rotation is unchanged.
Quaternion canonical(const Quaternion& q);

// Exponential map: rotation vector (axis * angle) to unit quaternion.
Quaternion quat_from_rotvec(const Vec3& r);

// Logarithmic map of the canonical representative; result has norm in [0, pi].
Vec3 rotvec_from_quat(const Quaternion& q);

Vec3 rotate_vector(const Quaternion& q, const Vec3& v);

// Angle of q_true^-1 * q_est, in [0, pi].
double quat_error(const Quaternion& q_est, const Quaternion& q_true);

// Geodesic interpolation along the shorter arc; s in [0, 1].
Quaternion slerp(const Quaternion& a, const Quaternion& b, double s);

// Right Jacobian of SO(3) at rotation vector r.
Mat3 right_jacobian(const Vec3& r);

struct Pose {
  double t = 0.0;
  Vec3 p = Vec3::Zero();
  Quaternion q = Quaternion::Identity();
};

/// Time-ordered sequence of poses with strictly increasing timestamps.
///
/// Construction and push_back validate ordering, finiteness and unit-norm
/// orientation; violations throw std::invalid_argument.
class Trajectory {
 public:
  Trajectory() = default;
  explicit Trajectory(std::vector<Pose> samples);

  void push_back(const Pose& pose);
  void reserve(std::size_t n) { samples_.reserve(n); }

  std::span<const Pose> samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }
  const Pose& operator[](std::size_t i) const { return samples_[i]; }
  const Pose& front() const { return samples_.front(); }
  const Pose& back() const { return samples_.back(); }
  double start_time() const;
  double end_time() const;

  /// Linear position / slerp orientation between bracketing samples.
  /// Returns the stored pose exactly when t matches a timestamp.
  /// Throws std::out_of_range outside [start_time(), end_time()].
  Pose sample_at(double t) const;

 private:
  std::vector<Pose> samples_;
};

inline Pose sample_at(const Trajectory& traj, double t) { return traj.sample_at(t); }

// Fixed 9-decimal rendering used by every CSV the project writes.
std::string format_fixed(double value);
void append_fixed(std::string& out, double value);

std::vector<std::string> split_csv_line(const std::string& line);
double parse_double(const std::string& field);

inline constexpr const char* kTrajectoryCsvHeader = "t,x,y,z,qw,qx,qy,qz";

void append_pose_fields(std::string& out, const Pose& pose);
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

// Accepts extra trailing columns after qz; they are ignored.
Trajectory read_trajectory_csv(std::istream& is);
Trajectory read_trajectory_csv(const std::string& path);

}  // namespace uwar
