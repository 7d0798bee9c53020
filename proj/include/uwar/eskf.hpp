#pragma once

#include "uwar/core.hpp"

#include <span>

namespace uwar {

/// Error-state layout: dp, dv, dtheta, d accel bias, d gyro bias.
namespace err {
inline constexpr int kPos = 0;
inline constexpr int kVel = 3;
inline constexpr int kAtt = 6;
inline constexpr int kAccelBias = 9;
inline constexpr int kGyroBias = 12;
inline constexpr int kDim = 15;
}  // namespace err

using ErrorVector = Eigen::Matrix<double, err::kDim, 1>;
using Covariance = Eigen::Matrix<double, err::kDim, err::kDim>;
using Matrix6 = Eigen::Matrix<double, 6, 6>;
using Vector6 = Eigen::Matrix<double, 6, 1>;

struct NominalState {
  Vec3 p = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  Quaternion q = Quaternion::Identity();
  Vec3 accel_bias = Vec3::Zero();
  Vec3 gyro_bias = Vec3::Zero();
};

struct EskfState {
  double t = 0.0;
  NominalState x;
  Covariance P = Covariance::Identity();
};

/// One IMU record. The specific force and rate are held over the interval
/// that ends at `t`.
struct ImuSample {
  double t = 0.0;
  Vec3 accel = Vec3::Zero();  // m/s^2, body frame
  Vec3 gyro = Vec3::Zero();   // rad/s, body frame
};

struct PoseMeasurement {
  double t = 0.0;
  Vec3 p = Vec3::Zero();
  Quaternion q = Quaternion::Identity();
  Matrix6 R = Matrix6::Identity();  // [position m^2 | rotation-vector rad^2]
};

/// One-sigma initial uncertainty per error block.
struct InitialSigma {
  double position = 0.1;     // m
  double velocity = 1.0;     // m/s
  double attitude = 0.1;     // rad
  double accel_bias = 0.1;   // m/s^2
  double gyro_bias = 0.01;   // rad/s
};

struct FilterParams {
  Vec3 gravity = Vec3(0.0, 0.0, -9.81);
  double accel_noise_density = 2e-3;    // m/s^2/sqrt(Hz)
  double gyro_noise_density = 2e-4;     // rad/s/sqrt(Hz)
  double accel_bias_walk = 1e-4;        // m/s^3/sqrt(Hz)
  double gyro_bias_walk = 1e-5;         // rad/s^2/sqrt(Hz)
  InitialSigma initial_sigma;
  Vec3 initial_accel_bias = Vec3::Zero();
  Vec3 initial_gyro_bias = Vec3::Zero();
  // chi-square(6 dof) at 0.999. Non-positive disables gating.
  double gate_chi2 = 22.457744484825323;
  double max_dt = 0.1;                  // s, larger gaps mean dropped samples
  double measurement_time_tolerance = 1.0 / 60.0 + 1e-9;  // s
};

/// Throws std::invalid_argument if a noise density is not positive.
void validate(const FilterParams& params);

Covariance initial_covariance(const FilterParams& params);

/// Starts the filter at a pose measurement with zero velocity.
EskfState initialize_from_pose(const PoseMeasurement& z, const FilterParams& params);

/// One Euler step of the nominal kinematics over dt.
NominalState propagate_nominal(const NominalState& x, const ImuSample& imu, double dt,
                               const Vec3& gravity);

/// Error-state transition matrix of propagate_nominal, including the
/// second-order position terms and the right Jacobian on the gyro bias.
Covariance propagation_jacobian(const NominalState& x, const ImuSample& imu, double dt);

/// Discrete process noise for one step of length dt.
Covariance process_noise(const FilterParams& params, double dt);

/// Applies an error-state vector to a nominal state (q <- q * Exp(dtheta)).
NominalState inject_error(const NominalState& x, const ErrorVector& dx);

/// Inverse of inject_error: the error vector taking `reference` to `perturbed`.
ErrorVector error_between(const NominalState& perturbed, const NominalState& reference);

/// Propagates state to imu.t. Throws std::invalid_argument when imu.t does not
/// advance the clock or when the step exceeds params.max_dt.
EskfState predict(const EskfState& state, const ImuSample& imu, const FilterParams& params);

struct UpdateResult {
  EskfState state;
  bool accepted = true;
  double mahalanobis_sq = 0.0;
};

/// Full 6-DOF pose correction with Joseph-form covariance update.
///
/// A measurement whose squared Mahalanobis distance exceeds params.gate_chi2
/// is rejected and the input state is returned unchanged with
/// `accepted == false`. Throws std::invalid_argument if z.R is not symmetric
/// positive semidefinite or z.t is further than
/// params.measurement_time_tolerance from state.t.
UpdateResult update_pose(const EskfState& state, const PoseMeasurement& z,
                         const FilterParams& params);

/// Noise statistics of a log recorded with the device at rest.
struct StaticNoiseEstimate {
  double sample_period = 0.0;        // s
  Vec3 accel_bias = Vec3::Zero();
  Vec3 gyro_bias = Vec3::Zero();
  Vec3 accel_sample_std = Vec3::Zero();  // per-sample, m/s^2
  Vec3 gyro_sample_std = Vec3::Zero();   // per-sample, rad/s
  Vec3 accel_density = Vec3::Zero();     // m/s^2/sqrt(Hz)
  Vec3 gyro_density = Vec3::Zero();      // rad/s/sqrt(Hz)
  std::size_t samples = 0;

  /// Copies biases and axis-RMS densities into `base`.
  FilterParams apply_to(FilterParams base) const;
};

/// Estimates biases and white-noise densities from a motionless IMU log.
///
/// `attitude` is the device orientation during the recording; the expected
/// accelerometer reading is the gravity reaction rotated into the body frame.
/// Requires at least 10 s of data and sample spacing within 10% of the mean.
StaticNoiseEstimate estimate_static_noise(std::span<const ImuSample> log,
                                          const Vec3& gravity = Vec3(0.0, 0.0, -9.81),
                                          const Quaternion& attitude = Quaternion::Identity());

}  // namespace uwar
