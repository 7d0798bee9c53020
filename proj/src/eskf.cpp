#include "uwar/eskf.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>
#include <string>

namespace uwar {

namespace {

void symmetrize(Covariance& P) { P = 0.5 * (P + P.transpose()).eval(); }

}  // namespace

void validate(const FilterParams& params) {
  if (!(params.accel_noise_density > 0.0) || !(params.gyro_noise_density > 0.0) ||
      !(params.accel_bias_walk > 0.0) || !(params.gyro_bias_walk > 0.0)) {
    throw std::invalid_argument("filter noise densities must be positive");
  }
  if (!(params.max_dt > 0.0)) throw std::invalid_argument("max_dt must be positive");
}

Covariance initial_covariance(const FilterParams& params) {
  const InitialSigma& s = params.initial_sigma;
  ErrorVector diag;
  diag.segment<3>(err::kPos).setConstant(s.position * s.position);
  diag.segment<3>(err::kVel).setConstant(s.velocity * s.velocity);
  diag.segment<3>(err::kAtt).setConstant(s.attitude * s.attitude);
  diag.segment<3>(err::kAccelBias).setConstant(s.accel_bias * s.accel_bias);
  diag.segment<3>(err::kGyroBias).setConstant(s.gyro_bias * s.gyro_bias);
  return diag.asDiagonal();
}

EskfState initialize_from_pose(const PoseMeasurement& z, const FilterParams& params) {
  EskfState s;
  s.t = z.t;
  s.x.p = z.p;
  s.x.v.setZero();
  s.x.q = canonical(z.q.normalized());
  s.x.accel_bias = params.initial_accel_bias;
  s.x.gyro_bias = params.initial_gyro_bias;
  s.P = initial_covariance(params);
  return s;
}

NominalState propagate_nominal(const NominalState& x, const ImuSample& imu, double dt,
                               const Vec3& gravity) {
  const Mat3 R = x.q.toRotationMatrix();
  const Vec3 acc_world = R * (imu.accel - x.accel_bias) + gravity;
  NominalState out = x;
  out.p = x.p + x.v * dt + 0.5 * acc_world * dt * dt;
  out.v = x.v + acc_world * dt;
  out.q = canonical((x.q * quat_from_rotvec((imu.gyro - x.gyro_bias) * dt)).normalized());
  return out;
}

Covariance propagation_jacobian(const NominalState& x, const ImuSample& imu, double dt) {
  const Mat3 R = x.q.toRotationMatrix();
  const Vec3 acc_body = imu.accel - x.accel_bias;
  const Vec3 rot_step = (imu.gyro - x.gyro_bias) * dt;
  const Mat3 R_acc_skew = R * skew(acc_body);
  const double dt2 = dt * dt;

  Covariance F = Covariance::Identity();
  F.block<3, 3>(err::kPos, err::kVel) = Mat3::Identity() * dt;
  F.block<3, 3>(err::kPos, err::kAtt) = -0.5 * R_acc_skew * dt2;
  F.block<3, 3>(err::kPos, err::kAccelBias) = -0.5 * R * dt2;
  F.block<3, 3>(err::kVel, err::kAtt) = -R_acc_skew * dt;
  F.block<3, 3>(err::kVel, err::kAccelBias) = -R * dt;
  F.block<3, 3>(err::kAtt, err::kAtt) = quat_from_rotvec(rot_step).toRotationMatrix().transpose();
  F.block<3, 3>(err::kAtt, err::kGyroBias) = -right_jacobian(rot_step) * dt;
  return F;
}

Covariance process_noise(const FilterParams& params, double dt) {
  ErrorVector diag = ErrorVector::Zero();
  diag.segment<3>(err::kVel).setConstant(params.accel_noise_density * params.accel_noise_density * dt);
  diag.segment<3>(err::kAtt).setConstant(params.gyro_noise_density * params.gyro_noise_density * dt);
  diag.segment<3>(err::kAccelBias).setConstant(params.accel_bias_walk * params.accel_bias_walk * dt);
  diag.segment<3>(err::kGyroBias).setConstant(params.gyro_bias_walk * params.gyro_bias_walk * dt);
  return diag.asDiagonal();
}

NominalState inject_error(const NominalState& x, const ErrorVector& dx) {
  NominalState out = x;
  out.p += dx.segment<3>(err::kPos);
  out.v += dx.segment<3>(err::kVel);
  out.q = canonical((x.q * quat_from_rotvec(dx.segment<3>(err::kAtt))).normalized());
  out.accel_bias += dx.segment<3>(err::kAccelBias);
  out.gyro_bias += dx.segment<3>(err::kGyroBias);
  return out;
}

ErrorVector error_between(const NominalState& perturbed, const NominalState& reference) {
  ErrorVector dx;
  dx.segment<3>(err::kPos) = perturbed.p - reference.p;
  dx.segment<3>(err::kVel) = perturbed.v - reference.v;
  dx.segment<3>(err::kAtt) = rotvec_from_quat(reference.q.conjugate() * perturbed.q);
  dx.segment<3>(err::kAccelBias) = perturbed.accel_bias - reference.accel_bias;
  dx.segment<3>(err::kGyroBias) = perturbed.gyro_bias - reference.gyro_bias;
  return dx;
}

EskfState predict(const EskfState& state, const ImuSample& imu, const FilterParams& params) {
  const double dt = imu.t - state.t;
  if (!(dt > 0.0)) {
    throw std::invalid_argument("predict: IMU timestamp does not advance the filter clock");
  }
  if (dt > params.max_dt) {
    throw std::invalid_argument("predict: step of " + std::to_string(dt) +
                                " s exceeds max_dt (dropped IMU samples?)");
  }
  if (!imu.accel.allFinite() || !imu.gyro.allFinite()) {
    throw std::invalid_argument("predict: non-finite IMU sample");
  }
  const Covariance F = propagation_jacobian(state.x, imu, dt);
  EskfState out;
  out.t = imu.t;
  out.x = propagate_nominal(state.x, imu, dt, params.gravity);
  out.P = F * state.P * F.transpose() + process_noise(params, dt);
  symmetrize(out.P);
  return out;
}

UpdateResult update_pose(const EskfState& state, const PoseMeasurement& z,
                         const FilterParams& params) {
  if (std::abs(z.t - state.t) > params.measurement_time_tolerance) {
    throw std::invalid_argument("update_pose: measurement time too far from filter time");
  }
  if (!z.R.allFinite() || (z.R - z.R.transpose()).cwiseAbs().maxCoeff() >
                              1e-9 * std::max(1.0, z.R.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("update_pose: measurement covariance is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix6> eig(z.R, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-12) {
    throw std::invalid_argument("update_pose: measurement covariance is not PSD");
  }
  if (std::abs(z.q.norm() - 1.0) > kUnitNormTolerance) {
    throw std::invalid_argument("update_pose: measurement orientation is not unit-norm");
  }

  Vector6 y;
  y.head<3>() = z.p - state.x.p;
  y.tail<3>() = rotvec_from_quat(state.x.q.conjugate() * z.q);

  Eigen::Matrix<double, 6, err::kDim> H = Eigen::Matrix<double, 6, err::kDim>::Zero();
  H.block<3, 3>(0, err::kPos).setIdentity();
  H.block<3, 3>(3, err::kAtt).setIdentity();

  const Eigen::Matrix<double, 6, err::kDim> HP = H * state.P;
  const Matrix6 S = HP * H.transpose() + z.R;
  const Eigen::LLT<Matrix6> llt(S);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("update_pose: innovation covariance is not positive definite");
  }

  UpdateResult result;
  result.mahalanobis_sq = y.dot(llt.solve(y));
  if (params.gate_chi2 > 0.0 && result.mahalanobis_sq > params.gate_chi2) {
    result.state = state;
    result.accepted = false;
    return result;
  }

  const Eigen::Matrix<double, err::kDim, 6> K = llt.solve(HP).transpose();
  const ErrorVector dx = K * y;
  const Covariance IKH = Covariance::Identity() - K * H;

  result.state.t = state.t;
  result.state.x = inject_error(state.x, dx);
  result.state.P = IKH * state.P * IKH.transpose() + K * z.R * K.transpose();
  symmetrize(result.state.P);
  return result;
}

FilterParams StaticNoiseEstimate::apply_to(FilterParams base) const {
  base.initial_accel_bias = accel_bias;
  base.initial_gyro_bias = gyro_bias;
  base.accel_noise_density = std::sqrt(accel_density.squaredNorm() / 3.0);
  base.gyro_noise_density = std::sqrt(gyro_density.squaredNorm() / 3.0);
  return base;
}

StaticNoiseEstimate estimate_static_noise(std::span<const ImuSample> log, const Vec3& gravity,
                                          const Quaternion& attitude) {
  if (log.size() < 3) throw std::invalid_argument("estimate_static_noise: log too short");
  const std::size_t n = log.size();
  const double mean_dt = (log.back().t - log.front().t) / static_cast<double>(n - 1);
  if (!(mean_dt > 0.0)) {
    throw std::invalid_argument("estimate_static_noise: timestamps are not increasing");
  }
  if (static_cast<double>(n) * mean_dt < 10.0 - 1e-9) {
    throw std::invalid_argument("estimate_static_noise: log too short (need >= 10 s)");
  }
  for (std::size_t i = 1; i < n; ++i) {
    const double dt = log[i].t - log[i - 1].t;
    if (std::abs(dt - mean_dt) > 0.1 * mean_dt) {
      throw std::invalid_argument("estimate_static_noise: sampling jitter above 10%");
    }
  }

  // Accumulate around the first sample so constant signals give exact means.
  const Vec3 a0 = log.front().accel;
  const Vec3 g0 = log.front().gyro;
  Vec3 sum_a = Vec3::Zero(), sum_g = Vec3::Zero();
  for (const auto& s : log) {
    sum_a += s.accel - a0;
    sum_g += s.gyro - g0;
  }
  const Vec3 mean_da = sum_a / static_cast<double>(n);
  const Vec3 mean_dg = sum_g / static_cast<double>(n);

  Vec3 ss_a = Vec3::Zero(), ss_g = Vec3::Zero();
  for (const auto& s : log) {
    ss_a += (s.accel - a0 - mean_da).cwiseAbs2();
    ss_g += (s.gyro - g0 - mean_dg).cwiseAbs2();
  }

  StaticNoiseEstimate est;
  est.samples = n;
  est.sample_period = mean_dt;
  const Vec3 expected_accel = attitude.normalized().conjugate() * (-gravity);
  est.accel_bias = (a0 + mean_da) - expected_accel;
  est.gyro_bias = g0 + mean_dg;
  est.accel_sample_std = (ss_a / static_cast<double>(n - 1)).cwiseSqrt();
  est.gyro_sample_std = (ss_g / static_cast<double>(n - 1)).cwiseSqrt();
  est.accel_density = est.accel_sample_std * std::sqrt(mean_dt);
  est.gyro_density = est.gyro_sample_std * std::sqrt(mean_dt);
  return est;
}

}  // namespace uwar
