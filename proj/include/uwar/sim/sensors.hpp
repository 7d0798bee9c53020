#pragma once

#include "uwar/core.hpp"
#include "uwar/eskf.hpp"
#include "uwar/sim/scenario.hpp"

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace uwar::sim {

inline const Vec3 kWorldGravity(0.0, 0.0, -9.81);

/// Detection of one marker in one camera frame. `rel_p`/`rel_q` are the
/// marker pose expressed in the camera (= body) frame. Undetected records
/// carry an identity pose.
struct MarkerObservation {
  double t = 0.0;
  int marker_id = 0;
  Vec3 rel_p = Vec3::Zero();
  Quaternion rel_q = Quaternion::Identity();
  bool detected = false;
  bool outlier = false;  // simulation label, never read by trackers
};

struct AcousticFix {
  double t = 0.0;
  Vec2 xy = Vec2::Zero();
  bool delivered = true;
};

struct DepthSample {
  double t = 0.0;
  double z_depth = 0.0;  // m below surface
};

struct SensorStreams {
  std::vector<ImuSample> imu;
  std::vector<MarkerObservation> markers;
  std::vector<AcousticFix> acoustic;
  std::vector<DepthSample> depth;
  std::vector<Pose> vio;
};

struct PlacedMarker {
  int id = 0;
  Pose pose;
};

/// World pose of every marker of the grid, in id order.
std::vector<PlacedMarker> marker_layout(const MarkerGrid& grid);

/// Independent generator for one named stream of a scenario seed.
std::mt19937_64 stream_rng(std::uint64_t seed, std::string_view stream);

/// Times k / rate (k = 0, 1, ...) that fall inside [start, end].
std::vector<double> sample_times(double start, double end, double rate);

/// Strap-down IMU from finite differences of the truth. The sample stamped t_k
/// holds the specific force and rate over [t_{k-1}, t_k], chosen so that one
/// Euler step of the nominal kinematics reproduces the truth position.
std::vector<ImuSample> synth_imu(const Trajectory& truth, const SensorParams& params,
                                 std::uint64_t seed, const Vec3& gravity = kWorldGravity);

std::vector<MarkerObservation> synth_markers(const Trajectory& truth, const MarkerGrid& grid,
                                             const SensorParams& params, std::uint64_t seed);

/// USBL fixes at the acoustic rate: optional slant-range quantisation against
/// the beacon, Gaussian noise, multipath zone bias and Bernoulli packet loss.
std::vector<AcousticFix> synth_acoustic(const Trajectory& truth, const Scenario& scenario,
                                        std::uint64_t seed);

/// Pressure depth at the VIO rate.
std::vector<DepthSample> synth_depth(const Trajectory& truth, const SensorParams& params,
                                     std::uint64_t seed);

/// World-aligned VIO relative to the truth start point.
std::vector<Pose> synth_vio(const Trajectory& truth, const SensorParams& params,
                            std::uint64_t seed);

/// All streams of a scenario from one truth trajectory and the scenario seed.
SensorStreams synthesize(const Scenario& scenario, const Trajectory& truth);

}  // namespace uwar::sim
