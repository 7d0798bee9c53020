#pragma once

#include "uwar/core.hpp"
#include "uwar/eskf.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace uwar::sim {

/// Planar grid of square fiducial markers lying on the seafloor.
/// Marker ids are row-major starting at `first_id`.
struct MarkerGrid {
  int rows = 3;
  int cols = 3;
  double marker_size = 0.19;  // m
  double spacing = 0.25;      // m, centre-to-centre
  Pose center_pose;           // grid frame: x along columns, y along rows, z up
  int first_id = 0;
};

/// Circular region where acoustic fixes pick up a constant horizontal bias.
struct MultipathZone {
  Vec2 center = Vec2::Zero();  // m, world
  double radius = 1.0;         // m
  Vec2 bias = Vec2::Zero();    // m, world
};

struct TimeInterval {
  double begin = 0.0;
  double end = 0.0;
  bool contains(double t) const { return t >= begin && t <= end; }
};

struct ImuNoise {
  double accel_noise_density = 0.0;  // m/s^2/sqrt(Hz)
  double gyro_noise_density = 0.0;   // rad/s/sqrt(Hz)
  Vec3 accel_bias = Vec3::Zero();
  Vec3 gyro_bias = Vec3::Zero();
};

struct MarkerSensor {
  double visibility_range = 3.0;   // m
  double fov_half_angle = 35.0;    // deg, about the camera axis (body -z)
  double sigma_pos = 0.0;          // m, per axis, camera frame
  double sigma_rot = 0.0;          // rad, per axis
  double p_outlier = 0.0;
  double outlier_scale = 0.0;      // m, max displacement magnitude
};

struct AcousticSensor {
  double sigma_xy = 0.3;           // m, per axis
  double range_resolution = 0.05;  // +/- m on slant range, 0 disables quantisation
  double p_loss = 0.0;
  double p_loss_occluded = 0.0;
};

struct DepthSensor {
  double sigma_z = 0.0;  // m
};

struct VioSensor {
  double drift_rate = 0.0;       // m/sqrt(s), horizontal random-walk intensity
  double scale_error = 0.0;
  double sigma_rot_walk = 0.0;   // rad/sqrt(s)
  double rot_walk_bound = 0.05;  // rad, clamp on the orientation walk
};

struct SensorParams {
  double imu_rate = 60.0;       // Hz
  double camera_rate = 30.0;    // Hz
  double acoustic_rate = 0.2;   // Hz
  double vio_rate = 60.0;       // Hz
  ImuNoise imu;
  MarkerSensor marker;
  AcousticSensor acoustic;
  DepthSensor depth;
  VioSensor vio;
};

/// The five measured sides/diagonals of the roped course.
struct QuadLengths {
  double ab = 0.0, cd = 0.0, ad = 0.0, bd = 0.0, ac = 0.0;
};

/// Laps of the quadrilateral A->B->C->D->A at constant depth.
struct CourseMotion {
  QuadLengths lengths;
  double depth = 6.0;               // m below the surface
  double heading_offset_deg = 11.0; // compass bearing of A->C
  int laps = 3;
  double speed = 0.5;               // m/s
  double corner_radius = 1.0;       // m
};

/// Smooth hand-held motion above a marker grid (lab experiment).
struct HoverMotion {
  Vec3 center = Vec3(0.0, 0.0, 1.2);
  Vec3 amplitude = Vec3(0.35, 0.25, 0.15);     // m
  Vec3 frequency = Vec3(0.05, 0.07, 0.04);     // Hz
  Vec3 tilt_amplitude = Vec3(0.08, 0.08, 0.5); // rad, roll / pitch / yaw
  Vec3 tilt_frequency = Vec3(0.09, 0.06, 0.03);
  double duration = 60.0;                      // s
};

using Motion = std::variant<CourseMotion, HoverMotion>;

/// USBL beacon placed on a course vertex.
struct Beacon {
  char vertex = 'A';
  double height_above_seabed = 3.0;  // m
  double seabed_depth = 8.0;         // m below surface at the beacon
};

/// Tuning of the marker tracker; kept with the scenario so a run directory
/// is self-describing.
struct TrackerTuning {
  FilterParams filter;
  double sigma_pos = 0.05;  // m, measurement model before range inflation
  double sigma_rot = 0.03;  // rad
};

struct Scenario {
  std::string name = "custom";
  std::uint64_t seed = 1;
  Motion motion = CourseMotion{};
  std::optional<MarkerGrid> marker_grid;
  std::optional<Beacon> beacon;
  std::vector<MultipathZone> zones;
  std::vector<TimeInterval> occlusions;
  SensorParams sensors;
  TrackerTuning tracker;
};

/// Validates invariants; throws std::invalid_argument.
void validate(const Scenario& scenario);

/// Every course value from the Baiae field test: lengths, tilt, depth, laps,
/// beacon at A, multipath zone at vertex C.
Scenario baiae_square();

/// Hand-held device above a 3x3 grid of 19 cm markers, noise calibrated to
/// the lab error levels of the detector-only pipeline.
Scenario marker_lab();

/// Looks up a preset by name; throws std::invalid_argument for unknown names.
Scenario preset(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace uwar::sim
