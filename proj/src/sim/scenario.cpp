#include "uwar/sim/scenario.hpp"

#include "uwar/sim/geometry.hpp"

#include <stdexcept>

namespace uwar::sim {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("scenario: " + what);
}

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

void validate(const Scenario& s) {
  const SensorParams& p = s.sensors;
  require(p.imu_rate > 0.0 && p.camera_rate > 0.0 && p.acoustic_rate > 0.0 && p.vio_rate > 0.0,
          "all sensor rates must be positive");
  require(is_probability(p.marker.p_outlier), "marker.p_outlier must be in [0, 1]");
  require(is_probability(p.acoustic.p_loss), "acoustic.p_loss must be in [0, 1]");
  require(is_probability(p.acoustic.p_loss_occluded), "acoustic.p_loss_occluded must be in [0, 1]");
  require(p.marker.sigma_pos >= 0.0 && p.marker.sigma_rot >= 0.0 && p.marker.outlier_scale >= 0.0,
          "marker noise must be non-negative");
  require(p.marker.visibility_range > 0.0, "marker.visibility_range must be positive");
  require(p.acoustic.sigma_xy >= 0.0 && p.acoustic.range_resolution >= 0.0,
          "acoustic noise must be non-negative");
  require(p.depth.sigma_z >= 0.0, "depth.sigma_z must be non-negative");
  require(p.vio.drift_rate >= 0.0 && p.vio.sigma_rot_walk >= 0.0 && p.vio.rot_walk_bound >= 0.0,
          "vio noise must be non-negative");
  for (const auto& z : s.zones) require(z.radius > 0.0, "multipath zone radius must be positive");
  for (const auto& iv : s.occlusions) require(iv.end >= iv.begin, "occlusion end before begin");
  if (s.marker_grid) {
    require(s.marker_grid->rows >= 1 && s.marker_grid->cols >= 1, "marker grid rows/cols >= 1");
    require(s.marker_grid->marker_size > 0.0, "marker size must be positive");
  }
  if (s.beacon) {
    const char v = s.beacon->vertex;
    require(v == 'A' || v == 'B' || v == 'C' || v == 'D', "beacon vertex must be one of A-D");
  }
  if (const auto* course = std::get_if<CourseMotion>(&s.motion)) {
    require(course->speed > 0.0, "course speed must be positive");
    require(course->laps >= 1, "course laps must be >= 1");
    const QuadVertices v = course_vertices(*course);
    const auto pts = v.as_array();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        require((pts[i] - pts[j]).norm() > 0.0, "course vertices must be distinct");
      }
    }
  } else {
    require(std::get<HoverMotion>(s.motion).duration > 0.0, "hover duration must be positive");
  }
}

Scenario baiae_square() {
  Scenario s;
  s.name = "baiae-square";
  s.seed = 2021;

  CourseMotion course;
  course.lengths = QuadLengths{30.0, 30.0, 29.26, 43.3, 41.0};
  course.depth = 6.0;
  course.heading_offset_deg = 11.0;
  course.laps = 3;
  course.speed = 0.5;
  course.corner_radius = 1.0;
  s.motion = course;

  s.beacon = Beacon{'A', 3.0, 7.5};
  s.zones.push_back(MultipathZone{course_vertices(course).c, 5.0, Vec2(5.5, 0.0)});
  s.occlusions.push_back(TimeInterval{400.0, 430.0});

  SensorParams& p = s.sensors;
  p.imu.accel_noise_density = 2e-3;
  p.imu.gyro_noise_density = 2e-4;
  p.imu.accel_bias = Vec3(0.03, -0.02, 0.05);
  p.imu.gyro_bias = Vec3(0.002, -0.001, 0.0015);
  p.acoustic.sigma_xy = 0.3;
  p.acoustic.range_resolution = 0.05;
  p.acoustic.p_loss = 0.05;
  p.acoustic.p_loss_occluded = 0.8;
  p.depth.sigma_z = 0.02;
  p.vio.drift_rate = 0.05;
  p.vio.scale_error = 0.02;
  p.vio.sigma_rot_walk = 0.002;
  return s;
}

Scenario marker_lab() {
  Scenario s;
  s.name = "marker-lab";
  s.seed = 7;
  s.motion = HoverMotion{};

  MarkerGrid grid;
  grid.rows = 3;
  grid.cols = 3;
  grid.marker_size = 0.19;
  grid.spacing = 0.25;
  s.marker_grid = grid;

  SensorParams& p = s.sensors;
  p.imu.accel_noise_density = 2e-3;
  p.imu.gyro_noise_density = 2e-4;
  p.imu.accel_bias = Vec3(0.03, -0.02, 0.05);
  p.imu.gyro_bias = Vec3(0.002, -0.001, 0.0015);
  p.marker.visibility_range = 3.0;
  p.marker.fov_half_angle = 35.0;
  p.marker.sigma_pos = 0.07;
  p.marker.sigma_rot = 0.06;
  p.marker.p_outlier = 0.005;
  p.marker.outlier_scale = 0.5;
  p.acoustic.sigma_xy = 0.3;
  p.acoustic.range_resolution = 0.0;

  FilterParams& f = s.tracker.filter;
  f.accel_noise_density = 4e-3;
  f.gyro_noise_density = 4e-4;
  f.accel_bias_walk = 1e-4;
  f.gyro_bias_walk = 1e-5;
  s.tracker.sigma_pos = 0.07;
  s.tracker.sigma_rot = 0.06;
  return s;
}

Scenario preset(const std::string& name) {
  if (name == "baiae-square") return baiae_square();
  if (name == "marker-lab") return marker_lab();
  throw std::invalid_argument("unknown scenario preset '" + name + "'");
}

std::vector<std::string> preset_names() { return {"baiae-square", "marker-lab"}; }

}  // namespace uwar::sim
