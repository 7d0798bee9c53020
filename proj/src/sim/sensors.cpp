#include "uwar/sim/sensors.hpp"

#include "uwar/sim/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace uwar::sim {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Vec3 normal3(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double x = n(rng);
  const double y = n(rng);
  const double z = n(rng);
  return Vec3(x, y, z);
}

std::vector<Pose> resample(const Trajectory& truth, double rate, double start) {
  std::vector<Pose> out;
  for (double t : sample_times(start, truth.end_time(), rate)) out.push_back(truth.sample_at(t));
  return out;
}

Vec3 beacon_position(const Scenario& scenario) {
  const Beacon& b = *scenario.beacon;
  Vec2 xy = Vec2::Zero();
  if (const auto* course = std::get_if<CourseMotion>(&scenario.motion)) {
    xy = course_vertices(*course)[b.vertex];
  }
  return Vec3(xy.x(), xy.y(), -b.seabed_depth + b.height_above_seabed);
}

}  // namespace

std::vector<PlacedMarker> marker_layout(const MarkerGrid& grid) {
  if (grid.rows < 1 || grid.cols < 1 || !(grid.marker_size > 0.0)) {
    throw std::invalid_argument("marker grid needs rows, cols >= 1 and positive marker size");
  }
  std::vector<PlacedMarker> out;
  const Mat3 R = grid.center_pose.q.toRotationMatrix();
  for (int r = 0; r < grid.rows; ++r) {
    for (int c = 0; c < grid.cols; ++c) {
      const Vec3 offset((c - 0.5 * (grid.cols - 1)) * grid.spacing,
                        (r - 0.5 * (grid.rows - 1)) * grid.spacing, 0.0);
      PlacedMarker m;
      m.id = grid.first_id + r * grid.cols + c;
      m.pose.t = 0.0;
      m.pose.p = grid.center_pose.p + R * offset;
      m.pose.q = grid.center_pose.q;
      out.push_back(m);
    }
  }
  return out;
}

std::mt19937_64 stream_rng(std::uint64_t seed, std::string_view stream) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(fnv1a(stream))));
}

std::vector<double> sample_times(double start, double end, double rate) {
  if (!(rate > 0.0)) throw std::invalid_argument("sample rate must be positive");
  std::vector<double> out;
  auto k = static_cast<long long>(std::ceil(start * rate - 1e-9));
  if (k < 0) k = 0;
  for (;; ++k) {
    const double t = static_cast<double>(k) / rate;
    if (t > end) break;
    if (t >= start) out.push_back(t);
  }
  return out;
}

std::vector<ImuSample> synth_imu(const Trajectory& truth, const SensorParams& params,
                                 std::uint64_t seed, const Vec3& gravity) {
  if (truth.size() < 2) throw std::invalid_argument("synth_imu: truth needs >= 2 samples");
  const double rate = params.imu_rate;
  const double dt = 1.0 / rate;
  const std::vector<Pose> poses = resample(truth, rate, truth.start_time());
  auto rng = stream_rng(seed, "imu");
  const double accel_std = params.imu.accel_noise_density / std::sqrt(dt);
  const double gyro_std = params.imu.gyro_noise_density / std::sqrt(dt);

  auto accel_world = [&](std::size_t k) -> Vec3 {
    if (poses.size() < 3) return Vec3::Zero();
    const std::size_t c = std::clamp<std::size_t>(k, 1, poses.size() - 2);
    return (poses[c + 1].p - 2.0 * poses[c].p + poses[c - 1].p) / (dt * dt);
  };

  std::vector<ImuSample> out;
  out.reserve(poses.size());
  for (std::size_t k = 1; k < poses.size(); ++k) {
    const Pose& prev = poses[k - 1];
    const Mat3 R = prev.q.toRotationMatrix();
    ImuSample s;
    s.t = poses[k].t;
    const Vec3 accel_noise = normal3(rng);
    const Vec3 gyro_noise = normal3(rng);
    s.accel = R.transpose() * (accel_world(k - 1) - gravity) + params.imu.accel_bias +
              accel_std * accel_noise;
    s.gyro = rotvec_from_quat(prev.q.conjugate() * poses[k].q) / dt + params.imu.gyro_bias +
             gyro_std * gyro_noise;
    out.push_back(s);
  }
  return out;
}

std::vector<MarkerObservation> synth_markers(const Trajectory& truth, const MarkerGrid& grid,
                                             const SensorParams& params, std::uint64_t seed) {
  const auto layout = marker_layout(grid);
  const MarkerSensor& m = params.marker;
  const double cos_fov = std::cos(m.fov_half_angle * std::numbers::pi / 180.0);
  auto rng = stream_rng(seed, "markers");
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  std::vector<MarkerObservation> out;
  for (double t : sample_times(truth.start_time(), truth.end_time(), params.camera_rate)) {
    const Pose body = truth.sample_at(t);
    const Mat3 Rt = body.q.toRotationMatrix().transpose();
    for (const PlacedMarker& marker : layout) {
      // Fixed draw count per marker keeps the stream aligned across settings.
      const Vec3 pos_noise = normal3(rng);
      const Vec3 rot_noise = normal3(rng);
      const double outlier_draw = uniform(rng);
      const Vec3 outlier_dir = normal3(rng);
      const double outlier_mag = uniform(rng);

      MarkerObservation obs;
      obs.t = t;
      obs.marker_id = marker.id;
      const Vec3 rel_p = Rt * (marker.pose.p - body.p);
      const double dist = rel_p.norm();
      const bool in_range = dist <= m.visibility_range;
      const bool in_fov = dist > 0.0 && (-rel_p.z() / dist) >= cos_fov;
      obs.detected = in_range && in_fov;
      if (obs.detected) {
        obs.rel_p = rel_p + m.sigma_pos * pos_noise;
        obs.rel_q = canonical(
            (quat_from_rotvec(m.sigma_rot * rot_noise) * (body.q.conjugate() * marker.pose.q))
                .normalized());
        if (outlier_draw < m.p_outlier) {
          obs.outlier = true;
          const double n = outlier_dir.norm();
          const Vec3 dir = n > 0.0 ? Vec3(outlier_dir / n) : Vec3::UnitX();
          obs.rel_p += dir * (outlier_mag * m.outlier_scale);
        }
      }
      out.push_back(obs);
    }
  }
  return out;
}

std::vector<AcousticFix> synth_acoustic(const Trajectory& truth, const Scenario& scenario,
                                        std::uint64_t seed) {
  const AcousticSensor& a = scenario.sensors.acoustic;
  auto rng = stream_rng(seed, "acoustic");
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const bool quantise = scenario.beacon.has_value() && a.range_resolution > 0.0;
  const Vec3 beacon = scenario.beacon ? beacon_position(scenario) : Vec3::Zero();

  std::vector<AcousticFix> out;
  for (double t : sample_times(truth.start_time(), truth.end_time(),
                               scenario.sensors.acoustic_rate)) {
    const Pose pose = truth.sample_at(t);
    const double nx = normal(rng);
    const double ny = normal(rng);
    const double loss_draw = uniform(rng);

    Vec2 xy = pose.p.head<2>();
    if (quantise) {
      const Vec3 slant = pose.p - beacon;
      const double step = 2.0 * a.range_resolution;
      const double range = std::round(slant.norm() / step) * step;
      const Vec2 horiz = slant.head<2>();
      const double hnorm = horiz.norm();
      if (hnorm > 0.0) {
        const double h = std::sqrt(std::max(0.0, range * range - slant.z() * slant.z()));
        xy = beacon.head<2>() + horiz * (h / hnorm);
      }
    }
    xy += a.sigma_xy * Vec2(nx, ny);
    for (const MultipathZone& zone : scenario.zones) {
      if ((pose.p.head<2>() - zone.center).norm() <= zone.radius) xy += zone.bias;
    }

    bool occluded = false;
    for (const TimeInterval& iv : scenario.occlusions) occluded = occluded || iv.contains(t);
    AcousticFix fix;
    fix.t = t;
    fix.xy = xy;
    fix.delivered = loss_draw >= (occluded ? a.p_loss_occluded : a.p_loss);
    out.push_back(fix);
  }
  return out;
}

std::vector<DepthSample> synth_depth(const Trajectory& truth, const SensorParams& params,
                                     std::uint64_t seed) {
  auto rng = stream_rng(seed, "depth");
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<DepthSample> out;
  for (double t : sample_times(truth.start_time(), truth.end_time(), params.vio_rate)) {
    const double noise = normal(rng);
    out.push_back({t, -truth.sample_at(t).p.z() + params.depth.sigma_z * noise});
  }
  return out;
}

std::vector<Pose> synth_vio(const Trajectory& truth, const SensorParams& params,
                            std::uint64_t seed) {
  const VioSensor& v = params.vio;
  const double dt = 1.0 / params.vio_rate;
  const double axis_step = v.drift_rate / std::numbers::sqrt2 * std::sqrt(dt);
  const double rot_step = v.sigma_rot_walk * std::sqrt(dt);
  auto rng = stream_rng(seed, "vio");

  const std::vector<Pose> poses = resample(truth, params.vio_rate, truth.start_time());
  std::vector<Pose> out;
  out.reserve(poses.size());
  if (poses.empty()) return out;
  const Vec3 origin = poses.front().p;
  Vec3 drift = Vec3::Zero();
  Vec3 rot_walk = Vec3::Zero();
  for (std::size_t k = 0; k < poses.size(); ++k) {
    if (k > 0) {
      drift += axis_step * normal3(rng);
      rot_walk += rot_step * normal3(rng);
      const double n = rot_walk.norm();
      if (n > v.rot_walk_bound) rot_walk *= v.rot_walk_bound / n;
    }
    Pose p;
    p.t = poses[k].t;
    p.p = (poses[k].p - origin) * (1.0 + v.scale_error) + drift;
    p.q = rot_walk.isZero(0.0) ? poses[k].q
                               : canonical((poses[k].q * quat_from_rotvec(rot_walk)).normalized());
    out.push_back(p);
  }
  return out;
}

SensorStreams synthesize(const Scenario& scenario, const Trajectory& truth) {
  validate(scenario);
  SensorStreams s;
  s.imu = synth_imu(truth, scenario.sensors, scenario.seed);
  if (scenario.marker_grid) {
    s.markers = synth_markers(truth, *scenario.marker_grid, scenario.sensors, scenario.seed);
  }
  s.acoustic = synth_acoustic(truth, scenario, scenario.seed);
  s.depth = synth_depth(truth, scenario.sensors, scenario.seed);
  s.vio = synth_vio(truth, scenario.sensors, scenario.seed);
  return s;
}

}  // namespace uwar::sim
