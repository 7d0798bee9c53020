#include "uwar/sim/scenario_io.hpp"

#include "uwar/sim/geometry.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace uwar::sim {

namespace {

struct KeyDoc {
  const char* key;
  const char* doc;
};

// Single source for validation of allowed keys and for --help.
const std::vector<KeyDoc>& key_docs() {
  static const std::vector<KeyDoc> docs = {
      {"preset", "start from a bundled preset (baiae-square, marker-lab) and override"},
      {"name", "scenario label written into logs"},
      {"seed", "64-bit seed; every sensor stream draws from its own generator split from it"},
      {"motion.kind", "course | hover"},
      {"motion.lengths.{ab,cd,ad,bd,ac}", "course side and diagonal lengths, m"},
      {"motion.depth", "course depth below the surface, m"},
      {"motion.heading_offset_deg", "compass bearing of A->C, degrees clockwise from north"},
      {"motion.laps", "number of counterclockwise laps A->B->C->D->A"},
      {"motion.speed", "diver speed along the path, m/s"},
      {"motion.corner_radius", "corner rounding radius, m"},
      {"motion.center", "hover: mean device position [x, y, z], m"},
      {"motion.amplitude", "hover: sinusoid amplitudes [x, y, z], m"},
      {"motion.frequency", "hover: sinusoid frequencies [x, y, z], Hz"},
      {"motion.tilt_amplitude", "hover: roll, pitch, yaw amplitudes, rad"},
      {"motion.tilt_frequency", "hover: roll, pitch, yaw frequencies, Hz"},
      {"motion.duration", "hover: run length, s"},
      {"marker_grid.{rows,cols}", "marker grid dimensions"},
      {"marker_grid.marker_size", "marker side length, m"},
      {"marker_grid.spacing", "centre-to-centre marker pitch, m"},
      {"marker_grid.center", "grid centre in the world [x, y, z], m"},
      {"marker_grid.orientation", "grid orientation quaternion [w, x, y, z]"},
      {"marker_grid.first_id", "id of the first (row-major) marker"},
      {"beacon.vertex", "course vertex carrying the USBL beacon (A-D)"},
      {"beacon.height_above_seabed", "beacon height above the seabed, m"},
      {"beacon.seabed_depth", "seabed depth below the surface at the beacon, m"},
      {"zones[].center | zones[].vertex", "multipath zone centre [x, y] or a course vertex name"},
      {"zones[].radius", "multipath zone radius, m"},
      {"zones[].bias", "constant offset [x, y] added to fixes inside the zone, m"},
      {"occlusions[]", "[begin, end] time ranges where acoustic loss uses p_loss_occluded, s"},
      {"sensors.{imu,camera,acoustic,vio}_rate", "stream rates, Hz"},
      {"sensors.imu.{accel,gyro}_noise_density", "IMU white noise, per sqrt(Hz)"},
      {"sensors.imu.{accel,gyro}_bias", "constant IMU biases [x, y, z]"},
      {"sensors.marker.visibility_range", "max detection distance, m"},
      {"sensors.marker.fov_half_angle", "detection cone about the camera axis (body -z), deg"},
      {"sensors.marker.sigma_pos", "relative position noise per axis, m"},
      {"sensors.marker.sigma_rot", "relative rotation noise per axis, rad"},
      {"sensors.marker.p_outlier", "probability that a detection is displaced"},
      {"sensors.marker.outlier_scale", "max outlier displacement magnitude, m"},
      {"sensors.acoustic.sigma_xy", "horizontal fix noise per axis, m"},
      {"sensors.acoustic.range_resolution", "+/- slant-range quantisation, m (0 disables)"},
      {"sensors.acoustic.p_loss", "packet loss probability"},
      {"sensors.acoustic.p_loss_occluded", "packet loss probability inside occlusions"},
      {"sensors.depth.sigma_z", "pressure depth noise, m"},
      {"sensors.vio.drift_rate", "horizontal position random walk, m/sqrt(s)"},
      {"sensors.vio.scale_error", "relative scale error of VIO displacement"},
      {"sensors.vio.sigma_rot_walk", "orientation random walk, rad/sqrt(s)"},
      {"sensors.vio.rot_walk_bound", "clamp on the orientation walk, rad"},
      {"tracker.sigma_pos", "marker measurement position sigma before range inflation, m"},
      {"tracker.sigma_rot", "marker measurement rotation sigma before range inflation, rad"},
      {"tracker.filter.gravity", "gravity vector [x, y, z], m/s^2"},
      {"tracker.filter.{accel,gyro}_noise_density", "filter IMU white-noise densities"},
      {"tracker.filter.{accel,gyro}_bias_walk", "filter bias random-walk densities"},
      {"tracker.filter.initial_sigma.{position,velocity,attitude,accel_bias,gyro_bias}",
       "initial one-sigma uncertainty per error block"},
      {"tracker.filter.initial_{accel,gyro}_bias", "initial bias estimates [x, y, z]"},
      {"tracker.filter.gate_chi2", "innovation gate on squared Mahalanobis distance (<= 0 off)"},
      {"tracker.filter.max_dt", "largest IMU step accepted, s"},
      {"tracker.filter.measurement_time_tolerance", "max |z.t - filter t| for updates, s"},
  };
  return docs;
}

void check_keys(const YAML::Node& node, std::initializer_list<const char*> allowed,
                const std::string& where) {
  if (!node.IsMap()) throw std::invalid_argument("scenario: '" + where + "' must be a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw std::invalid_argument("scenario: unknown key '" + where + (where.empty() ? "" : ".") +
                                  key + "'");
    }
  }
}

template <typename T>
void read(const YAML::Node& node, const char* key, T& out) {
  if (const YAML::Node v = node[key]) out = v.as<T>();
}

Vec3 as_vec3(const YAML::Node& n, const std::string& what) {
  if (!n.IsSequence() || n.size() != 3) {
    throw std::invalid_argument("scenario: '" + what + "' must be a 3-element list");
  }
  return Vec3(n[0].as<double>(), n[1].as<double>(), n[2].as<double>());
}

Vec2 as_vec2(const YAML::Node& n, const std::string& what) {
  if (!n.IsSequence() || n.size() != 2) {
    throw std::invalid_argument("scenario: '" + what + "' must be a 2-element list");
  }
  return Vec2(n[0].as<double>(), n[1].as<double>());
}

void read_vec3(const YAML::Node& node, const char* key, Vec3& out) {
  if (const YAML::Node v = node[key]) out = as_vec3(v, key);
}

void parse_motion(const YAML::Node& n, Scenario& s) {
  std::string kind = std::holds_alternative<CourseMotion>(s.motion) ? "course" : "hover";
  if (n.IsMap()) read(n, "kind", kind);
  if (kind == "course") {
    check_keys(n, {"kind", "lengths", "depth", "heading_offset_deg", "laps", "speed",
                   "corner_radius"}, "motion");
    CourseMotion c = std::holds_alternative<CourseMotion>(s.motion) ? std::get<CourseMotion>(s.motion)
                                                                    : CourseMotion{};
    if (const YAML::Node l = n["lengths"]) {
      check_keys(l, {"ab", "cd", "ad", "bd", "ac"}, "motion.lengths");
      read(l, "ab", c.lengths.ab);
      read(l, "cd", c.lengths.cd);
      read(l, "ad", c.lengths.ad);
      read(l, "bd", c.lengths.bd);
      read(l, "ac", c.lengths.ac);
    }
    read(n, "depth", c.depth);
    read(n, "heading_offset_deg", c.heading_offset_deg);
    read(n, "laps", c.laps);
    read(n, "speed", c.speed);
    read(n, "corner_radius", c.corner_radius);
    s.motion = c;
  } else if (kind == "hover") {
    check_keys(n, {"kind", "center", "amplitude", "frequency", "tilt_amplitude", "tilt_frequency",
                   "duration"}, "motion");
    HoverMotion h = std::holds_alternative<HoverMotion>(s.motion) ? std::get<HoverMotion>(s.motion)
                                                                  : HoverMotion{};
    read_vec3(n, "center", h.center);
    read_vec3(n, "amplitude", h.amplitude);
    read_vec3(n, "frequency", h.frequency);
    read_vec3(n, "tilt_amplitude", h.tilt_amplitude);
    read_vec3(n, "tilt_frequency", h.tilt_frequency);
    read(n, "duration", h.duration);
    s.motion = h;
  } else {
    throw std::invalid_argument("scenario: motion.kind must be 'course' or 'hover'");
  }
}

void parse_grid(const YAML::Node& n, Scenario& s) {
  check_keys(n, {"rows", "cols", "marker_size", "spacing", "center", "orientation", "first_id"},
             "marker_grid");
  MarkerGrid g = s.marker_grid.value_or(MarkerGrid{});
  read(n, "rows", g.rows);
  read(n, "cols", g.cols);
  read(n, "marker_size", g.marker_size);
  read(n, "spacing", g.spacing);
  read_vec3(n, "center", g.center_pose.p);
  if (const YAML::Node q = n["orientation"]) {
    if (!q.IsSequence() || q.size() != 4) {
      throw std::invalid_argument("scenario: marker_grid.orientation must be [w, x, y, z]");
    }
    g.center_pose.q = Quaternion(q[0].as<double>(), q[1].as<double>(), q[2].as<double>(),
                                 q[3].as<double>())
                          .normalized();
  }
  read(n, "first_id", g.first_id);
  s.marker_grid = g;
}

void parse_beacon(const YAML::Node& n, Scenario& s) {
  check_keys(n, {"vertex", "height_above_seabed", "seabed_depth"}, "beacon");
  Beacon b = s.beacon.value_or(Beacon{});
  if (const YAML::Node v = n["vertex"]) {
    const auto name = v.as<std::string>();
    if (name.size() != 1) throw std::invalid_argument("scenario: beacon.vertex must be A-D");
    b.vertex = name[0];
  }
  read(n, "height_above_seabed", b.height_above_seabed);
  read(n, "seabed_depth", b.seabed_depth);
  s.beacon = b;
}

void parse_zones(const YAML::Node& n, Scenario& s) {
  if (!n.IsSequence()) throw std::invalid_argument("scenario: zones must be a list");
  s.zones.clear();
  for (const auto& z : n) {
    check_keys(z, {"center", "vertex", "radius", "bias"}, "zones[]");
    MultipathZone zone;
    if (z["center"] && z["vertex"]) {
      throw std::invalid_argument("scenario: zone takes either center or vertex, not both");
    }
    if (const YAML::Node c = z["center"]) zone.center = as_vec2(c, "zones[].center");
    if (const YAML::Node v = z["vertex"]) {
      const auto* course = std::get_if<CourseMotion>(&s.motion);
      const auto name = v.as<std::string>();
      if (!course || name.size() != 1) {
        throw std::invalid_argument("scenario: zones[].vertex needs a course motion and A-D");
      }
      zone.center = course_vertices(*course)[name[0]];
    }
    read(z, "radius", zone.radius);
    if (const YAML::Node b = z["bias"]) zone.bias = as_vec2(b, "zones[].bias");
    s.zones.push_back(zone);
  }
}

void parse_sensors(const YAML::Node& n, SensorParams& p) {
  check_keys(n, {"imu_rate", "camera_rate", "acoustic_rate", "vio_rate", "imu", "marker",
                 "acoustic", "depth", "vio"}, "sensors");
  read(n, "imu_rate", p.imu_rate);
  read(n, "camera_rate", p.camera_rate);
  read(n, "acoustic_rate", p.acoustic_rate);
  read(n, "vio_rate", p.vio_rate);
  if (const YAML::Node m = n["imu"]) {
    check_keys(m, {"accel_noise_density", "gyro_noise_density", "accel_bias", "gyro_bias"},
               "sensors.imu");
    read(m, "accel_noise_density", p.imu.accel_noise_density);
    read(m, "gyro_noise_density", p.imu.gyro_noise_density);
    read_vec3(m, "accel_bias", p.imu.accel_bias);
    read_vec3(m, "gyro_bias", p.imu.gyro_bias);
  }
  if (const YAML::Node m = n["marker"]) {
    check_keys(m, {"visibility_range", "fov_half_angle", "sigma_pos", "sigma_rot", "p_outlier",
                   "outlier_scale"}, "sensors.marker");
    read(m, "visibility_range", p.marker.visibility_range);
    read(m, "fov_half_angle", p.marker.fov_half_angle);
    read(m, "sigma_pos", p.marker.sigma_pos);
    read(m, "sigma_rot", p.marker.sigma_rot);
    read(m, "p_outlier", p.marker.p_outlier);
    read(m, "outlier_scale", p.marker.outlier_scale);
  }
  if (const YAML::Node m = n["acoustic"]) {
    check_keys(m, {"sigma_xy", "range_resolution", "p_loss", "p_loss_occluded"},
               "sensors.acoustic");
    read(m, "sigma_xy", p.acoustic.sigma_xy);
    read(m, "range_resolution", p.acoustic.range_resolution);
    read(m, "p_loss", p.acoustic.p_loss);
    read(m, "p_loss_occluded", p.acoustic.p_loss_occluded);
  }
  if (const YAML::Node m = n["depth"]) {
    check_keys(m, {"sigma_z"}, "sensors.depth");
    read(m, "sigma_z", p.depth.sigma_z);
  }
  if (const YAML::Node m = n["vio"]) {
    check_keys(m, {"drift_rate", "scale_error", "sigma_rot_walk", "rot_walk_bound"},
               "sensors.vio");
    read(m, "drift_rate", p.vio.drift_rate);
    read(m, "scale_error", p.vio.scale_error);
    read(m, "sigma_rot_walk", p.vio.sigma_rot_walk);
    read(m, "rot_walk_bound", p.vio.rot_walk_bound);
  }
}

void parse_tracker(const YAML::Node& n, TrackerTuning& t) {
  check_keys(n, {"sigma_pos", "sigma_rot", "filter"}, "tracker");
  read(n, "sigma_pos", t.sigma_pos);
  read(n, "sigma_rot", t.sigma_rot);
  if (const YAML::Node f = n["filter"]) {
    check_keys(f, {"gravity", "accel_noise_density", "gyro_noise_density", "accel_bias_walk",
                   "gyro_bias_walk", "initial_sigma", "initial_accel_bias", "initial_gyro_bias",
                   "gate_chi2", "max_dt", "measurement_time_tolerance"}, "tracker.filter");
    FilterParams& p = t.filter;
    read_vec3(f, "gravity", p.gravity);
    read(f, "accel_noise_density", p.accel_noise_density);
    read(f, "gyro_noise_density", p.gyro_noise_density);
    read(f, "accel_bias_walk", p.accel_bias_walk);
    read(f, "gyro_bias_walk", p.gyro_bias_walk);
    if (const YAML::Node s = f["initial_sigma"]) {
      check_keys(s, {"position", "velocity", "attitude", "accel_bias", "gyro_bias"},
                 "tracker.filter.initial_sigma");
      read(s, "position", p.initial_sigma.position);
      read(s, "velocity", p.initial_sigma.velocity);
      read(s, "attitude", p.initial_sigma.attitude);
      read(s, "accel_bias", p.initial_sigma.accel_bias);
      read(s, "gyro_bias", p.initial_sigma.gyro_bias);
    }
    read_vec3(f, "initial_accel_bias", p.initial_accel_bias);
    read_vec3(f, "initial_gyro_bias", p.initial_gyro_bias);
    read(f, "gate_chi2", p.gate_chi2);
    read(f, "max_dt", p.max_dt);
    read(f, "measurement_time_tolerance", p.measurement_time_tolerance);
  }
}

YAML::Emitter& operator<<(YAML::Emitter& out, const Vec3& v) {
  return out << YAML::Flow << YAML::BeginSeq << v.x() << v.y() << v.z() << YAML::EndSeq;
}

YAML::Emitter& operator<<(YAML::Emitter& out, const Vec2& v) {
  return out << YAML::Flow << YAML::BeginSeq << v.x() << v.y() << YAML::EndSeq;
}

}  // namespace

Scenario parse_scenario(const std::string& yaml_text) {
  try {
    const YAML::Node root = YAML::Load(yaml_text);
    if (root.IsNull()) return Scenario{};
    check_keys(root, {"preset", "name", "seed", "motion", "marker_grid", "beacon", "zones",
                      "occlusions", "sensors", "tracker"}, "");
    Scenario s;
    if (const YAML::Node p = root["preset"]) s = preset(p.as<std::string>());
    read(root, "name", s.name);
    read(root, "seed", s.seed);
    if (const YAML::Node m = root["motion"]) parse_motion(m, s);
    if (const YAML::Node g = root["marker_grid"]) {
      if (g.IsNull()) s.marker_grid.reset(); else parse_grid(g, s);
    }
    if (const YAML::Node b = root["beacon"]) {
      if (b.IsNull()) s.beacon.reset(); else parse_beacon(b, s);
    }
    if (const YAML::Node z = root["zones"]) parse_zones(z, s);
    if (const YAML::Node o = root["occlusions"]) {
      if (!o.IsSequence()) throw std::invalid_argument("scenario: occlusions must be a list");
      s.occlusions.clear();
      for (const auto& iv : o) {
        const Vec2 range = as_vec2(iv, "occlusions[]");
        s.occlusions.push_back(TimeInterval{range.x(), range.y()});
      }
    }
    if (const YAML::Node sn = root["sensors"]) parse_sensors(sn, s.sensors);
    if (const YAML::Node t = root["tracker"]) parse_tracker(t, s.tracker);
    validate(s);
    return s;
  } catch (const YAML::Exception& e) {
    throw std::invalid_argument(std::string("scenario: ") + e.what());
  }
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open scenario file '" + path + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_scenario(ss.str());
}

Scenario load_scenario(const std::string& arg) {
  const auto names = preset_names();
  if (std::find(names.begin(), names.end(), arg) != names.end()) return preset(arg);
  if (!std::filesystem::exists(arg)) {
    throw std::invalid_argument("'" + arg + "' is neither a preset nor a scenario file");
  }
  return load_scenario_file(arg);
}

std::string emit_scenario(const Scenario& s) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << s.name;
  out << YAML::Key << "seed" << YAML::Value << s.seed;

  out << YAML::Key << "motion" << YAML::Value << YAML::BeginMap;
  if (const auto* c = std::get_if<CourseMotion>(&s.motion)) {
    out << YAML::Key << "kind" << YAML::Value << "course";
    out << YAML::Key << "lengths" << YAML::Value << YAML::Flow << YAML::BeginMap
        << YAML::Key << "ab" << YAML::Value << c->lengths.ab
        << YAML::Key << "cd" << YAML::Value << c->lengths.cd
        << YAML::Key << "ad" << YAML::Value << c->lengths.ad
        << YAML::Key << "bd" << YAML::Value << c->lengths.bd
        << YAML::Key << "ac" << YAML::Value << c->lengths.ac << YAML::EndMap;
    out << YAML::Key << "depth" << YAML::Value << c->depth;
    out << YAML::Key << "heading_offset_deg" << YAML::Value << c->heading_offset_deg;
    out << YAML::Key << "laps" << YAML::Value << c->laps;
    out << YAML::Key << "speed" << YAML::Value << c->speed;
    out << YAML::Key << "corner_radius" << YAML::Value << c->corner_radius;
  } else {
    const auto& h = std::get<HoverMotion>(s.motion);
    out << YAML::Key << "kind" << YAML::Value << "hover";
    out << YAML::Key << "center" << YAML::Value << h.center;
    out << YAML::Key << "amplitude" << YAML::Value << h.amplitude;
    out << YAML::Key << "frequency" << YAML::Value << h.frequency;
    out << YAML::Key << "tilt_amplitude" << YAML::Value << h.tilt_amplitude;
    out << YAML::Key << "tilt_frequency" << YAML::Value << h.tilt_frequency;
    out << YAML::Key << "duration" << YAML::Value << h.duration;
  }
  out << YAML::EndMap;

  if (s.marker_grid) {
    const MarkerGrid& g = *s.marker_grid;
    const Quaternion& q = g.center_pose.q;
    out << YAML::Key << "marker_grid" << YAML::Value << YAML::BeginMap
        << YAML::Key << "rows" << YAML::Value << g.rows
        << YAML::Key << "cols" << YAML::Value << g.cols
        << YAML::Key << "marker_size" << YAML::Value << g.marker_size
        << YAML::Key << "spacing" << YAML::Value << g.spacing
        << YAML::Key << "center" << YAML::Value << g.center_pose.p
        << YAML::Key << "orientation" << YAML::Value << YAML::Flow << YAML::BeginSeq << q.w()
        << q.x() << q.y() << q.z() << YAML::EndSeq
        << YAML::Key << "first_id" << YAML::Value << g.first_id << YAML::EndMap;
  }
  if (s.beacon) {
    out << YAML::Key << "beacon" << YAML::Value << YAML::BeginMap
        << YAML::Key << "vertex" << YAML::Value << std::string(1, s.beacon->vertex)
        << YAML::Key << "height_above_seabed" << YAML::Value << s.beacon->height_above_seabed
        << YAML::Key << "seabed_depth" << YAML::Value << s.beacon->seabed_depth << YAML::EndMap;
  }
  out << YAML::Key << "zones" << YAML::Value << YAML::BeginSeq;
  for (const auto& z : s.zones) {
    out << YAML::Flow << YAML::BeginMap << YAML::Key << "center" << YAML::Value << z.center
        << YAML::Key << "radius" << YAML::Value << z.radius << YAML::Key << "bias" << YAML::Value
        << z.bias << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::Key << "occlusions" << YAML::Value << YAML::BeginSeq;
  for (const auto& iv : s.occlusions) out << Vec2(iv.begin, iv.end);
  out << YAML::EndSeq;

  const SensorParams& p = s.sensors;
  out << YAML::Key << "sensors" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "imu_rate" << YAML::Value << p.imu_rate;
  out << YAML::Key << "camera_rate" << YAML::Value << p.camera_rate;
  out << YAML::Key << "acoustic_rate" << YAML::Value << p.acoustic_rate;
  out << YAML::Key << "vio_rate" << YAML::Value << p.vio_rate;
  out << YAML::Key << "imu" << YAML::Value << YAML::BeginMap
      << YAML::Key << "accel_noise_density" << YAML::Value << p.imu.accel_noise_density
      << YAML::Key << "gyro_noise_density" << YAML::Value << p.imu.gyro_noise_density
      << YAML::Key << "accel_bias" << YAML::Value << p.imu.accel_bias
      << YAML::Key << "gyro_bias" << YAML::Value << p.imu.gyro_bias << YAML::EndMap;
  out << YAML::Key << "marker" << YAML::Value << YAML::BeginMap
      << YAML::Key << "visibility_range" << YAML::Value << p.marker.visibility_range
      << YAML::Key << "fov_half_angle" << YAML::Value << p.marker.fov_half_angle
      << YAML::Key << "sigma_pos" << YAML::Value << p.marker.sigma_pos
      << YAML::Key << "sigma_rot" << YAML::Value << p.marker.sigma_rot
      << YAML::Key << "p_outlier" << YAML::Value << p.marker.p_outlier
      << YAML::Key << "outlier_scale" << YAML::Value << p.marker.outlier_scale << YAML::EndMap;
  out << YAML::Key << "acoustic" << YAML::Value << YAML::BeginMap
      << YAML::Key << "sigma_xy" << YAML::Value << p.acoustic.sigma_xy
      << YAML::Key << "range_resolution" << YAML::Value << p.acoustic.range_resolution
      << YAML::Key << "p_loss" << YAML::Value << p.acoustic.p_loss
      << YAML::Key << "p_loss_occluded" << YAML::Value << p.acoustic.p_loss_occluded
      << YAML::EndMap;
  out << YAML::Key << "depth" << YAML::Value << YAML::BeginMap
      << YAML::Key << "sigma_z" << YAML::Value << p.depth.sigma_z << YAML::EndMap;
  out << YAML::Key << "vio" << YAML::Value << YAML::BeginMap
      << YAML::Key << "drift_rate" << YAML::Value << p.vio.drift_rate
      << YAML::Key << "scale_error" << YAML::Value << p.vio.scale_error
      << YAML::Key << "sigma_rot_walk" << YAML::Value << p.vio.sigma_rot_walk
      << YAML::Key << "rot_walk_bound" << YAML::Value << p.vio.rot_walk_bound << YAML::EndMap;
  out << YAML::EndMap;

  const FilterParams& f = s.tracker.filter;
  out << YAML::Key << "tracker" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "sigma_pos" << YAML::Value << s.tracker.sigma_pos;
  out << YAML::Key << "sigma_rot" << YAML::Value << s.tracker.sigma_rot;
  out << YAML::Key << "filter" << YAML::Value << YAML::BeginMap
      << YAML::Key << "gravity" << YAML::Value << f.gravity
      << YAML::Key << "accel_noise_density" << YAML::Value << f.accel_noise_density
      << YAML::Key << "gyro_noise_density" << YAML::Value << f.gyro_noise_density
      << YAML::Key << "accel_bias_walk" << YAML::Value << f.accel_bias_walk
      << YAML::Key << "gyro_bias_walk" << YAML::Value << f.gyro_bias_walk
      << YAML::Key << "initial_sigma" << YAML::Value << YAML::Flow << YAML::BeginMap
      << YAML::Key << "position" << YAML::Value << f.initial_sigma.position
      << YAML::Key << "velocity" << YAML::Value << f.initial_sigma.velocity
      << YAML::Key << "attitude" << YAML::Value << f.initial_sigma.attitude
      << YAML::Key << "accel_bias" << YAML::Value << f.initial_sigma.accel_bias
      << YAML::Key << "gyro_bias" << YAML::Value << f.initial_sigma.gyro_bias << YAML::EndMap
      << YAML::Key << "initial_accel_bias" << YAML::Value << f.initial_accel_bias
      << YAML::Key << "initial_gyro_bias" << YAML::Value << f.initial_gyro_bias
      << YAML::Key << "gate_chi2" << YAML::Value << f.gate_chi2
      << YAML::Key << "max_dt" << YAML::Value << f.max_dt
      << YAML::Key << "measurement_time_tolerance" << YAML::Value << f.measurement_time_tolerance
      << YAML::EndMap;
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::string scenario_key_reference() {
  std::ostringstream os;
  os << "Scenario keys (YAML; omitted keys keep their defaults):\n";
  for (const auto& d : key_docs()) {
    os << "  " << d.key << "\n      " << d.doc << "\n";
  }
  return os.str();
}

}  // namespace uwar::sim
