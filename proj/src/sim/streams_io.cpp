#include "uwar/sim/streams_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace uwar::sim {

namespace fs = std::filesystem;

namespace {

constexpr const char* kImuHeader = "t,ax,ay,az,gx,gy,gz";
constexpr const char* kMarkersHeader = "t,marker_id,detected,outlier,px,py,pz,qw,qx,qy,qz";
constexpr const char* kAcousticHeader = "t,x,y,delivered";
constexpr const char* kDepthHeader = "t,z_depth";

void append_fields(std::string& out, std::initializer_list<double> values) {
  bool first = true;
  for (double v : values) {
    if (!first) out.push_back(',');
    append_fixed(out, v);
    first = false;
  }
}

// Splits the body of a CSV document after checking its header.
std::vector<std::vector<std::string>> rows_of(const std::string& text, const char* header,
                                              std::size_t columns) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != header) {
    throw std::invalid_argument(std::string("CSV: expected header '") + header + "'");
  }
  std::vector<std::vector<std::string>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto f = split_csv_line(line);
    if (f.size() != columns) throw std::invalid_argument("CSV: wrong column count in row");
    rows.push_back(std::move(f));
  }
  return rows;
}

bool parse_flag(const std::string& s) {
  if (s == "1") return true;
  if (s == "0") return false;
  throw std::invalid_argument("CSV: flag must be 0 or 1, got '" + s + "'");
}

}  // namespace

std::string imu_csv(const std::vector<ImuSample>& imu) {
  std::string out = std::string(kImuHeader) + "\n";
  for (const auto& s : imu) {
    append_fields(out, {s.t, s.accel.x(), s.accel.y(), s.accel.z(), s.gyro.x(), s.gyro.y(),
                        s.gyro.z()});
    out.push_back('\n');
  }
  return out;
}

std::string markers_csv(const std::vector<MarkerObservation>& markers) {
  std::string out = std::string(kMarkersHeader) + "\n";
  for (const auto& m : markers) {
    append_fixed(out, m.t);
    out += "," + std::to_string(m.marker_id) + "," + (m.detected ? "1" : "0") + "," +
           (m.outlier ? "1" : "0") + ",";
    append_fields(out, {m.rel_p.x(), m.rel_p.y(), m.rel_p.z(), m.rel_q.w(), m.rel_q.x(),
                        m.rel_q.y(), m.rel_q.z()});
    out.push_back('\n');
  }
  return out;
}

std::string acoustic_csv(const std::vector<AcousticFix>& fixes) {
  std::string out = std::string(kAcousticHeader) + "\n";
  for (const auto& f : fixes) {
    append_fields(out, {f.t, f.xy.x(), f.xy.y()});
    out += f.delivered ? ",1\n" : ",0\n";
  }
  return out;
}

std::string depth_csv(const std::vector<DepthSample>& depth) {
  std::string out = std::string(kDepthHeader) + "\n";
  for (const auto& d : depth) {
    append_fields(out, {d.t, d.z_depth});
    out.push_back('\n');
  }
  return out;
}

std::string vio_csv(const std::vector<Pose>& vio) {
  std::string out = std::string(kTrajectoryCsvHeader) + "\n";
  for (const auto& p : vio) {
    append_pose_fields(out, p);
    out.push_back('\n');
  }
  return out;
}

std::vector<ImuSample> parse_imu_csv(const std::string& text) {
  std::vector<ImuSample> out;
  for (const auto& f : rows_of(text, kImuHeader, 7)) {
    ImuSample s;
    s.t = parse_double(f[0]);
    s.accel = Vec3(parse_double(f[1]), parse_double(f[2]), parse_double(f[3]));
    s.gyro = Vec3(parse_double(f[4]), parse_double(f[5]), parse_double(f[6]));
    out.push_back(s);
  }
  return out;
}

std::vector<MarkerObservation> parse_markers_csv(const std::string& text) {
  std::vector<MarkerObservation> out;
  for (const auto& f : rows_of(text, kMarkersHeader, 11)) {
    MarkerObservation m;
    m.t = parse_double(f[0]);
    m.marker_id = std::stoi(f[1]);
    m.detected = parse_flag(f[2]);
    m.outlier = parse_flag(f[3]);
    m.rel_p = Vec3(parse_double(f[4]), parse_double(f[5]), parse_double(f[6]));
    m.rel_q = Quaternion(parse_double(f[7]), parse_double(f[8]), parse_double(f[9]),
                         parse_double(f[10]));
    out.push_back(m);
  }
  return out;
}

std::vector<AcousticFix> parse_acoustic_csv(const std::string& text) {
  std::vector<AcousticFix> out;
  for (const auto& f : rows_of(text, kAcousticHeader, 4)) {
    AcousticFix a;
    a.t = parse_double(f[0]);
    a.xy = Vec2(parse_double(f[1]), parse_double(f[2]));
    a.delivered = parse_flag(f[3]);
    out.push_back(a);
  }
  return out;
}

std::vector<DepthSample> parse_depth_csv(const std::string& text) {
  std::vector<DepthSample> out;
  for (const auto& f : rows_of(text, kDepthHeader, 2)) {
    out.push_back({parse_double(f[0]), parse_double(f[1])});
  }
  return out;
}

std::vector<Pose> parse_vio_csv(const std::string& text) {
  std::istringstream is(text);
  const Trajectory t = read_trajectory_csv(is);
  return {t.samples().begin(), t.samples().end()};
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  os << text;
  if (!os) throw std::runtime_error("write failed for '" + path + "'");
}

void write_streams(const std::string& dir, const SensorStreams& s) {
  const fs::path d(dir);
  write_text_file((d / "imu.csv").string(), imu_csv(s.imu));
  if (!s.markers.empty()) write_text_file((d / "markers.csv").string(), markers_csv(s.markers));
  write_text_file((d / "acoustic.csv").string(), acoustic_csv(s.acoustic));
  write_text_file((d / "depth.csv").string(), depth_csv(s.depth));
  write_text_file((d / "vio.csv").string(), vio_csv(s.vio));
}

SensorStreams read_streams(const std::string& dir) {
  const fs::path d(dir);
  auto load = [&](const char* name) -> std::string {
    const fs::path p = d / name;
    return fs::exists(p) ? read_text_file(p.string()) : std::string();
  };
  SensorStreams s;
  if (auto t = load("imu.csv"); !t.empty()) s.imu = parse_imu_csv(t);
  if (auto t = load("markers.csv"); !t.empty()) s.markers = parse_markers_csv(t);
  if (auto t = load("acoustic.csv"); !t.empty()) s.acoustic = parse_acoustic_csv(t);
  if (auto t = load("depth.csv"); !t.empty()) s.depth = parse_depth_csv(t);
  if (auto t = load("vio.csv"); !t.empty()) s.vio = parse_vio_csv(t);
  return s;
}

}  // namespace uwar::sim
