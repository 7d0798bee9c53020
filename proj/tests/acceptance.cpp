// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include "uwar/eskf.hpp"
#include "uwar/harness/pipeline.hpp"
#include "uwar/sim/geometry.hpp"
#include "uwar/sim/streams_io.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace uwar;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

constexpr double kDeg = 180.0 / std::numbers::pi;

// Criterion tolerances.
constexpr double kRawPosTargetMm = 52.0, kRawPosTolMm = 8.0;
constexpr double kRawOriTargetDeg = 1.9, kRawOriTolDeg = 0.4;
constexpr double kFusedPosMaxMm = 48.0, kFusedOriMaxDeg = 1.3;
constexpr std::size_t kLabSeeds = 20;
constexpr double kLabBudgetS = 60.0;
constexpr double kLeverTargetMm = 34.9, kLeverTolMm = 0.5;
constexpr std::size_t kSpikeSeeds = 100;
constexpr double kSpikeBudgetS = 60.0;
constexpr double kHybridBudgetS = 30.0;
constexpr double kZoneErrorMinM = 5.0, kZoneRadiusM = 6.0;
constexpr double kQuadTolM = 1e-6;
constexpr int kHygieneSteps = 100000;
constexpr double kSymTol = 1e-9, kEigTol = -1e-9, kNormTol = 1e-9, kFdRelTol = 1e-5;
constexpr double kConsistPosM = 1e-3, kConsistDeg = 0.01, kBurnInS = 2.0;
constexpr double kStaticSigmaRel = 0.15, kStaticBiasSe = 3.0, kStaticSeconds = 60.0;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

void check(Outcome& o, bool ok, const std::string& what) {
  if (!ok) o.pass = false;
  o.detail += (o.detail.empty() ? "" : "; ") + what + (ok ? "" : " [x]");
}

Outcome marker_lab_reproduction() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto s = harness::marker_lab_study(sim::marker_lab(), sim::marker_lab().seed, kLabSeeds);
  const double elapsed = seconds_since(t0);
  check(o, s.runs.size() >= kLabSeeds, std::to_string(s.runs.size()) + " seeds");
  check(o, std::abs(s.raw_position_mm - kRawPosTargetMm) <= kRawPosTolMm,
        "raw pos " + fmt("%.2f mm", s.raw_position_mm));
  check(o, std::abs(s.raw_orientation_deg - kRawOriTargetDeg) <= kRawOriTolDeg,
        "raw ori " + fmt("%.3f deg", s.raw_orientation_deg));
  check(o, s.fused_position_mm <= kFusedPosMaxMm, "fused pos " + fmt("%.2f mm", s.fused_position_mm));
  check(o, s.fused_orientation_deg <= kFusedOriMaxDeg,
        "fused ori " + fmt("%.3f deg", s.fused_orientation_deg));
  check(o, s.fused_orientation_deg <= 0.7 * s.raw_orientation_deg, "ori improvement >= 30%");
  check(o, elapsed < kLabBudgetS, fmt("%.1f s", elapsed));
  return o;
}

Outcome lever_arm() {
  Outcome o;
  const double mm = orientation_error_displacement(2.0, 1.0 / kDeg) * 1000.0;
  check(o, std::abs(mm - kLeverTargetMm) <= kLeverTolMm, fmt("%.3f mm", mm));
  return o;
}

Outcome spike_elimination() {
  Outcome o;
  const auto t0 = Clock::now();
  sim::Scenario s = sim::marker_lab();
  s.sensors.marker.p_outlier = 0.05;
  s.sensors.marker.outlier_scale = 1.0;
  std::size_t wins = 0;
  double worst_ratio = 0.0;
  for (std::uint64_t seed = 1; seed <= kSpikeSeeds; ++seed) {
    s.seed = seed;
    const auto run = harness::simulate(s);
    const auto raw = harness::evaluate_run(run, harness::track_marker(run, TrackingMode::Raw));
    const auto fused = harness::evaluate_run(run, harness::track_marker(run, TrackingMode::Fused));
    if (fused.max_step_mm < raw.max_step_mm) ++wins;
    worst_ratio = std::max(worst_ratio, fused.max_step_mm / raw.max_step_mm);
  }
  const double elapsed = seconds_since(t0);
  check(o, wins == kSpikeSeeds,
        std::to_string(wins) + "/" + std::to_string(kSpikeSeeds) + " seeds fused < raw");
  o.detail += "; worst fused/raw max step " + fmt("%.3f", worst_ratio);
  check(o, elapsed < kSpikeBudgetS, fmt("%.1f s", elapsed));
  return o;
}

Outcome hybrid_gap_filling() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto run = harness::simulate(sim::baiae_square());
  const auto tracked = harness::track_hybrid(run);
  const auto& est = tracked.estimate;
  const auto& vio = run.streams.vio;
  const auto& fixes = run.streams.acoustic;
  const double duration = run.truth.end_time() - run.truth.start_time();

  const auto expected_fixes = static_cast<long>(std::floor(duration * 0.2));
  check(o, std::abs(static_cast<long>(fixes.size()) - expected_fixes) <= 1,
        std::to_string(fixes.size()) + " fixes attempted at 0.2 Hz");
  std::size_t delivered = 0;
  for (const auto& f : fixes) delivered += f.delivered ? 1 : 0;
  const double delivered_hz = static_cast<double>(delivered) / duration;
  check(o, delivered_hz > 0.8 * 0.2 && delivered_hz <= 0.2 + 1e-9,
        "delivered " + fmt("%.4f Hz", delivered_hz));

  bool rate_ok = est.size() > 1;
  for (std::size_t k = 1; k < est.size(); ++k) {
    rate_ok = rate_ok && std::abs(est[k].t - est[k - 1].t - 1.0 / 60.0) < 1e-9;
  }
  const std::size_t first = vio.size() - est.size();
  for (std::size_t k = 0; k < est.size(); ++k) rate_ok = rate_ok && est[k].t == vio[first + k].t;
  check(o, rate_ok, std::to_string(est.size()) + " samples at 60 Hz on the VIO clock");

  bool fixes_exact = true, fill_exact = true;
  std::size_t fix_idx = 0, fix_hits = 0;
  Vec2 anchor_xy = Vec2::Zero(), anchor_vio = Vec2::Zero();
  for (std::size_t k = 0; k < est.size(); ++k) {
    const Vec2 xy = est[k].p.head<2>();
    const Vec2 vxy = vio[first + k].p.head<2>();
    if (tracked.sources[k] == EstimateSource::Acoustic) {
      while (fix_idx < fixes.size() &&
             !(fixes[fix_idx].delivered && fixes[fix_idx].t >= est[k].t - 1e-9)) {
        ++fix_idx;
      }
      fixes_exact = fixes_exact && fix_idx < fixes.size() && xy == fixes[fix_idx].xy;
      anchor_xy = xy;
      anchor_vio = vxy;
      ++fix_idx;
      ++fix_hits;
    } else {
      fill_exact = fill_exact && xy == Vec2(anchor_xy + (vxy - anchor_vio));
    }
  }
  check(o, fixes_exact && fix_hits == delivered,
        std::to_string(fix_hits) + " fix instants equal the fix bitwise");
  check(o, fill_exact, "fill equals anchor + VIO displacement bitwise");
  const double elapsed = seconds_since(t0);
  check(o, elapsed < kHybridBudgetS, fmt("%.1f s", elapsed));
  return o;
}

Outcome multipath_zone() {
  Outcome o;
  const auto t0 = Clock::now();
  const sim::Scenario scenario = sim::baiae_square();
  const auto run = harness::simulate(scenario);
  const auto tracked = harness::track_hybrid(run);
  const auto& course = std::get<sim::CourseMotion>(scenario.motion);
  const auto v = sim::course_vertices(course);
  const auto& acoustic = scenario.sensors.acoustic;
  const auto& vio = scenario.sensors.vio;

  bool zone_biased = false;
  for (const auto& z : scenario.zones) {
    zone_biased = zone_biased || ((z.center - v.c).norm() < 1e-9 && z.bias == Vec2(5.5, 0.0));
  }
  check(o, zone_biased, "zone at C biased (5.5, 0) m");

  const double lap = (run.truth.end_time() - run.truth.start_time()) / course.laps;
  std::vector<double> worst_c(course.laps, 0.0);
  const auto ab = harness::segment_windows(run.truth, v.a, v.b, 0.05);
  double worst_margin = -1e9, worst_ab = 0.0;
  double anchor_t = 0.0;
  for (std::size_t k = 0; k < tracked.estimate.size(); ++k) {
    const Pose& e = tracked.estimate[k];
    if (tracked.sources[k] == EstimateSource::Acoustic) anchor_t = e.t;
    const Pose g = run.truth.sample_at(e.t);
    const double err = (e.p.head<2>() - g.p.head<2>()).norm();
    if ((g.p.head<2>() - v.c).norm() <= kZoneRadiusM) {
      const auto l = std::min<std::size_t>(static_cast<std::size_t>(e.t / lap), course.laps - 1);
      worst_c[l] = std::max(worst_c[l], err);
    }
    bool on_ab = false;
    for (const auto& w : ab) on_ab = on_ab || w.contains(e.t);
    if (!on_ab) continue;
    // fix noise plus range quantisation, then the VIO walk and scale error since the anchor
    const double since = e.t - anchor_t;
    const double drift = 3.0 * vio.drift_rate * std::sqrt(since) +
                         vio.scale_error * course.speed * since;
    const double bound = 3.0 * acoustic.sigma_xy + acoustic.range_resolution + drift;
    worst_ab = std::max(worst_ab, err);
    worst_margin = std::max(worst_margin, err - bound);
  }
  for (std::size_t l = 0; l < worst_c.size(); ++l) {
    check(o, worst_c[l] > kZoneErrorMinM,
          "lap " + std::to_string(l + 1) + " near C " + fmt("%.2f m", worst_c[l]));
  }
  check(o, ab.size() == course.laps && worst_margin < 0.0,
        "A-B max " + fmt("%.3f m", worst_ab) + ", worst margin to bound " +
            fmt("%.3f m", worst_margin));
  const double elapsed = seconds_since(t0);
  check(o, elapsed < kHybridBudgetS, fmt("%.1f s", elapsed));
  return o;
}

// Gauss-Newton over C and D with A and B fixed, started away from the answer.
sim::QuadVertices least_squares_quad(const sim::QuadLengths& L, Vec2 c, Vec2 d) {
  const Vec2 a(0, 0), b(L.ab, 0);
  for (int it = 0; it < 100; ++it) {
    Eigen::Vector4d r;
    Eigen::Matrix4d J = Eigen::Matrix4d::Zero();
    r << (d - a).norm() - L.ad, (d - b).norm() - L.bd, (c - a).norm() - L.ac,
        (c - d).norm() - L.cd;
    J.block<1, 2>(0, 2) = ((d - a) / (d - a).norm()).transpose();
    J.block<1, 2>(1, 2) = ((d - b) / (d - b).norm()).transpose();
    J.block<1, 2>(2, 0) = ((c - a) / (c - a).norm()).transpose();
    J.block<1, 2>(3, 0) = ((c - d) / (c - d).norm()).transpose();
    J.block<1, 2>(3, 2) = (-(c - d) / (c - d).norm()).transpose();
    const Eigen::Vector4d step = J.colPivHouseholderQr().solve(-r);
    c += step.head<2>();
    d += step.tail<2>();
    if (step.norm() < 1e-14) break;
  }
  return {a, b, c, d};
}

Outcome quadrilateral() {
  Outcome o;
  const sim::QuadLengths L{30.0, 30.0, 29.26, 43.3, 41.0};
  const auto v = sim::solve_quadrilateral(L);
  const double res = std::max({std::abs((v.b - v.a).norm() - L.ab),
                               std::abs((v.d - v.c).norm() - L.cd),
                               std::abs((v.d - v.a).norm() - L.ad),
                               std::abs((v.d - v.b).norm() - L.bd),
                               std::abs((v.c - v.a).norm() - L.ac)});
  check(o, res < kQuadTolM, "max residual " + fmt("%.2e m", res));
  const auto lsq = least_squares_quad(L, Vec2(25, 25), Vec2(0, 25));
  const double diff = std::max((lsq.c - v.c).norm(), (lsq.d - v.d).norm());
  check(o, diff < kQuadTolM, "least-squares agreement " + fmt("%.2e m", diff));
  return o;
}

Quaternion random_quat(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Eigen::Vector4d c(n(rng), n(rng), n(rng), n(rng));
  c.normalize();
  return Quaternion(c[0], c[1], c[2], c[3]);
}

Outcome eskf_hygiene() {
  Outcome o;
  std::mt19937_64 rng(20250);
  std::normal_distribution<double> n;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const FilterParams params;
  const double dt = 1.0 / 60.0;

  EskfState s;
  s.P = initial_covariance(params);
  double worst_sym = 0.0, worst_eig = 0.0, worst_norm = 0.0;
  for (int k = 0; k < kHygieneSteps; ++k) {
    if (u(rng) < 0.6) {
      s = predict(s, {s.t + dt, Vec3(n(rng), n(rng), 9.81 + n(rng)), 0.3 * Vec3(n(rng), n(rng), n(rng))},
                  params);
    } else {
      PoseMeasurement z;
      z.t = s.t;
      z.p = s.x.p + 0.05 * Vec3(n(rng), n(rng), n(rng));
      z.q = s.x.q * quat_from_rotvec(0.02 * Vec3(n(rng), n(rng), n(rng)));
      const double sp = 0.01 + 0.2 * u(rng), sr = 0.005 + 0.1 * u(rng);
      Vector6 d;
      d << Vec3::Constant(sp * sp), Vec3::Constant(sr * sr);
      z.R = d.asDiagonal();
      s = update_pose(s, z, params).state;
    }
    worst_sym = std::max(worst_sym, (s.P - s.P.transpose()).cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<Covariance> es(s.P, Eigen::EigenvaluesOnly);
    worst_eig = std::min(worst_eig, es.eigenvalues().minCoeff());
    worst_norm = std::max(worst_norm, std::abs(s.x.q.norm() - 1.0));
  }
  check(o, worst_sym < kSymTol, "asymmetry " + fmt("%.1e", worst_sym));
  check(o, worst_eig >= kEigTol, "min eigenvalue " + fmt("%.1e", worst_eig));
  check(o, worst_norm < kNormTol, "quaternion norm error " + fmt("%.1e", worst_norm));

  double worst_fd = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    NominalState x;
    x.p = Vec3(n(rng), n(rng), n(rng));
    x.v = Vec3(n(rng), n(rng), n(rng));
    x.q = random_quat(rng);
    x.accel_bias = 0.1 * Vec3(n(rng), n(rng), n(rng));
    x.gyro_bias = 0.01 * Vec3(n(rng), n(rng), n(rng));
    const ImuSample imu{0.0, Vec3(n(rng), n(rng), 9.81 + n(rng)), Vec3(n(rng), n(rng), n(rng))};
    const Covariance F = propagation_jacobian(x, imu, dt);
    const NominalState base = propagate_nominal(x, imu, dt, params.gravity);
    ErrorVector dx;
    for (int i = 0; i < err::kDim; ++i) dx[i] = 1e-6 * n(rng);
    const ErrorVector fd =
        error_between(propagate_nominal(inject_error(x, dx), imu, dt, params.gravity), base);
    worst_fd = std::max(worst_fd, (fd - F * dx).norm() / (F * dx).norm());
  }
  check(o, worst_fd < kFdRelTol, "Jacobian vs finite differences " + fmt("%.1e", worst_fd));

  sim::Scenario lab = sim::marker_lab();
  lab.sensors.imu = sim::ImuNoise{};
  lab.sensors.marker.sigma_pos = 0.0;
  lab.sensors.marker.sigma_rot = 0.0;
  lab.sensors.marker.p_outlier = 0.0;
  lab.tracker.sigma_pos = 1e-4;
  lab.tracker.sigma_rot = 1e-4;
  lab.tracker.filter.accel_noise_density = 1e-5;
  lab.tracker.filter.gyro_noise_density = 1e-6;
  lab.tracker.filter.accel_bias_walk = 1e-8;
  lab.tracker.filter.gyro_bias_walk = 1e-9;
  lab.tracker.filter.initial_sigma.accel_bias = 1e-4;
  lab.tracker.filter.initial_sigma.gyro_bias = 1e-5;
  const auto run = harness::simulate(lab);
  const auto fused = harness::track_marker(run, TrackingMode::Fused);
  double max_p = 0.0, max_q = 0.0;
  for (const Pose& e : fused.estimate.samples()) {
    if (e.t < kBurnInS) continue;
    const Pose g = run.truth.sample_at(e.t);
    max_p = std::max(max_p, (e.p - g.p).norm());
    max_q = std::max(max_q, quat_error(e.q, g.q) * kDeg);
  }
  check(o, max_p < kConsistPosM && max_q < kConsistDeg,
        "noise-free fused " + fmt("%.2e m", max_p) + " / " + fmt("%.2e deg", max_q));
  return o;
}

std::string slurp(const fs::path& p) { return sim::read_text_file(p.string()); }

void write_preset_log(const sim::Scenario& scenario, const fs::path& dir) {
  const auto run = harness::simulate(scenario);
  const auto tracked = scenario.marker_grid ? harness::track_marker(run, TrackingMode::Fused)
                                            : harness::track_hybrid(run);
  harness::write_run_log(dir.string(), run, tracked, harness::evaluate_run(run, tracked));
}

bool same_directory(const fs::path& a, const fs::path& b, std::size_t& files) {
  std::vector<fs::path> names;
  for (const auto& e : fs::directory_iterator(a)) names.push_back(e.path().filename());
  std::size_t nb = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(b)) ++nb;
  bool same = names.size() == nb;
  for (const auto& name : names) {
    same = same && fs::exists(b / name) && slurp(a / name) == slurp(b / name);
  }
  files = names.size();
  return same;
}

Outcome determinism() {
  Outcome o;
  const fs::path root = fs::temp_directory_path() / "uwar_acceptance_determinism";
  fs::remove_all(root);
  for (const auto& name : sim::preset_names()) {
    const sim::Scenario s = sim::preset(name);
    write_preset_log(s, root / (name + "_a"));
    write_preset_log(s, root / (name + "_b"));
    std::size_t files = 0;
    const bool same = same_directory(root / (name + "_a"), root / (name + "_b"), files);
    check(o, same && files > 0, name + " " + std::to_string(files) + " files byte-identical");

    sim::Scenario changed = s;
    changed.sensors.acoustic.sigma_xy *= 2.0;
    changed.sensors.acoustic.p_loss = 0.3;
    changed.sensors.acoustic.range_resolution = 0.1;
    write_preset_log(changed, root / (name + "_c"));
    check(o, slurp(root / (name + "_a") / "imu.csv") == slurp(root / (name + "_c") / "imu.csv"),
          name + " imu.csv unchanged by acoustic parameters");
  }
  fs::remove_all(root);
  return o;
}

Outcome static_noise() {
  Outcome o;
  const double rate = 60.0;
  Trajectory truth;
  for (int k = 0; k <= static_cast<int>(kStaticSeconds * rate); ++k) {
    truth.push_back({k / rate, Vec3(0.2, -0.1, -1.0), Quaternion::Identity()});
  }
  sim::SensorParams sensors;
  sensors.imu_rate = rate;
  sensors.imu.accel_noise_density = 2e-3;
  sensors.imu.gyro_noise_density = 2e-4;
  sensors.imu.accel_bias = Vec3(0.03, -0.02, 0.05);
  sensors.imu.gyro_bias = Vec3(0.002, -0.001, 0.0015);
  const auto log = sim::synth_imu(truth, sensors, 99);
  const auto e = estimate_static_noise(log);

  const double sa = sensors.imu.accel_noise_density * std::sqrt(rate);
  const double sg = sensors.imu.gyro_noise_density * std::sqrt(rate);
  const double se_a = sa / std::sqrt(static_cast<double>(e.samples));
  const double se_g = sg / std::sqrt(static_cast<double>(e.samples));
  double worst_sigma = 0.0, worst_bias_se = 0.0;
  for (int i = 0; i < 3; ++i) {
    worst_sigma = std::max({worst_sigma,
                            std::abs(e.accel_density[i] / sensors.imu.accel_noise_density - 1.0),
                            std::abs(e.gyro_density[i] / sensors.imu.gyro_noise_density - 1.0)});
    worst_bias_se = std::max({worst_bias_se,
                              std::abs(e.accel_bias[i] - sensors.imu.accel_bias[i]) / se_a,
                              std::abs(e.gyro_bias[i] - sensors.imu.gyro_bias[i]) / se_g});
  }
  check(o, worst_sigma <= kStaticSigmaRel, "worst density error " + fmt("%.1f%%", 100 * worst_sigma));
  check(o, worst_bias_se <= kStaticBiasSe, "worst bias error " + fmt("%.2f SE", worst_bias_se));
  check(o, e.samples + 1 >= static_cast<std::size_t>(kStaticSeconds * rate),
        std::to_string(e.samples) + " samples");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"marker-lab raw vs fused over 20 seeds", marker_lab_reproduction},
      {"2 m x tan(1 deg) lever arm", lever_arm},
      {"fused suppresses marker outlier spikes", spike_elimination},
      {"hybrid 60 Hz gap filling", hybrid_gap_filling},
      {"multipath zone at vertex C", multipath_zone},
      {"quadrilateral solver", quadrilateral},
      {"ESKF numerical hygiene", eskf_hygiene},
      {"determinism", determinism},
      {"static-noise calibration", static_noise},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
