#include "uwar/harness/pipeline.hpp"
#include "uwar/sim/geometry.hpp"
#include "uwar/sim/streams_io.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

namespace uwar::harness {
namespace {

namespace fs = std::filesystem;
constexpr double kPi = 3.14159265358979323846;

Trajectory wavy(double seconds, double rate) {
  Trajectory t;
  for (int k = 0; k <= static_cast<int>(seconds * rate); ++k) {
    const double tk = k / rate;
    t.push_back({tk, Vec3(std::sin(tk), std::cos(0.5 * tk), 0.1 * tk),
                 quat_from_rotvec(Vec3(0.1 * std::sin(tk), 0.05, 0.3 * tk))});
  }
  return t;
}

Trajectory transformed(const Trajectory& in, const Vec3& dp, const Quaternion& dq,
                       const Quaternion& post = Quaternion::Identity()) {
  Trajectory out;
  for (const Pose& p : in.samples()) {
    out.push_back({p.t, dq * p.p + dp, canonical((dq * p.q * post).normalized())});
  }
  return out;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("uwar_test_" + name);
  fs::remove_all(p);
  return p;
}

TEST(Evaluate, IdenticalTrajectoriesGiveZero) {
  const Trajectory t = wavy(10.0, 60.0);
  const RunMetrics m = evaluate(t, t);
  EXPECT_EQ(m.mean_position_error_mm, 0.0);
  EXPECT_EQ(m.max_position_error_mm, 0.0);
  EXPECT_EQ(m.p99_position_error_mm, 0.0);
  EXPECT_EQ(m.mean_orientation_error_deg, 0.0);
  EXPECT_EQ(m.samples, t.size());
}

TEST(Evaluate, ConstantOffsetAndYaw) {
  const Trajectory t = wavy(10.0, 60.0);
  Trajectory shifted;
  for (const Pose& p : t.samples()) shifted.push_back({p.t, p.p + Vec3(0.05, 0, 0), p.q});
  EXPECT_NEAR(evaluate(shifted, t).mean_position_error_mm, 50.0, 1e-9);
  EXPECT_NEAR(evaluate(shifted, t).max_position_error_mm, 50.0, 1e-9);

  const Trajectory yawed =
      transformed(t, Vec3::Zero(), Quaternion::Identity(), quat_from_rotvec(Vec3(0, 0, kPi / 180)));
  EXPECT_NEAR(evaluate(yawed, t).mean_orientation_error_deg, 1.0, 1e-9);
}

TEST(Evaluate, RigidTransformInvariance) {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> n;
  const Trajectory truth = wavy(10.0, 60.0);
  Trajectory est;
  for (const Pose& p : truth.samples()) {
    est.push_back({p.t, p.p + 0.02 * Vec3(n(rng), n(rng), n(rng)),
                   canonical(p.q * quat_from_rotvec(0.01 * Vec3(n(rng), n(rng), n(rng))))});
  }
  const Vec3 dp(100, -20, 3);
  const Quaternion dq = quat_from_rotvec(Vec3(0.3, -1.2, 2.0));
  const RunMetrics a = evaluate(est, truth);
  const RunMetrics b = evaluate(transformed(est, dp, dq), transformed(truth, dp, dq));
  // mm units: 1e-9 m is 1e-6 mm
  EXPECT_NEAR(a.mean_position_error_mm, b.mean_position_error_mm, 1e-6);
  EXPECT_NEAR(a.max_position_error_mm, b.max_position_error_mm, 1e-6);
  EXPECT_NEAR(a.mean_orientation_error_deg, b.mean_orientation_error_deg, 1e-9 * 180 / kPi);
}

TEST(Evaluate, OverlapOnlyAndSpanErrors) {
  const Trajectory truth = wavy(10.0, 60.0);
  Trajectory est;
  for (int k = 0; k <= 1200; ++k) est.push_back({5.0 + k / 60.0, Vec3::Zero(), Quaternion::Identity()});
  const RunMetrics m = evaluate(est, truth);
  EXPECT_EQ(m.samples, 301u);
  EXPECT_NEAR(m.duration_s, 5.0, 1e-9);

  Trajectory late;
  late.push_back({20.0, Vec3::Zero(), Quaternion::Identity()});
  late.push_back({30.0, Vec3::Zero(), Quaternion::Identity()});
  EXPECT_THROW(evaluate(late, truth), std::invalid_argument);
  Trajectory brief;
  brief.push_back({9.5, Vec3::Zero(), Quaternion::Identity()});
  brief.push_back({10.0, Vec3::Zero(), Quaternion::Identity()});
  EXPECT_THROW(evaluate(brief, truth), std::invalid_argument);
}

TEST(Percentile, LinearInterpolation) {
  EXPECT_EQ(percentile({1, 2, 3, 4, 5}, 50), 3.0);
  EXPECT_EQ(percentile({5, 1, 4, 2, 3}, 0), 1.0);
  EXPECT_EQ(percentile({1, 2, 3, 4, 5}, 100), 5.0);
  EXPECT_DOUBLE_EQ(percentile({0, 10}, 90), 9.0);
  EXPECT_THROW(percentile({}, 50), std::invalid_argument);
}

TEST(Evaluate, EffectiveRates) {
  const auto course = simulate(sim::baiae_square());
  EXPECT_NEAR(evaluate_run(course, track_hybrid(course)).effective_rate_hz, 60.0, 1e-6);
  const auto lab = simulate(sim::marker_lab());
  EXPECT_NEAR(evaluate_run(lab, track_marker(lab, TrackingMode::Raw)).effective_rate_hz, 30.0,
              1e-6);
  EXPECT_NEAR(evaluate_run(lab, track_marker(lab, TrackingMode::Fused)).effective_rate_hz, 60.0,
              1e-6);
}

TEST(Evaluate, ContinuityAtFixesVersusMidpoints) {
  const auto run = simulate(sim::baiae_square());
  const RunMetrics m = evaluate_run(run, track_hybrid(run));
  ASSERT_TRUE(m.continuity);
  EXPECT_GT(m.continuity->intervals, 100u);
  EXPECT_GE(m.continuity->mean_error_at_fixes_mm, 0.0);
  EXPECT_GE(m.continuity->max_error_at_midpoints_mm, m.continuity->mean_error_at_midpoints_mm);
  EXPECT_GT(m.fixes_delivered, 100u);
}

TEST(MetricsJson, RoundTrip) {
  const auto run = simulate(sim::baiae_square());
  const RunMetrics m = evaluate_run(run, track_hybrid(run));
  const RunMetrics back = metrics_from_json(metrics_to_json(m));
  EXPECT_TRUE(back == m);
  EXPECT_EQ(metrics_to_json(back), metrics_to_json(m));
  EXPECT_THROW(metrics_from_json("{}"), std::invalid_argument);
}

std::string slurp(const fs::path& p) { return sim::read_text_file(p.string()); }

void expect_same_directories(const fs::path& a, const fs::path& b) {
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(a)) names.push_back(e.path().filename().string());
  std::size_t count_b = 0;
  for (const auto& e : fs::directory_iterator(b)) {
    (void)e;
    ++count_b;
  }
  EXPECT_EQ(names.size(), count_b);
  for (const auto& n : names) {
    ASSERT_TRUE(fs::exists(b / n)) << n;
    EXPECT_TRUE(slurp(a / n) == slurp(b / n)) << n;
  }
}

TEST(RunLog, SameSeedGivesIdenticalDirectories) {
  const fs::path a = scratch("log_a"), b = scratch("log_b");
  for (const fs::path& dir : {a, b}) {
    const auto run = simulate(sim::baiae_square());
    const auto tracked = track_hybrid(run);
    write_run_log(dir.string(), run, tracked, evaluate_run(run, tracked));
  }
  expect_same_directories(a, b);
  for (const char* f : {"truth.csv", "estimate.csv", "imu.csv", "acoustic.csv", "depth.csv",
                        "vio.csv", "metrics.json", "scenario.yaml", "tracker.json"}) {
    EXPECT_TRUE(fs::exists(a / f)) << f;
  }
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(RunLog, AcousticRowCountMatchesRate) {
  const fs::path dir = scratch("log_rows");
  const auto run = simulate(sim::baiae_square());
  write_simulation(dir.string(), run);
  const std::string text = slurp(dir / "acoustic.csv");
  const long rows = std::count(text.begin(), text.end(), '\n') - 1;
  const long expected = static_cast<long>(std::floor(run.truth.end_time() * 0.2));
  EXPECT_LE(std::abs(rows - expected), 1);
  fs::remove_all(dir);
}

TEST(RunLog, ReadBackIsStable) {
  const fs::path dir = scratch("log_read");
  const auto run = simulate(sim::baiae_square());
  const auto tracked = track_hybrid(run);
  write_run_log(dir.string(), run, tracked, evaluate_run(run, tracked));

  const SimulatedRun sim_back = read_simulation(dir.string());
  const TrackedRun trk_back = read_tracking(dir.string());
  EXPECT_EQ(trk_back.sources, tracked.sources);
  EXPECT_EQ(trk_back.fixes_applied, tracked.fixes_applied);
  const fs::path again = scratch("log_read_again");
  write_simulation(again.string(), sim_back);
  write_tracking(again.string(), trk_back);
  for (const char* f : {"truth.csv", "estimate.csv", "imu.csv", "acoustic.csv", "depth.csv",
                        "vio.csv", "scenario.yaml", "tracker.json"}) {
    EXPECT_TRUE(slurp(dir / f) == slurp(again / f)) << f;
  }
  EXPECT_TRUE(metrics_from_json(slurp(dir / "metrics.json")) == evaluate_run(run, tracked));
  fs::remove_all(dir);
  fs::remove_all(again);
}

std::size_t count_of(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

std::string points_of_layer(const std::string& svg, const std::string& id) {
  const auto g = svg.find("<g id=\"" + id + "\">");
  if (g == std::string::npos) return {};
  const auto p = svg.find("points=\"", g);
  return svg.substr(p + 8, svg.find('"', p + 8) - p - 8);
}

TEST(PlotTrajectory, EmptyExtrasHasOnlyTruthAndEstimate) {
  const Trajectory t = wavy(5.0, 60.0);
  const std::string svg = plot_trajectory(t, t);
  EXPECT_EQ(count_of(svg, "<g id=\"truth\">"), 1u);
  EXPECT_EQ(count_of(svg, "<g id=\"estimate\">"), 1u);
  EXPECT_EQ(count_of(svg, "<g id="), 3u);  // plot group + two layers
  EXPECT_EQ(count_of(svg, "<circle"), 0u);
  EXPECT_NE(svg.find("stroke-dasharray"), std::string::npos);
  // identical trajectories draw identical polylines
  EXPECT_EQ(points_of_layer(svg, "truth"), points_of_layer(svg, "estimate"));
  EXPECT_THROW(plot_trajectory(Trajectory{}, t), std::invalid_argument);
}

TEST(PlotTrajectory, BaiaeOutlineAtSolvedVertices) {
  const std::string dir = scratch("plot_baiae").string();
  reproduce_baiae(sim::baiae_square(), dir);
  const std::string svg = slurp(fs::path(dir) / "trajectory.svg");
  std::istringstream pts(points_of_layer(svg, "outline"));
  const auto v = sim::course_vertices(std::get<sim::CourseMotion>(sim::baiae_square().motion));
  std::string pair;
  std::vector<Vec2> got;
  while (pts >> pair) {
    const auto comma = pair.find(',');
    got.emplace_back(std::stod(pair.substr(0, comma)), std::stod(pair.substr(comma + 1)));
  }
  ASSERT_EQ(got.size(), 4u);
  const auto expect = v.as_array();
  for (int i = 0; i < 4; ++i) EXPECT_LT((got[i] - expect[i]).norm(), 2e-6);
  EXPECT_GT(count_of(svg, "<circle"), 100u);
  EXPECT_NE(svg.find("viridis"), std::string::npos);
  EXPECT_TRUE(fs::exists(fs::path(dir) / "y_cd.svg"));
  fs::remove_all(dir);
}

TEST(Viridis, Endpoints) {
  EXPECT_EQ(viridis(0.0), "#440154");
  EXPECT_EQ(viridis(1.0), "#fde725");
  EXPECT_EQ(viridis(2.0), "#fde725");
}

std::vector<double> ys_of_line(const std::string& svg, std::size_t nth) {
  std::size_t pos = 0;
  for (std::size_t i = 0; i <= nth; ++i) pos = svg.find("<polyline", pos + 1);
  const auto p = svg.find("points=\"", pos);
  std::istringstream in(svg.substr(p + 8, svg.find('"', p + 8) - p - 8));
  std::vector<double> ys;
  std::string pair;
  while (in >> pair) ys.push_back(std::stod(pair.substr(pair.find(',') + 1)));
  return ys;
}

TEST(PlotTimeseries, ConstantSeriesIsHorizontal) {
  Series s{"flat", {}, SeriesStyle::Line};
  for (int k = 0; k < 100; ++k) s.points.emplace_back(k * 0.1, 2.5);
  const std::string svg = plot_timeseries({s}, "flat", "v");
  const auto ys = ys_of_line(svg, 0);
  ASSERT_EQ(ys.size(), 100u);
  for (double y : ys) EXPECT_EQ(y, 2.5);
  EXPECT_THROW(plot_timeseries({}, "", ""), std::invalid_argument);
}

TEST(PlotTimeseries, FixesEveryFiveSecondsOverAMinute) {
  Series fixes{"fixes", {}, SeriesStyle::Points};
  for (double t = 0.0; t <= 60.0 + 1e-9; t += 5.0) fixes.points.emplace_back(t, std::sin(t));
  const std::string svg = plot_timeseries({fixes}, "", "y");
  const auto n = count_of(svg, "<ellipse");
  EXPECT_GE(n, 12u);
  EXPECT_LE(n, 13u);
}

TEST(YOfCd, StepFreeExceptAtResets) {
  const auto run = simulate(sim::baiae_square());
  const auto tracked = track_hybrid(run);
  const auto series = y_of_cd_series(run, tracked, 0);
  ASSERT_EQ(series.size(), 3u);
  const auto& est = series[1].points;
  ASSERT_GT(est.size(), 1000u);
  std::set<double> reset_times;
  for (std::size_t k = 0; k < tracked.sources.size(); ++k) {
    if (tracked.sources[k] == EstimateSource::Acoustic) reset_times.insert(tracked.estimate[k].t);
  }
  const auto& vio = run.scenario.sensors.vio;
  const double dt = 1.0 / 60.0;
  // diver speed plus six sigma of the per-axis VIO walk over one frame
  const double bound =
      0.5 * dt * (1.0 + vio.scale_error) + 6.0 * vio.drift_rate * std::sqrt(dt / 2.0);
  std::size_t jumps = 0;
  for (std::size_t k = 1; k < est.size(); ++k) {
    const double step = std::abs(est[k].y() - est[k - 1].y());
    if (reset_times.count(est[k].x())) {
      ++jumps;
      continue;
    }
    EXPECT_LT(step, bound) << "t=" << est[k].x();
  }
  EXPECT_GT(jumps, 3u);
  EXPECT_GE(series[2].points.size(), 4u);
}

#ifdef UWAR_CLI_PATH
struct CommandResult {
  int code;
  std::string out;
  std::string err;
};

CommandResult run_cli(const std::string& args) {
  const fs::path out = scratch("cli_stdout.txt"), err = scratch("cli_stderr.txt");
  const std::string cmd = std::string(UWAR_CLI_PATH) + " " + args + " >" + out.string() + " 2>" +
                          err.string();
  const int status = std::system(cmd.c_str());
  CommandResult r{WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
  return r;
}

TEST(Cli, HelpDocumentsScenarioKeys) {
  const auto r = run_cli("--help");
  EXPECT_EQ(r.code, 0);
  for (const char* key : {"simulate", "track", "evaluate", "reproduce", "sensors.acoustic.p_loss",
                          "zones", "marker_grid.spacing"}) {
    EXPECT_NE(r.out.find(key), std::string::npos) << key;
  }
}

TEST(Cli, SimulateTrackEvaluate) {
  const fs::path dir = scratch("cli_run");
  ASSERT_EQ(run_cli("simulate marker-lab --seed 3 --out " + dir.string()).code, 0);
  const auto t = run_cli("track marker --mode fused --in " + dir.string());
  ASSERT_EQ(t.code, 0) << t.err;
  const auto e = run_cli("evaluate --in " + dir.string());
  ASSERT_EQ(e.code, 0) << e.err;
  EXPECT_NE(e.out.find("mean_position_error_mm"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "metrics.json"));
  const std::string yaml = slurp(dir / "scenario.yaml");
  EXPECT_NE(yaml.find("seed: 3"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Cli, FailuresExitNonZeroWithJsonLine) {
  const auto missing = run_cli("evaluate --in /nonexistent/uwar_dir");
  EXPECT_NE(missing.code, 0);
  EXPECT_EQ(missing.err.rfind("{\"error\":", 0), 0u) << missing.err;
  const auto bad = run_cli("track submarine --in x");
  EXPECT_NE(bad.code, 0);
  EXPECT_EQ(bad.err.rfind("{\"error\":", 0), 0u) << bad.err;
  const auto preset = run_cli("simulate atlantis --out " + scratch("cli_bad").string());
  EXPECT_NE(preset.code, 0);
  EXPECT_NE(preset.err.find("atlantis"), std::string::npos);
}
#endif

}  // namespace
}  // namespace uwar::harness
