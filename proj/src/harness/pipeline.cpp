#include "uwar/harness/pipeline.hpp"

#include "uwar/sim/geometry.hpp"
#include "uwar/sim/streams_io.hpp"

#include <json.hpp>

#include <filesystem>
#include <stdexcept>

namespace uwar::harness {

namespace fs = std::filesystem;

SimulatedRun simulate(const sim::Scenario& scenario) {
  sim::validate(scenario);
  SimulatedRun run;
  run.scenario = scenario;
  run.truth = sim::build_truth(scenario);
  run.streams = sim::synthesize(scenario, run.truth);
  return run;
}

TrackedRun track_marker(const SimulatedRun& run, TrackingMode mode) {
  if (!run.scenario.marker_grid) {
    throw std::invalid_argument("track marker: scenario has no marker grid");
  }
  const MarkerMap map = MarkerMap::from_grid(*run.scenario.marker_grid);
  const auto result = run_marker_tracking(run.streams, map, run.scenario.tracker.filter,
                                          measurement_model(run.scenario), mode);
  TrackedRun out;
  out.tracker = "marker";
  out.mode = mode == TrackingMode::Raw ? "raw" : "fused";
  out.estimate = result.trajectory;
  out.updates_applied = result.updates_applied;
  out.updates_rejected = result.updates_rejected;
  return out;
}

TrackedRun track_hybrid(const SimulatedRun& run) {
  auto result = run_hybrid_tracking(run.streams);
  if (result.trajectory.size() == 0) {
    throw std::runtime_error("track hybrid: no acoustic fix delivered, not localized");
  }
  TrackedRun out;
  out.tracker = "hybrid";
  out.mode = "reset-anchor";
  out.estimate = std::move(result.trajectory);
  out.sources = std::move(result.sources);
  out.fixes_applied = result.fixes_applied;
  out.fixes_lost = result.fixes_lost;
  return out;
}

RunMetrics evaluate_run(const SimulatedRun& sim, const TrackedRun& tracked) {
  return evaluate(tracked.estimate, sim.truth, extras_of(tracked));
}

std::vector<Series> y_of_cd_series(const SimulatedRun& sim, const TrackedRun& tracked,
                                   std::size_t lap) {
  const auto* course = std::get_if<sim::CourseMotion>(&sim.scenario.motion);
  if (!course) throw std::invalid_argument("y_of_cd_series: scenario is not a course");
  const auto v = sim::course_vertices(*course);
  const auto windows = segment_windows(sim.truth, v.c, v.d, 0.05);
  if (lap >= windows.size()) throw std::out_of_range("y_of_cd_series: no such lap");
  const auto w = windows[lap];

  Series truth{"truth y", {}, SeriesStyle::Line};
  for (const Pose& p : sim.truth.samples()) {
    if (w.contains(p.t)) truth.points.emplace_back(p.t, p.p.y());
  }
  Series est{"hybrid estimate y (60 Hz)", {}, SeriesStyle::Line};
  for (const Pose& p : tracked.estimate.samples()) {
    if (w.contains(p.t)) est.points.emplace_back(p.t, p.p.y());
  }
  Series fixes{"acoustic fix y (0.2 Hz)", {}, SeriesStyle::Points};
  for (const auto& f : sim.streams.acoustic) {
    if (f.delivered && w.contains(f.t)) fixes.points.emplace_back(f.t, f.xy.y());
  }
  return {truth, est, fixes};
}

MarkerLabStudy marker_lab_study(const sim::Scenario& base, std::uint64_t first_seed,
                                std::size_t count) {
  if (count == 0) throw std::invalid_argument("marker_lab_study: no seeds");
  MarkerLabStudy study;
  for (std::size_t i = 0; i < count; ++i) {
    sim::Scenario s = base;
    s.seed = first_seed + i;
    const SimulatedRun run = simulate(s);
    MarkerLabSeed r;
    r.seed = s.seed;
    r.raw = evaluate_run(run, track_marker(run, TrackingMode::Raw));
    r.fused = evaluate_run(run, track_marker(run, TrackingMode::Fused));
    r.raw.series.clear();
    r.fused.series.clear();
    study.raw_position_mm += r.raw.mean_position_error_mm;
    study.raw_orientation_deg += r.raw.mean_orientation_error_deg;
    study.fused_position_mm += r.fused.mean_position_error_mm;
    study.fused_orientation_deg += r.fused.mean_orientation_error_deg;
    study.runs.push_back(std::move(r));
  }
  const auto n = static_cast<double>(count);
  study.raw_position_mm /= n;
  study.raw_orientation_deg /= n;
  study.fused_position_mm /= n;
  study.fused_orientation_deg /= n;
  return study;
}

std::string study_json(const MarkerLabStudy& study) {
  nlohmann::ordered_json j;
  j["seeds"] = study.runs.size();
  j["raw"] = {{"mean_position_error_mm", study.raw_position_mm},
              {"mean_orientation_error_deg", study.raw_orientation_deg}};
  j["fused"] = {{"mean_position_error_mm", study.fused_position_mm},
                {"mean_orientation_error_deg", study.fused_orientation_deg}};
  auto runs = nlohmann::ordered_json::array();
  for (const auto& r : study.runs) {
    runs.push_back({{"seed", r.seed},
                    {"raw_position_mm", r.raw.mean_position_error_mm},
                    {"raw_orientation_deg", r.raw.mean_orientation_error_deg},
                    {"raw_max_step_mm", r.raw.max_step_mm},
                    {"fused_position_mm", r.fused.mean_position_error_mm},
                    {"fused_orientation_deg", r.fused.mean_orientation_error_deg},
                    {"fused_max_step_mm", r.fused.max_step_mm}});
  }
  j["runs"] = runs;
  return j.dump(2) + "\n";
}

RunMetrics reproduce_baiae(const sim::Scenario& scenario, const std::string& out_dir) {
  const SimulatedRun run = simulate(scenario);
  const TrackedRun tracked = track_hybrid(run);
  const RunMetrics metrics = evaluate_run(run, tracked);
  write_run_log(out_dir, run, tracked, metrics);

  TrajectoryPlotExtras extras;
  extras.fixes = run.streams.acoustic;
  extras.title = scenario.name + ": hybrid estimate over the roped course";
  if (const auto* course = std::get_if<sim::CourseMotion>(&scenario.motion)) {
    const auto v = sim::course_vertices(*course);
    for (const Vec2& p : v.as_array()) extras.outline.push_back(p);
    sim::write_text_file((fs::path(out_dir) / "y_cd.svg").string(),
                         plot_timeseries(y_of_cd_series(run, tracked, 0),
                                         "y along segment C-D, first lap", "y [m]"));
  }
  sim::write_text_file((fs::path(out_dir) / "trajectory.svg").string(),
                       plot_trajectory(tracked.estimate, run.truth, extras));
  return metrics;
}

MarkerLabStudy reproduce_marker_lab(const sim::Scenario& scenario, const std::string& out_dir,
                                    std::size_t seeds) {
  const SimulatedRun run = simulate(scenario);
  for (TrackingMode mode : {TrackingMode::Raw, TrackingMode::Fused}) {
    const TrackedRun tracked = track_marker(run, mode);
    const std::string dir = (fs::path(out_dir) / tracked.mode).string();
    write_run_log(dir, run, tracked, evaluate_run(run, tracked));
    TrajectoryPlotExtras extras;
    extras.title = scenario.name + ": " + tracked.mode + " marker tracking";
    sim::write_text_file((fs::path(dir) / "trajectory.svg").string(),
                         plot_trajectory(tracked.estimate, run.truth, extras));
  }
  MarkerLabStudy study = marker_lab_study(scenario, scenario.seed, seeds);
  sim::write_text_file((fs::path(out_dir) / "study.json").string(), study_json(study));
  return study;
}

}  // namespace uwar::harness
