// Command-line front end: simulate, track, evaluate and reproduce.

#include "uwar/harness/pipeline.hpp"
#include "uwar/sim/scenario_io.hpp"
#include "uwar/sim/streams_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace uwar;
using nlohmann::ordered_json;

void print_line(const ordered_json& j) { std::cout << j.dump() << "\n"; }

ordered_json summary_of(const harness::RunMetrics& m) {
  return {{"samples", m.samples},
          {"mean_position_error_mm", m.mean_position_error_mm},
          {"p90_position_error_mm", m.p90_position_error_mm},
          {"max_position_error_mm", m.max_position_error_mm},
          {"mean_orientation_error_deg", m.mean_orientation_error_deg},
          {"max_step_mm", m.max_step_mm},
          {"effective_rate_hz", m.effective_rate_hz}};
}

void run_simulate(const std::string& scenario_arg, std::optional<std::uint64_t> seed,
                  const std::string& out) {
  sim::Scenario scenario = sim::load_scenario(scenario_arg);
  if (seed) scenario.seed = *seed;
  const auto run = harness::simulate(scenario);
  harness::write_simulation(out, run);
  print_line({{"command", "simulate"},
              {"scenario", scenario.name},
              {"seed", scenario.seed},
              {"out", out},
              {"truth_samples", run.truth.size()},
              {"imu", run.streams.imu.size()},
              {"markers", run.streams.markers.size()},
              {"acoustic", run.streams.acoustic.size()},
              {"vio", run.streams.vio.size()}});
}

void run_track(const std::string& kind, const std::string& in, const std::string& mode,
               std::string out) {
  if (out.empty()) out = in;
  const auto sim = harness::read_simulation(in);
  harness::TrackedRun tracked;
  if (kind == "marker") {
    if (mode != "raw" && mode != "fused") {
      throw std::invalid_argument("--mode must be raw or fused");
    }
    tracked = harness::track_marker(sim, mode == "raw" ? TrackingMode::Raw : TrackingMode::Fused);
  } else {
    tracked = harness::track_hybrid(sim);
  }
  harness::write_tracking(out, tracked);
  print_line({{"command", "track"},
              {"tracker", tracked.tracker},
              {"mode", tracked.mode},
              {"samples", tracked.estimate.size()},
              {"updates_applied", tracked.updates_applied},
              {"updates_rejected", tracked.updates_rejected},
              {"fixes_applied", tracked.fixes_applied},
              {"fixes_lost", tracked.fixes_lost}});
}

void run_evaluate(const std::string& in) {
  const auto sim = harness::read_simulation(in);
  const auto tracked = harness::read_tracking(in);
  const auto metrics = harness::evaluate_run(sim, tracked);
  harness::write_metrics(in, metrics);
  ordered_json j{{"command", "evaluate"}};
  j["metrics"] = summary_of(metrics);
  print_line(j);
}

void run_reproduce(const std::string& name, const std::string& out,
                   std::optional<std::uint64_t> seed, std::size_t seeds) {
  sim::Scenario scenario = sim::preset(name);
  if (seed) scenario.seed = *seed;
  if (std::holds_alternative<sim::CourseMotion>(scenario.motion)) {
    const auto m = harness::reproduce_baiae(scenario, out);
    ordered_json j{{"command", "reproduce"}, {"preset", name}, {"out", out}};
    j["metrics"] = summary_of(m);
    print_line(j);
  } else {
    const auto s = harness::reproduce_marker_lab(scenario, out, seeds);
    print_line({{"command", "reproduce"},
                {"preset", name},
                {"out", out},
                {"seeds", s.runs.size()},
                {"raw_position_mm", s.raw_position_mm},
                {"raw_orientation_deg", s.raw_orientation_deg},
                {"fused_position_mm", s.fused_position_mm},
                {"fused_orientation_deg", s.fused_orientation_deg}});
  }
}

int fail(const std::string& command, const std::string& message, int code) {
  std::cerr << ordered_json{{"error", message}, {"command", command}, {"exit_code", code}}.dump()
            << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Underwater tracking simulator: marker+IMU ESKF and acoustic/VIO hybrid tracker"};
  app.require_subcommand(1);
  app.footer("Scenario files (YAML):\n" + sim::scenario_key_reference());

  std::string scenario_arg, out, in, kind, mode = "fused", name;
  std::optional<std::uint64_t> seed;
  std::size_t seeds = 20;

  auto* simulate = app.add_subcommand("simulate", "Generate truth and sensor streams");
  simulate->add_option("scenario", scenario_arg, "Preset name or scenario file")->required();
  simulate->add_option("--seed", seed, "Override the scenario seed");
  simulate->add_option("--out", out, "Output run directory")->required();

  auto* track = app.add_subcommand("track", "Run a tracker on a simulated run");
  track->add_option("tracker", kind, "marker or hybrid")
      ->required()
      ->check(CLI::IsMember({"marker", "hybrid"}));
  track->add_option("--in", in, "Run directory written by simulate")->required();
  track->add_option("--mode", mode, "Marker tracking mode")
      ->check(CLI::IsMember({"raw", "fused"}));
  track->add_option("--out", out, "Where to write estimate.csv (default: --in)");

  auto* evaluate = app.add_subcommand("evaluate", "Compare estimate.csv with truth.csv");
  evaluate->add_option("--in", in, "Run directory")->required();

  auto* reproduce = app.add_subcommand("reproduce", "End-to-end preset run with metrics and plots");
  reproduce->add_option("preset", name, "Preset name")
      ->required()
      ->check(CLI::IsMember(sim::preset_names()));
  reproduce->add_option("--out", out, "Output directory")->required();
  reproduce->add_option("--seed", seed, "Override the preset seed");
  reproduce->add_option("--seeds", seeds, "Seeds in the marker-lab study")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("parse", e.what(), 2);
  }

  std::string command = app.get_subcommands().front()->get_name();
  try {
    if (*simulate) run_simulate(scenario_arg, seed, out);
    if (*track) run_track(kind, in, mode, out);
    if (*evaluate) run_evaluate(in);
    if (*reproduce) run_reproduce(name, out, seed, seeds);
  } catch (const std::exception& e) {
    return fail(command, e.what(), 1);
  }
  return 0;
}
