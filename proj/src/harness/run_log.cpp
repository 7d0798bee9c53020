#include "uwar/harness/run_log.hpp"

#include "uwar/sim/scenario_io.hpp"
#include "uwar/sim/streams_io.hpp"

#include <json.hpp>

#include <filesystem>
#include <sstream>
#include <stdexcept>

namespace uwar::harness {

namespace fs = std::filesystem;

namespace {

std::string path_in(const std::string& dir, const char* name) {
  return (fs::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw std::runtime_error("cannot create directory '" + dir + "'");
  }
}

}  // namespace

EvaluationExtras extras_of(const TrackedRun& run) {
  EvaluationExtras x;
  x.updates_applied = run.updates_applied;
  x.updates_rejected = run.updates_rejected;
  x.fixes_delivered = run.fixes_applied;
  x.fixes_lost = run.fixes_lost;
  const auto& samples = run.estimate.samples();
  for (std::size_t i = 0; i < run.sources.size() && i < samples.size(); ++i) {
    if (run.sources[i] == EstimateSource::Acoustic) x.fix_times.push_back(samples[i].t);
  }
  return x;
}

std::string estimate_csv(const Trajectory& est, const std::vector<EstimateSource>& sources) {
  if (!sources.empty() && sources.size() != est.size()) {
    throw std::invalid_argument("estimate_csv: one source per sample required");
  }
  std::string out = kTrajectoryCsvHeader;
  if (!sources.empty()) out += ",source";
  out.push_back('\n');
  const auto& samples = est.samples();
  for (std::size_t i = 0; i < samples.size(); ++i) {
    append_pose_fields(out, samples[i]);
    if (!sources.empty()) {
      out.push_back(',');
      out += to_string(sources[i]);
    }
    out.push_back('\n');
  }
  return out;
}

std::vector<EstimateSource> parse_estimate_sources(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::getline(is, line);
  const auto header = split_csv_line(line);
  if (header.size() != 9 || header.back() != "source") return {};
  std::vector<EstimateSource> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 9) throw std::invalid_argument("estimate CSV: wrong column count");
    out.push_back(parse_estimate_source(f[8]));
  }
  return out;
}

std::string tracker_json(const TrackedRun& run) {
  nlohmann::ordered_json j;
  j["tracker"] = run.tracker;
  j["mode"] = run.mode;
  j["samples"] = run.estimate.size();
  j["updates_applied"] = run.updates_applied;
  j["updates_rejected"] = run.updates_rejected;
  j["fixes_applied"] = run.fixes_applied;
  j["fixes_lost"] = run.fixes_lost;
  return j.dump(2) + "\n";
}

void write_simulation(const std::string& dir, const SimulatedRun& run) {
  ensure_dir(dir);
  sim::write_text_file(path_in(dir, "scenario.yaml"), sim::emit_scenario(run.scenario));
  std::ostringstream truth;
  write_trajectory_csv(truth, run.truth);
  sim::write_text_file(path_in(dir, "truth.csv"), truth.str());
  sim::write_streams(dir, run.streams);
}

SimulatedRun read_simulation(const std::string& dir) {
  SimulatedRun run;
  run.scenario = sim::load_scenario_file(path_in(dir, "scenario.yaml"));
  run.truth = read_trajectory_csv(path_in(dir, "truth.csv"));
  run.streams = sim::read_streams(dir);
  return run;
}

void write_tracking(const std::string& dir, const TrackedRun& run) {
  ensure_dir(dir);
  sim::write_text_file(path_in(dir, "estimate.csv"), estimate_csv(run.estimate, run.sources));
  sim::write_text_file(path_in(dir, "tracker.json"), tracker_json(run));
}

TrackedRun read_tracking(const std::string& dir) {
  TrackedRun run;
  const std::string text = sim::read_text_file(path_in(dir, "estimate.csv"));
  std::istringstream is(text);
  run.estimate = read_trajectory_csv(is);
  run.sources = parse_estimate_sources(text);
  try {
    const auto j = nlohmann::json::parse(sim::read_text_file(path_in(dir, "tracker.json")));
    run.tracker = j.at("tracker").get<std::string>();
    run.mode = j.at("mode").get<std::string>();
    run.updates_applied = j.at("updates_applied").get<std::size_t>();
    run.updates_rejected = j.at("updates_rejected").get<std::size_t>();
    run.fixes_applied = j.at("fixes_applied").get<std::size_t>();
    run.fixes_lost = j.at("fixes_lost").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("tracker.json: ") + e.what());
  }
  return run;
}

void write_metrics(const std::string& dir, const RunMetrics& metrics) {
  ensure_dir(dir);
  sim::write_text_file(path_in(dir, "metrics.json"), metrics_to_json(metrics));
}

void write_run_log(const std::string& dir, const SimulatedRun& sim, const TrackedRun& tracked,
                   const RunMetrics& metrics) {
  write_simulation(dir, sim);
  write_tracking(dir, tracked);
  write_metrics(dir, metrics);
}

}  // namespace uwar::harness
