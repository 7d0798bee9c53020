#pragma once

#include "uwar/core.hpp"
#include "uwar/harness/metrics.hpp"
#include "uwar/hybrid_tracker.hpp"
#include "uwar/sim/scenario.hpp"
#include "uwar/sim/sensors.hpp"

#include <optional>
#include <string>
#include <vector>

namespace uwar::harness {

/// Scenario, truth and sensor streams of one simulated run.
struct SimulatedRun {
  sim::Scenario scenario;
  Trajectory truth;
  sim::SensorStreams streams;
};

/// Tracker output plus the bookkeeping evaluate() folds into the metrics.
struct TrackedRun {
  std::string tracker;  // "marker" or "hybrid"
  std::string mode;     // "raw", "fused" or "reset-anchor"
  Trajectory estimate;
  std::vector<EstimateSource> sources;  // hybrid only, one per estimate sample
  std::size_t updates_applied = 0;
  std::size_t updates_rejected = 0;
  std::size_t fixes_applied = 0;
  std::size_t fixes_lost = 0;
};

EvaluationExtras extras_of(const TrackedRun& run);

/// Trajectory CSV; with sources an extra `source` column is appended.
std::string estimate_csv(const Trajectory& est, const std::vector<EstimateSource>& sources);
/// Reads the `source` column; empty when the column is absent.
std::vector<EstimateSource> parse_estimate_sources(const std::string& text);

std::string tracker_json(const TrackedRun& run);

/// Writes scenario.yaml, truth.csv and the stream CSVs. Creates `dir`.
void write_simulation(const std::string& dir, const SimulatedRun& run);
SimulatedRun read_simulation(const std::string& dir);

/// Writes estimate.csv and tracker.json.
void write_tracking(const std::string& dir, const TrackedRun& run);
TrackedRun read_tracking(const std::string& dir);

void write_metrics(const std::string& dir, const RunMetrics& metrics);

/// One directory per run: everything above plus metrics.json. Output bytes
/// depend only on the inputs.
void write_run_log(const std::string& dir, const SimulatedRun& sim, const TrackedRun& tracked,
                   const RunMetrics& metrics);

}  // namespace uwar::harness
