#pragma once

#include "uwar/harness/metrics.hpp"
#include "uwar/harness/plot.hpp"
#include "uwar/harness/run_log.hpp"
#include "uwar/marker_tracker.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace uwar::harness {

/// Truth and all sensor streams for the scenario and its seed.
SimulatedRun simulate(const sim::Scenario& scenario);

/// Marker tracking with the scenario's grid and tracker tuning.
TrackedRun track_marker(const SimulatedRun& run, TrackingMode mode);
TrackedRun track_hybrid(const SimulatedRun& run);

RunMetrics evaluate_run(const SimulatedRun& sim, const TrackedRun& tracked);

/// Series for the distance-time plot of y along segment C->D on one lap:
/// truth y, hybrid estimate y and delivered fix y.
std::vector<Series> y_of_cd_series(const SimulatedRun& sim, const TrackedRun& tracked,
                                   std::size_t lap);

struct MarkerLabSeed {
  std::uint64_t seed = 0;
  RunMetrics raw;
  RunMetrics fused;
};

struct MarkerLabStudy {
  std::vector<MarkerLabSeed> runs;
  double raw_position_mm = 0.0;     // means over seeds
  double raw_orientation_deg = 0.0;
  double fused_position_mm = 0.0;
  double fused_orientation_deg = 0.0;
};

/// Raw and fused marker tracking over `count` consecutive seeds.
MarkerLabStudy marker_lab_study(const sim::Scenario& base, std::uint64_t first_seed,
                                std::size_t count);
std::string study_json(const MarkerLabStudy& study);

/// Full run directory plus trajectory.svg and y_cd.svg.
RunMetrics reproduce_baiae(const sim::Scenario& scenario, const std::string& out_dir);

/// raw/ and fused/ run directories for the scenario seed, plus study.json over
/// `seeds` seeds starting at the scenario seed.
MarkerLabStudy reproduce_marker_lab(const sim::Scenario& scenario, const std::string& out_dir,
                                    std::size_t seeds);

}  // namespace uwar::harness
