#pragma once

#include "uwar/core.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace uwar::harness {

struct ErrorSample {
  double t = 0.0;
  double position_mm = 0.0;
  double orientation_deg = 0.0;
  bool operator==(const ErrorSample&) const = default;
};

/// Error at delivered-fix instants against error half-way between fixes.
struct ContinuityStats {
  std::size_t intervals = 0;
  double mean_error_at_fixes_mm = 0.0;
  double mean_error_at_midpoints_mm = 0.0;
  double max_error_at_midpoints_mm = 0.0;
  bool operator==(const ContinuityStats&) const = default;
};

/// Position statistics are in millimetres, orientation in degrees.
struct RunMetrics {
  std::size_t samples = 0;
  double duration_s = 0.0;
  double mean_position_error_mm = 0.0;
  double p50_position_error_mm = 0.0;
  double p90_position_error_mm = 0.0;
  double p99_position_error_mm = 0.0;
  double max_position_error_mm = 0.0;
  double mean_orientation_error_deg = 0.0;
  double max_orientation_error_deg = 0.0;
  double max_step_mm = 0.0;  // largest displacement between consecutive estimates
  double effective_rate_hz = 0.0;
  std::size_t updates_applied = 0;
  std::size_t updates_rejected = 0;
  std::size_t fixes_delivered = 0;
  std::size_t fixes_lost = 0;
  std::optional<ContinuityStats> continuity;
  std::vector<ErrorSample> series;

  bool operator==(const RunMetrics&) const = default;
};

/// Optional run context folded into the metrics.
struct EvaluationExtras {
  std::vector<double> fix_times;  // estimate times where a fix was applied
  std::size_t updates_applied = 0;
  std::size_t updates_rejected = 0;
  std::size_t fixes_delivered = 0;
  std::size_t fixes_lost = 0;
};

/// Compares every estimate sample inside the overlap of the two spans against
/// the interpolated truth. Throws std::invalid_argument when the spans are
/// disjoint or overlap by less than 1 s.
RunMetrics evaluate(const Trajectory& est, const Trajectory& truth,
                    const EvaluationExtras& extras = {});

/// Linear-interpolated percentile (q in [0, 100]) of unsorted values.
double percentile(std::vector<double> values, double q);

std::string metrics_to_json(const RunMetrics& metrics);
/// Throws std::invalid_argument on malformed documents.
RunMetrics metrics_from_json(const std::string& text);

}  // namespace uwar::harness
