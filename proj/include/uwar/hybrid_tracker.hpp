#pragma once

#include "uwar/core.hpp"
#include "uwar/sim/sensors.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace uwar {

/// Tolerance used when matching acoustic fix times to VIO sample times.
inline constexpr double kHybridTimeTolerance = 1e-9;

struct HybridState {
  std::optional<Vec2> anchor_xy;    // last delivered acoustic fix
  Vec2 anchor_vio_xy = Vec2::Zero();
  double anchor_t = 0.0;
  std::optional<Pose> latest;
};

enum class EstimateSource { Acoustic, VioFill };

std::string_view to_string(EstimateSource source);
/// Throws std::invalid_argument for unknown names.
EstimateSource parse_estimate_source(std::string_view name);

struct HybridStepResult {
  HybridState state;
  std::optional<Pose> estimate;  // empty while not yet localized
  EstimateSource source = EstimateSource::VioFill;
};

/// One reset-anchor step. A delivered fix re-anchors the VIO and becomes the
/// xy estimate; otherwise xy = anchor_xy + (vio.xy - anchor_vio_xy). Depth
/// gives z, VIO gives orientation, vio.t is the output time.
///
/// Throws std::invalid_argument when depth.t != vio.t, the fix is later than
/// vio.t, or vio.t precedes the anchor.
HybridStepResult hybrid_step(const HybridState& state, const Pose& vio,
                             const sim::DepthSample& depth,
                             const std::optional<sim::AcousticFix>& fix);

struct HybridTrackingResult {
  Trajectory trajectory;
  std::vector<EstimateSource> sources;  // one per trajectory sample
  std::size_t fixes_applied = 0;
  std::size_t fixes_lost = 0;
};

/// Folds hybrid_step over the time-merged streams. Each delivered fix is
/// applied at the first VIO sample not earlier than its arrival time; lost
/// fixes are skipped. Output starts at the first delivered fix (empty if none).
///
/// Throws std::invalid_argument for an empty VIO stream or a VIO sample without
/// a matching depth sample.
HybridTrackingResult run_hybrid_tracking(const sim::SensorStreams& streams);

}  // namespace uwar
