#include "uwar/hybrid_tracker.hpp"

#include <stdexcept>
#include <string>

namespace uwar {

std::string_view to_string(EstimateSource source) {
  return source == EstimateSource::Acoustic ? "acoustic" : "vio-fill";
}

EstimateSource parse_estimate_source(std::string_view name) {
  if (name == "acoustic") return EstimateSource::Acoustic;
  if (name == "vio-fill") return EstimateSource::VioFill;
  throw std::invalid_argument("unknown estimate source '" + std::string(name) + "'");
}

HybridStepResult hybrid_step(const HybridState& state, const Pose& vio,
                             const sim::DepthSample& depth,
                             const std::optional<sim::AcousticFix>& fix) {
  if (depth.t != vio.t) throw std::invalid_argument("hybrid_step: depth and VIO times differ");
  if (state.anchor_xy && vio.t < state.anchor_t - kHybridTimeTolerance) {
    throw std::invalid_argument("hybrid_step: VIO sample precedes the anchor");
  }

  HybridStepResult out;
  out.state = state;
  const Vec2 vio_xy = vio.p.head<2>();
  if (fix && fix->delivered) {
    if (fix->t > vio.t + kHybridTimeTolerance) {
      throw std::invalid_argument("hybrid_step: fix is later than the VIO sample");
    }
    out.state.anchor_xy = fix->xy;
    out.state.anchor_vio_xy = vio_xy;
    out.state.anchor_t = fix->t;
    out.source = EstimateSource::Acoustic;
  } else if (!state.anchor_xy) {
    return out;  // not localized yet
  }

  Pose est;
  est.t = vio.t;
  if (out.source == EstimateSource::Acoustic) {
    est.p.head<2>() = fix->xy;
  } else {
    est.p.head<2>() = *out.state.anchor_xy + (vio_xy - out.state.anchor_vio_xy);
  }
  est.p.z() = -depth.z_depth;
  est.q = vio.q;
  out.state.latest = est;
  out.estimate = est;
  return out;
}

HybridTrackingResult run_hybrid_tracking(const sim::SensorStreams& streams) {
  if (streams.vio.empty()) throw std::invalid_argument("run_hybrid_tracking: empty VIO stream");

  HybridTrackingResult result;
  HybridState state;
  std::size_t d = 0;
  std::size_t f = 0;
  const auto& fixes = streams.acoustic;
  for (const Pose& vio : streams.vio) {
    while (d < streams.depth.size() && streams.depth[d].t < vio.t) ++d;
    if (d == streams.depth.size() || streams.depth[d].t != vio.t) {
      throw std::invalid_argument("run_hybrid_tracking: no depth sample at t=" +
                                  format_fixed(vio.t));
    }

    std::optional<sim::AcousticFix> fix;
    for (; f < fixes.size() && fixes[f].t <= vio.t + kHybridTimeTolerance; ++f) {
      if (fixes[f].delivered) {
        fix = fixes[f];
      } else {
        ++result.fixes_lost;
      }
    }

    HybridStepResult step = hybrid_step(state, vio, streams.depth[d], fix);
    state = std::move(step.state);
    if (!step.estimate) continue;
    if (step.source == EstimateSource::Acoustic) ++result.fixes_applied;
    result.trajectory.push_back(*step.estimate);
    result.sources.push_back(step.source);
  }
  return result;
}

}  // namespace uwar
