#pragma once

#include "uwar/core.hpp"
#include "uwar/sim/sensors.hpp"

#include <string>
#include <vector>

namespace uwar::harness {

struct TrajectoryPlotExtras {
  std::vector<sim::AcousticFix> fixes;  // only delivered fixes are drawn
  std::vector<Vec2> outline;            // closed polygon, e.g. the roped course
  std::string title;
};

/// Top-down SVG. Layers are <g> elements with ids "outline", "truth",
/// "estimate", "fixes" and "fix-connectors"; the outline, fix and connector
/// layers appear only when the extras supply them. Coordinates inside the
/// plot group are world metres (a transform maps them to the page).
std::string plot_trajectory(const Trajectory& est, const Trajectory& truth,
                            const TrajectoryPlotExtras& extras = {});

enum class SeriesStyle { Line, Points };

struct Series {
  std::string label;
  std::vector<Vec2> points;  // (t, value)
  SeriesStyle style = SeriesStyle::Line;
};

/// Time on x, value on y; one <g class="series"> per series, with points in
/// data coordinates.
std::string plot_timeseries(const std::vector<Series>& series, const std::string& title,
                            const std::string& y_label);

/// Viridis colour for s in [0, 1] as "#rrggbb".
std::string viridis(double s);

/// Time windows during which the truth runs along the segment from `from` to
/// `to` (within `tolerance` of the segment, excluding the rounded corners).
std::vector<sim::TimeInterval> segment_windows(const Trajectory& truth, const Vec2& from,
                                               const Vec2& to, double tolerance);

}  // namespace uwar::harness
