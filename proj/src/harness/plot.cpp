#include "uwar/harness/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

namespace uwar::harness {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 800.0;
constexpr double kMargin = 60.0;

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s(buf);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

struct Box {
  double x0 = std::numeric_limits<double>::infinity();
  double y0 = std::numeric_limits<double>::infinity();
  double x1 = -std::numeric_limits<double>::infinity();
  double y1 = -std::numeric_limits<double>::infinity();

  void add(double x, double y) {
    x0 = std::min(x0, x);
    y0 = std::min(y0, y);
    x1 = std::max(x1, x);
    y1 = std::max(y1, y);
  }
  void pad_degenerate() {
    if (x1 - x0 <= 0.0) { x0 -= 1.0; x1 += 1.0; }
    if (y1 - y0 <= 0.0) { y0 -= 1.0; y1 += 1.0; }
  }
};

std::string header(double w, double h) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(w) + "\" height=\"" + num(h) +
         "\" viewBox=\"0 0 " + num(w) + " " + num(h) + "\">\n"
         "<rect x=\"0\" y=\"0\" width=\"" + num(w) + "\" height=\"" + num(h) +
         "\" fill=\"white\"/>\n";
}

std::string text_at(double x, double y, const std::string& s, const char* anchor = "start",
                     int size = 14) {
  return "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-family=\"sans-serif\" font-size=\"" +
         std::to_string(size) + "\" text-anchor=\"" + anchor + "\">" + escape(s) + "</text>\n";
}

std::string points_attr(const std::vector<Vec2>& pts) {
  std::string out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) out.push_back(' ');
    out += num(pts[i].x()) + "," + num(pts[i].y());
  }
  return out;
}

std::vector<Vec2> xy_of(const Trajectory& traj) {
  std::vector<Vec2> out;
  out.reserve(traj.size());
  for (const Pose& p : traj.samples()) out.emplace_back(p.p.x(), p.p.y());
  return out;
}

std::string polyline(const std::vector<Vec2>& pts, const std::string& stroke, double width,
                     const std::string& extra = "") {
  return "<polyline fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" + num(width) +
         "\" vector-effect=\"non-scaling-stroke\"" + extra + " points=\"" + points_attr(pts) +
         "\"/>\n";
}

}  // namespace

std::string viridis(double s) {
  static constexpr std::array<std::array<double, 3>, 5> kStops{{{68, 1, 84},
                                                               {59, 82, 139},
                                                               {33, 145, 140},
                                                               {94, 201, 98},
                                                               {253, 231, 37}}};
  s = std::clamp(std::isfinite(s) ? s : 0.0, 0.0, 1.0);
  const double pos = s * static_cast<double>(kStops.size() - 1);
  const auto i = std::min(static_cast<std::size_t>(pos), kStops.size() - 2);
  const double f = pos - static_cast<double>(i);
  char buf[8];
  int rgb[3];
  for (int c = 0; c < 3; ++c) {
    rgb[c] = static_cast<int>(std::lround(kStops[i][c] + f * (kStops[i + 1][c] - kStops[i][c])));
  }
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
  return buf;
}

std::string plot_trajectory(const Trajectory& est, const Trajectory& truth,
                            const TrajectoryPlotExtras& extras) {
  if (est.size() == 0 || truth.size() == 0) {
    throw std::invalid_argument("plot_trajectory: empty trajectory");
  }
  std::vector<sim::AcousticFix> fixes;
  for (const auto& f : extras.fixes) {
    if (f.delivered) fixes.push_back(f);
  }

  const auto truth_xy = xy_of(truth);
  const auto est_xy = xy_of(est);
  Box box;
  for (const auto& p : truth_xy) box.add(p.x(), p.y());
  for (const auto& p : est_xy) box.add(p.x(), p.y());
  for (const auto& p : extras.outline) box.add(p.x(), p.y());
  for (const auto& f : fixes) box.add(f.xy.x(), f.xy.y());
  box.pad_degenerate();

  const double s = std::min((kWidth - 2 * kMargin) / (box.x1 - box.x0),
                            (kHeight - 2 * kMargin) / (box.y1 - box.y0));
  const double tx = 0.5 * kWidth - s * 0.5 * (box.x0 + box.x1);
  const double ty = 0.5 * kHeight + s * 0.5 * (box.y0 + box.y1);

  std::string svg = header(kWidth, kHeight);
  if (!extras.title.empty()) svg += text_at(kWidth / 2, 28, extras.title, "middle", 18);
  svg += "<g id=\"plot\" transform=\"matrix(" + num(s) + " 0 0 " + num(-s) + " " + num(tx) + " " +
         num(ty) + ")\">\n";

  if (!extras.outline.empty()) {
    svg += "<g id=\"outline\">\n<polygon fill=\"none\" stroke=\"#888888\" stroke-width=\"1\" "
           "stroke-dasharray=\"4 4\" vector-effect=\"non-scaling-stroke\" points=\"" +
           points_attr(extras.outline) + "\"/>\n</g>\n";
  }
  svg += "<g id=\"truth\">\n" +
         polyline(truth_xy, "#000000", 1.5, " stroke-dasharray=\"6 4\"") + "</g>\n";
  svg += "<g id=\"estimate\">\n" + polyline(est_xy, "#d62728", 1.0) + "</g>\n";

  if (!fixes.empty()) {
    const double t0 = fixes.front().t;
    const double span = std::max(fixes.back().t - t0, 1e-9);
    std::vector<Vec2> fix_xy;
    for (const auto& f : fixes) fix_xy.push_back(f.xy);
    svg += "<g id=\"fix-connectors\">\n" + polyline(fix_xy, "#aaaaaa", 0.75) + "</g>\n";
    svg += "<g id=\"fixes\">\n";
    const double r = 4.0 / s;
    for (const auto& f : fixes) {
      svg += "<circle cx=\"" + num(f.xy.x()) + "\" cy=\"" + num(f.xy.y()) + "\" r=\"" + num(r) +
             "\" fill=\"" + viridis((f.t - t0) / span) + "\" data-t=\"" + num(f.t) + "\"/>\n";
    }
    svg += "</g>\n";
  }
  svg += "</g>\n";

  double ly = kHeight - 36;
  svg += text_at(kMargin, ly, "dashed black: truth; red: estimate", "start", 12);
  if (!fixes.empty()) {
    ly += 16;
    svg += text_at(kMargin, ly,
                   "fix colour: viridis over time, purple at t=" + num(fixes.front().t) +
                       " s, yellow at t=" + num(fixes.back().t) + " s",
                   "start", 12);
  }
  svg += "</svg>\n";
  return svg;
}

std::string plot_timeseries(const std::vector<Series>& series, const std::string& title,
                            const std::string& y_label) {
  Box box;
  for (const auto& s : series) {
    for (const auto& p : s.points) box.add(p.x(), p.y());
  }
  if (!std::isfinite(box.x0)) throw std::invalid_argument("plot_timeseries: no points");
  box.pad_degenerate();

  const double w = 1000.0;
  const double h = 500.0;
  const double sx = (w - 2 * kMargin) / (box.x1 - box.x0);
  const double sy = (h - 2 * kMargin) / (box.y1 - box.y0);
  const double tx = kMargin - sx * box.x0;
  const double ty = h - kMargin + sy * box.y0;

  static const std::array<const char*, 6> kColours{"#1f77b4", "#d62728", "#2ca02c",
                                                   "#ff7f0e", "#9467bd", "#8c564b"};
  std::string svg = header(w, h);
  if (!title.empty()) svg += text_at(w / 2, 28, title, "middle", 18);
  svg += "<rect x=\"" + num(kMargin) + "\" y=\"" + num(kMargin) + "\" width=\"" +
         num(w - 2 * kMargin) + "\" height=\"" + num(h - 2 * kMargin) +
         "\" fill=\"none\" stroke=\"#cccccc\"/>\n";
  svg += text_at(kMargin, h - kMargin + 20, num(box.x0), "start", 12);
  svg += text_at(w - kMargin, h - kMargin + 20, num(box.x1), "end", 12);
  svg += text_at(w / 2, h - 16, "t [s]", "middle", 12);
  svg += text_at(kMargin - 6, h - kMargin, num(box.y0), "end", 12);
  svg += text_at(kMargin - 6, kMargin + 4, num(box.y1), "end", 12);
  svg += text_at(12, kMargin - 16, y_label, "start", 12);

  svg += "<g id=\"plot\" transform=\"matrix(" + num(sx) + " 0 0 " + num(-sy) + " " + num(tx) +
         " " + num(ty) + ")\">\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const std::string colour = kColours[i % kColours.size()];
    const bool points = s.style == SeriesStyle::Points;
    svg += "<g class=\"series\" data-label=\"" + escape(s.label) + "\" data-style=\"" +
           (points ? "points" : "line") + "\">\n";
    if (points) {
      for (const auto& p : s.points) {
        svg += "<ellipse cx=\"" + num(p.x()) + "\" cy=\"" + num(p.y()) + "\" rx=\"" +
               num(4.0 / sx) + "\" ry=\"" + num(4.0 / sy) + "\" fill=\"" + colour + "\"/>\n";
      }
    } else {
      svg += polyline(s.points, colour, 1.0);
    }
    svg += "</g>\n";
  }
  svg += "</g>\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    svg += "<text x=\"" + num(w - kMargin - 200) + "\" y=\"" + num(kMargin + 18 + 16.0 * i) +
           "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" +
           kColours[i % kColours.size()] + "\">" + escape(series[i].label) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

std::vector<sim::TimeInterval> segment_windows(const Trajectory& truth, const Vec2& from,
                                               const Vec2& to, double tolerance) {
  const Vec2 d = to - from;
  const double len2 = d.squaredNorm();
  if (len2 <= 0.0) throw std::invalid_argument("segment_windows: degenerate segment");
  std::vector<sim::TimeInterval> out;
  bool open = false;
  for (const Pose& p : truth.samples()) {
    const Vec2 r = p.p.head<2>() - from;
    const double u = r.dot(d) / len2;
    const bool on = u >= 0.0 && u <= 1.0 && (r - u * d).norm() <= tolerance;
    if (on && !open) out.push_back({p.t, p.t});
    if (on) out.back().end = p.t;
    open = on;
  }
  return out;
}

}  // namespace uwar::harness
