#include "uwar/harness/metrics.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace uwar::harness {

namespace {

constexpr double kRadToDeg = 180.0 / 3.14159265358979323846;
constexpr double kMinOverlap = 1.0;

std::size_t nearest_index(const std::vector<ErrorSample>& series, double t) {
  auto it = std::lower_bound(series.begin(), series.end(), t,
                             [](const ErrorSample& s, double v) { return s.t < v; });
  if (it == series.end()) return series.size() - 1;
  const auto i = static_cast<std::size_t>(it - series.begin());
  if (i > 0 && t - series[i - 1].t < series[i].t - t) return i - 1;
  return i;
}

std::optional<ContinuityStats> continuity_of(const std::vector<ErrorSample>& series,
                                             std::vector<double> fixes) {
  std::sort(fixes.begin(), fixes.end());
  if (series.empty() || fixes.size() < 2) return std::nullopt;
  ContinuityStats c;
  double at_fix = 0.0;
  for (double t : fixes) at_fix += series[nearest_index(series, t)].position_mm;
  double at_mid = 0.0;
  for (std::size_t i = 1; i < fixes.size(); ++i) {
    const double e = series[nearest_index(series, 0.5 * (fixes[i - 1] + fixes[i]))].position_mm;
    at_mid += e;
    c.max_error_at_midpoints_mm = std::max(c.max_error_at_midpoints_mm, e);
  }
  c.intervals = fixes.size() - 1;
  c.mean_error_at_fixes_mm = at_fix / static_cast<double>(fixes.size());
  c.mean_error_at_midpoints_mm = at_mid / static_cast<double>(c.intervals);
  return c;
}

}  // namespace

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("percentile: no values");
  if (!(q >= 0.0 && q <= 100.0)) throw std::invalid_argument("percentile: q outside [0, 100]");
  std::sort(values.begin(), values.end());
  const double pos = q / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

RunMetrics evaluate(const Trajectory& est, const Trajectory& truth,
                    const EvaluationExtras& extras) {
  if (est.size() == 0 || truth.size() == 0) {
    throw std::invalid_argument("evaluate: empty trajectory");
  }
  const double begin = std::max(est.start_time(), truth.start_time());
  const double end = std::min(est.end_time(), truth.end_time());
  if (begin > end) throw std::invalid_argument("evaluate: disjoint time spans");
  if (end - begin < kMinOverlap) {
    throw std::invalid_argument("evaluate: overlapping span shorter than 1 s");
  }

  RunMetrics m;
  std::vector<double> pos_errors;
  const Pose* prev = nullptr;
  for (const Pose& e : est.samples()) {
    if (e.t < begin || e.t > end) continue;
    const Pose g = truth.sample_at(e.t);
    ErrorSample s{e.t, (e.p - g.p).norm() * 1000.0, quat_error(e.q, g.q) * kRadToDeg};
    m.series.push_back(s);
    pos_errors.push_back(s.position_mm);
    m.mean_position_error_mm += s.position_mm;
    m.mean_orientation_error_deg += s.orientation_deg;
    m.max_orientation_error_deg = std::max(m.max_orientation_error_deg, s.orientation_deg);
    if (prev) m.max_step_mm = std::max(m.max_step_mm, (e.p - prev->p).norm() * 1000.0);
    prev = &e;
  }

  const auto n = static_cast<double>(m.series.size());
  m.samples = m.series.size();
  m.mean_position_error_mm /= n;
  m.mean_orientation_error_deg /= n;
  m.p50_position_error_mm = percentile(pos_errors, 50.0);
  m.p90_position_error_mm = percentile(pos_errors, 90.0);
  m.p99_position_error_mm = percentile(pos_errors, 99.0);
  m.max_position_error_mm = *std::max_element(pos_errors.begin(), pos_errors.end());
  m.duration_s = m.series.back().t - m.series.front().t;
  if (m.samples > 1 && m.duration_s > 0.0) {
    m.effective_rate_hz = static_cast<double>(m.samples - 1) / m.duration_s;
  }
  m.updates_applied = extras.updates_applied;
  m.updates_rejected = extras.updates_rejected;
  m.fixes_delivered = extras.fixes_delivered;
  m.fixes_lost = extras.fixes_lost;
  m.continuity = continuity_of(m.series, extras.fix_times);
  return m;
}

std::string metrics_to_json(const RunMetrics& m) {
  nlohmann::ordered_json j;
  j["samples"] = m.samples;
  j["duration_s"] = m.duration_s;
  j["position_error_mm"] = {{"mean", m.mean_position_error_mm},
                            {"p50", m.p50_position_error_mm},
                            {"p90", m.p90_position_error_mm},
                            {"p99", m.p99_position_error_mm},
                            {"max", m.max_position_error_mm}};
  j["orientation_error_deg"] = {{"mean", m.mean_orientation_error_deg},
                                {"max", m.max_orientation_error_deg}};
  j["max_step_mm"] = m.max_step_mm;
  j["effective_rate_hz"] = m.effective_rate_hz;
  j["counts"] = {{"updates_applied", m.updates_applied},
                 {"updates_rejected", m.updates_rejected},
                 {"fixes_delivered", m.fixes_delivered},
                 {"fixes_lost", m.fixes_lost}};
  if (m.continuity) {
    j["continuity"] = {{"intervals", m.continuity->intervals},
                       {"mean_error_at_fixes_mm", m.continuity->mean_error_at_fixes_mm},
                       {"mean_error_at_midpoints_mm", m.continuity->mean_error_at_midpoints_mm},
                       {"max_error_at_midpoints_mm", m.continuity->max_error_at_midpoints_mm}};
  } else {
    j["continuity"] = nullptr;
  }
  auto series = nlohmann::ordered_json::array();
  for (const auto& s : m.series) series.push_back({s.t, s.position_mm, s.orientation_deg});
  j["series"] = {{"columns", {"t", "position_mm", "orientation_deg"}}, {"rows", series}};
  return j.dump(2) + "\n";
}

RunMetrics metrics_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    RunMetrics m;
    m.samples = j.at("samples").get<std::size_t>();
    m.duration_s = j.at("duration_s").get<double>();
    const auto& p = j.at("position_error_mm");
    m.mean_position_error_mm = p.at("mean").get<double>();
    m.p50_position_error_mm = p.at("p50").get<double>();
    m.p90_position_error_mm = p.at("p90").get<double>();
    m.p99_position_error_mm = p.at("p99").get<double>();
    m.max_position_error_mm = p.at("max").get<double>();
    const auto& o = j.at("orientation_error_deg");
    m.mean_orientation_error_deg = o.at("mean").get<double>();
    m.max_orientation_error_deg = o.at("max").get<double>();
    m.max_step_mm = j.at("max_step_mm").get<double>();
    m.effective_rate_hz = j.at("effective_rate_hz").get<double>();
    const auto& c = j.at("counts");
    m.updates_applied = c.at("updates_applied").get<std::size_t>();
    m.updates_rejected = c.at("updates_rejected").get<std::size_t>();
    m.fixes_delivered = c.at("fixes_delivered").get<std::size_t>();
    m.fixes_lost = c.at("fixes_lost").get<std::size_t>();
    if (const auto& k = j.at("continuity"); !k.is_null()) {
      ContinuityStats cs;
      cs.intervals = k.at("intervals").get<std::size_t>();
      cs.mean_error_at_fixes_mm = k.at("mean_error_at_fixes_mm").get<double>();
      cs.mean_error_at_midpoints_mm = k.at("mean_error_at_midpoints_mm").get<double>();
      cs.max_error_at_midpoints_mm = k.at("max_error_at_midpoints_mm").get<double>();
      m.continuity = cs;
    }
    for (const auto& row : j.at("series").at("rows")) {
      m.series.push_back({row.at(0).get<double>(), row.at(1).get<double>(),
                          row.at(2).get<double>()});
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("metrics JSON: ") + e.what());
  }
}

}  // namespace uwar::harness
