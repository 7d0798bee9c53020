#include "uwar/marker_tracker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace uwar {

MarkerMap MarkerMap::from_grid(const sim::MarkerGrid& grid) {
  MarkerMap map;
  for (const auto& m : sim::marker_layout(grid)) map.add(m.id, m.pose);
  return map;
}

void MarkerMap::add(int id, const Pose& world_pose) {
  if (!poses_.emplace(id, world_pose).second) {
    throw std::invalid_argument("marker map: duplicate id " + std::to_string(id));
  }
}

const Pose& MarkerMap::at(int id) const {
  auto it = poses_.find(id);
  if (it == poses_.end()) throw std::invalid_argument("unknown marker id " + std::to_string(id));
  return it->second;
}

MarkerMeasurementModel measurement_model(const sim::Scenario& scenario) {
  MarkerMeasurementModel m;
  m.sigma_pos = scenario.tracker.sigma_pos;
  m.sigma_rot = scenario.tracker.sigma_rot;
  m.visibility_range = scenario.sensors.marker.visibility_range;
  return m;
}

PoseMeasurement observation_to_pose(const sim::MarkerObservation& obs, const MarkerMap& map,
                                    const MarkerMeasurementModel& model) {
  if (!obs.detected) throw std::invalid_argument("observation_to_pose: marker not detected");
  const Pose& marker = map.at(obs.marker_id);

  PoseMeasurement z;
  z.t = obs.t;
  const Quaternion rel_q = obs.rel_q.normalized();
  z.q = canonical((marker.q * rel_q.conjugate()).normalized());
  z.p = marker.p - z.q.toRotationMatrix() * obs.rel_p;

  const double inflation = 1.0 + obs.rel_p.norm() / model.visibility_range;
  const double sp = std::max(model.sigma_pos * inflation, model.min_sigma);
  const double sr = std::max(model.sigma_rot * inflation, model.min_sigma);
  Vector6 diag;
  diag << sp * sp, sp * sp, sp * sp, sr * sr, sr * sr, sr * sr;
  z.R = diag.asDiagonal();
  return z;
}

FusedMarkerTracker::FusedMarkerTracker(MarkerMap map, FilterParams params,
                                       MarkerMeasurementModel model)
    : map_(std::move(map)), params_(std::move(params)), model_(model) {
  validate(params_);
}

void FusedMarkerTracker::on_observation(const sim::MarkerObservation& obs) {
  if (!obs.detected) return;
  const PoseMeasurement z = observation_to_pose(obs, map_, model_);
  if (!state_) {
    state_ = initialize_from_pose(z, params_);
    return;
  }
  apply(z);
}

void FusedMarkerTracker::on_frame(std::span<const sim::MarkerObservation> frame) {
  std::vector<PoseMeasurement> zs;
  for (const auto& obs : frame) {
    if (obs.detected) zs.push_back(observation_to_pose(obs, map_, model_));
  }
  if (zs.empty()) return;
  std::optional<std::size_t> seed;
  if (!state_) {
    // medoid of the per-marker positions
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < zs.size(); ++i) {
      double sum = 0.0;
      for (const auto& other : zs) sum += (zs[i].p - other.p).norm();
      if (sum < best) {
        best = sum;
        seed = i;
      }
    }
    state_ = initialize_from_pose(zs[*seed], params_);
  }
  for (std::size_t i = 0; i < zs.size(); ++i) {
    if (i != seed) apply(zs[i]);
  }
}

void FusedMarkerTracker::apply(const PoseMeasurement& z) {
  const UpdateResult r = update_pose(*state_, z, params_);
  if (r.accepted) {
    state_ = r.state;
    ++applied_;
  } else {
    ++rejected_;
  }
}

bool FusedMarkerTracker::on_imu(const ImuSample& imu) {
  if (!state_) return false;
  if (imu.t > state_->t) state_ = predict(*state_, imu, params_);
  return true;
}

Pose FusedMarkerTracker::pose() const {
  if (!state_) throw std::logic_error("tracker not initialised");
  return Pose{state_->t, state_->x.p, state_->x.q};
}

namespace {

template <typename T>
void require_ordered(const std::vector<T>& v, const char* what) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i].t < v[i - 1].t) {
      throw std::invalid_argument(std::string("run_marker_tracking: unordered ") + what +
                                  " timestamps");
    }
  }
}

Quaternion mean_quaternion(const std::vector<Quaternion>& qs) {
  Eigen::Vector4d acc = Eigen::Vector4d::Zero();
  const Eigen::Vector4d ref = qs.front().coeffs();
  for (const auto& q : qs) {
    const Eigen::Vector4d c = q.coeffs();
    acc += c.dot(ref) < 0.0 ? Eigen::Vector4d(-c) : c;
  }
  Quaternion mean;
  mean.coeffs() = acc.normalized();
  return canonical(mean);
}

MarkerTrackingResult run_raw(const sim::SensorStreams& streams, const MarkerMap& map,
                             const MarkerMeasurementModel& model) {
  MarkerTrackingResult result;
  std::optional<Pose> last;
  const auto& obs = streams.markers;
  for (std::size_t i = 0; i < obs.size();) {
    const double t = obs[i].t;
    Vec3 sum = Vec3::Zero();
    std::vector<Quaternion> qs;
    for (; i < obs.size() && obs[i].t == t; ++i) {
      if (!obs[i].detected) continue;
      const PoseMeasurement z = observation_to_pose(obs[i], map, model);
      sum += z.p;
      qs.push_back(z.q);
    }
    if (!qs.empty()) {
      last = Pose{t, sum / static_cast<double>(qs.size()), mean_quaternion(qs)};
    } else if (last) {
      ++result.frames_held;
    }
    if (last) result.trajectory.push_back(Pose{t, last->p, last->q});
  }
  return result;
}

MarkerTrackingResult run_fused(const sim::SensorStreams& streams, const MarkerMap& map,
                               const FilterParams& params, const MarkerMeasurementModel& model) {
  std::vector<sim::MarkerObservation> obs = streams.markers;
  std::stable_sort(obs.begin(), obs.end(), [](const auto& a, const auto& b) {
    return a.t < b.t || (a.t == b.t && a.marker_id < b.marker_id);
  });

  FusedMarkerTracker tracker(map, params, model);
  MarkerTrackingResult result;
  result.trajectory.reserve(streams.imu.size());
  std::size_t j = 0;
  auto next_frame = [&] {
    std::size_t end = j;
    while (end < obs.size() && obs[end].t == obs[j].t) ++end;
    tracker.on_frame(std::span(obs).subspan(j, end - j));
    j = end;
  };
  for (const ImuSample& imu : streams.imu) {
    while (j < obs.size() && obs[j].t < imu.t) next_frame();
    if (!tracker.on_imu(imu)) continue;
    while (j < obs.size() && obs[j].t <= imu.t) next_frame();
    if (tracker.state().t == imu.t) result.trajectory.push_back(tracker.pose());
  }
  result.updates_applied = tracker.updates_applied();
  result.updates_rejected = tracker.updates_rejected();
  return result;
}

}  // namespace

MarkerTrackingResult run_marker_tracking(const sim::SensorStreams& streams, const MarkerMap& map,
                                         const FilterParams& params,
                                         const MarkerMeasurementModel& model, TrackingMode mode) {
  if (streams.markers.empty()) throw std::invalid_argument("run_marker_tracking: no marker stream");
  if (mode == TrackingMode::Fused && streams.imu.empty()) {
    throw std::invalid_argument("run_marker_tracking: no IMU stream");
  }
  require_ordered(streams.markers, "marker");
  require_ordered(streams.imu, "IMU");
  return mode == TrackingMode::Raw ? run_raw(streams, map, model)
                                   : run_fused(streams, map, params, model);
}

double orientation_error_displacement(double distance, double angle_rad) {
  return distance * std::tan(angle_rad);
}

}  // namespace uwar
