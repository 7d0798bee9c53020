#pragma once

#include "uwar/core.hpp"
#include "uwar/eskf.hpp"
#include "uwar/sim/scenario.hpp"
#include "uwar/sim/sensors.hpp"

#include <map>
#include <optional>
#include <span>
#include <vector>

namespace uwar {

/// Known world pose of every marker, keyed by id.
class MarkerMap {
 public:
  MarkerMap() = default;
  static MarkerMap from_grid(const sim::MarkerGrid& grid);

  /// Throws std::invalid_argument on a duplicate id.
  void add(int id, const Pose& world_pose);
  /// Throws std::invalid_argument for an unknown id.
  const Pose& at(int id) const;
  bool contains(int id) const { return poses_.count(id) != 0; }
  std::size_t size() const { return poses_.size(); }

 private:
  std::map<int, Pose> poses_;
};

/// Measurement noise attached to a converted marker detection. Both sigmas
/// are scaled by (1 + distance / visibility_range).
struct MarkerMeasurementModel {
  double sigma_pos = 0.05;         // m
  double sigma_rot = 0.03;         // rad
  double visibility_range = 3.0;   // m
  double min_sigma = 1e-5;         // floor keeping R positive definite
};

MarkerMeasurementModel measurement_model(const sim::Scenario& scenario);

/// Device world pose implied by one detection: marker world pose composed with
/// the inverse of the observed camera<-marker pose. Throws
/// std::invalid_argument for undetected records or unknown ids.
PoseMeasurement observation_to_pose(const sim::MarkerObservation& obs, const MarkerMap& map,
                                    const MarkerMeasurementModel& model);

enum class TrackingMode { Raw, Fused };

struct MarkerTrackingResult {
  Trajectory trajectory;
  std::size_t updates_applied = 0;
  std::size_t updates_rejected = 0;
  std::size_t frames_held = 0;  // raw mode frames without any detection
};

/// Streaming IMU + marker fusion; owns one filter.
class FusedMarkerTracker {
 public:
  FusedMarkerTracker(MarkerMap map, FilterParams params, MarkerMeasurementModel model);

  /// Converts and applies one observation; the first detection initialises
  /// the filter. Undetected records are ignored.
  void on_observation(const sim::MarkerObservation& obs);

  /// Applies all records of one camera frame in order. Before initialisation
  /// the filter starts at the detection closest to the others in the frame
  /// and the remaining detections are applied as updates.
  void on_frame(std::span<const sim::MarkerObservation> frame);

  /// Predicts to imu.t. Returns false (and does nothing) before initialisation.
  bool on_imu(const ImuSample& imu);

  bool initialized() const { return state_.has_value(); }
  const EskfState& state() const { return *state_; }
  Pose pose() const;
  std::size_t updates_applied() const { return applied_; }
  std::size_t updates_rejected() const { return rejected_; }

 private:
  MarkerMap map_;
  FilterParams params_;
  MarkerMeasurementModel model_;
  void apply(const PoseMeasurement& z);

  std::optional<EskfState> state_;
  std::size_t applied_ = 0;
  std::size_t rejected_ = 0;
};

/// Raw: one pose per camera frame from the mean of the per-marker solutions,
/// holding the last pose through frames without detections. Fused: ESKF
/// predict on every IMU sample, sequential pose updates in marker-id order,
/// one pose per IMU sample once initialised.
///
/// Throws std::invalid_argument on empty or unordered streams.
MarkerTrackingResult run_marker_tracking(const sim::SensorStreams& streams, const MarkerMap& map,
                                         const FilterParams& params,
                                         const MarkerMeasurementModel& model, TrackingMode mode);

/// Position shift of an object `distance` away under an orientation error.
double orientation_error_displacement(double distance, double angle_rad);

}  // namespace uwar
