#pragma once

#include "uwar/sim/sensors.hpp"

#include <string>

namespace uwar::sim {

// CSV renderings with the same fixed 9-decimal formatting as trajectories.
std::string imu_csv(const std::vector<ImuSample>& imu);
std::string markers_csv(const std::vector<MarkerObservation>& markers);
std::string acoustic_csv(const std::vector<AcousticFix>& fixes);
std::string depth_csv(const std::vector<DepthSample>& depth);
std::string vio_csv(const std::vector<Pose>& vio);

std::vector<ImuSample> parse_imu_csv(const std::string& text);
std::vector<MarkerObservation> parse_markers_csv(const std::string& text);
std::vector<AcousticFix> parse_acoustic_csv(const std::string& text);
std::vector<DepthSample> parse_depth_csv(const std::string& text);
std::vector<Pose> parse_vio_csv(const std::string& text);

/// Writes imu.csv, markers.csv (when non-empty), acoustic.csv, depth.csv and
/// vio.csv into `dir`.
void write_streams(const std::string& dir, const SensorStreams& streams);

/// Reads whichever stream files exist in `dir`.
SensorStreams read_streams(const std::string& dir);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace uwar::sim
