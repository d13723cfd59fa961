#pragma once

#include <vector>

#include "radarmap/dataset.hpp"
#include "radarmap/geometry.hpp"

namespace radarmap {

// One world-frame return with its normalized intensity and emission time.
struct SensorPoint {
    Eigen::Vector3d position{Eigen::Vector3d::Zero()};
    float intensity = 0.0f;
    double t = 0.0;
};

struct RadarDetection {
    int azimuth = 0;
    int bin = 0;
    float intensity = 0.0f;
};

// Range of a bin center. Bin 0 spans [0, bin_size), so its center sits at
// bin_size / 2.
double bin_to_range(int bin_index, const RadarConfig& config);

// Keeps exactly the cells with intensity >= threshold (boundary inclusive).
// Output is azimuth-major, then bin.
std::vector<RadarDetection> threshold_scan(const RadarScanRecord& scan, double threshold);

// Beam direction in the vehicle frame for a sensor-frame azimuth angle,
// pitched down by the mount tilt. Unit length.
Eigen::Vector3d radar_beam_direction(double azimuth_angle, double mount_tilt);

// Projects thresholded detections to world-frame points. Each detection is
// placed on the cone axis at its bin-center range, using the pose
// interpolated at its azimuth's timestamp (per-azimuth motion compensation).
std::vector<SensorPoint> scan_to_points(const RadarScanRecord& scan, const RadarConfig& config,
                                        const std::vector<OdometrySample>& odometry);

// Same projection with an explicit threshold override.
std::vector<SensorPoint> scan_to_points(const RadarScanRecord& scan, const RadarConfig& config,
                                        const std::vector<OdometrySample>& odometry,
                                        double threshold);

// Transforms every lidar point to the world frame at its own timestamp.
// No thresholding; point count is preserved.
std::vector<SensorPoint> lidar_to_points(const LidarScanRecord& scan,
                                         const Eigen::Vector3d& mount_translation,
                                         const std::vector<OdometrySample>& odometry);

}  // namespace radarmap
