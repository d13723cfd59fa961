#include "radarmap/radar_frontend.hpp"

#include <cmath>
#include <limits>

namespace radarmap {

double bin_to_range(int bin_index, const RadarConfig& config) {
    if (bin_index < 0 || bin_index >= config.bin_count) {
        throw BoundsError("bin_to_range: bin " + std::to_string(bin_index) +
                          " outside [0, " + std::to_string(config.bin_count) + ")");
    }
    return (bin_index + 0.5) * config.bin_size;
}

std::vector<RadarDetection> threshold_scan(const RadarScanRecord& scan, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw ConfigError("threshold_scan: threshold must lie in (0, 1)");
    }
    std::vector<RadarDetection> detections;
    const float t = static_cast<float>(threshold);
    for (int a = 0; a < static_cast<int>(scan.azimuths.size()); ++a) {
        const auto& intensities = scan.azimuths[a].intensities;
        for (int b = 0; b < static_cast<int>(intensities.size()); ++b) {
            if (intensities[b] >= t) {
                detections.push_back({a, b, intensities[b]});
            }
        }
    }
    return detections;
}

Eigen::Vector3d radar_beam_direction(double azimuth_angle, double mount_tilt) {
    const double ct = std::cos(mount_tilt);
    return {std::cos(azimuth_angle) * ct, std::sin(azimuth_angle) * ct, -std::sin(mount_tilt)};
}

std::vector<SensorPoint> scan_to_points(const RadarScanRecord& scan, const RadarConfig& config,
                                        const std::vector<OdometrySample>& odometry) {
    return scan_to_points(scan, config, odometry, config.detection_threshold);
}

std::vector<SensorPoint> scan_to_points(const RadarScanRecord& scan, const RadarConfig& config,
                                        const std::vector<OdometrySample>& odometry,
                                        double threshold) {
    const auto detections = threshold_scan(scan, threshold);
    std::vector<SensorPoint> points;
    points.reserve(detections.size());
    int cached_azimuth = -1;
    Pose pose;
    for (const auto& det : detections) {
        const auto& az = scan.azimuths[det.azimuth];
        if (det.azimuth != cached_azimuth) {
            try {
                pose = interpolate_pose(odometry, az.t);
            } catch (const ExtrapolationError& e) {
                throw ExtrapolationError("scan_to_points: azimuth " +
                                         std::to_string(det.azimuth) + " at t=" +
                                         std::to_string(az.t) + ": " + e.what());
            }
            cached_azimuth = det.azimuth;
        }
        const double range = bin_to_range(det.bin, config);
        const Eigen::Vector3d dir = radar_beam_direction(az.angle, config.mount_tilt);
        SensorPoint p;
        p.position = pose.transform(config.mount_translation + range * dir);
        p.intensity = det.intensity;
        p.t = az.t;
        points.push_back(p);
    }
    return points;
}

std::vector<SensorPoint> lidar_to_points(const LidarScanRecord& scan,
                                         const Eigen::Vector3d& mount_translation,
                                         const std::vector<OdometrySample>& odometry) {
    std::vector<SensorPoint> points;
    points.reserve(scan.points.size());
    double cached_t = std::numeric_limits<double>::quiet_NaN();
    Pose pose;
    for (const auto& lp : scan.points) {
        if (lp.t != cached_t) {
            try {
                pose = interpolate_pose(odometry, lp.t);
            } catch (const ExtrapolationError& e) {
                throw ExtrapolationError("lidar_to_points: point at t=" + std::to_string(lp.t) +
                                         ": " + e.what());
            }
            cached_t = lp.t;
        }
        SensorPoint p;
        p.position = pose.transform(mount_translation + Eigen::Vector3d(lp.x, lp.y, lp.z));
        p.intensity = lp.intensity;
        p.t = lp.t;
        points.push_back(p);
    }
    return points;
}

}  // namespace radarmap
