#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "radarmap/errors.hpp"
#include "radarmap/geometry.hpp"
#include "radarmap/json_util.hpp"

namespace radarmap {

// ---------------------------------------------------------------------------
// Sensor configuration
// ---------------------------------------------------------------------------

struct RadarConfig {
    int azimuth_count = 400;
    int bin_count = 2048;
    double bin_size = 0.044;             // meters per range bin
    double detection_threshold = 0.26;   // normalized intensity floor
    Eigen::Vector3d mount_translation{0.0, 0.0, 1.1};  // sensor origin in vehicle frame
    double mount_tilt = 0.04363323129985824;           // 2.5 deg downward pitch, radians
    double rotation_period = 0.25;       // seconds per sweep (4 Hz)

    void validate() const;
    Json to_json() const;
    static RadarConfig from_json(const Json& j);
};

struct LidarConfig {
    int channels = 32;
    int azimuth_count = 1024;
    double max_range = 50.0;        // meters
    double divergence = 0.0031416;  // 0.18 deg beam divergence, radians (informational)
    double elevation_min = -0.3927; // -22.5 deg
    double elevation_max = 0.3927;  // +22.5 deg
    Eigen::Vector3d mount_translation{0.0, 0.0, 1.3};
    double rotation_period = 0.05;  // 20 Hz

    void validate() const;
    Json to_json() const;
    static LidarConfig from_json(const Json& j);
};

// ---------------------------------------------------------------------------
// Records
// ---------------------------------------------------------------------------

struct OdometrySample {
    double t = 0.0;
    Eigen::Vector3d position{Eigen::Vector3d::Zero()};
    Eigen::Quaterniond orientation{Eigen::Quaterniond::Identity()};
};

struct RadarAzimuth {
    double t = 0.0;       // absolute seconds
    float angle = 0.0f;   // sensor-frame azimuth, radians
    std::vector<float> intensities;  // one per range bin, in [0, 1]
};

struct RadarScanRecord {
    double start_t = 0.0;
    int azimuth_count = 0;
    int bin_count = 0;
    double bin_size = 0.0;
    std::vector<RadarAzimuth> azimuths;

    void validate(const std::string& context, double rotation_period) const;
};

struct LidarPoint {
    double t = 0.0;
    float x = 0.0f, y = 0.0f, z = 0.0f;  // sensor frame, meters
    float intensity = 0.0f;
};

struct LidarScanRecord {
    double start_t = 0.0;
    std::vector<LidarPoint> points;
};

enum class SensorKind { kRadar, kLidar };

const char* to_string(SensorKind kind);
SensorKind sensor_kind_from_string(const std::string& s);

struct ScanIndexEntry {
    SensorKind sensor = SensorKind::kRadar;
    std::string file;   // relative to the dataset root
    double start_t = 0.0;
};

struct DatasetManifest {
    int version = 1;
    RadarConfig radar_config;
    LidarConfig lidar_config;
    std::string odometry_path = "odometry.csv";
    std::vector<ScanIndexEntry> scans;
};

// ---------------------------------------------------------------------------
// Dataset access
// ---------------------------------------------------------------------------

// A dataset directory: manifest.json, odometry.csv, radar/ and lidar/
// subdirectories of per-scan binary files. Scans load lazily by index.
class Dataset {
public:
    static Dataset open(const std::filesystem::path& root);

    const DatasetManifest& manifest() const { return manifest_; }
    const std::vector<OdometrySample>& odometry() const { return odometry_; }
    const std::filesystem::path& root() const { return root_; }
    size_t scan_count() const { return manifest_.scans.size(); }

    RadarScanRecord load_radar(size_t index) const;
    LidarScanRecord load_lidar(size_t index) const;

private:
    std::filesystem::path root_;
    DatasetManifest manifest_;
    std::vector<OdometrySample> odometry_;
};

// Writer used by the simulator; enforces record invariants on the way out.
class DatasetWriter {
public:
    DatasetWriter(const std::filesystem::path& root, const RadarConfig& radar,
                  const LidarConfig& lidar);

    void write_odometry(const std::vector<OdometrySample>& samples);
    void add_radar_scan(const RadarScanRecord& scan);
    void add_lidar_scan(const LidarScanRecord& scan);
    // Sorts the scan index by start time and writes manifest.json.
    void finalize();

private:
    std::filesystem::path root_;
    DatasetManifest manifest_;
    int radar_count_ = 0;
    int lidar_count_ = 0;
};

// Scan file IO (binary, little-endian; see README for the layout).
void write_radar_scan(const RadarScanRecord& scan, const std::filesystem::path& path);
RadarScanRecord read_radar_scan(const std::filesystem::path& path, double rotation_period);
void write_lidar_scan(const LidarScanRecord& scan, const std::filesystem::path& path);
LidarScanRecord read_lidar_scan(const std::filesystem::path& path);

void write_odometry_csv(const std::vector<OdometrySample>& samples,
                        const std::filesystem::path& path);
std::vector<OdometrySample> read_odometry_csv(const std::filesystem::path& path);

// Pose at time t from ordered odometry samples. Positions interpolate
// linearly, orientations along the shortest arc. Exact samples are returned
// verbatim; t outside [first, last] raises ExtrapolationError.
Pose interpolate_pose(const std::vector<OdometrySample>& odometry, double t);

}  // namespace radarmap
