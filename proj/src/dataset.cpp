#include "radarmap/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace radarmap {

namespace {

constexpr char kRadarMagic[4] = {'R', 'S', 'C', 'N'};
constexpr char kLidarMagic[4] = {'L', 'S', 'C', 'N'};
constexpr uint32_t kScanVersion = 1;
constexpr int kManifestVersion = 1;
constexpr double kTwoPi = 6.283185307179586;

template <typename T>
void put(std::ostream& out, T value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T take(std::istream& in, const std::string& context) {
    T value;
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) throw FormatError("truncated scan file: " + context);
    return value;
}

Json vec3_to_json(const Eigen::Vector3d& v) {
    return Json::array({v.x(), v.y(), v.z()});
}

Eigen::Vector3d vec3_from_json(const Json& j, const std::string& context) {
    if (!j.is_array() || j.size() != 3) {
        throw ConfigError(context + ": expected [x, y, z]");
    }
    return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// Configs
// ---------------------------------------------------------------------------

void RadarConfig::validate() const {
    if (azimuth_count <= 0) throw ConfigError("radar: azimuth_count must be positive");
    if (bin_count <= 0) throw ConfigError("radar: bin_count must be positive");
    if (bin_size <= 0.0) throw ConfigError("radar: bin_size must be positive");
    if (!(detection_threshold > 0.0 && detection_threshold < 1.0)) {
        throw ConfigError("radar: detection_threshold must lie in (0, 1)");
    }
    if (!(mount_tilt > -1.5707963 && mount_tilt < 1.5707963)) {
        throw ConfigError("radar: mount_tilt must lie in (-pi/2, pi/2)");
    }
    if (rotation_period <= 0.0) throw ConfigError("radar: rotation_period must be positive");
}

Json RadarConfig::to_json() const {
    Json j;
    j["azimuth_count"] = azimuth_count;
    j["bin_count"] = bin_count;
    j["bin_size"] = bin_size;
    j["detection_threshold"] = detection_threshold;
    j["mount_translation"] = vec3_to_json(mount_translation);
    j["mount_tilt"] = mount_tilt;
    j["rotation_period"] = rotation_period;
    return j;
}

RadarConfig RadarConfig::from_json(const Json& j) {
    jsonutil::require_keys_subset(
        j,
        {"azimuth_count", "bin_count", "bin_size", "detection_threshold", "mount_translation",
         "mount_tilt", "rotation_period"},
        "radar config");
    RadarConfig c;
    c.azimuth_count = jsonutil::get_or(j, "azimuth_count", c.azimuth_count);
    c.bin_count = jsonutil::get_or(j, "bin_count", c.bin_count);
    c.bin_size = jsonutil::get_or(j, "bin_size", c.bin_size);
    c.detection_threshold = jsonutil::get_or(j, "detection_threshold", c.detection_threshold);
    if (j.contains("mount_translation")) {
        c.mount_translation = vec3_from_json(j.at("mount_translation"), "radar mount_translation");
    }
    c.mount_tilt = jsonutil::get_or(j, "mount_tilt", c.mount_tilt);
    c.rotation_period = jsonutil::get_or(j, "rotation_period", c.rotation_period);
    c.validate();
    return c;
}

void LidarConfig::validate() const {
    if (channels <= 0) throw ConfigError("lidar: channels must be positive");
    if (azimuth_count <= 0) throw ConfigError("lidar: azimuth_count must be positive");
    if (max_range <= 0.0) throw ConfigError("lidar: max_range must be positive");
    if (elevation_max < elevation_min) {
        throw ConfigError("lidar: elevation_max must be >= elevation_min");
    }
    if (rotation_period <= 0.0) throw ConfigError("lidar: rotation_period must be positive");
}

Json LidarConfig::to_json() const {
    Json j;
    j["channels"] = channels;
    j["azimuth_count"] = azimuth_count;
    j["max_range"] = max_range;
    j["divergence"] = divergence;
    j["elevation_min"] = elevation_min;
    j["elevation_max"] = elevation_max;
    j["mount_translation"] = vec3_to_json(mount_translation);
    j["rotation_period"] = rotation_period;
    return j;
}

LidarConfig LidarConfig::from_json(const Json& j) {
    jsonutil::require_keys_subset(
        j,
        {"channels", "azimuth_count", "max_range", "divergence", "elevation_min", "elevation_max",
         "mount_translation", "rotation_period"},
        "lidar config");
    LidarConfig c;
    c.channels = jsonutil::get_or(j, "channels", c.channels);
    c.azimuth_count = jsonutil::get_or(j, "azimuth_count", c.azimuth_count);
    c.max_range = jsonutil::get_or(j, "max_range", c.max_range);
    c.divergence = jsonutil::get_or(j, "divergence", c.divergence);
    c.elevation_min = jsonutil::get_or(j, "elevation_min", c.elevation_min);
    c.elevation_max = jsonutil::get_or(j, "elevation_max", c.elevation_max);
    if (j.contains("mount_translation")) {
        c.mount_translation = vec3_from_json(j.at("mount_translation"), "lidar mount_translation");
    }
    c.rotation_period = jsonutil::get_or(j, "rotation_period", c.rotation_period);
    c.validate();
    return c;
}

// ---------------------------------------------------------------------------
// Record validation
// ---------------------------------------------------------------------------

void RadarScanRecord::validate(const std::string& context, double rotation_period) const {
    if (static_cast<int>(azimuths.size()) != azimuth_count) {
        throw FormatError(context + ": azimuth count mismatch");
    }
    double prev_t = -1.0;
    double unwrapped_prev = 0.0;
    bool first = true;
    for (size_t a = 0; a < azimuths.size(); ++a) {
        const auto& az = azimuths[a];
        if (static_cast<int>(az.intensities.size()) != bin_count) {
            throw FormatError(context + ": azimuth " + std::to_string(a) + " has wrong bin count");
        }
        if (!first && az.t < prev_t) {
            throw FormatError(context + ": azimuth timestamps decrease at index " +
                              std::to_string(a));
        }
        if (az.t - start_t > rotation_period + 1e-6) {
            throw FormatError(context + ": azimuth " + std::to_string(a) +
                              " timestamp exceeds one rotation period");
        }
        // Angles must be monotonic modulo 2*pi across the sweep.
        double angle = az.angle;
        if (first) {
            unwrapped_prev = angle;
        } else {
            double delta = angle - std::fmod(unwrapped_prev, kTwoPi);
            while (delta < -1e-9) delta += kTwoPi;
            double unwrapped = unwrapped_prev + delta;
            if (unwrapped - unwrapped_prev > kTwoPi + 1e-6) {
                throw FormatError(context + ": azimuth angles wrap more than once");
            }
            unwrapped_prev = unwrapped;
        }
        for (size_t b = 0; b < az.intensities.size(); ++b) {
            const float v = az.intensities[b];
            if (!(v >= 0.0f && v <= 1.0f)) {
                throw FormatError(context + ": intensity out of [0,1] at azimuth " +
                                  std::to_string(a) + " bin " + std::to_string(b));
            }
        }
        prev_t = az.t;
        first = false;
    }
}

// ---------------------------------------------------------------------------
// Scan files
// ---------------------------------------------------------------------------

void write_radar_scan(const RadarScanRecord& scan, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(kRadarMagic, 4);
    put<uint32_t>(out, kScanVersion);
    put<double>(out, scan.start_t);
    put<uint32_t>(out, static_cast<uint32_t>(scan.azimuth_count));
    put<uint32_t>(out, static_cast<uint32_t>(scan.bin_count));
    put<float>(out, static_cast<float>(scan.bin_size));
    for (const auto& az : scan.azimuths) {
        put<float>(out, static_cast<float>(az.t - scan.start_t));
        put<float>(out, az.angle);
        out.write(reinterpret_cast<const char*>(az.intensities.data()),
                  static_cast<std::streamsize>(sizeof(float)) * scan.bin_count);
    }
    if (!out) throw IoError("short write to " + path.string());
}

RadarScanRecord read_radar_scan(const std::filesystem::path& path, double rotation_period) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kRadarMagic, 4) != 0) {
        throw FormatError("not a radar scan file: " + path.string());
    }
    const auto version = take<uint32_t>(in, path.string());
    if (version != kScanVersion) {
        throw FormatError("unsupported radar scan version " + std::to_string(version) + " in " +
                          path.string());
    }
    RadarScanRecord scan;
    scan.start_t = take<double>(in, path.string());
    scan.azimuth_count = static_cast<int>(take<uint32_t>(in, path.string()));
    scan.bin_count = static_cast<int>(take<uint32_t>(in, path.string()));
    scan.bin_size = take<float>(in, path.string());
    if (scan.azimuth_count <= 0 || scan.azimuth_count > 1 << 20 || scan.bin_count <= 0 ||
        scan.bin_count > 1 << 24) {
        throw FormatError("implausible scan dimensions in " + path.string());
    }
    scan.azimuths.resize(scan.azimuth_count);
    for (auto& az : scan.azimuths) {
        az.t = scan.start_t + take<float>(in, path.string());
        az.angle = take<float>(in, path.string());
        az.intensities.resize(scan.bin_count);
        in.read(reinterpret_cast<char*>(az.intensities.data()),
                static_cast<std::streamsize>(sizeof(float)) * scan.bin_count);
        if (!in) throw FormatError("truncated scan file: " + path.string());
    }
    scan.validate(path.string(), rotation_period);
    return scan;
}

void write_lidar_scan(const LidarScanRecord& scan, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(kLidarMagic, 4);
    put<uint32_t>(out, kScanVersion);
    put<double>(out, scan.start_t);
    put<uint32_t>(out, static_cast<uint32_t>(scan.points.size()));
    for (const auto& p : scan.points) {
        put<float>(out, static_cast<float>(p.t - scan.start_t));
        put<float>(out, p.x);
        put<float>(out, p.y);
        put<float>(out, p.z);
        put<float>(out, p.intensity);
    }
    if (!out) throw IoError("short write to " + path.string());
}

LidarScanRecord read_lidar_scan(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kLidarMagic, 4) != 0) {
        throw FormatError("not a lidar scan file: " + path.string());
    }
    const auto version = take<uint32_t>(in, path.string());
    if (version != kScanVersion) {
        throw FormatError("unsupported lidar scan version " + std::to_string(version) + " in " +
                          path.string());
    }
    LidarScanRecord scan;
    scan.start_t = take<double>(in, path.string());
    const auto count = take<uint32_t>(in, path.string());
    scan.points.resize(count);
    for (auto& p : scan.points) {
        p.t = scan.start_t + take<float>(in, path.string());
        p.x = take<float>(in, path.string());
        p.y = take<float>(in, path.string());
        p.z = take<float>(in, path.string());
        p.intensity = take<float>(in, path.string());
        if (!(p.intensity >= 0.0f && p.intensity <= 1.0f)) {
            throw FormatError("lidar intensity out of [0,1] in " + path.string());
        }
    }
    return scan;
}

// ---------------------------------------------------------------------------
// Odometry CSV
// ---------------------------------------------------------------------------

void write_odometry_csv(const std::vector<OdometrySample>& samples,
                        const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << "t,x,y,z,qw,qx,qy,qz\n";
    for (const auto& s : samples) {
        out << format_double(s.t) << ',' << format_double(s.position.x()) << ','
            << format_double(s.position.y()) << ',' << format_double(s.position.z()) << ','
            << format_double(s.orientation.w()) << ',' << format_double(s.orientation.x()) << ','
            << format_double(s.orientation.y()) << ',' << format_double(s.orientation.z()) << '\n';
    }
    if (!out) throw IoError("short write to " + path.string());
}

std::vector<OdometrySample> read_odometry_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw FormatError("empty odometry file: " + path.string());
    if (line != "t,x,y,z,qw,qx,qy,qz") {
        throw FormatError("unexpected odometry header in " + path.string());
    }
    std::vector<OdometrySample> samples;
    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string field;
        double v[8];
        for (int i = 0; i < 8; ++i) {
            if (!std::getline(ss, field, ',')) {
                throw FormatError(path.string() + ":" + std::to_string(line_no) +
                                  ": expected 8 fields");
            }
            try {
                v[i] = std::stod(field);
            } catch (const std::exception&) {
                throw FormatError(path.string() + ":" + std::to_string(line_no) +
                                  ": bad number \"" + field + "\"");
            }
        }
        OdometrySample s;
        s.t = v[0];
        s.position = {v[1], v[2], v[3]};
        s.orientation = Eigen::Quaterniond(v[4], v[5], v[6], v[7]);
        const double norm = s.orientation.norm();
        if (std::abs(norm - 1.0) > 1e-6) {
            throw FormatError(path.string() + ":" + std::to_string(line_no) +
                              ": quaternion norm " + std::to_string(norm) + " is not unit");
        }
        if (!samples.empty() && s.t <= samples.back().t) {
            throw FormatError(path.string() + ":" + std::to_string(line_no) +
                              ": timestamps must strictly increase");
        }
        samples.push_back(s);
    }
    return samples;
}

// ---------------------------------------------------------------------------
// Pose interpolation
// ---------------------------------------------------------------------------

Pose interpolate_pose(const std::vector<OdometrySample>& odometry, double t) {
    if (odometry.empty()) {
        throw ExtrapolationError("interpolate_pose: no odometry samples");
    }
    if (t < odometry.front().t || t > odometry.back().t) {
        throw ExtrapolationError("interpolate_pose: t=" + std::to_string(t) +
                                 " outside odometry span [" + std::to_string(odometry.front().t) +
                                 ", " + std::to_string(odometry.back().t) + "]");
    }
    auto it = std::lower_bound(odometry.begin(), odometry.end(), t,
                               [](const OdometrySample& s, double value) { return s.t < value; });
    if (it != odometry.end() && it->t == t) {
        return Pose{it->position, it->orientation};
    }
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    const double alpha = (t - lo.t) / (hi.t - lo.t);
    return interpolate(Pose{lo.position, lo.orientation}, Pose{hi.position, hi.orientation},
                       alpha);
}

// ---------------------------------------------------------------------------
// Manifest + dataset
// ---------------------------------------------------------------------------

const char* to_string(SensorKind kind) {
    return kind == SensorKind::kRadar ? "radar" : "lidar";
}

SensorKind sensor_kind_from_string(const std::string& s) {
    if (s == "radar") return SensorKind::kRadar;
    if (s == "lidar") return SensorKind::kLidar;
    throw FormatError("unknown sensor kind \"" + s + "\"");
}

namespace {

Json manifest_to_json(const DatasetManifest& m) {
    Json j;
    j["version"] = m.version;
    j["radar_config"] = m.radar_config.to_json();
    j["lidar_config"] = m.lidar_config.to_json();
    j["odometry"] = m.odometry_path;
    Json scans = Json::array();
    for (const auto& entry : m.scans) {
        Json e;
        e["sensor"] = to_string(entry.sensor);
        e["file"] = entry.file;
        e["start_t"] = entry.start_t;
        scans.push_back(std::move(e));
    }
    j["scans"] = std::move(scans);
    return j;
}

DatasetManifest manifest_from_json(const Json& j, const std::string& context) {
    jsonutil::require_keys_subset(
        j, {"version", "radar_config", "lidar_config", "odometry", "scans"}, context);
    DatasetManifest m;
    m.version = jsonutil::require(j, "version", context).get<int>();
    if (m.version != kManifestVersion) {
        throw FormatError(context + ": unsupported manifest version " +
                          std::to_string(m.version));
    }
    m.radar_config = RadarConfig::from_json(jsonutil::require(j, "radar_config", context));
    m.lidar_config = LidarConfig::from_json(jsonutil::require(j, "lidar_config", context));
    m.odometry_path = jsonutil::require(j, "odometry", context).get<std::string>();
    for (const auto& e : jsonutil::require(j, "scans", context)) {
        jsonutil::require_keys_subset(e, {"sensor", "file", "start_t"}, context + " scan entry");
        ScanIndexEntry entry;
        entry.sensor = sensor_kind_from_string(jsonutil::require(e, "sensor", context).get<std::string>());
        entry.file = jsonutil::require(e, "file", context).get<std::string>();
        entry.start_t = jsonutil::require(e, "start_t", context).get<double>();
        m.scans.push_back(std::move(entry));
    }
    for (size_t i = 1; i < m.scans.size(); ++i) {
        if (m.scans[i].start_t < m.scans[i - 1].start_t) {
            throw FormatError(context + ": scan index not sorted by start timestamp (entry " +
                              std::to_string(i) + ")");
        }
    }
    return m;
}

}  // namespace

Dataset Dataset::open(const std::filesystem::path& root) {
    Dataset ds;
    ds.root_ = root;
    const auto manifest_path = root / "manifest.json";
    std::ifstream in(manifest_path);
    if (!in) throw IoError("cannot open " + manifest_path.string());
    Json j;
    try {
        j = Json::parse(in);
    } catch (const std::exception& e) {
        throw FormatError("bad manifest " + manifest_path.string() + ": " + e.what());
    }
    ds.manifest_ = manifest_from_json(j, manifest_path.string());
    const auto odom_path = root / ds.manifest_.odometry_path;
    if (!std::filesystem::exists(odom_path)) {
        throw IoError("missing odometry file " + odom_path.string());
    }
    ds.odometry_ = read_odometry_csv(odom_path);
    for (const auto& entry : ds.manifest_.scans) {
        if (!std::filesystem::exists(root / entry.file)) {
            throw IoError("missing scan file " + (root / entry.file).string());
        }
    }
    return ds;
}

RadarScanRecord Dataset::load_radar(size_t index) const {
    const auto& entry = manifest_.scans.at(index);
    if (entry.sensor != SensorKind::kRadar) {
        throw FormatError("scan " + std::to_string(index) + " is not a radar scan");
    }
    return read_radar_scan(root_ / entry.file, manifest_.radar_config.rotation_period);
}

LidarScanRecord Dataset::load_lidar(size_t index) const {
    const auto& entry = manifest_.scans.at(index);
    if (entry.sensor != SensorKind::kLidar) {
        throw FormatError("scan " + std::to_string(index) + " is not a lidar scan");
    }
    return read_lidar_scan(root_ / entry.file);
}

DatasetWriter::DatasetWriter(const std::filesystem::path& root, const RadarConfig& radar,
                             const LidarConfig& lidar)
    : root_(root) {
    radar.validate();
    lidar.validate();
    manifest_.radar_config = radar;
    manifest_.lidar_config = lidar;
    std::filesystem::create_directories(root_ / "radar");
    std::filesystem::create_directories(root_ / "lidar");
}

void DatasetWriter::write_odometry(const std::vector<OdometrySample>& samples) {
    write_odometry_csv(samples, root_ / manifest_.odometry_path);
}

void DatasetWriter::add_radar_scan(const RadarScanRecord& scan) {
    char name[32];
    std::snprintf(name, sizeof(name), "radar/scan_%06d.bin", radar_count_++);
    scan.validate(name, manifest_.radar_config.rotation_period);
    write_radar_scan(scan, root_ / name);
    manifest_.scans.push_back({SensorKind::kRadar, name, scan.start_t});
}

void DatasetWriter::add_lidar_scan(const LidarScanRecord& scan) {
    char name[32];
    std::snprintf(name, sizeof(name), "lidar/scan_%06d.bin", lidar_count_++);
    write_lidar_scan(scan, root_ / name);
    manifest_.scans.push_back({SensorKind::kLidar, name, scan.start_t});
}

void DatasetWriter::finalize() {
    std::stable_sort(manifest_.scans.begin(), manifest_.scans.end(),
                     [](const ScanIndexEntry& a, const ScanIndexEntry& b) {
                         return a.start_t < b.start_t;
                     });
    const auto path = root_ / "manifest.json";
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << manifest_to_json(manifest_).dump(2) << "\n";
    if (!out) throw IoError("short write to " + path.string());
}

}  // namespace radarmap
