#include "radarmap/voxel_map.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "radarmap/raster.hpp"

namespace radarmap {

void GridConfig::validate() const {
    for (int d : dims) {
        if (d <= 0) throw ConfigError("grid: dims must be positive");
    }
    if (resolution <= 0.0) throw ConfigError("grid: resolution must be positive");
    if (!(solid_intensity_threshold >= 0.0 && solid_intensity_threshold <= 1.0)) {
        throw ConfigError("grid: solid_intensity_threshold must lie in [0, 1]");
    }
    if (retention_enabled && retention_horizon_s <= 0.0) {
        throw ConfigError("grid: retention_horizon_s must be positive when retention is enabled");
    }
}

Json GridConfig::to_json() const {
    Json j;
    j["dims"] = Json::array({dims[0], dims[1], dims[2]});
    j["resolution"] = resolution;
    j["solid_intensity_threshold"] = solid_intensity_threshold;
    Json r;
    r["enabled"] = retention_enabled;
    r["horizon_s"] = retention_horizon_s;
    j["retention"] = std::move(r);
    return j;
}

GridConfig GridConfig::from_json(const Json& j) {
    jsonutil::require_keys_subset(
        j, {"dims", "resolution", "solid_intensity_threshold", "retention"}, "grid config");
    GridConfig c;
    if (j.contains("dims")) {
        const auto& d = j.at("dims");
        if (!d.is_array() || d.size() != 3) throw ConfigError("grid: dims must be [nx, ny, nz]");
        c.dims = {d.at(0).get<int>(), d.at(1).get<int>(), d.at(2).get<int>()};
    }
    c.resolution = jsonutil::get_or(j, "resolution", c.resolution);
    c.solid_intensity_threshold =
        jsonutil::get_or(j, "solid_intensity_threshold", c.solid_intensity_threshold);
    if (j.contains("retention")) {
        const auto& r = j.at("retention");
        jsonutil::require_keys_subset(r, {"enabled", "horizon_s"}, "grid retention");
        c.retention_enabled = jsonutil::get_or(r, "enabled", c.retention_enabled);
        c.retention_horizon_s = jsonutil::get_or(r, "horizon_s", c.retention_horizon_s);
    }
    c.validate();
    return c;
}

VoxelGrid::VoxelGrid(const GridConfig& config) : config_(config) {
    config_.validate();
    cells_.resize(static_cast<size_t>(config_.dims[0]) * config_.dims[1] * config_.dims[2]);
    // Center the grid on the world origin until the first recenter call.
    origin_cell_ = {-config_.dims[0] / 2, -config_.dims[1] / 2, -config_.dims[2] / 2};
}

Eigen::Vector3d VoxelGrid::world_origin() const {
    return {origin_cell_[0] * config_.resolution, origin_cell_[1] * config_.resolution,
            origin_cell_[2] * config_.resolution};
}

double VoxelGrid::voxel_center_z(int iz) const {
    return (origin_cell_[2] + iz + 0.5) * config_.resolution;
}

bool VoxelGrid::world_to_index(const Eigen::Vector3d& position, CellIndex& out) const {
    const double inv = 1.0 / config_.resolution;
    out.x = static_cast<int64_t>(std::floor(position.x() * inv)) - origin_cell_[0];
    out.y = static_cast<int64_t>(std::floor(position.y() * inv)) - origin_cell_[1];
    out.z = static_cast<int64_t>(std::floor(position.z() * inv)) - origin_cell_[2];
    return out.x >= 0 && out.x < config_.dims[0] && out.y >= 0 && out.y < config_.dims[1] &&
           out.z >= 0 && out.z < config_.dims[2];
}

VoxelCell& VoxelGrid::cell(int ix, int iy, int iz) { return cells_[flat_index(ix, iy, iz)]; }

const VoxelCell& VoxelGrid::cell(int ix, int iy, int iz) const {
    return cells_[flat_index(ix, iy, iz)];
}

size_t VoxelGrid::integrate_points(const std::vector<SensorPoint>& points) {
    size_t dropped_here = 0;
    for (const auto& p : points) {
        CellIndex idx;
        if (world_to_index(p.position, idx)) {
            auto& c = cells_[flat_index(static_cast<int>(idx.x), static_cast<int>(idx.y),
                                        static_cast<int>(idx.z))];
            c.hits += 1;
            c.intensity_sum += p.intensity;
            c.last_scan = scan_counter_;
        } else {
            ++dropped_here;
        }
    }
    presented_ += points.size();
    dropped_ += dropped_here;
    return dropped_here;
}

uint64_t VoxelGrid::total_hits() const {
    uint64_t total = 0;
    for (const auto& c : cells_) total += c.hits;
    return total;
}

bool VoxelGrid::is_solid(const VoxelCell& c, SolidRule rule) const {
    if (c.hits == 0) return false;
    if (rule == SolidRule::kAnyHit) return true;
    return c.mean_intensity() >= config_.solid_intensity_threshold;
}

std::vector<uint8_t> VoxelGrid::solid_mask(SolidRule rule) const {
    std::vector<uint8_t> mask(cells_.size(), 0);
    for (size_t i = 0; i < cells_.size(); ++i) {
        mask[i] = is_solid(cells_[i], rule) ? 1 : 0;
    }
    return mask;
}

bool VoxelGrid::recenter(const Eigen::Vector3d& vehicle_position) {
    const double inv = 1.0 / config_.resolution;
    const std::array<int64_t, 3> vehicle_cell = {
        static_cast<int64_t>(std::floor(vehicle_position.x() * inv)),
        static_cast<int64_t>(std::floor(vehicle_position.y() * inv)),
        static_cast<int64_t>(std::floor(vehicle_position.z() * inv))};
    std::array<int64_t, 3> delta;
    bool shift = false;
    for (int a = 0; a < 3; ++a) {
        const int64_t center = origin_cell_[a] + config_.dims[a] / 2;
        delta[a] = vehicle_cell[a] - center;
        if (std::llabs(delta[a]) > 1) shift = true;  // one-voxel hysteresis
    }
    if (!shift) return false;

    const int nx = config_.dims[0], ny = config_.dims[1], nz = config_.dims[2];
    std::vector<VoxelCell> fresh(cells_.size());
    // Cell (i,j,k) of the shifted grid holds what was at (i+dx, j+dy, k+dz).
    for (int iz = 0; iz < nz; ++iz) {
        const int64_t src_z = iz + delta[2];
        if (src_z < 0 || src_z >= nz) continue;
        for (int iy = 0; iy < ny; ++iy) {
            const int64_t src_y = iy + delta[1];
            if (src_y < 0 || src_y >= ny) continue;
            const int64_t src_x0 = std::max<int64_t>(0, delta[0]);
            const int64_t src_x1 = std::min<int64_t>(nx, nx + delta[0]);
            if (src_x0 >= src_x1) continue;
            const int dst_x0 = static_cast<int>(src_x0 - delta[0]);
            const auto* src = &cells_[flat_index(static_cast<int>(src_x0), static_cast<int>(src_y),
                                                 static_cast<int>(src_z))];
            auto* dst = &fresh[flat_index(dst_x0, iy, iz)];
            std::copy(src, src + (src_x1 - src_x0), dst);
        }
    }
    cells_ = std::move(fresh);
    for (int a = 0; a < 3; ++a) origin_cell_[a] += delta[a];
    return true;
}

void VoxelGrid::begin_scan(double scan_t) {
    ++scan_counter_;
    scan_times_.push_back(scan_t);
    if (!config_.retention_enabled) return;
    // Find the oldest scan counter still inside the horizon.
    uint32_t min_scan = 0;
    for (size_t i = 0; i < scan_times_.size(); ++i) {
        if (scan_t - scan_times_[i] <= config_.retention_horizon_s) {
            min_scan = static_cast<uint32_t>(i + 1);
            break;
        }
    }
    for (auto& c : cells_) {
        if (c.hits > 0 && c.last_scan < min_scan) {
            c = VoxelCell{};
        }
    }
}

void VoxelGrid::write_slice_rasters(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    const auto origin = world_origin();
    for (int iz = 0; iz < config_.dims[2]; ++iz) {
        RasterMap hits(config_.dims[0], config_.dims[1], config_.resolution, origin.x(),
                       origin.y());
        RasterMap mean(config_.dims[0], config_.dims[1], config_.resolution, origin.x(),
                       origin.y());
        for (int iy = 0; iy < config_.dims[1]; ++iy) {
            for (int ix = 0; ix < config_.dims[0]; ++ix) {
                const auto& c = cell(ix, iy, iz);
                hits.at(ix, iy) = static_cast<float>(c.hits);
                if (c.hits > 0) mean.at(ix, iy) = static_cast<float>(c.mean_intensity());
            }
        }
        char name[48];
        std::snprintf(name, sizeof(name), "hits_z%03d", iz);
        write_raster(hits, dir / name);
        std::snprintf(name, sizeof(name), "mean_intensity_z%03d", iz);
        write_raster(mean, dir / name);
    }
}

}  // namespace radarmap
