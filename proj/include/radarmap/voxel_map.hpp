#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "radarmap/radar_frontend.hpp"

namespace radarmap {

struct GridConfig {
    std::array<int, 3> dims{256, 256, 64};
    double resolution = 0.4;  // meters per voxel
    double solid_intensity_threshold = 0.26;
    // Retention hook; disabled by default (voxels accumulate indefinitely).
    bool retention_enabled = false;
    double retention_horizon_s = 0.0;

    void validate() const;
    Json to_json() const;
    static GridConfig from_json(const Json& j);
};

struct VoxelCell {
    uint32_t hits = 0;
    uint32_t last_scan = 0;       // retention bookkeeping
    double intensity_sum = 0.0;   // 64-bit accumulation keeps order-independence

    double mean_intensity() const { return hits > 0 ? intensity_sum / hits : 0.0; }
};

enum class SolidRule {
    kMeanIntensity,  // radar: solid when mean intensity >= threshold
    kAnyHit,         // lidar: any hit makes a voxel solid
};

struct CellIndex {
    int64_t x = 0, y = 0, z = 0;
};

// Rolling vehicle-centered 3D grid. Each cell accumulates hit count and the
// sum of return intensities. The grid anchors to integer world cells:
// cell (i,j,k) spans [origin + idx * res, origin + (idx+1) * res) per axis.
class VoxelGrid {
public:
    explicit VoxelGrid(const GridConfig& config);

    const GridConfig& config() const { return config_; }
    const std::array<int64_t, 3>& origin_cell() const { return origin_cell_; }

    // World coordinates of the grid's minimum corner.
    Eigen::Vector3d world_origin() const;
    double voxel_center_z(int iz) const;

    // Half-open [low, high) cell ownership per axis; boundaries belong to the
    // higher cell. Returns false when the position falls outside the grid.
    bool world_to_index(const Eigen::Vector3d& position, CellIndex& out) const;

    VoxelCell& cell(int ix, int iy, int iz);
    const VoxelCell& cell(int ix, int iy, int iz) const;

    // Adds each in-bounds point to its owning cell; out-of-bounds points are
    // dropped and counted. Returns the number dropped by this call.
    size_t integrate_points(const std::vector<SensorPoint>& points);

    uint64_t total_hits() const;
    uint64_t dropped_count() const { return dropped_; }
    uint64_t presented_count() const { return presented_; }

    bool is_solid(const VoxelCell& c, SolidRule rule) const;
    std::vector<uint8_t> solid_mask(SolidRule rule = SolidRule::kMeanIntensity) const;

    // Shifts the grid by whole voxels once the vehicle leaves the central
    // cell by more than the hysteresis (one voxel). Retained cells keep their
    // data; cells shifted out are discarded; exposed cells start empty.
    // Returns true when a shift happened.
    bool recenter(const Eigen::Vector3d& vehicle_position);

    // Marks the start of a new scan for retention bookkeeping and prunes
    // stale cells when retention is enabled.
    void begin_scan(double scan_t);

    // Debug export: one raster per z-slice of hit counts and mean intensity.
    void write_slice_rasters(const std::filesystem::path& dir) const;

private:
    size_t flat_index(int ix, int iy, int iz) const {
        return (static_cast<size_t>(iz) * config_.dims[1] + iy) * config_.dims[0] + ix;
    }

    GridConfig config_;
    std::array<int64_t, 3> origin_cell_{0, 0, 0};
    std::vector<VoxelCell> cells_;
    uint64_t dropped_ = 0;
    uint64_t presented_ = 0;
    uint32_t scan_counter_ = 0;
    std::vector<double> scan_times_;
};

}  // namespace radarmap
