#pragma once

#include "radarmap/raster.hpp"
#include "radarmap/voxel_map.hpp"

namespace radarmap {

struct CostTerm {
    double weight = 1.0;
    double cost = 1.0;
};

struct TerrainConfig {
    double obstacle_height_threshold = 1.0;  // meters above estimated ground
    int slope_neighborhood = 1;              // cells used for finite differences
    double slope_saturation = 0.5235987755982988;  // 30 deg, radians
    CostTerm validity_term{1.0, 1.0};
    CostTerm slope_term{1.0, 1.0};
    CostTerm obstacle_term{1.0, 10.0};

    void validate() const;
    Json to_json() const;
    static TerrainConfig from_json(const Json& j);
};

// How column weights are formed for ground estimation. Radar weights each
// voxel by mean intensity times hit count; in lidar mode hits alone carry
// the weight.
enum class GroundWeighting { kIntensityHits, kHitsOnly };

struct TerrainStack {
    RasterMap ground;    // meters
    RasterMap slope;     // radians, NaN where not computable
    RasterMap obstacle;  // 0/1
    RasterMap validity;  // 0/1
    RasterMap cost;      // >= 0
};

// Weighted average of occupied voxel-center heights per column.
// validity = 1 iff the column weight sum is positive, else ground = NaN.
void estimate_ground(const VoxelGrid& grid, GroundWeighting weighting, RasterMap& ground,
                     RasterMap& validity);

// arctan of the gradient magnitude from central differences over valid
// neighbors, one-sided at validity boundaries. NaN where either axis has no
// valid neighbor.
RasterMap compute_slope(const RasterMap& ground, const RasterMap& validity,
                        const TerrainConfig& config);

// A column is an obstacle iff some solid voxel's center sits at least
// obstacle_height_threshold above that column's estimated ground. Invalid
// columns are never obstacles.
RasterMap detect_obstacles(const VoxelGrid& grid, const RasterMap& ground,
                           const RasterMap& validity, SolidRule rule,
                           const TerrainConfig& config);

// cost = w_v*c_v*(1 - validity) + w_s*c_s*min(slope, sat)/sat + w_o*c_o*obstacle.
// NaN slopes contribute nothing, so invalid cells carry the validity
// penalty alone.
RasterMap compute_cost(const RasterMap& validity, const RasterMap& slope,
                       const RasterMap& obstacle, const TerrainConfig& config);

TerrainStack build_stack(const VoxelGrid& grid, const TerrainConfig& config, SolidRule rule,
                         GroundWeighting weighting);

void write_stack(const TerrainStack& stack, const std::filesystem::path& dir);

}  // namespace radarmap
