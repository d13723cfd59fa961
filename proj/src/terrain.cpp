#include "radarmap/terrain.hpp"

#include <cmath>
#include <limits>

namespace radarmap {

namespace {

constexpr float kNaN = std::numeric_limits<float>::quiet_NaN();

Json term_to_json(const CostTerm& t) {
    Json j;
    j["weight"] = t.weight;
    j["cost"] = t.cost;
    return j;
}

CostTerm term_from_json(const Json& j, const std::string& context) {
    jsonutil::require_keys_subset(j, {"weight", "cost"}, context);
    CostTerm t;
    t.weight = jsonutil::get_or(j, "weight", t.weight);
    t.cost = jsonutil::get_or(j, "cost", t.cost);
    return t;
}

}  // namespace

void TerrainConfig::validate() const {
    if (obstacle_height_threshold <= 0.0) {
        throw ConfigError("terrain: obstacle_height_threshold must be positive");
    }
    if (slope_neighborhood < 1) throw ConfigError("terrain: slope_neighborhood must be >= 1");
    if (slope_saturation <= 0.0) throw ConfigError("terrain: slope_saturation must be positive");
    for (const auto* term : {&validity_term, &slope_term, &obstacle_term}) {
        if (term->weight < 0.0 || term->cost < 0.0) {
            throw ConfigError("terrain: cost weights and scales must be non-negative");
        }
    }
}

Json TerrainConfig::to_json() const {
    Json j;
    j["obstacle_height_threshold"] = obstacle_height_threshold;
    j["slope_neighborhood"] = slope_neighborhood;
    j["slope_saturation"] = slope_saturation;
    Json w;
    w["validity"] = term_to_json(validity_term);
    w["slope"] = term_to_json(slope_term);
    w["obstacle"] = term_to_json(obstacle_term);
    j["weights"] = std::move(w);
    return j;
}

TerrainConfig TerrainConfig::from_json(const Json& j) {
    jsonutil::require_keys_subset(
        j, {"obstacle_height_threshold", "slope_neighborhood", "slope_saturation", "weights"},
        "terrain config");
    TerrainConfig c;
    c.obstacle_height_threshold =
        jsonutil::get_or(j, "obstacle_height_threshold", c.obstacle_height_threshold);
    c.slope_neighborhood = jsonutil::get_or(j, "slope_neighborhood", c.slope_neighborhood);
    c.slope_saturation = jsonutil::get_or(j, "slope_saturation", c.slope_saturation);
    if (j.contains("weights")) {
        const auto& w = j.at("weights");
        jsonutil::require_keys_subset(w, {"validity", "slope", "obstacle"}, "terrain weights");
        if (w.contains("validity")) c.validity_term = term_from_json(w.at("validity"), "validity term");
        if (w.contains("slope")) c.slope_term = term_from_json(w.at("slope"), "slope term");
        if (w.contains("obstacle")) c.obstacle_term = term_from_json(w.at("obstacle"), "obstacle term");
    }
    c.validate();
    return c;
}

void estimate_ground(const VoxelGrid& grid, GroundWeighting weighting, RasterMap& ground,
                     RasterMap& validity) {
    const auto& cfg = grid.config();
    const auto origin = grid.world_origin();
    const int nx = cfg.dims[0], ny = cfg.dims[1], nz = cfg.dims[2];
    ground = RasterMap(nx, ny, cfg.resolution, origin.x(), origin.y());
    validity = RasterMap(nx, ny, cfg.resolution, origin.x(), origin.y(), 0.0f);

    std::vector<double> weight_sum(static_cast<size_t>(nx) * ny, 0.0);
    std::vector<double> weighted_z(static_cast<size_t>(nx) * ny, 0.0);
    for (int iz = 0; iz < nz; ++iz) {
        const double z = grid.voxel_center_z(iz);
        for (int iy = 0; iy < ny; ++iy) {
            for (int ix = 0; ix < nx; ++ix) {
                const auto& c = grid.cell(ix, iy, iz);
                if (c.hits == 0) continue;
                const double w = weighting == GroundWeighting::kIntensityHits
                                     ? c.mean_intensity() * c.hits
                                     : static_cast<double>(c.hits);
                const size_t col = static_cast<size_t>(iy) * nx + ix;
                weight_sum[col] += w;
                weighted_z[col] += w * z;
            }
        }
    }
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            const size_t col = static_cast<size_t>(iy) * nx + ix;
            if (weight_sum[col] > 0.0) {
                ground.at(ix, iy) = static_cast<float>(weighted_z[col] / weight_sum[col]);
                validity.at(ix, iy) = 1.0f;
            }
        }
    }
}

RasterMap compute_slope(const RasterMap& ground, const RasterMap& validity,
                        const TerrainConfig& config) {
    if (!ground.same_shape(validity)) {
        throw AlignmentError("compute_slope: ground and validity rasters are misaligned");
    }
    RasterMap slope(ground.width, ground.height, ground.resolution, ground.origin_x,
                    ground.origin_y);
    const int k = config.slope_neighborhood;
    const double step = k * ground.resolution;

    auto valid_at = [&](int ix, int iy) {
        return ground.in_bounds(ix, iy) && validity.at(ix, iy) > 0.5f;
    };
    // Gradient along one axis: central difference when both neighbors are
    // valid, one-sided when only one is, unavailable otherwise.
    auto axis_gradient = [&](int ix, int iy, int dx, int dy, double& out) {
        const bool plus = valid_at(ix + dx * k, iy + dy * k);
        const bool minus = valid_at(ix - dx * k, iy - dy * k);
        const double h0 = ground.at(ix, iy);
        if (plus && minus) {
            out = (ground.at(ix + dx * k, iy + dy * k) - ground.at(ix - dx * k, iy - dy * k)) /
                  (2.0 * step);
            return true;
        }
        if (plus) {
            out = (ground.at(ix + dx * k, iy + dy * k) - h0) / step;
            return true;
        }
        if (minus) {
            out = (h0 - ground.at(ix - dx * k, iy - dy * k)) / step;
            return true;
        }
        return false;
    };

    for (int iy = 0; iy < ground.height; ++iy) {
        for (int ix = 0; ix < ground.width; ++ix) {
            if (validity.at(ix, iy) < 0.5f) continue;
            double gx, gy;
            if (axis_gradient(ix, iy, 1, 0, gx) && axis_gradient(ix, iy, 0, 1, gy)) {
                slope.at(ix, iy) = static_cast<float>(std::atan(std::sqrt(gx * gx + gy * gy)));
            }
        }
    }
    return slope;
}

RasterMap detect_obstacles(const VoxelGrid& grid, const RasterMap& ground,
                           const RasterMap& validity, SolidRule rule,
                           const TerrainConfig& config) {
    const auto& cfg = grid.config();
    if (ground.width != cfg.dims[0] || ground.height != cfg.dims[1] ||
        !ground.same_shape(validity)) {
        throw AlignmentError("detect_obstacles: rasters do not match the grid snapshot");
    }
    RasterMap obstacle(cfg.dims[0], cfg.dims[1], cfg.resolution, ground.origin_x,
                       ground.origin_y, 0.0f);
    for (int iz = 0; iz < cfg.dims[2]; ++iz) {
        const double z = grid.voxel_center_z(iz);
        for (int iy = 0; iy < cfg.dims[1]; ++iy) {
            for (int ix = 0; ix < cfg.dims[0]; ++ix) {
                if (validity.at(ix, iy) < 0.5f) continue;
                if (obstacle.at(ix, iy) > 0.5f) continue;
                const auto& c = grid.cell(ix, iy, iz);
                if (!grid.is_solid(c, rule)) continue;
                if (z >= ground.at(ix, iy) + config.obstacle_height_threshold) {
                    obstacle.at(ix, iy) = 1.0f;
                }
            }
        }
    }
    return obstacle;
}

RasterMap compute_cost(const RasterMap& validity, const RasterMap& slope,
                       const RasterMap& obstacle, const TerrainConfig& config) {
    config.validate();
    if (!validity.same_shape(slope) || !validity.same_shape(obstacle)) {
        throw AlignmentError("compute_cost: stack rasters are misaligned");
    }
    RasterMap cost(validity.width, validity.height, validity.resolution, validity.origin_x,
                   validity.origin_y, 0.0f);
    const double wv = config.validity_term.weight * config.validity_term.cost;
    const double ws = config.slope_term.weight * config.slope_term.cost;
    const double wo = config.obstacle_term.weight * config.obstacle_term.cost;
    for (int iy = 0; iy < validity.height; ++iy) {
        for (int ix = 0; ix < validity.width; ++ix) {
            const double valid = validity.at(ix, iy) > 0.5f ? 1.0 : 0.0;
            double c = wv * (1.0 - valid);
            const float s = slope.at(ix, iy);
            if (std::isfinite(s)) {
                c += ws * std::min(static_cast<double>(s), config.slope_saturation) /
                     config.slope_saturation;
            }
            if (obstacle.at(ix, iy) > 0.5f) c += wo;
            cost.at(ix, iy) = static_cast<float>(c);
        }
    }
    return cost;
}

TerrainStack build_stack(const VoxelGrid& grid, const TerrainConfig& config, SolidRule rule,
                         GroundWeighting weighting) {
    TerrainStack stack;
    estimate_ground(grid, weighting, stack.ground, stack.validity);
    stack.slope = compute_slope(stack.ground, stack.validity, config);
    stack.obstacle = detect_obstacles(grid, stack.ground, stack.validity, rule, config);
    stack.cost = compute_cost(stack.validity, stack.slope, stack.obstacle, config);
    return stack;
}

void write_stack(const TerrainStack& stack, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_raster(stack.ground, dir / "ground");
    write_raster(stack.slope, dir / "slope");
    write_raster(stack.obstacle, dir / "obstacle");
    write_raster(stack.validity, dir / "validity");
    write_raster(stack.cost, dir / "cost");
}

}  // namespace radarmap
