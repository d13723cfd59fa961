#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

namespace radarmap {

// 2D scalar raster with NaN as the nodata sentinel. Cells are indexed from
// the south-west corner: at(ix, iy) with world x = origin_x + (ix + 0.5) * resolution.
// On disk the payload is stored north-up (northernmost row first).
struct RasterMap {
    int width = 0;
    int height = 0;
    double resolution = 0.0;
    double origin_x = 0.0;  // world x of the south-west cell corner
    double origin_y = 0.0;  // world y of the south-west cell corner
    std::vector<float> values;

    RasterMap() = default;
    RasterMap(int w, int h, double res, double ox, double oy,
              float fill = std::numeric_limits<float>::quiet_NaN())
        : width(w), height(h), resolution(res), origin_x(ox), origin_y(oy),
          values(static_cast<size_t>(w) * h, fill) {}

    float& at(int ix, int iy) { return values[static_cast<size_t>(iy) * width + ix]; }
    float at(int ix, int iy) const { return values[static_cast<size_t>(iy) * width + ix]; }

    bool in_bounds(int ix, int iy) const {
        return ix >= 0 && ix < width && iy >= 0 && iy < height;
    }

    bool same_shape(const RasterMap& other) const {
        return width == other.width && height == other.height &&
               resolution == other.resolution && origin_x == other.origin_x &&
               origin_y == other.origin_y;
    }
};

// Writes `base.json` (header) and `base.f32` (little-endian float32 payload,
// row-major, north-up). Round trips are bit-exact, including NaN cells.
void write_raster(const RasterMap& map, const std::filesystem::path& base);
RasterMap read_raster(const std::filesystem::path& base);

}  // namespace radarmap
