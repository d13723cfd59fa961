#include "radarmap/raster.hpp"

#include <cstring>
#include <fstream>

#include "radarmap/errors.hpp"
#include "radarmap/json_util.hpp"

namespace radarmap {

namespace {

std::filesystem::path header_path(const std::filesystem::path& base) {
    std::filesystem::path p = base;
    p += ".json";
    return p;
}

std::filesystem::path payload_path(const std::filesystem::path& base) {
    std::filesystem::path p = base;
    p += ".f32";
    return p;
}

}  // namespace

void write_raster(const RasterMap& map, const std::filesystem::path& base) {
    if (map.width <= 0 || map.height <= 0) {
        throw FormatError("write_raster: empty raster for " + base.string());
    }
    Json header;
    header["width"] = map.width;
    header["height"] = map.height;
    header["resolution"] = map.resolution;
    header["origin"] = Json::array({map.origin_x, map.origin_y});
    header["nodata"] = "nan";
    header["dtype"] = "float32";
    header["byte_order"] = "little";
    header["layout"] = "row-major-north-up";

    std::ofstream hdr(header_path(base));
    if (!hdr) throw IoError("cannot write " + header_path(base).string());
    hdr << header.dump(2) << "\n";

    std::ofstream out(payload_path(base), std::ios::binary);
    if (!out) throw IoError("cannot write " + payload_path(base).string());
    // North-up on disk: write rows from max y down to min y.
    for (int iy = map.height - 1; iy >= 0; --iy) {
        out.write(reinterpret_cast<const char*>(&map.values[static_cast<size_t>(iy) * map.width]),
                  static_cast<std::streamsize>(sizeof(float)) * map.width);
    }
    if (!out) throw IoError("short write to " + payload_path(base).string());
}

RasterMap read_raster(const std::filesystem::path& base) {
    std::ifstream hdr(header_path(base));
    if (!hdr) throw IoError("cannot open " + header_path(base).string());
    Json header;
    try {
        header = Json::parse(hdr);
    } catch (const std::exception& e) {
        throw FormatError("bad raster header " + header_path(base).string() + ": " + e.what());
    }

    RasterMap map;
    map.width = jsonutil::require(header, "width", "raster header").get<int>();
    map.height = jsonutil::require(header, "height", "raster header").get<int>();
    map.resolution = jsonutil::require(header, "resolution", "raster header").get<double>();
    const auto& origin = jsonutil::require(header, "origin", "raster header");
    map.origin_x = origin.at(0).get<double>();
    map.origin_y = origin.at(1).get<double>();
    if (map.width <= 0 || map.height <= 0 || map.resolution <= 0.0) {
        throw FormatError("raster header has non-positive dims/resolution: " +
                          header_path(base).string());
    }

    std::ifstream in(payload_path(base), std::ios::binary);
    if (!in) throw IoError("cannot open " + payload_path(base).string());
    in.seekg(0, std::ios::end);
    const auto bytes = static_cast<size_t>(in.tellg());
    in.seekg(0, std::ios::beg);
    const size_t expected = static_cast<size_t>(map.width) * map.height * sizeof(float);
    if (bytes != expected) {
        throw FormatError("raster payload size mismatch for " + payload_path(base).string() +
                          ": header implies " + std::to_string(expected) + " bytes, file has " +
                          std::to_string(bytes));
    }
    map.values.resize(static_cast<size_t>(map.width) * map.height);
    for (int iy = map.height - 1; iy >= 0; --iy) {
        in.read(reinterpret_cast<char*>(&map.values[static_cast<size_t>(iy) * map.width]),
                static_cast<std::streamsize>(sizeof(float)) * map.width);
    }
    if (!in) throw IoError("short read from " + payload_path(base).string());
    return map;
}

}  // namespace radarmap
