#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "radarmap/geometry.hpp"
#include "radarmap/json_util.hpp"

namespace radarmap {

// Terrain elevation over the world rectangle. "flat" and "plane" are
// analytic; "sine" gives rolling terrain; "grid" interpolates an inline
// heightfield bilinearly (clamped at the edges).
class HeightField {
public:
    enum class Kind { kFlat, kPlane, kSine, kGrid };

    static HeightField flat(double height);
    static HeightField plane(double height, double gradient_x, double gradient_y);
    static HeightField sine(double base, double amplitude_x, double wavelength_x, double phase_x,
                            double amplitude_y, double wavelength_y, double phase_y);
    static HeightField grid(double origin_x, double origin_y, double resolution, int width,
                            int height, std::vector<double> heights);

    Kind kind() const { return kind_; }
    double height_at(double x, double y) const;
    // Central-difference surface gradient (analytic fields included, for
    // uniformity a small epsilon is used everywhere).
    Eigen::Vector2d gradient_at(double x, double y) const;
    double max_height() const { return max_height_; }
    bool is_planar() const { return kind_ == Kind::kFlat || kind_ == Kind::kPlane; }
    // Plane coefficients h(x, y) = base + gx * x + gy * y (planar fields only).
    void plane_coefficients(double& base, double& gx, double& gy) const;

    Json to_json() const;
    static HeightField from_json(const Json& j);

private:
    HeightField() = default;

    Kind kind_ = Kind::kFlat;
    double base_ = 0.0;
    double gradient_x_ = 0.0, gradient_y_ = 0.0;
    double amp_x_ = 0.0, wavelength_x_ = 1.0, phase_x_ = 0.0;
    double amp_y_ = 0.0, wavelength_y_ = 1.0, phase_y_ = 0.0;
    double grid_origin_x_ = 0.0, grid_origin_y_ = 0.0, grid_resolution_ = 1.0;
    int grid_width_ = 0, grid_height_ = 0;
    std::vector<double> grid_heights_;
    double max_height_ = 0.0;
};

// Angular extent of an object footprint as seen from a 2D viewpoint.
struct AzimuthExtent {
    bool contains_viewpoint = false;
    double center = 0.0;  // world azimuth toward the footprint, radians
    double lo = 0.0;      // offsets from center; lo <= 0 <= hi
    double hi = 0.0;
};

struct SceneObject {
    enum class Kind { kBox, kCylinder };

    Kind kind = Kind::kBox;
    Eigen::Vector2d center{0.0, 0.0};
    double z_base = 0.0;
    double height = 1.0;
    // Box footprint
    double size_x = 1.0, size_y = 1.0, yaw = 0.0;
    // Cylinder footprint
    double radius = 0.5;

    double reflectivity = 0.9;
    double transmissivity = 0.0;

    void validate(const std::string& context) const;

    double z_top() const { return z_base + height; }
    double footprint_radius() const;

    AzimuthExtent azimuth_extent(const Eigen::Vector2d& viewpoint) const;

    // Horizontal entry/exit distances of a 2D ray through the footprint.
    bool footprint_ray_hit(const Eigen::Vector2d& origin, const Eigen::Vector2d& dir,
                           double& t_near, double& t_far) const;

    // Nearest horizontal distance from the viewpoint to the footprint
    // (0 when inside). Used for range binning of grazing beams.
    double footprint_near_distance(const Eigen::Vector2d& viewpoint) const;

    // Full 3D ray intersection; returns the nearest positive t.
    std::optional<double> ray_hit(const Eigen::Vector3d& origin, const Eigen::Vector3d& dir) const;

    Json to_json() const;
    static SceneObject from_json(const Json& j);
};

struct SceneBounds {
    double min_x = -100.0, min_y = -100.0, max_x = 100.0, max_y = 100.0;

    bool contains(double x, double y) const {
        return x >= min_x && x <= max_x && y >= min_y && y <= max_y;
    }
};

struct Scene {
    SceneBounds bounds;
    HeightField ground = HeightField::flat(0.0);
    double ground_reflectivity = 0.5;
    std::vector<SceneObject> objects;

    void validate() const;
    Json to_json() const;
    static Scene from_json(const Json& j);
    static Scene load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;

    // Nearest ground intersection of a world ray within max_range, or
    // nothing. Planar fields solve in closed form, the rest march and
    // bisect.
    std::optional<double> ray_ground_hit(const Eigen::Vector3d& origin, const Eigen::Vector3d& dir,
                                         double max_range) const;
};

}  // namespace radarmap
