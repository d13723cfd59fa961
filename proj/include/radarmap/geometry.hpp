#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

namespace radarmap {

// World pose of the vehicle body frame (x forward, y left, z up).
struct Pose {
    Eigen::Vector3d position{Eigen::Vector3d::Zero()};
    Eigen::Quaterniond orientation{Eigen::Quaterniond::Identity()};

    Eigen::Vector3d transform(const Eigen::Vector3d& body_point) const {
        return orientation * body_point + position;
    }
};

inline Pose interpolate(const Pose& a, const Pose& b, double alpha) {
    Pose out;
    out.position = (1.0 - alpha) * a.position + alpha * b.position;
    // Eigen slerp already takes the shortest arc.
    out.orientation = a.orientation.slerp(alpha, b.orientation).normalized();
    return out;
}

inline Eigen::Quaterniond yaw_pitch_to_quat(double yaw, double pitch) {
    return Eigen::Quaterniond(Eigen::AngleAxisd(yaw, Eigen::Vector3d::UnitZ()) *
                              Eigen::AngleAxisd(pitch, Eigen::Vector3d::UnitY()));
}

}  // namespace radarmap
