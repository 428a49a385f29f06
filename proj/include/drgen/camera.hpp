#pragma once

#include <optional>

#include "drgen/math.hpp"

namespace drgen {

/// Continuous pixel position; (0,0) is the top-left corner of the image and
/// pixel (i,j) covers [i,i+1) x [j,j+1).
struct PixelCoord {
    double x = 0.0;
    double y = 0.0;
};

struct Resolution {
    int width = 0;
    int height = 0;
    friend bool operator==(const Resolution&, const Resolution&) = default;
};

/// Camera looks down its local -z axis with +y up. `pose` maps camera space to
/// world space and must have unit scale.
struct PinholeCamera {
    Transform pose;
    double vertical_fov = 0.8;
    Resolution resolution{1920, 1080};

    void validate() const;
    double aspect() const { return static_cast<double>(resolution.width) / resolution.height; }
    Vec3 position() const { return pose.translation; }
    Vec3 forward() const { return pose.apply_vector({0, 0, -1}); }

    /// Primary ray through a continuous pixel position (unit direction).
    Ray ray_through(double px, double py) const;

    friend bool operator==(const PinholeCamera&, const PinholeCamera&) = default;
};

/// Returns nullopt ("behind camera") for non-positive camera-space depth.
std::optional<PixelCoord> project_point(const PinholeCamera& camera, const Vec3& world_point);

/// Camera at `eye` looking at `target` with world +y as the up hint.
Transform look_at(const Vec3& eye, const Vec3& target, const Vec3& up = {0, 1, 0});

}  // namespace drgen
