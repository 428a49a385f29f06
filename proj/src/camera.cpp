#include "drgen/camera.hpp"

#include "drgen/error.hpp"

namespace drgen {

void PinholeCamera::validate() const {
    if (resolution.width < 16 || resolution.height < 16)
        throw ConfigError("camera.resolution", "must be at least 16x16, got " + std::to_string(resolution.width) + "x" +
                                                   std::to_string(resolution.height));
    if (!std::isfinite(vertical_fov) || vertical_fov <= 0.0 || vertical_fov >= kPi)
        throw ConfigError("camera.vertical_fov", "must be finite and in (0, pi)");
    if (std::abs(pose.scale - 1.0) > 1e-12) throw ConfigError("camera.scale", "camera pose must have unit scale");
    if (!is_finite(pose.translation)) throw ConfigError("camera.translation", "must be finite");
}

Ray PinholeCamera::ray_through(double px, double py) const {
    const double tan_half = std::tan(0.5 * vertical_fov);
    const double ndc_x = 2.0 * px / resolution.width - 1.0;
    const double ndc_y = 1.0 - 2.0 * py / resolution.height;
    const Vec3 local{ndc_x * tan_half * aspect(), ndc_y * tan_half, -1.0};
    return {pose.translation, normalize(pose.rotation_matrix() * local)};
}

std::optional<PixelCoord> project_point(const PinholeCamera& camera, const Vec3& world_point) {
    const Vec3 local = camera.pose.rotation_matrix().transposed() * (world_point - camera.pose.translation);
    const double depth = -local.z;
    if (!(depth > 0.0)) return std::nullopt;
    const double tan_half = std::tan(0.5 * camera.vertical_fov);
    const double ndc_x = local.x / (depth * tan_half * camera.aspect());
    const double ndc_y = local.y / (depth * tan_half);
    return PixelCoord{0.5 * (ndc_x + 1.0) * camera.resolution.width, 0.5 * (1.0 - ndc_y) * camera.resolution.height};
}

Transform look_at(const Vec3& eye, const Vec3& target, const Vec3& up) {
    const Vec3 back = normalize(eye - target);
    Vec3 right = cross(up, back);
    if (length(right) < 1e-12) right = cross(Vec3{0, 0, 1}, back);
    right = normalize(right);
    const Vec3 true_up = cross(back, right);
    Mat3 r{{right.x, true_up.x, back.x, right.y, true_up.y, back.y, right.z, true_up.z, back.z}};
    return Transform{Quat::from_matrix(r), eye, 1.0};
}

}  // namespace drgen
