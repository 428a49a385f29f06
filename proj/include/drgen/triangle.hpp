#pragma once

#include <optional>

#include "drgen/math.hpp"

namespace drgen {

struct TriangleHit {
    double t;
    double b1;  // barycentric weight of v1
    double b2;  // barycentric weight of v2
};

/// Two-sided Moller-Trumbore test. Reports hits with t in (t_min, t_max).
inline std::optional<TriangleHit> intersect_triangle(const Ray& ray, const Vec3& v0, const Vec3& v1, const Vec3& v2,
                                                     double t_min, double t_max) {
    const Vec3 e1 = v1 - v0;
    const Vec3 e2 = v2 - v0;
    const Vec3 p = cross(ray.direction, e2);
    const double det = dot(e1, p);
    if (det == 0.0 || !std::isfinite(det)) return std::nullopt;
    const double inv_det = 1.0 / det;
    const Vec3 s = ray.origin - v0;
    const double b1 = dot(s, p) * inv_det;
    if (b1 < 0.0 || b1 > 1.0) return std::nullopt;
    const Vec3 q = cross(s, e1);
    const double b2 = dot(ray.direction, q) * inv_det;
    if (b2 < 0.0 || b1 + b2 > 1.0) return std::nullopt;
    const double t = dot(e2, q) * inv_det;
    if (!(t > t_min && t < t_max)) return std::nullopt;
    return TriangleHit{t, b1, b2};
}

}  // namespace drgen
