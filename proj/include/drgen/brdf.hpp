#pragma once

#include "drgen/material.hpp"
#include "drgen/math.hpp"

namespace drgen {

/// Metallic-roughness BRDF resolved at a surface point. Directions are in the
/// local shading frame (+z = shading normal) and point away from the surface.
///
/// f = kd * base/pi * (1 - F(cos_o)) * (1 - F(cos_i)) + F(o.h) D(h) G(o,i) / (4 cos_o cos_i)
///
/// with GGX D, separable Smith G and Schlick F. The dielectric Fresnel term is
/// scaled by `specular`, so specular = 0, metalness = 0 is pure Lambertian.
struct Brdf {
    Rgb base{0.5, 0.5, 0.5};
    double metalness = 0.0;
    double specular = 0.5;
    double alpha = 0.25;  // GGX width, roughness squared

    static Brdf from(const MaterialSpec& m, const Rgb& base_color);

    Rgb fresnel(double cos_theta) const;
    Rgb eval(const Vec3& wo, const Vec3& wi) const;
    double pdf(const Vec3& wo, const Vec3& wi) const;

    struct Sample {
        Vec3 wi;
        Rgb f;
        double pdf = 0.0;
    };
    /// u1 picks the lobe; (u2, u3) drive the lobe's warp. pdf = 0 on failure.
    Sample sample(const Vec3& wo, double u1, double u2, double u3) const;

    /// Probability of choosing the specular lobe for a given outgoing direction.
    double specular_probability(const Vec3& wo) const;
};

double ggx_d(double alpha, const Vec3& h);
double smith_g1(double alpha, const Vec3& w);

}  // namespace drgen
