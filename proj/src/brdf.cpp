#include "drgen/brdf.hpp"

#include <algorithm>
#include <cmath>

namespace drgen {

namespace {

double pow5(double x) {
    const double x2 = x * x;
    return x2 * x2 * x;
}

Vec3 reflect(const Vec3& w, const Vec3& h) { return 2.0 * dot(w, h) * h - w; }

}  // namespace

double ggx_d(double alpha, const Vec3& h) {
    if (h.z <= 0.0) return 0.0;
    const double a2 = alpha * alpha;
    const double c2 = h.z * h.z;
    const double d = c2 * (a2 - 1.0) + 1.0;
    return a2 / (kPi * d * d);
}

double smith_g1(double alpha, const Vec3& w) {
    const double c = w.z;
    if (c <= 0.0) return 0.0;
    const double a2 = alpha * alpha;
    return 2.0 * c / (c + std::sqrt(a2 + (1.0 - a2) * c * c));
}

Brdf Brdf::from(const MaterialSpec& m, const Rgb& base_color) {
    const double r = std::max(m.roughness, kMinRoughness);
    return Brdf{base_color, m.metalness, m.specular, r * r};
}

Rgb Brdf::fresnel(double cos_theta) const {
    const double k = pow5(1.0 - std::clamp(cos_theta, 0.0, 1.0));
    const double dielectric = specular * (kDielectricF0 + (1.0 - kDielectricF0) * k);
    const Rgb metal = base + (Rgb{1, 1, 1} - base) * k;
    return Rgb{dielectric, dielectric, dielectric} * (1.0 - metalness) + metal * metalness;
}

Rgb Brdf::eval(const Vec3& wo, const Vec3& wi) const {
    if (wo.z <= 0.0 || wi.z <= 0.0) return {};
    const Rgb one{1, 1, 1};
    Rgb f = base * ((1.0 - metalness) * kInvPi) * (one - fresnel(wo.z)) * (one - fresnel(wi.z));
    const Vec3 hsum = wo + wi;
    const double hl = length(hsum);
    if (hl > 0.0) {
        const Vec3 h = hsum / hl;
        const double spec = ggx_d(alpha, h) * smith_g1(alpha, wo) * smith_g1(alpha, wi) / (4.0 * wo.z * wi.z);
        f += fresnel(dot(wo, h)) * spec;
    }
    return f;
}

double Brdf::specular_probability(const Vec3& wo) const {
    const Rgb fo = fresnel(wo.z);
    const double ws = luminance(fo);
    const double wd = luminance(base * (1.0 - metalness) * (Rgb{1, 1, 1} - fo));
    if (ws <= 0.0) return 0.0;
    if (wd <= 0.0) return 1.0;
    return std::clamp(ws / (ws + wd), 0.1, 0.9);
}

double Brdf::pdf(const Vec3& wo, const Vec3& wi) const {
    if (wo.z <= 0.0 || wi.z <= 0.0) return 0.0;
    const double ps = specular_probability(wo);
    double p = (1.0 - ps) * wi.z * kInvPi;
    if (ps > 0.0) {
        const Vec3 hsum = wo + wi;
        const double hl = length(hsum);
        if (hl > 0.0) {
            const Vec3 h = hsum / hl;
            p += ps * smith_g1(alpha, wo) * ggx_d(alpha, h) / (4.0 * wo.z);
        }
    }
    return p;
}

Brdf::Sample Brdf::sample(const Vec3& wo, double u1, double u2, double u3) const {
    Sample s;
    if (wo.z <= 0.0) return s;
    const double ps = specular_probability(wo);
    if (u1 < ps) {
        // Visible-normal sampling of the GGX distribution.
        const Vec3 vh = normalize(Vec3{alpha * wo.x, alpha * wo.y, wo.z});
        const double lensq = vh.x * vh.x + vh.y * vh.y;
        const Vec3 t1 = lensq > 0.0 ? Vec3{-vh.y, vh.x, 0.0} / std::sqrt(lensq) : Vec3{1, 0, 0};
        const Vec3 t2 = cross(vh, t1);
        const double r = std::sqrt(u2);
        const double phi = kTwoPi * u3;
        const double p1 = r * std::cos(phi);
        const double sw = 0.5 * (1.0 + vh.z);
        const double p2 = (1.0 - sw) * std::sqrt(std::max(0.0, 1.0 - p1 * p1)) + sw * r * std::sin(phi);
        const Vec3 nh = t1 * p1 + t2 * p2 + vh * std::sqrt(std::max(0.0, 1.0 - p1 * p1 - p2 * p2));
        const Vec3 h = normalize(Vec3{alpha * nh.x, alpha * nh.y, std::max(0.0, nh.z)});
        s.wi = reflect(wo, h);
    } else {
        const double r = std::sqrt(u2);
        const double phi = kTwoPi * u3;
        s.wi = Vec3{r * std::cos(phi), r * std::sin(phi), std::sqrt(std::max(0.0, 1.0 - u2))};
    }
    if (s.wi.z <= 0.0) return Sample{};
    s.pdf = pdf(wo, s.wi);
    if (!(s.pdf > 0.0)) return Sample{};
    s.f = eval(wo, s.wi);
    return s;
}

}  // namespace drgen
