#include "drgen/environment.hpp"

#include <algorithm>
#include <numeric>

#include "drgen/error.hpp"

namespace drgen {

AliasTable::AliasTable(const std::vector<double>& weights) {
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (!(total > 0.0)) return;
    const std::size_t n = weights.size();
    prob_.assign(n, 0.0);
    alias_.assign(n, 0);
    pmf_.resize(n);

    std::vector<double> scaled(n);
    std::vector<std::uint32_t> small, large;
    for (std::size_t i = 0; i < n; ++i) {
        pmf_[i] = weights[i] / total;
        scaled[i] = pmf_[i] * static_cast<double>(n);
        (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
    }
    while (!small.empty() && !large.empty()) {
        const std::uint32_t s = small.back();
        small.pop_back();
        const std::uint32_t l = large.back();
        prob_[s] = scaled[s];
        alias_[s] = l;
        scaled[l] = (scaled[l] + scaled[s]) - 1.0;
        if (scaled[l] < 1.0) {
            large.pop_back();
            small.push_back(l);
        }
    }
    for (const std::uint32_t i : large) prob_[i] = 1.0;
    // Leftovers in `small` come from rounding; they are full columns.
    for (const std::uint32_t i : small) prob_[i] = 1.0;
}

std::size_t AliasTable::sample(double u1, double u2) const {
    const std::size_t i = std::min(static_cast<std::size_t>(u1 * static_cast<double>(prob_.size())), prob_.size() - 1);
    return u2 < prob_[i] ? i : alias_[i];
}

namespace {

struct EquirectCoord {
    double u, v;
};

EquirectCoord to_uv(const Vec3& d) {
    double u = std::atan2(d.x, -d.z) * (0.5 * kInvPi);
    if (u < 0.0) u += 1.0;
    const double v = std::acos(std::clamp(d.y, -1.0, 1.0)) * kInvPi;
    return {u, v};
}

Vec3 from_uv(double u, double v) {
    const double phi = kTwoPi * u, theta = kPi * v;
    const double st = std::sin(theta);
    return {std::sin(phi) * st, std::cos(theta), -std::cos(phi) * st};
}

}  // namespace

EnvironmentMap::EnvironmentMap(Image radiance) : image_(std::move(radiance)) {
    if (image_.width < 8 || image_.height < 4)
        throw ConfigError("environment", "map must be at least 8x4, got " + std::to_string(image_.width) + "x" +
                                             std::to_string(image_.height));
    std::vector<double> weights(image_.pixel_count());
    for (int y = 0; y < image_.height; ++y) {
        const double sin_theta = std::sin(kPi * (y + 0.5) / image_.height);
        for (int x = 0; x < image_.width; ++x) {
            const Rgb c = image_.at(x, y);
            if (!is_finite(c) || c.x < 0 || c.y < 0 || c.z < 0)
                throw ConfigError("environment", "radiance values must be finite and non-negative");
            max_radiance_ = std::max(max_radiance_, max_component(c));
            weights[static_cast<std::size_t>(y) * static_cast<std::size_t>(image_.width) +
                    static_cast<std::size_t>(x)] = luminance(c) * sin_theta;
        }
    }
    table_ = AliasTable(weights);

    double total = 0.0, solid = 0.0;
    for (int y = 0; y < image_.height; ++y) solid += std::sin(kPi * (y + 0.5) / image_.height) * image_.width;
    for (const double w : weights) total += w;
    if (total > 0.0) {
        const double mean = total / solid;
        double above = 0.0;
        for (int y = 0; y < image_.height; ++y) {
            const double sin_theta = std::sin(kPi * (y + 0.5) / image_.height);
            for (int x = 0; x < image_.width; ++x)
                above += std::max(0.0, luminance(image_.at(x, y)) - mean) * sin_theta;
        }
        light_sample_rate_ = std::clamp(above / total, kMinLightSampleRate, 1.0);
    }
}

std::shared_ptr<const EnvironmentMap> EnvironmentMap::constant(const Rgb& radiance) {
    return std::make_shared<const EnvironmentMap>(Image(8, 4, radiance));
}

std::shared_ptr<const EnvironmentMap> EnvironmentMap::load(const std::filesystem::path& hdr_path) {
    return std::make_shared<const EnvironmentMap>(load_hdr(hdr_path));
}

Rgb EnvironmentMap::lookup(const Vec3& local_dir) const {
    const auto [u, v] = to_uv(local_dir);
    return image_.sample_nearest(u, v);
}

DirectionSample EnvironmentMap::sample(double u1, double u2, double u3, double u4) const {
    if (table_.empty()) return {};
    const std::size_t i = table_.sample(u1, u2);
    const int x = static_cast<int>(i % static_cast<std::size_t>(image_.width));
    const int y = static_cast<int>(i / static_cast<std::size_t>(image_.width));
    const double u = (x + u3) / image_.width;
    const double v = (y + u4) / image_.height;
    const double sin_theta = std::sin(kPi * v);
    if (!(sin_theta > 0.0)) return {};
    const double pdf =
        table_.probability(i) * static_cast<double>(image_.pixel_count()) / (2.0 * kPi * kPi * sin_theta);
    return {from_uv(u, v), pdf};
}

double EnvironmentMap::pdf(const Vec3& local_dir) const {
    if (table_.empty()) return 0.0;
    const auto [u, v] = to_uv(local_dir);
    const double sin_theta = std::sin(kPi * v);
    if (!(sin_theta > 0.0)) return 0.0;
    const int x = std::clamp(static_cast<int>(u * image_.width), 0, image_.width - 1);
    const int y = std::clamp(static_cast<int>(v * image_.height), 0, image_.height - 1);
    const std::size_t i =
        static_cast<std::size_t>(y) * static_cast<std::size_t>(image_.width) + static_cast<std::size_t>(x);
    return table_.probability(i) * static_cast<double>(image_.pixel_count()) / (2.0 * kPi * kPi * sin_theta);
}

void EnvironmentLight::validate() const {
    if (!map) throw ConfigError("environment", "no environment map bound");
    if (!(intensity_scale > 0.0) || !std::isfinite(intensity_scale))
        throw ConfigError("environment.intensity_scale", "must be positive");
    if (!is_finite(color_tint) || color_tint.x < 0 || color_tint.y < 0 || color_tint.z < 0)
        throw ConfigError("environment.color_tint", "must be finite and non-negative");
}

namespace {
// Rotating the light by +a about y rotates directions into the map frame by -a.
Vec3 rotate_y(const Vec3& d, double a) {
    const double c = std::cos(a), s = std::sin(a);
    return {c * d.x + s * d.z, d.y, -s * d.x + c * d.z};
}
}  // namespace

Rgb EnvironmentLight::radiance(const Vec3& world_dir) const {
    return map->lookup(rotate_y(world_dir, -rotation)) * intensity_scale * color_tint;
}

DirectionSample EnvironmentLight::sample(double u1, double u2, double u3, double u4) const {
    DirectionSample s = map->sample(u1, u2, u3, u4);
    s.direction = rotate_y(s.direction, rotation);
    return s;
}

double EnvironmentLight::pdf(const Vec3& world_dir) const { return map->pdf(rotate_y(world_dir, -rotation)); }

}  // namespace drgen
