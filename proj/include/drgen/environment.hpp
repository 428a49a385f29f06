#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <vector>

#include "drgen/image.hpp"
#include "drgen/math.hpp"

namespace drgen {

/// Walker/Vose alias table: O(1) sampling of a discrete distribution.
class AliasTable {
public:
    AliasTable() = default;
    /// Weights must be finite and >= 0. An all-zero input yields an empty table.
    explicit AliasTable(const std::vector<double>& weights);

    bool empty() const { return prob_.empty(); }
    std::size_t size() const { return prob_.size(); }
    /// u1, u2 uniform in [0,1).
    std::size_t sample(double u1, double u2) const;
    double probability(std::size_t i) const { return pmf_[i]; }

private:
    std::vector<double> prob_;
    std::vector<std::uint32_t> alias_;
    std::vector<double> pmf_;
};

inline constexpr double kMinLightSampleRate = 0.05;

struct DirectionSample {
    Vec3 direction;
    double pdf = 0.0;  // solid angle
};

/// Equirectangular radiance map plus its luminance importance table.
/// Local frame: +y up; u = atan2(x, -z) / 2pi, v = acos(y) / pi.
class EnvironmentMap {
public:
    explicit EnvironmentMap(Image radiance);

    static std::shared_ptr<const EnvironmentMap> constant(const Rgb& radiance);
    static std::shared_ptr<const EnvironmentMap> load(const std::filesystem::path& hdr_path);

    const Image& image() const { return image_; }
    Rgb lookup(const Vec3& local_dir) const;
    /// Returns pdf = 0 when the map is black everywhere.
    DirectionSample sample(double u1, double u2, double u3, double u4) const;
    double pdf(const Vec3& local_dir) const;
    double max_radiance() const { return max_radiance_; }
    /// MIS allocation of the light-sampling technique relative to BRDF
    /// sampling: the share of the map's energy above its mean radiance,
    /// floored at kMinLightSampleRate. Flat maps lean on BRDF sampling,
    /// peaked maps on light sampling.
    double light_sample_rate() const { return light_sample_rate_; }

private:
    Image image_;
    AliasTable table_;
    double max_radiance_ = 0.0;
    double light_sample_rate_ = 0.0;
};

/// Environment light: a map rotated about the vertical axis, scaled and tinted.
struct EnvironmentLight {
    std::shared_ptr<const EnvironmentMap> map;
    double rotation = 0.0;  // radians about +y
    double intensity_scale = 1.0;
    Rgb color_tint{1, 1, 1};

    void validate() const;
    Rgb radiance(const Vec3& world_dir) const;
    DirectionSample sample(double u1, double u2, double u3, double u4) const;
    double pdf(const Vec3& world_dir) const;

    static EnvironmentLight constant(const Rgb& radiance) { return {EnvironmentMap::constant(radiance)}; }
};

}  // namespace drgen
