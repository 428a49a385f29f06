#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "drgen/json_io.hpp"
#include "drgen/math.hpp"
#include "drgen/rng.hpp"

namespace drgen {

struct PartInstance;

inline constexpr double kMinRoughness = 0.02;
/// Dielectric reflectance at normal incidence when specular = 1.
inline constexpr double kDielectricF0 = 0.04;

enum class PatternKind { Checker, Stripe, Noise };

/// Object-space procedural pattern blending two colors.
struct TexturePattern {
    PatternKind kind = PatternKind::Checker;
    Rgb color_a{0.8, 0.8, 0.8};
    Rgb color_b{0.1, 0.1, 0.1};
    double frequency = 20.0;  // cycles per meter

    Rgb evaluate(const Vec3& object_point) const;
    friend bool operator==(const TexturePattern&, const TexturePattern&) = default;
};

/// Metallic-roughness parameter set. Colors are linear RGB.
struct MaterialSpec {
    Rgb base_color{0.5, 0.5, 0.5};
    double metalness = 0.0;
    double roughness = 0.5;
    double specular = 0.5;
    std::optional<TexturePattern> texture;

    /// Throws ConfigError naming the offending field.
    void validate(const std::string& where = "material") const;
    Rgb base_color_at(const Vec3& object_point) const { return texture ? texture->evaluate(object_point) : base_color; }
    friend bool operator==(const MaterialSpec&, const MaterialSpec&) = default;
};

struct MaterialLibrary {
    std::string name;
    std::vector<MaterialSpec> entries;

    void validate() const;
    friend bool operator==(const MaterialLibrary&, const MaterialLibrary&) = default;
};

enum class MaterialStrategy { ComplexLibrary, PhotoRealistic, RandomColor };

std::string_view to_string(MaterialStrategy s);
MaterialStrategy parse_material_strategy(std::string_view s);
std::string_view to_string(PatternKind k);
PatternKind parse_pattern_kind(std::string_view s);

// Stratification of the default library.
inline constexpr int kLibraryDielectrics = 40;
inline constexpr int kLibraryMetals = 30;
inline constexpr int kLibraryTextured = 45;
inline constexpr int kDefaultLibrarySize = kLibraryDielectrics + kLibraryMetals + kLibraryTextured;

/// Procedural 115-entry stand-in library: 40 textureless dielectrics with
/// hue-spread colors, 30 metals, 45 textured entries (15 each of checker,
/// stripe and noise). Deterministic in `seed`.
MaterialLibrary generate_default_library(std::uint64_t seed);

/// A material draw plus where it came from (library index for ComplexLibrary).
struct MaterialDraw {
    MaterialSpec spec;
    std::optional<std::size_t> library_index;
};

/// Fresh textureless material with every parameter uniform over its range.
MaterialSpec random_color_material(RandomStream& rng);

MaterialDraw draw_material(MaterialStrategy strategy, const MaterialLibrary& library, const PartInstance& part,
                           RandomStream& rng);
MaterialSpec sample_material(MaterialStrategy strategy, const MaterialLibrary& library, const PartInstance& part,
                             RandomStream& rng);

Rgb hsv_to_rgb(double h, double s, double v);

Json to_json(const MaterialSpec& m);
MaterialSpec material_from_json(const Json& j, const std::string& path);
/// JSON array of MaterialSpec records; the name travels separately.
Json to_json(const MaterialLibrary& lib);
MaterialLibrary library_from_json(const Json& j, const std::string& name = "library");

}  // namespace drgen
