#include "drgen/material.hpp"

#include <array>

#include "drgen/error.hpp"
#include "drgen/image.hpp"
#include "drgen/scene.hpp"

namespace drgen {

namespace {

double lattice(std::int64_t x, std::int64_t y, std::int64_t z) {
    const std::uint64_t h =
        mix_seed(static_cast<std::uint64_t>(x), static_cast<std::uint64_t>(y), static_cast<std::uint64_t>(z));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double smooth(double t) { return t * t * (3.0 - 2.0 * t); }

double value_noise(const Vec3& p) {
    const double fx = std::floor(p.x), fy = std::floor(p.y), fz = std::floor(p.z);
    const auto ix = static_cast<std::int64_t>(fx), iy = static_cast<std::int64_t>(fy),
               iz = static_cast<std::int64_t>(fz);
    const double tx = smooth(p.x - fx), ty = smooth(p.y - fy), tz = smooth(p.z - fz);
    double acc = 0.0;
    for (int c = 0; c < 8; ++c) {
        const int dx = c & 1, dy = (c >> 1) & 1, dz = (c >> 2) & 1;
        const double w = (dx ? tx : 1 - tx) * (dy ? ty : 1 - ty) * (dz ? tz : 1 - tz);
        acc += w * lattice(ix + dx, iy + dy, iz + dz);
    }
    return acc;
}

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

void check_color(const Rgb& c, const std::string& field) {
    for (int k = 0; k < 3; ++k)
        if (!in_unit(c[k])) throw ConfigError(field, "color channels must lie in [0,1]");
}

}  // namespace

Rgb TexturePattern::evaluate(const Vec3& object_point) const {
    // Fixed offset keeps pattern edges off axis-aligned faces through the origin.
    const Vec3 p = object_point * frequency + Vec3{0.371, 0.529, 0.213};
    double t = 0.0;
    switch (kind) {
        case PatternKind::Checker: {
            const auto s = static_cast<std::int64_t>(std::floor(p.x)) + static_cast<std::int64_t>(std::floor(p.y)) +
                           static_cast<std::int64_t>(std::floor(p.z));
            t = (s & 1) ? 1.0 : 0.0;
            break;
        }
        case PatternKind::Stripe: t = (static_cast<std::int64_t>(std::floor(p.x + p.y)) & 1) ? 1.0 : 0.0; break;
        case PatternKind::Noise:
            t = 0.5 * value_noise(p) + 0.3 * value_noise(p * 2.0 + Vec3{17, 5, 3}) + 0.2 * value_noise(p * 4.0);
            break;
    }
    return color_a * (1.0 - t) + color_b * t;
}

void MaterialSpec::validate(const std::string& where) const {
    check_color(base_color, where + ".base_color");
    if (!in_unit(metalness)) throw ConfigError(where + ".metalness", "must lie in [0,1]");
    if (!(roughness >= kMinRoughness && roughness <= 1.0))
        throw ConfigError(where + ".roughness", "must lie in [0.02,1]");
    if (!in_unit(specular)) throw ConfigError(where + ".specular", "must lie in [0,1]");
    if (texture) {
        check_color(texture->color_a, where + ".texture.color_a");
        check_color(texture->color_b, where + ".texture.color_b");
        if (!(texture->frequency > 0.0) || !std::isfinite(texture->frequency))
            throw ConfigError(where + ".texture.frequency", "must be positive and finite");
    }
}

void MaterialLibrary::validate() const {
    if (entries.empty()) throw ConfigError("materials", "library '" + name + "' has no entries");
    for (std::size_t i = 0; i < entries.size(); ++i) entries[i].validate("materials[" + std::to_string(i) + "]");
}

std::string_view to_string(MaterialStrategy s) {
    switch (s) {
        case MaterialStrategy::ComplexLibrary: return "complex_library";
        case MaterialStrategy::PhotoRealistic: return "photo_realistic";
        case MaterialStrategy::RandomColor: return "random_color";
    }
    return "complex_library";
}

MaterialStrategy parse_material_strategy(std::string_view s) {
    if (s == "complex_library") return MaterialStrategy::ComplexLibrary;
    if (s == "photo_realistic") return MaterialStrategy::PhotoRealistic;
    if (s == "random_color") return MaterialStrategy::RandomColor;
    throw ConfigError(
        "randomization.material_strategy",
        "unknown strategy '" + std::string(s) + "' (expected complex_library, photo_realistic or random_color)");
}

std::string_view to_string(PatternKind k) {
    switch (k) {
        case PatternKind::Checker: return "checker";
        case PatternKind::Stripe: return "stripe";
        case PatternKind::Noise: return "noise";
    }
    return "checker";
}

PatternKind parse_pattern_kind(std::string_view s) {
    if (s == "checker") return PatternKind::Checker;
    if (s == "stripe") return PatternKind::Stripe;
    if (s == "noise") return PatternKind::Noise;
    throw ConfigError("texture.kind", "unknown pattern '" + std::string(s) + "'");
}

Rgb hsv_to_rgb(double h, double s, double v) {
    h = (h - std::floor(h)) * 6.0;
    const int sector = static_cast<int>(h) % 6;
    const double f = h - std::floor(h);
    const double p = v * (1 - s), q = v * (1 - s * f), t = v * (1 - s * (1 - f));
    switch (sector) {
        case 0: return {v, t, p};
        case 1: return {q, v, p};
        case 2: return {p, v, t};
        case 3: return {p, q, v};
        case 4: return {t, p, v};
        default: return {v, p, q};
    }
}

namespace {

Rgb linear_from_display(const Rgb& c) { return {srgb_decode(c.x), srgb_decode(c.y), srgb_decode(c.z)}; }

Rgb random_display_color(RandomStream& rng) {
    return linear_from_display(hsv_to_rgb(rng.uniform(), rng.uniform(0.2, 0.95), rng.uniform(0.1, 0.95)));
}

Rgb clamp01(const Rgb& c) { return {std::clamp(c.x, 0.0, 1.0), std::clamp(c.y, 0.0, 1.0), std::clamp(c.z, 0.0, 1.0)}; }

}  // namespace

MaterialLibrary generate_default_library(std::uint64_t seed) {
    RandomStream rng(mix_seed(seed, 0x6d6174657269616cull));
    MaterialLibrary lib;
    lib.name = "complex-115";
    lib.entries.reserve(kDefaultLibrarySize);

    for (int k = 0; k < kLibraryDielectrics; ++k) {
        MaterialSpec m;
        const double hue = (k + rng.uniform()) / kLibraryDielectrics;
        m.base_color = linear_from_display(hsv_to_rgb(hue, rng.uniform(0.2, 0.9), rng.uniform(0.15, 0.95)));
        m.metalness = rng.uniform(0.0, 0.05);
        m.roughness = rng.uniform(kMinRoughness, 1.0);
        m.specular = rng.uniform();
        lib.entries.push_back(m);
    }

    // Reflectance tints of common metals (silver, gold, copper, aluminium,
    // iron, chrome, brass, titanium), perturbed per entry.
    static constexpr std::array<Rgb, 8> kMetalTints{Rgb{0.97, 0.96, 0.91}, Rgb{1.00, 0.78, 0.34}, Rgb{0.96, 0.64, 0.54},
                                                    Rgb{0.91, 0.92, 0.92}, Rgb{0.56, 0.57, 0.58}, Rgb{0.55, 0.56, 0.55},
                                                    Rgb{0.91, 0.78, 0.42}, Rgb{0.54, 0.50, 0.45}};
    for (int k = 0; k < kLibraryMetals; ++k) {
        MaterialSpec m;
        const Rgb tint = kMetalTints[static_cast<std::size_t>(k) % kMetalTints.size()];
        const double jitter = rng.uniform(0.85, 1.0);
        m.base_color = clamp01(
            Vec3{tint.x * rng.uniform(0.9, 1.05), tint.y * rng.uniform(0.9, 1.05), tint.z * rng.uniform(0.9, 1.05)} *
            jitter);
        m.metalness = rng.uniform(0.9, 1.0);
        m.roughness = rng.uniform(kMinRoughness, 1.0);
        m.specular = rng.uniform();
        lib.entries.push_back(m);
    }

    static constexpr std::array<PatternKind, 3> kKinds{PatternKind::Checker, PatternKind::Stripe, PatternKind::Noise};
    for (int k = 0; k < kLibraryTextured; ++k) {
        MaterialSpec m;
        TexturePattern t;
        t.kind = kKinds[static_cast<std::size_t>(k) % kKinds.size()];
        t.color_a = random_display_color(rng);
        t.color_b = random_display_color(rng);
        t.frequency = rng.log_uniform(5.0, 200.0);
        m.base_color = t.color_a;
        m.texture = t;
        m.metalness = rng.uniform();
        m.roughness = rng.uniform(kMinRoughness, 1.0);
        m.specular = rng.uniform();
        lib.entries.push_back(m);
    }
    return lib;
}

MaterialSpec random_color_material(RandomStream& rng) {
    MaterialSpec m;
    m.base_color = {rng.uniform(), rng.uniform(), rng.uniform()};
    m.roughness = rng.uniform(kMinRoughness, 1.0);
    m.specular = rng.uniform();
    m.metalness = rng.uniform();
    return m;
}

MaterialDraw draw_material(MaterialStrategy strategy, const MaterialLibrary& library, const PartInstance& part,
                           RandomStream& rng) {
    switch (strategy) {
        case MaterialStrategy::ComplexLibrary: {
            if (library.entries.empty()) throw ConfigError("materials", "material library is empty");
            const std::size_t i = rng.index(library.entries.size());
            return {library.entries[i], i};
        }
        case MaterialStrategy::RandomColor: return {random_color_material(rng), std::nullopt};
        case MaterialStrategy::PhotoRealistic:
            if (!part.fixed_material)
                throw ConfigError("parts[" + part.name + "].material",
                                  "photo_realistic strategy needs a fixed material for every part");
            return {*part.fixed_material, std::nullopt};
    }
    throw ConfigError("randomization.material_strategy", "unhandled strategy");
}

MaterialSpec sample_material(MaterialStrategy strategy, const MaterialLibrary& library, const PartInstance& part,
                             RandomStream& rng) {
    return draw_material(strategy, library, part, rng).spec;
}

}  // namespace drgen

namespace drgen {

Json to_json(const MaterialSpec& m) {
    Json j{{"base_color", to_json(m.base_color)},
           {"metalness", m.metalness},
           {"roughness", m.roughness},
           {"specular", m.specular}};
    if (m.texture) {
        j["texture"] = Json{{"kind", std::string(to_string(m.texture->kind))},
                            {"color_a", to_json(m.texture->color_a)},
                            {"color_b", to_json(m.texture->color_b)},
                            {"frequency", m.texture->frequency}};
    } else {
        j["texture"] = nullptr;
    }
    return j;
}

MaterialSpec material_from_json(const Json& j, const std::string& path) {
    using namespace json_field;
    MaterialSpec m;
    m.base_color = vec3(j, "base_color", path);
    m.metalness = number_or(j, "metalness", path, 0.0);
    m.roughness = number_or(j, "roughness", path, 0.5);
    m.specular = number_or(j, "specular", path, 0.5);
    if (has(j, "texture")) {
        const Json& t = j.at("texture");
        const std::string tp = path + ".texture";
        TexturePattern pat;
        pat.kind = parse_pattern_kind(string(t, "kind", tp));
        pat.color_a = vec3(t, "color_a", tp);
        pat.color_b = vec3(t, "color_b", tp);
        pat.frequency = number(t, "frequency", tp);
        m.texture = pat;
    }
    m.validate(path);
    return m;
}

Json to_json(const MaterialLibrary& lib) {
    Json arr = Json::array();
    for (const MaterialSpec& m : lib.entries) arr.push_back(to_json(m));
    return arr;
}

MaterialLibrary library_from_json(const Json& j, const std::string& name) {
    if (!j.is_array()) throw ConfigError("materials", "expected a JSON array of material records");
    MaterialLibrary lib;
    lib.name = name;
    for (std::size_t i = 0; i < j.size(); ++i)
        lib.entries.push_back(material_from_json(j[i], "materials[" + std::to_string(i) + "]"));
    lib.validate();
    return lib;
}

}  // namespace drgen
