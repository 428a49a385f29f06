#include "drgen/toy_scene.hpp"

#include <cmath>
#include <cstdio>

#include "drgen/image.hpp"
#include "drgen/io.hpp"
#include "drgen/mesh.hpp"
#include "drgen/rng.hpp"

namespace drgen {

namespace fs = std::filesystem;

namespace {

std::string numbered(const char* prefix, int i, const char* ext) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%02d%s", prefix, i, ext);
    return buf;
}

Json material(Vec3 base, double metal, double rough) {
    return Json{{"base_color", to_json(base)}, {"metalness", metal}, {"roughness", rough}, {"specular", 0.5}};
}

// Equirectangular room: dim floor, brighter walls and ceiling, one small
// warm or cool lamp at a random position.
Image make_hdri(int index) {
    RandomStream rng(mix_seed(0x68647269ull, static_cast<std::uint64_t>(index)));
    const int w = 64, h = 32;
    Image img(w, h);
    const double lamp_phi = rng.uniform(0.0, kTwoPi);
    const double lamp_theta = rng.uniform(0.15, 0.9);  // from the zenith
    const double warmth = rng.uniform(0.0, 1.0);
    const Vec3 lamp{1.0, 0.75 + 0.25 * (1.0 - warmth), 0.5 + 0.5 * (1.0 - warmth)};
    const double lamp_power = rng.log_uniform(8.0, 40.0);
    const Vec3 wall{rng.uniform(0.3, 0.8), rng.uniform(0.3, 0.8), rng.uniform(0.3, 0.8)};
    const Vec3 ld{std::sin(lamp_theta) * std::cos(lamp_phi), std::cos(lamp_theta),
                  std::sin(lamp_theta) * std::sin(lamp_phi)};
    for (int y = 0; y < h; ++y) {
        const double theta = kPi * (y + 0.5) / h;
        for (int x = 0; x < w; ++x) {
            const double phi = kTwoPi * (x + 0.5) / w;
            const Vec3 d{std::sin(theta) * std::cos(phi), std::cos(theta), std::sin(theta) * std::sin(phi)};
            const double up = d.y;
            Vec3 c = up > 0.0 ? wall * (0.6 + 0.6 * up) : wall * 0.25;
            const double lobe = std::exp((dot(d, ld) - 1.0) * 60.0);
            c += lamp * (lamp_power * lobe);
            img.set(x, y, c);
        }
    }
    return img;
}

Image8 make_background(int index, bool photo_like) {
    RandomStream rng(mix_seed(photo_like ? 0x62676bull : 0x746578ull, static_cast<std::uint64_t>(index)));
    const int w = 96, h = 96;
    Image8 img;
    img.width = w;
    img.height = h;
    img.data.resize(static_cast<std::size_t>(w * h * 3));
    const Vec3 a{rng.uniform(), rng.uniform(), rng.uniform()};
    const Vec3 b{rng.uniform(), rng.uniform(), rng.uniform()};
    const double freq = rng.uniform(2.0, 9.0);
    const double angle = rng.uniform(0.0, kPi);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double t;
            if (photo_like) {
                // Smooth shading with a few soft blotches, like a workbench photo.
                t = 0.5 + 0.3 * std::sin(freq * 0.3 * x / w + angle) * std::cos(freq * 0.2 * y / h) +
                    0.1 * std::sin(0.7 * x + 1.3 * y);
            } else {
                const double u = std::cos(angle) * x + std::sin(angle) * y;
                t = std::fmod(std::floor(u * freq / w) + std::floor(y * freq / h), 2.0) == 0.0 ? 0.15 : 0.85;
            }
            t = std::clamp(t, 0.0, 1.0);
            const Vec3 c = a * (1.0 - t) + b * t;
            const std::size_t i = 3 * static_cast<std::size_t>(y * w + x);
            img.data[i] = static_cast<std::uint8_t>(std::lround(255.0 * c.x));
            img.data[i + 1] = static_cast<std::uint8_t>(std::lround(255.0 * c.y));
            img.data[i + 2] = static_cast<std::uint8_t>(std::lround(255.0 * c.z));
        }
    }
    return img;
}

Mesh merged(const Mesh& a, const Mesh& b, const Vec3& offset_b) {
    Mesh m = a;
    const auto base = static_cast<std::uint32_t>(m.vertices.size());
    for (const Vec3& v : b.vertices) m.vertices.push_back(v + offset_b);
    for (const Vec3& n : b.normals) m.normals.push_back(n);
    for (const auto& t : b.triangles) m.triangles.push_back({t[0] + base, t[1] + base, t[2] + base});
    return m;
}

Json scene_json() {
    Json parts = Json::array();
    parts.push_back({{"name", "plate"},
                     {"instance_id", 1},
                     {"primitive", {{"kind", "box"}, {"half_extent", {0.15, 0.01, 0.1}}}},
                     {"translation", {0.0, -0.01, 0.0}},
                     {"material", material({0.55, 0.56, 0.58}, 1.0, 0.35)}});
    const double sx[4] = {-0.08, 0.08, -0.08, 0.08};
    const double sz[4] = {-0.05, -0.05, 0.05, 0.05};
    for (int i = 0; i < 4; ++i)
        parts.push_back({{"name", "screw_" + std::to_string(i)},
                         {"instance_id", 2 + i},
                         {"class_label", "screw"},
                         {"primitive", {{"kind", "cylinder"}, {"radius", 0.008}, {"height", 0.03}, {"segments", 16}}},
                         {"translation", {sx[i], 0.0, sz[i]}},
                         {"material", material({0.8, 0.8, 0.82}, 1.0, 0.25)}});
    parts.push_back({{"name", "clip"},
                     {"instance_id", 6},
                     {"class_label", "clip"},
                     {"primitive", {{"kind", "box"}, {"half_extent", {0.02, 0.006, 0.012}}}},
                     {"translation", {0.0, 0.006, 0.0}},
                     {"material", material({0.1, 0.1, 0.1}, 0.0, 0.6)}});
    const double e = 0.45, y = -0.03;
    return Json{{"parts", parts},
                {"camera",
                 {{"look_at", {{"eye", {0.0, 0.35, 0.3}}, {"target", {0.0, 0.0, 0.0}}}},
                  {"vertical_fov", 45.0 * kPi / 180.0},
                  {"resolution", {64, 64}}}},
                {"environment", {{"hdri", "hdris/" + numbered("room", 0, ".hdr")}}},
                {"backplate",
                 {{"corners", {{-e, y, -e}, {e, y, -e}, {e, y, e}, {-e, y, e}}},
                  {"image", "backgrounds/" + numbered("photo", 0, ".png")}}}};
}

}  // namespace

Json toy_campaign_json(const ToyOptions& o) {
    return Json{{"scene", "scene.json"},
                {"output_dir", "out"},
                {"total_images", o.total_images},
                {"split", 0.8},
                {"master_seed", o.master_seed},
                {"render",
                 {{"resolution", {o.resolution.width, o.resolution.height}},
                  {"samples_per_pixel", o.samples_per_pixel},
                  {"max_bounces", 4},
                  {"russian_roulette_start", 3}}},
                {"label_policy", {{"min_visible_pixels", 4}, {"min_visibility_fraction", 0.25}}},
                {"randomization",
                 {{"material_strategy", "complex_library"},
                  {"library_seed", 1},
                  {"hdri_pool", "hdris"},
                  {"noise_sigma", {0.0, 0.04}},
                  {"background", {{"mode", "real_image_pool"}, {"dir", "backgrounds"}}},
                  {"distractors", {{"mode", "primitive"}, {"count", {0, 3}}}}}}};
}

ToyWorkspace write_toy_workspace(const fs::path& root, const ToyOptions& o) {
    ToyWorkspace ws{root, root / "scene.json", root / "campaign.json"};
    for (const char* sub : {"hdris", "backgrounds", "textures", "distractor_meshes"})
        fs::create_directories(root / sub);
    for (int i = 0; i < o.hdri_count; ++i) write_hdr(root / "hdris" / numbered("room", i, ".hdr"), make_hdri(i));
    for (int i = 0; i < std::max(1, o.background_count); ++i)
        write_png(root / "backgrounds" / numbered("photo", i, ".png"), make_background(i, true));
    for (int i = 0; i < std::max(1, o.texture_count); ++i)
        write_png(root / "textures" / numbered("pattern", i, ".png"), make_background(i, false));

    save_mesh(root / "distractor_meshes" / "ball.obj", make_uv_sphere(0.04, 8, 12));
    save_mesh(root / "distractor_meshes" / "brick.obj", make_box({0.05, 0.02, 0.03}));
    save_mesh(root / "distractor_meshes" / "bracket.obj",
              merged(make_box({0.04, 0.005, 0.015}), make_box({0.005, 0.03, 0.015}), {0.035, 0.025, 0.0}));
    save_mesh(root / "distractor_meshes" / "pipe.obj", make_cylinder(0.012, 0.1, 12));

    write_text_file(ws.scene, dump_canonical(scene_json()));
    write_text_file(ws.config, dump_canonical(toy_campaign_json(o)));
    return ws;
}

}  // namespace drgen
