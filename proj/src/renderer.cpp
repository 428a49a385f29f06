#include "drgen/renderer.hpp"

#include <algorithm>
#include <cmath>

#include "drgen/brdf.hpp"
#include "drgen/error.hpp"
#include "drgen/parallel.hpp"
#include "drgen/rng.hpp"

namespace drgen {

void RenderSettings::validate() const {
    if (resolution.width < 1 || resolution.height < 1) throw ConfigError("render.resolution", "must be positive");
    if (resolution.width > 65535 || resolution.height > 65535)
        throw ConfigError("render.resolution", "must not exceed 65535");
    if (samples_per_pixel < 1) throw ConfigError("render.samples_per_pixel", "must be >= 1");
    if (max_bounces < 1) throw ConfigError("render.max_bounces", "must be >= 1");
    if (russian_roulette_start < 0) throw ConfigError("render.russian_roulette_start", "must be >= 0");
}

Json to_json(const RenderSettings& s) {
    return Json{{"resolution", {s.resolution.width, s.resolution.height}},
                {"samples_per_pixel", s.samples_per_pixel},
                {"max_bounces", s.max_bounces},
                {"russian_roulette_start", s.russian_roulette_start},
                {"seed", s.seed}};
}

RenderSettings render_settings_from_json(const Json& j, const std::string& path) {
    using namespace json_field;
    if (!j.is_object()) throw ConfigError(path, "must be an object");
    RenderSettings s;
    if (has(j, "resolution")) {
        const Json& r = j.at("resolution");
        if (!r.is_array() || r.size() != 2 || !r[0].is_number_integer() || !r[1].is_number_integer())
            throw ConfigError(path + ".resolution", "must be [width, height]");
        s.resolution = {r[0].get<int>(), r[1].get<int>()};
    }
    s.samples_per_pixel = static_cast<int>(integer_or(j, "samples_per_pixel", path, s.samples_per_pixel));
    s.max_bounces = static_cast<int>(integer_or(j, "max_bounces", path, s.max_bounces));
    s.russian_roulette_start =
        static_cast<int>(integer_or(j, "russian_roulette_start", path, s.russian_roulette_start));
    s.seed = uint64_or(j, "seed", path, s.seed);
    s.validate();
    return s;
}

PinholeCamera camera_at(const PinholeCamera& camera, Resolution resolution) {
    PinholeCamera c = camera;
    c.resolution = resolution;
    return c;
}

namespace {

constexpr std::uint32_t kNoPart = kBackplatePart;

struct PreparedPart {
    const PartInstance* part = nullptr;
    Mat3 rotation;
    Brdf brdf;
    const TexturePattern* texture = nullptr;
};

struct RenderContext {
    const SceneGraph& scene;
    const Bvh& bvh;
    const RenderSettings& settings;
    std::vector<PreparedPart> parts;
    // Camera basis for fast primary rays.
    Vec3 origin, right, up, back;
    double tan_half = 0.0, aspect = 1.0;

    RenderContext(const SceneGraph& s, const Bvh& b, const RenderSettings& rs) : scene(s), bvh(b), settings(rs) {
        parts.reserve(s.parts.size());
        for (const PartInstance& p : s.parts) {
            const MaterialSpec& m = p.effective_material();
            parts.push_back(
                {&p, p.transform.rotation_matrix(), Brdf::from(m, m.base_color), m.texture ? &*m.texture : nullptr});
        }
        const Mat3 r = s.camera.pose.rotation_matrix();
        origin = s.camera.pose.translation;
        right = r.column(0);
        up = r.column(1);
        back = r.column(2);
        tan_half = std::tan(0.5 * s.camera.vertical_fov);
        aspect = static_cast<double>(rs.resolution.width) / rs.resolution.height;
    }

    Ray primary(double px, double py) const {
        const double ndc_x = 2.0 * px / settings.resolution.width - 1.0;
        const double ndc_y = 1.0 - 2.0 * py / settings.resolution.height;
        const Vec3 d = right * (ndc_x * tan_half * aspect) + up * (ndc_y * tan_half) - back;
        return {origin, normalize(d)};
    }
};

Rgb backplate_radiance(const Backplate& plate, const BvhTriangle& tri, const BvhHit& hit) {
    if (!plate.image) return {};
    // Corner uv: TL (0,0), TR (1,0), BR (1,1), BL (0,1).
    const double u = tri.local == 0 ? hit.b1 + hit.b2 : hit.b1;
    const double v = tri.local == 0 ? hit.b2 : hit.b1 + hit.b2;
    return plate.image->sample_bilinear(std::clamp(u, 0.0, 1.0), std::clamp(v, 0.0, 1.0));
}

double offset_scale(const Vec3& p) { return 1e-7 * (1.0 + std::max({std::abs(p.x), std::abs(p.y), std::abs(p.z)})); }

Rgb trace_path(const RenderContext& ctx, Ray ray, PixelStream& rng) {
    const SceneGraph& scene = ctx.scene;
    const EnvironmentLight& env = scene.environment;
    const RenderSettings& st = ctx.settings;
    Rgb radiance{};
    Rgb throughput{1, 1, 1};
    double prev_pdf = 0.0;  // 0 marks the camera ray (no MIS)
    const double rate = env.map->light_sample_rate();

    for (int bounce = 0;; ++bounce) {
        const auto hit = ctx.bvh.intersect(ray, 0.0, kInfinity);
        if (!hit) {
            const Rgb le = env.radiance(ray.direction);
            double w = 1.0;
            if (prev_pdf > 0.0) {
                const double pl = rate * env.pdf(ray.direction);
                w = prev_pdf / (prev_pdf + pl);
            }
            radiance += throughput * le * w;
            break;
        }
        const BvhTriangle& tri = ctx.bvh.triangles()[hit->triangle];
        if (tri.part == kNoPart) {
            radiance += throughput * backplate_radiance(*scene.backplate, tri, *hit);
            break;
        }
        if (bounce >= st.max_bounces) break;

        const PreparedPart& pp = ctx.parts[tri.part];
        const Mesh& mesh = *pp.part->mesh;
        const auto& idx = mesh.triangles[tri.local];
        const double b0 = 1.0 - hit->b1 - hit->b2;
        const Vec3 p = ray.origin + ray.direction * hit->t;
        const Vec3 wo = -ray.direction;

        Vec3 ng = cross(tri.v1 - tri.v0, tri.v2 - tri.v0);
        const double ngl = length(ng);
        if (!(ngl > 0.0)) break;
        ng = ng / ngl;
        if (dot(ng, wo) < 0.0) ng = -ng;

        Vec3 ns =
            pp.rotation * (mesh.normals[idx[0]] * b0 + mesh.normals[idx[1]] * hit->b1 + mesh.normals[idx[2]] * hit->b2);
        const double nsl = length(ns);
        ns = nsl > 0.0 ? ns / nsl : ng;
        if (dot(ns, ng) < 0.0) ns = -ns;
        if (dot(ns, wo) <= 0.0) ns = ng;

        Brdf brdf = pp.brdf;
        if (pp.texture) {
            const Vec3 obj =
                mesh.vertices[idx[0]] * b0 + mesh.vertices[idx[1]] * hit->b1 + mesh.vertices[idx[2]] * hit->b2;
            brdf.base = pp.texture->evaluate(obj);
        }

        const Frame frame(ns);
        const Vec3 wo_local = frame.to_local(wo);
        const Vec3 origin = p + ng * offset_scale(p);

        // Environment sample. Both techniques are weighted by the balance
        // heuristic with allocations (rate, 1): w_light = rate*pl / (rate*pl + pb).
        const double e1 = rng.uniform(), e2 = rng.uniform(), e3 = rng.uniform(), e4 = rng.uniform();
        const DirectionSample ls = env.sample(e1, e2, e3, e4);
        if (ls.pdf > 0.0 && dot(ls.direction, ng) > 0.0) {
            const Vec3 wi_local = frame.to_local(ls.direction);
            const Rgb f = brdf.eval(wo_local, wi_local);
            if (max_component(f) > 0.0 && !ctx.bvh.occluded({origin, ls.direction}, 0.0, kInfinity)) {
                const double pb = brdf.pdf(wo_local, wi_local);
                radiance += throughput * f * env.radiance(ls.direction) * (rate * wi_local.z / (rate * ls.pdf + pb));
            }
        }

        const double s1 = rng.uniform(), s2 = rng.uniform(), s3 = rng.uniform();
        const Brdf::Sample bs = brdf.sample(wo_local, s1, s2, s3);
        if (!(bs.pdf > 0.0)) break;
        const Vec3 wi = frame.to_world(bs.wi);
        if (dot(wi, ng) <= 0.0) break;  // blocked by the true surface
        throughput *= bs.f * (bs.wi.z / bs.pdf);
        prev_pdf = bs.pdf;

        if (bounce + 1 >= st.russian_roulette_start) {
            const double q = std::min(0.95, max_component(throughput));
            const double u = rng.uniform();
            if (!(q > 0.0) || u >= q) break;
            throughput /= q;
        }
        ray = Ray{origin, wi};
    }
    return radiance;
}

struct PixelResult {
    Rgb value;
    std::uint64_t discarded = 0;
};

PixelResult estimate_pixel(const RenderContext& ctx, int x, int y) {
    const RenderSettings& st = ctx.settings;
    const std::uint64_t pixel =
        static_cast<std::uint64_t>(y) * static_cast<std::uint64_t>(st.resolution.width) + static_cast<std::uint64_t>(x);
    Rgb sum{};
    std::uint64_t valid = 0, discarded = 0;
    for (int s = 0; s < st.samples_per_pixel; ++s) {
        PixelStream rng(mix_seed(st.seed, pixel, static_cast<std::uint64_t>(s)));
        const double jx = rng.uniform(), jy = rng.uniform();
        const Rgb l = trace_path(ctx, ctx.primary(x + jx, y + jy), rng);
        if (!is_finite(l) || l.x < 0.0 || l.y < 0.0 || l.z < 0.0) {
            ++discarded;
            continue;
        }
        sum += l;
        ++valid;
    }
    return {valid ? sum / static_cast<double>(valid) : Rgb{}, discarded};
}

constexpr int kTileSize = 16;

}  // namespace

Rgb render_pixel(const SceneGraph& scene, const Bvh& bvh, const RenderSettings& settings, int x, int y) {
    const RenderContext ctx(scene, bvh, settings);
    return estimate_pixel(ctx, x, y).value;
}

FrameBuffers trace(const SceneGraph& scene, const Bvh& bvh, const RenderSettings& settings) {
    settings.validate();
    scene.environment.validate();
    const RenderContext ctx(scene, bvh, settings);
    const int w = settings.resolution.width, h = settings.resolution.height;
    FrameBuffers out;
    out.linear = Image(w, h);
    const int tiles_x = (w + kTileSize - 1) / kTileSize;
    const int tiles_y = (h + kTileSize - 1) / kTileSize;
    std::vector<std::uint64_t> discarded(static_cast<std::size_t>(tiles_x) * static_cast<std::size_t>(tiles_y), 0);
    parallel_for(discarded.size(), [&](std::size_t tile) {
        const int tx = static_cast<int>(tile % static_cast<std::size_t>(tiles_x)) * kTileSize;
        const int ty = static_cast<int>(tile / static_cast<std::size_t>(tiles_x)) * kTileSize;
        for (int y = ty; y < std::min(h, ty + kTileSize); ++y)
            for (int x = tx; x < std::min(w, tx + kTileSize); ++x) {
                const PixelResult r = estimate_pixel(ctx, x, y);
                out.linear.set(x, y, r.value);
                discarded[tile] += r.discarded;
            }
    });
    for (const std::uint64_t d : discarded) out.discarded_samples += d;
    out.beauty = quantize(tonemap_display(out.linear));
    out.instance_id = render_instance_ids(scene, bvh, settings.resolution);
    return out;
}

IdMap render_instance_ids(const SceneGraph& scene, const Bvh& bvh, Resolution resolution) {
    const PinholeCamera cam = camera_at(scene.camera, resolution);
    IdMap ids(resolution.width, resolution.height);
    parallel_for(static_cast<std::size_t>(resolution.height), [&](std::size_t row) {
        const int y = static_cast<int>(row);
        for (int x = 0; x < resolution.width; ++x) {
            const auto hit = bvh.intersect(cam.ray_through(x + 0.5, y + 0.5), 0.0, kInfinity);
            if (!hit) continue;
            const std::uint32_t part = bvh.triangles()[hit->triangle].part;
            if (part != kBackplatePart) ids.at(x, y) = scene.parts[part].instance_id;
        }
    });
    return ids;
}

Image tonemap_display(const Image& linear) {
    Image out(linear.width, linear.height);
    for (std::size_t i = 0; i < linear.data.size(); ++i)
        out.data[i] = static_cast<float>(srgb_encode(std::clamp(static_cast<double>(linear.data[i]), 0.0, 1.0)));
    return out;
}

Image8 quantize(const Image& display) {
    Image8 out{display.width, display.height, std::vector<std::uint8_t>(display.data.size())};
    for (std::size_t i = 0; i < display.data.size(); ++i) {
        const double v = std::clamp(static_cast<double>(display.data[i]), 0.0, 1.0);
        out.data[i] = static_cast<std::uint8_t>(std::lround(v * 255.0));
    }
    return out;
}

Image add_sensor_noise(const Image& display, double sigma, std::uint64_t seed) {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ArgumentError("noise sigma must be finite and >= 0");
    if (sigma == 0.0) return display;
    Image out = display;
    // One stream per row keeps the result independent of how rows are scheduled.
    const std::size_t row_len = 3 * static_cast<std::size_t>(display.width);
    for (int y = 0; y < display.height; ++y) {
        PixelStream rng(mix_seed(seed, static_cast<std::uint64_t>(y)));
        for (std::size_t k = 0; k < row_len; ++k) {
            float& v = out.data[static_cast<std::size_t>(y) * row_len + k];
            v = static_cast<float>(std::clamp(static_cast<double>(v) + sigma * rng.normal(), 0.0, 1.0));
        }
    }
    return out;
}

}  // namespace drgen
