#include "drgen/randomizer.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>

#include "drgen/error.hpp"
#include "drgen/io.hpp"
#include "drgen/rng.hpp"

namespace drgen {

namespace fs = std::filesystem;

std::string_view to_string(BackgroundMode m) {
    switch (m) {
        case BackgroundMode::RealImagePool: return "real_image_pool";
        case BackgroundMode::HdriOnly: return "hdri_only";
        case BackgroundMode::ImagePool: return "image_pool";
    }
    return "hdri_only";
}

std::string_view to_string(DistractorMode m) {
    switch (m) {
        case DistractorMode::None: return "none";
        case DistractorMode::Primitive: return "primitive";
        case DistractorMode::ComplexMeshPool: return "complex_mesh_pool";
    }
    return "none";
}

namespace {

const std::vector<std::string> kImageExtensions{".png", ".jpg", ".jpeg"};
const std::vector<std::string> kMeshExtensions{".obj"};
const std::vector<std::string> kHdriExtensions{".hdr"};
const char* const kPrimitiveKinds[] = {"box", "sphere", "cylinder"};

void check_range(const Range& r, const std::string& field, double min, double max, bool open_min = false) {
    if (!std::isfinite(r.lo) || !std::isfinite(r.hi)) throw ConfigError(field, "bounds must be finite");
    if (r.lo > r.hi) throw ConfigError(field, "lower bound exceeds upper bound");
    if (open_min ? !(r.lo > min) : r.lo < min)
        throw ConfigError(field, "lower bound must be " + std::string(open_min ? "> " : ">= ") + std::to_string(min));
    if (r.hi > max) throw ConfigError(field, "upper bound must be <= " + std::to_string(max));
}

Range range_of(const Json& j, const std::string& key, const std::string& path, Range fallback) {
    if (!json_field::has(j, key)) return fallback;
    const Json& v = j.at(key);
    const std::string field = path + "." + key;
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw ConfigError(field, "must be a [lo, hi] pair of numbers");
    return {v[0].get<double>(), v[1].get<double>()};
}

Json to_json(const Range& r) { return Json::array({r.lo, r.hi}); }

fs::path resolve(const fs::path& base, const std::string& p) {
    fs::path out = fs::path(p).is_absolute() ? fs::path(p) : base / p;
    return out.lexically_normal();
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

/// Uniformly distributed rotation (Shoemake).
Quat random_rotation(RandomStream& rng) {
    const double u1 = rng.uniform(), u2 = rng.uniform(), u3 = rng.uniform();
    const double a = std::sqrt(1.0 - u1), b = std::sqrt(u1);
    return Quat{b * std::cos(kTwoPi * u3), a * std::sin(kTwoPi * u2), a * std::cos(kTwoPi * u2),
                b * std::sin(kTwoPi * u3)};
}

Vec3 random_direction(RandomStream& rng) {
    const double z = 1.0 - 2.0 * rng.uniform();
    const double phi = kTwoPi * rng.uniform();
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {r * std::cos(phi), r * std::sin(phi), z};
}

Aabb transformed_bounds(const Aabb& local, const Transform& t) {
    Aabb out;
    for (const Vec3& c : local.corners()) out.expand(t.apply_point(c));
    return out;
}

MaterialLibrary load_library(const RandomizationConfig& c) {
    if (c.material_library.empty()) return generate_default_library(c.library_seed);
    return library_from_json(Json::parse(read_text_file(c.material_library)), c.material_library.stem().string());
}

}  // namespace

void RandomizationConfig::validate(const std::string& path) const {
    if (hdri_pool.empty()) throw ConfigError(path + ".hdri_pool", "must list at least one HDRI");
    check_range(hdri_rotation, path + ".hdri_rotation", 0.0, kTwoPi);
    check_range(light_intensity_scale, path + ".light_intensity_scale", 0.0, 1e6, true);
    check_range(light_color_tint, path + ".light_color_tint", 0.0, 1e6);
    if (!std::isfinite(camera_translation_jitter) || camera_translation_jitter < 0.0)
        throw ConfigError(path + ".camera_translation_jitter", "must be finite and >= 0");
    if (!std::isfinite(camera_rotation_jitter) || camera_rotation_jitter < 0.0 || camera_rotation_jitter > kPi)
        throw ConfigError(path + ".camera_rotation_jitter", "must be in [0, pi]");
    if (noise_sigma) check_range(*noise_sigma, path + ".noise_sigma", 0.0, kMaxNoiseSigma);
    if (background.mode != BackgroundMode::HdriOnly && background.dir.empty())
        throw ConfigError(path + ".background.dir", "image background modes need a directory");
    if (distractors.mode != DistractorMode::None) {
        if (distractors.count_min < 0 || distractors.count_min > distractors.count_max || distractors.count_max > 1000)
            throw ConfigError(path + ".distractors.count", "must satisfy 0 <= min <= max <= 1000");
        if (distractors.mode == DistractorMode::ComplexMeshPool && distractors.dir.empty())
            throw ConfigError(path + ".distractors.dir", "mesh pool mode needs a directory");
    }
    if (max_visibility_attempts < 1) throw ConfigError(path + ".max_visibility_attempts", "must be >= 1");
}

RandomizationConfig randomization_from_json(const Json& j, const fs::path& base_dir, const std::string& path) {
    using namespace json_field;
    if (!j.is_object()) throw ConfigError(path, "must be an object");
    RandomizationConfig c;
    const std::string strategy = string_or(j, "material_strategy", path, std::string(to_string(c.material_strategy)));
    try {
        c.material_strategy = parse_material_strategy(strategy);
    } catch (const Error&) {
        throw ConfigError(path + ".material_strategy", "unknown strategy '" + strategy + "'");
    }
    if (has(j, "material_library")) c.material_library = resolve(base_dir, string(j, "material_library", path));
    c.library_seed = uint64_or(j, "library_seed", path, c.library_seed);

    const Json& pool = require(j, "hdri_pool", path);
    if (pool.is_string()) {
        const fs::path dir = resolve(base_dir, pool.get<std::string>());
        if (!fs::is_directory(dir))
            throw ConfigError(path + ".hdri_pool", "directory '" + dir.string() + "' not found");
        c.hdri_pool = list_files(dir, kHdriExtensions);
    } else if (pool.is_array()) {
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (!pool[i].is_string())
                throw ConfigError(path + ".hdri_pool[" + std::to_string(i) + "]", "must be a path string");
            c.hdri_pool.push_back(resolve(base_dir, pool[i].get<std::string>()));
        }
    } else {
        throw ConfigError(path + ".hdri_pool", "must be a directory or an array of paths");
    }

    c.hdri_rotation = range_of(j, "hdri_rotation", path, c.hdri_rotation);
    c.light_intensity_scale = range_of(j, "light_intensity_scale", path, c.light_intensity_scale);
    c.light_color_tint = range_of(j, "light_color_tint", path, c.light_color_tint);
    c.camera_translation_jitter = number_or(j, "camera_translation_jitter", path, c.camera_translation_jitter);
    c.camera_rotation_jitter = number_or(j, "camera_rotation_jitter", path, c.camera_rotation_jitter);
    if (has(j, "noise_sigma")) {
        if (j.at("noise_sigma").is_null())
            c.noise_sigma.reset();
        else
            c.noise_sigma = range_of(j, "noise_sigma", path, {});
    }

    if (has(j, "background")) {
        const Json& b = j.at("background");
        const std::string bp = path + ".background";
        const std::string mode = string(b, "mode", bp);
        if (mode == "real_image_pool")
            c.background.mode = BackgroundMode::RealImagePool;
        else if (mode == "image_pool")
            c.background.mode = BackgroundMode::ImagePool;
        else if (mode == "hdri_only")
            c.background.mode = BackgroundMode::HdriOnly;
        else
            throw ConfigError(bp + ".mode", "unknown background mode '" + mode + "'");
        if (c.background.mode != BackgroundMode::HdriOnly) c.background.dir = resolve(base_dir, string(b, "dir", bp));
    }

    if (has(j, "distractors")) {
        const Json& d = j.at("distractors");
        const std::string dp = path + ".distractors";
        const std::string mode = string(d, "mode", dp);
        if (mode == "none")
            c.distractors.mode = DistractorMode::None;
        else if (mode == "primitive")
            c.distractors.mode = DistractorMode::Primitive;
        else if (mode == "complex_mesh_pool")
            c.distractors.mode = DistractorMode::ComplexMeshPool;
        else
            throw ConfigError(dp + ".mode", "unknown distractor mode '" + mode + "'");
        if (c.distractors.mode != DistractorMode::None) {
            const Json& cnt = require(d, "count", dp);
            if (!cnt.is_array() || cnt.size() != 2 || !cnt[0].is_number_integer() || !cnt[1].is_number_integer())
                throw ConfigError(dp + ".count", "must be an integer [min, max] pair");
            c.distractors.count_min = cnt[0].get<int>();
            c.distractors.count_max = cnt[1].get<int>();
        }
        if (c.distractors.mode == DistractorMode::ComplexMeshPool)
            c.distractors.dir = resolve(base_dir, string(d, "dir", dp));
    }
    c.max_visibility_attempts =
        static_cast<int>(integer_or(j, "max_visibility_attempts", path, c.max_visibility_attempts));
    c.validate(path);
    return c;
}

Json to_json(const RandomizationConfig& c) {
    Json pool = Json::array();
    for (const auto& p : c.hdri_pool) pool.push_back(p.string());
    Json bg{{"mode", to_string(c.background.mode)}};
    if (c.background.mode != BackgroundMode::HdriOnly) bg["dir"] = c.background.dir.string();
    Json dis{{"mode", to_string(c.distractors.mode)}};
    if (c.distractors.mode != DistractorMode::None) dis["count"] = {c.distractors.count_min, c.distractors.count_max};
    if (c.distractors.mode == DistractorMode::ComplexMeshPool) dis["dir"] = c.distractors.dir.string();
    Json j{{"material_strategy", to_string(c.material_strategy)},
           {"library_seed", c.library_seed},
           {"hdri_pool", pool},
           {"hdri_rotation", to_json(c.hdri_rotation)},
           {"light_intensity_scale", to_json(c.light_intensity_scale)},
           {"light_color_tint", to_json(c.light_color_tint)},
           {"camera_translation_jitter", c.camera_translation_jitter},
           {"camera_rotation_jitter", c.camera_rotation_jitter},
           {"noise_sigma", c.noise_sigma ? to_json(*c.noise_sigma) : Json(nullptr)},
           {"background", bg},
           {"distractors", dis},
           {"max_visibility_attempts", c.max_visibility_attempts}};
    if (!c.material_library.empty()) j["material_library"] = c.material_library.string();
    return j;
}

Json to_json(const ScenarioSample& s) {
    Json mats = Json::array();
    for (const PartMaterial& m : s.materials)
        mats.push_back({{"part", m.part},
                        {"material", to_json(m.material)},
                        {"library_index", m.library_index ? Json(*m.library_index) : Json(nullptr)}});
    Json dis = Json::array();
    for (const DistractorPlacement& d : s.distractors)
        dis.push_back({{"kind", d.kind},
                       {"mesh_source", d.mesh_source},
                       {"size", d.size},
                       {"transform", to_json(d.transform)},
                       {"material", to_json(d.material)}});
    return Json{{"frame_seed", s.frame_seed},
                {"materials", mats},
                {"hdri_index", s.hdri_index},
                {"hdri", s.hdri},
                {"hdri_rotation", s.hdri_rotation},
                {"intensity_scale", s.intensity_scale},
                {"color_tint", to_json(s.color_tint)},
                {"camera_pose", to_json(s.camera_pose)},
                {"camera_attempts", s.camera_attempts},
                {"background_index", s.background_index ? Json(*s.background_index) : Json(nullptr)},
                {"background", s.background},
                {"distractors", dis},
                {"noise_sigma", s.noise_sigma}};
}

ScenarioSample scenario_from_json(const Json& j) {
    using namespace json_field;
    const std::string p = "scenario";
    ScenarioSample s;
    s.frame_seed = require(j, "frame_seed", p).get<std::uint64_t>();
    const Json& mats = require(j, "materials", p);
    for (std::size_t i = 0; i < mats.size(); ++i) {
        const std::string mp = p + ".materials[" + std::to_string(i) + "]";
        PartMaterial m;
        m.part = string(mats[i], "part", mp);
        m.material = material_from_json(require(mats[i], "material", mp), mp + ".material");
        if (!mats[i].at("library_index").is_null()) m.library_index = mats[i].at("library_index").get<std::size_t>();
        s.materials.push_back(m);
    }
    s.hdri_index = require(j, "hdri_index", p).get<std::size_t>();
    s.hdri = string(j, "hdri", p);
    s.hdri_rotation = number(j, "hdri_rotation", p);
    s.intensity_scale = number(j, "intensity_scale", p);
    s.color_tint = vec3(j, "color_tint", p);
    s.camera_pose = transform_from_json(require(j, "camera_pose", p), p + ".camera_pose");
    s.camera_attempts = static_cast<int>(integer(j, "camera_attempts", p));
    if (!require(j, "background_index", p).is_null()) s.background_index = j.at("background_index").get<std::size_t>();
    s.background = string(j, "background", p);
    const Json& dis = require(j, "distractors", p);
    for (std::size_t i = 0; i < dis.size(); ++i) {
        const std::string dp = p + ".distractors[" + std::to_string(i) + "]";
        DistractorPlacement d;
        d.kind = string(dis[i], "kind", dp);
        d.mesh_source = string(dis[i], "mesh_source", dp);
        d.size = number(dis[i], "size", dp);
        d.transform = transform_from_json(require(dis[i], "transform", dp), dp + ".transform");
        d.material = material_from_json(require(dis[i], "material", dp), dp + ".material");
        s.distractors.push_back(d);
    }
    s.noise_sigma = number(j, "noise_sigma", p);
    return s;
}

std::string scenario_digest(const ScenarioSample& s) { return hex64(fnv1a64(dump_canonical(to_json(s)))); }

std::vector<fs::path> list_files(const fs::path& dir, const std::vector<std::string>& extensions) {
    std::vector<fs::path> out;
    if (!fs::is_directory(dir)) return out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        const std::string ext = lower(entry.path().extension().string());
        if (std::find(extensions.begin(), extensions.end(), ext) != extensions.end()) out.push_back(entry.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

Mesh make_distractor_primitive(const std::string& kind, double size) {
    if (kind == "box") return make_box({0.5 * size, 0.5 * size, 0.5 * size});
    if (kind == "sphere") return make_uv_sphere(0.5 * size, 12, 24);
    if (kind == "cylinder") {
        Mesh m = make_cylinder(0.25 * size, size, 24);
        for (Vec3& v : m.vertices) v.y -= 0.5 * size;
        return m;
    }
    throw ArgumentError("unknown primitive kind '" + kind + "'");
}

ScenarioSampler::ScenarioSampler(RandomizationConfig config, MaterialLibrary library)
    : config_(std::move(config)), library_(std::move(library)) {
    config_.validate();
    library_.validate();
    if (config_.background.mode != BackgroundMode::HdriOnly) {
        backgrounds_ = list_files(config_.background.dir, kImageExtensions);
        if (backgrounds_.empty())
            throw ConfigError("randomization.background.dir",
                              "no images (.png, .jpg) in '" + config_.background.dir.string() + "'");
    }
    if (config_.distractors.mode == DistractorMode::ComplexMeshPool) {
        pool_paths_ = list_files(config_.distractors.dir, kMeshExtensions);
        if (pool_paths_.empty())
            throw ConfigError("randomization.distractors.dir",
                              "distractor mesh pool '" + config_.distractors.dir.string() + "' is empty");
        for (const auto& p : pool_paths_) pool_meshes_.push_back(std::make_shared<const Mesh>(load_mesh(p)));
    }
}

ScenarioSampler::ScenarioSampler(RandomizationConfig config) : ScenarioSampler(config, load_library(config)) {}

ScenarioSample ScenarioSampler::sample(const SceneGraph& scene, std::uint64_t frame_seed) const {
    const RandomizationConfig& c = config_;
    RandomStream rng(frame_seed);
    ScenarioSample s;
    s.frame_seed = frame_seed;

    // 1. materials, one per part in scene order
    for (const PartInstance& part : scene.parts) {
        MaterialDraw d = draw_material(c.material_strategy, library_, part, rng);
        s.materials.push_back({part.name, d.spec, d.library_index});
    }
    // 2-5. lighting
    s.hdri_index = static_cast<std::size_t>(rng.index(c.hdri_pool.size()));
    s.hdri = c.hdri_pool[s.hdri_index].string();
    s.hdri_rotation = rng.uniform(c.hdri_rotation.lo, c.hdri_rotation.hi);
    s.intensity_scale = rng.log_uniform(c.light_intensity_scale.lo, c.light_intensity_scale.hi);
    s.color_tint.x = rng.uniform(c.light_color_tint.lo, c.light_color_tint.hi);
    s.color_tint.y = rng.uniform(c.light_color_tint.lo, c.light_color_tint.hi);
    s.color_tint.z = rng.uniform(c.light_color_tint.lo, c.light_color_tint.hi);

    // 6. camera, rejection-sampled for ROI visibility
    const double tj = c.camera_translation_jitter, rj = c.camera_rotation_jitter;
    bool accepted = false;
    for (int attempt = 1; attempt <= c.max_visibility_attempts && !accepted; ++attempt) {
        PinholeCamera cam = scene.camera;
        const Vec3 dt{rng.uniform(-tj, tj), rng.uniform(-tj, tj), rng.uniform(-tj, tj)};
        const double ax = rng.uniform(-rj, rj), ay = rng.uniform(-rj, rj), az = rng.uniform(-rj, rj);
        cam.pose.translation += dt;
        // Pan, tilt and roll about the camera's own axes.
        cam.pose.rotation = cam.pose.rotation * Quat::from_axis_angle({0, 0, 1}, az) *
                            Quat::from_axis_angle({0, 1, 0}, ay) * Quat::from_axis_angle({1, 0, 0}, ax);
        s.camera_attempts = attempt;
        if (!roi_fully_visible(cam, scene.roi)) continue;
        bool inside = false;
        for (const PartInstance& p : scene.parts) inside = inside || point_inside_part(p, cam.pose.translation);
        if (inside) continue;
        s.camera_pose = cam.pose;
        accepted = true;
    }
    if (!accepted)
        throw ScenarioError("roi_visibility", "no camera pose kept the region of interest in view after " +
                                                  std::to_string(c.max_visibility_attempts) + " attempts");

    // 7. background
    if (c.background.mode != BackgroundMode::HdriOnly) {
        if (!scene.backplate)
            throw ConfigError("randomization.background", "image background modes need a backplate in the scene");
        s.background_index = static_cast<std::size_t>(rng.index(backgrounds_.size()));
        s.background = backgrounds_[*s.background_index].string();
    }

    // 8. distractors
    if (c.distractors.mode != DistractorMode::None) {
        const int count = static_cast<int>(rng.integer(c.distractors.count_min, c.distractors.count_max));
        const Vec3 center = scene.roi.box.center();
        const double h = 0.5 * scene.roi.box.diagonal();
        const double r0 = kShellInner * h, r1 = kShellOuter * h;
        for (int k = 0; k < count; ++k) {
            DistractorPlacement d;
            Aabb local;
            std::size_t pool_index = 0;
            if (c.distractors.mode == DistractorMode::Primitive) {
                d.kind = kPrimitiveKinds[rng.index(3)];
                d.mesh_source = "primitive:" + d.kind;
            } else {
                pool_index = static_cast<std::size_t>(rng.index(pool_meshes_.size()));
                d.kind = "mesh";
                d.mesh_source = pool_paths_[pool_index].string();
            }
            d.size = rng.log_uniform(kDistractorMinSize, kDistractorMaxSize);
            d.transform.rotation = random_rotation(rng);
            d.material = random_color_material(rng);

            Vec3 local_center;
            if (c.distractors.mode == DistractorMode::Primitive) {
                local = make_distractor_primitive(d.kind, d.size).bounds();
                d.transform.scale = 1.0;
            } else {
                local = pool_meshes_[pool_index]->bounds();
                const double extent = max_component(local.extent());
                d.transform.scale = extent > 0.0 ? d.size / extent : 1.0;
                local_center = local.center();
            }
            bool placed = false;
            for (int attempt = 0; attempt < c.max_visibility_attempts && !placed; ++attempt) {
                const Vec3 dir = random_direction(rng);
                const double r = std::cbrt(rng.uniform(r0 * r0 * r0, r1 * r1 * r1));
                const Vec3 pos = center + dir * r;
                // The mesh's own center lands on `pos`.
                d.transform.translation = Vec3{};
                d.transform.translation = pos - d.transform.apply_point(local_center);
                const Aabb world = transformed_bounds(local, d.transform);
                if (world.intersects(scene.roi.box) || world.contains(s.camera_pose.translation)) continue;
                placed = true;
            }
            if (!placed)
                throw ScenarioError("distractor_placement", "could not place distractor " + std::to_string(k) +
                                                                " outside the region of interest");
            s.distractors.push_back(d);
        }
    }

    // 9. noise
    if (c.noise_sigma) s.noise_sigma = rng.uniform(c.noise_sigma->lo, c.noise_sigma->hi);
    return s;
}

std::shared_ptr<const EnvironmentMap> ScenarioSampler::hdri(std::size_t index) const {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto& slot = hdri_cache_[index];
    if (!slot) slot = EnvironmentMap::load(config_.hdri_pool[index]);
    return slot;
}

std::shared_ptr<const Image> ScenarioSampler::background(const std::string& path) const {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto& slot = image_cache_[path];
    if (!slot) slot = std::make_shared<const Image>(load_photo_linear(path));
    return slot;
}

std::shared_ptr<const Mesh> ScenarioSampler::distractor_mesh(const DistractorPlacement& d) const {
    if (d.kind != "mesh") return std::make_shared<const Mesh>(make_distractor_primitive(d.kind, d.size));
    for (std::size_t i = 0; i < pool_paths_.size(); ++i)
        if (pool_paths_[i].string() == d.mesh_source) return pool_meshes_[i];
    return std::make_shared<const Mesh>(load_mesh(d.mesh_source));
}

namespace {

SceneGraph bind_scenario(const SceneGraph& scene, const ScenarioSample& s, std::shared_ptr<const EnvironmentMap> map,
                         std::shared_ptr<const Image> backdrop,
                         const std::function<std::shared_ptr<const Mesh>(const DistractorPlacement&)>& mesh_for) {
    SceneGraph out = scene;
    for (std::size_t i = 0; i < out.parts.size() && i < s.materials.size(); ++i)
        out.parts[i].material = s.materials[i].material;
    out.environment = EnvironmentLight{std::move(map), s.hdri_rotation, s.intensity_scale, s.color_tint};
    out.camera.pose = s.camera_pose;
    if (s.background_index) {
        if (out.backplate) {
            out.backplate->image = std::move(backdrop);
            out.backplate->image_source = s.background;
        }
    } else {
        out.backplate.reset();
    }
    std::uint32_t next_id = scene.max_instance_id();
    for (std::size_t k = 0; k < s.distractors.size(); ++k) {
        const DistractorPlacement& d = s.distractors[k];
        PartInstance p;
        p.name = "distractor_" + std::to_string(k);
        p.mesh = mesh_for(d);
        p.mesh_source = d.mesh_source;
        p.transform = d.transform;
        p.instance_id = ++next_id;
        p.material = d.material;
        out.parts.push_back(std::move(p));
    }
    return out;
}

}  // namespace

SceneGraph ScenarioSampler::apply(const SceneGraph& scene, const ScenarioSample& s) const {
    return bind_scenario(scene, s, hdri(s.hdri_index), s.background_index ? background(s.background) : nullptr,
                         [this](const DistractorPlacement& d) { return distractor_mesh(d); });
}

ScenarioSample sample_scenario(const RandomizationConfig& config, const SceneGraph& scene, std::uint64_t frame_seed) {
    return ScenarioSampler(config).sample(scene, frame_seed);
}

SceneGraph apply_scenario(const SceneGraph& scene, const ScenarioSample& s) {
    return bind_scenario(scene, s, EnvironmentMap::load(s.hdri),
                         s.background_index ? std::make_shared<const Image>(load_photo_linear(s.background)) : nullptr,
                         [](const DistractorPlacement& d) {
                             return d.kind == "mesh"
                                        ? std::make_shared<const Mesh>(load_mesh(d.mesh_source))
                                        : std::make_shared<const Mesh>(make_distractor_primitive(d.kind, d.size));
                         });
}

}  // namespace drgen
