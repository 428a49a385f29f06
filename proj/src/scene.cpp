#include "drgen/scene.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "drgen/error.hpp"
#include "drgen/io.hpp"
#include "drgen/triangle.hpp"

namespace drgen {

Aabb PartInstance::world_bounds() const {
    Aabb b;
    if (!mesh) return b;
    const Affine a = Affine::from(transform);
    for (const Vec3& v : mesh->vertices) b.expand(a.point(v));
    return b;
}

const MaterialSpec& PartInstance::effective_material() const {
    static const MaterialSpec kNeutral{};
    if (material) return *material;
    if (fixed_material) return *fixed_material;
    return kNeutral;
}

Vec3 Backplate::normal() const { return normalize(cross(corners[1] - corners[0], corners[3] - corners[0])); }

Aabb Backplate::bounds() const {
    Aabb b;
    for (const Vec3& c : corners) b.expand(c);
    return b;
}

bool roi_fully_visible(const PinholeCamera& camera, const RegionOfInterest& roi) {
    const double w = camera.resolution.width, h = camera.resolution.height;
    for (const Vec3& corner : roi.box.corners()) {
        const auto px = project_point(camera, corner);
        if (!px) return false;
        if (!(px->x >= 0.0 && px->x <= w && px->y >= 0.0 && px->y <= h)) return false;
    }
    return true;
}

bool point_inside_part(const PartInstance& part, const Vec3& p) {
    if (!part.mesh || !part.world_bounds().contains(p)) return false;
    const Affine a = Affine::from(part.transform);
    // Irrational-ish direction keeps the ray off edges of axis-aligned meshes.
    const Ray ray{p, normalize(Vec3{0.5773, 0.6181, 0.5331})};
    int crossings = 0;
    for (const auto& t : part.mesh->triangles) {
        if (intersect_triangle(ray, a.point(part.mesh->vertices[t[0]]), a.point(part.mesh->vertices[t[1]]),
                               a.point(part.mesh->vertices[t[2]]), 0.0, kInfinity))
            ++crossings;
    }
    return (crossings & 1) != 0;
}

void SceneGraph::validate() const {
    camera.validate();
    environment.validate();
    if (parts.empty()) throw StructuralError("scene has no parts");

    std::set<std::uint32_t> ids;
    bool any_labeled = false;
    for (const PartInstance& p : parts) {
        const std::string where = "parts[" + p.name + "]";
        if (!p.mesh) throw StructuralError(where + ": no mesh");
        p.mesh->validate();
        if (p.instance_id == 0 || p.instance_id > 0xFFFFu)
            throw ConfigError(where + ".instance_id", "must be in [1, 65535]");
        if (!ids.insert(p.instance_id).second)
            throw ConfigError(where + ".instance_id", "duplicate instance id " + std::to_string(p.instance_id));
        if (!(p.transform.scale > 0.0)) throw ConfigError(where + ".scale", "must be > 0");
        if (p.class_label && p.class_label->empty()) throw ConfigError(where + ".class_label", "must not be empty");
        if (p.fixed_material) p.fixed_material->validate(where + ".material");
        if (p.material) p.material->validate(where + ".material");
        any_labeled = any_labeled || p.labeled();
    }
    if (!any_labeled) throw StructuralError("scene needs at least one labeled part");

    if (roi.box.empty()) throw ConfigError("roi", "region of interest is empty");
    const double tol = 1e-9 * std::max(1.0, roi.box.diagonal());
    for (const PartInstance& p : parts) {
        if (!p.labeled()) continue;
        const Aabb b = p.world_bounds();
        Aabb padded = roi.box;
        padded.lo -= Vec3{tol, tol, tol};
        padded.hi += Vec3{tol, tol, tol};
        if (!padded.contains(b)) throw ConfigError("roi", "does not contain labeled part '" + p.name + "'");
    }

    for (const PartInstance& p : parts)
        if (point_inside_part(p, camera.position())) throw StructuralError("camera is inside part '" + p.name + "'");

    if (backplate) {
        for (const Vec3& c : backplate->corners)
            if (!is_finite(c)) throw ConfigError("backplate.corners", "must be finite");
        const Vec3 n =
            cross(backplate->corners[1] - backplate->corners[0], backplate->corners[3] - backplate->corners[0]);
        if (!(length(n) > 0.0)) throw ConfigError("backplate.corners", "quad is degenerate");
        const Vec3 unit = normalize(n);
        const double cam_side = dot(camera.position() - backplate->corners[0], unit);
        if (cam_side == 0.0) throw ConfigError("backplate.corners", "camera lies in the backplate plane");
        for (const PartInstance& p : parts) {
            if (!p.labeled()) continue;
            for (const Vec3& c : p.world_bounds().corners()) {
                if (dot(c - backplate->corners[0], unit) * cam_side <= 0.0)
                    throw ConfigError("backplate.corners",
                                      "backplate intersects or hides labeled part '" + p.name + "'");
            }
        }
    }
}

std::vector<std::string> SceneGraph::class_labels() const {
    std::set<std::string> labels;
    for (const PartInstance& p : parts)
        if (p.class_label) labels.insert(*p.class_label);
    return {labels.begin(), labels.end()};
}

const PartInstance* SceneGraph::find(std::uint32_t instance_id) const {
    for (const PartInstance& p : parts)
        if (p.instance_id == instance_id) return &p;
    return nullptr;
}

std::uint32_t SceneGraph::max_instance_id() const {
    std::uint32_t m = 0;
    for (const PartInstance& p : parts) m = std::max(m, p.instance_id);
    return m;
}

Aabb SceneGraph::labeled_bounds() const {
    Aabb b;
    for (const PartInstance& p : parts)
        if (p.labeled()) b.expand(p.world_bounds());
    return b;
}

namespace {

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
}

std::shared_ptr<const Mesh> primitive_from_json(const Json& j, const std::string& path, std::string& source) {
    using namespace json_field;
    const std::string kind = string(j, "kind", path);
    source = "primitive:" + kind;
    if (kind == "box") return std::make_shared<const Mesh>(make_box(vec3(j, "half_extent", path)));
    if (kind == "sphere")
        return std::make_shared<const Mesh>(make_uv_sphere(number(j, "radius", path),
                                                           static_cast<int>(integer_or(j, "rings", path, 16)),
                                                           static_cast<int>(integer_or(j, "segments", path, 32))));
    if (kind == "cylinder")
        return std::make_shared<const Mesh>(make_cylinder(number(j, "radius", path), number(j, "height", path),
                                                          static_cast<int>(integer_or(j, "segments", path, 24))));
    if (kind == "quad")
        return std::make_shared<const Mesh>(make_quad(number(j, "half_width", path), number(j, "half_height", path)));
    throw ConfigError(path + ".kind", "unknown primitive '" + kind + "'");
}

}  // namespace

SceneGraph scene_from_json(const Json& doc, const std::filesystem::path& base_dir) {
    using namespace json_field;
    SceneGraph scene;
    std::map<std::string, std::shared_ptr<const Mesh>> mesh_cache;
    std::vector<std::string> missing;

    const Json& parts = require(doc, "parts", "");
    if (!parts.is_array()) throw ConfigError("parts", "expected an array");
    for (std::size_t i = 0; i < parts.size(); ++i) {
        const Json& pj = parts[i];
        const std::string where = "parts[" + std::to_string(i) + "]";
        PartInstance part;
        part.name = string_or(pj, "name", where, "part" + std::to_string(i));
        if (has(pj, "mesh")) {
            const std::filesystem::path mp = resolve(base_dir, string(pj, "mesh", where));
            part.mesh_source = string(pj, "mesh", where);
            auto it = mesh_cache.find(mp.string());
            if (it == mesh_cache.end()) {
                if (!std::filesystem::exists(mp)) {
                    missing.push_back(mp.string());
                    continue;
                }
                it = mesh_cache.emplace(mp.string(), std::make_shared<const Mesh>(load_mesh(mp))).first;
            }
            part.mesh = it->second;
        } else if (has(pj, "primitive")) {
            part.mesh = primitive_from_json(pj.at("primitive"), where + ".primitive", part.mesh_source);
        } else {
            throw ConfigError(where + ".mesh", "missing required field (or give 'primitive')");
        }
        part.transform = transform_from_json(pj, where);
        if (has(pj, "class_label")) part.class_label = string(pj, "class_label", where);
        const std::int64_t id = integer_or(pj, "instance_id", where, static_cast<std::int64_t>(i) + 1);
        if (id <= 0 || id > 0xFFFF) throw ConfigError(where + ".instance_id", "must be in [1, 65535]");
        part.instance_id = static_cast<std::uint32_t>(id);
        if (has(pj, "material")) part.fixed_material = material_from_json(pj.at("material"), where + ".material");
        scene.parts.push_back(std::move(part));
    }

    const Json& cj = require(doc, "camera", "");
    if (has(cj, "look_at")) {
        const Json& la = cj.at("look_at");
        scene.camera.pose = look_at(vec3(la, "eye", "camera.look_at"), vec3(la, "target", "camera.look_at"),
                                    has(la, "up") ? vec3(la, "up", "camera.look_at") : Vec3{0, 1, 0});
    } else {
        scene.camera.pose = transform_from_json(cj, "camera");
    }
    scene.camera.vertical_fov = number(cj, "vertical_fov", "camera");
    if (has(cj, "resolution")) {
        const Json& r = cj.at("resolution");
        if (!r.is_array() || r.size() != 2 || !r[0].is_number_integer() || !r[1].is_number_integer())
            throw ConfigError("camera.resolution", "expected [width, height]");
        scene.camera.resolution = {r[0].get<int>(), r[1].get<int>()};
    }

    if (has(doc, "environment")) {
        const Json& ej = doc.at("environment");
        if (has(ej, "hdri")) {
            const std::filesystem::path hp = resolve(base_dir, string(ej, "hdri", "environment"));
            if (!std::filesystem::exists(hp))
                missing.push_back(hp.string());
            else
                scene.environment.map = EnvironmentMap::load(hp);
        } else {
            scene.environment.map = EnvironmentMap::constant(vec3(ej, "constant", "environment"));
        }
        scene.environment.rotation = number_or(ej, "rotation", "environment", 0.0);
        scene.environment.intensity_scale = number_or(ej, "intensity_scale", "environment", 1.0);
        scene.environment.color_tint = has(ej, "color_tint") ? vec3(ej, "color_tint", "environment") : Vec3{1, 1, 1};
    } else {
        scene.environment = EnvironmentLight::constant({1, 1, 1});
    }

    if (has(doc, "backplate")) {
        const Json& bj = doc.at("backplate");
        const Json& corners = require(bj, "corners", "backplate");
        if (!corners.is_array() || corners.size() != 4) throw ConfigError("backplate.corners", "expected four corners");
        Backplate bp;
        for (std::size_t k = 0; k < 4; ++k)
            bp.corners[k] = vec3_of(corners[k], "backplate.corners[" + std::to_string(k) + "]");
        if (has(bj, "image")) {
            const std::filesystem::path ip = resolve(base_dir, string(bj, "image", "backplate"));
            bp.image_source = ip.string();
            if (!std::filesystem::exists(ip))
                missing.push_back(ip.string());
            else
                bp.image = std::make_shared<const Image>(load_photo_linear(ip));
        }
        scene.backplate = bp;
    }

    if (!missing.empty()) {
        std::string msg = "missing files:";
        for (const std::string& m : missing) msg += "\n  " + m;
        throw IoError(msg);
    }

    if (has(doc, "roi")) {
        const Json& rj = doc.at("roi");
        scene.roi.box.lo = vec3(rj, "min", "roi");
        scene.roi.box.hi = vec3(rj, "max", "roi");
    } else {
        scene.roi.box = scene.labeled_bounds();
    }

    scene.validate();
    return scene;
}

SceneGraph load_scene(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw IoError("scene file '" + path.string() + "' does not exist");
    Json doc;
    try {
        doc = Json::parse(read_text_file(path));
    } catch (const Json::parse_error& e) {
        throw ParseError(path.string(), 0, e.what());
    }
    return scene_from_json(doc, path.parent_path());
}

}  // namespace drgen
