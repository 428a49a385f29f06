#include "drgen/labeler.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "drgen/bvh.hpp"
#include "drgen/error.hpp"

namespace drgen {

void LabelPolicy::validate(const std::string& path) const {
    if (!std::isfinite(min_visible_pixels) || min_visible_pixels < 0.0)
        throw ConfigError(path + ".min_visible_pixels", "must be finite and >= 0");
    if (!std::isfinite(min_visibility_fraction) || min_visibility_fraction < 0.0)
        throw ConfigError(path + ".min_visibility_fraction", "must be finite and >= 0");
}

Json to_json(const LabelPolicy& p) {
    return Json{{"min_visible_pixels", p.min_visible_pixels}, {"min_visibility_fraction", p.min_visibility_fraction}};
}

LabelPolicy label_policy_from_json(const Json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path, "must be an object");
    LabelPolicy p;
    p.min_visible_pixels = json_field::number_or(j, "min_visible_pixels", path, p.min_visible_pixels);
    p.min_visibility_fraction = json_field::number_or(j, "min_visibility_fraction", path, p.min_visibility_fraction);
    p.validate(path);
    return p;
}

std::uint64_t solo_visible_pixels(const SceneGraph& scene, std::size_t part_index, Resolution resolution) {
    const PartInstance& part = scene.parts.at(part_index);
    SceneGraph solo;
    solo.parts.push_back(part);
    const Bvh bvh = build_bvh(solo);
    const PinholeCamera cam = camera_at(scene.camera, resolution);

    // Only pixels inside the projected bounds can be hit.
    int x0 = 0, y0 = 0, x1 = resolution.width - 1, y1 = resolution.height - 1;
    double lo_x = kInfinity, lo_y = kInfinity, hi_x = -kInfinity, hi_y = -kInfinity;
    bool all_in_front = true;
    for (const Vec3& c : part.world_bounds().corners()) {
        const auto p = project_point(cam, c);
        if (!p) {
            all_in_front = false;
            break;
        }
        lo_x = std::min(lo_x, p->x);
        lo_y = std::min(lo_y, p->y);
        hi_x = std::max(hi_x, p->x);
        hi_y = std::max(hi_y, p->y);
    }
    if (all_in_front) {
        // One pixel of slack absorbs rounding in the projection.
        x0 = std::max(x0, static_cast<int>(std::floor(lo_x - 0.5)) - 1);
        y0 = std::max(y0, static_cast<int>(std::floor(lo_y - 0.5)) - 1);
        x1 = std::min(x1, static_cast<int>(std::ceil(hi_x - 0.5)) + 1);
        y1 = std::min(y1, static_cast<int>(std::ceil(hi_y - 0.5)) + 1);
    }
    std::uint64_t count = 0;
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x)
            if (bvh.intersect(cam.ray_through(x + 0.5, y + 0.5), 0.0, kInfinity)) ++count;
    return count;
}

namespace {

struct Extent {
    int x0, y0, x1, y1;
    std::uint64_t pixels = 0;
};

std::map<std::uint32_t, Extent> scan(const IdMap& ids) {
    std::map<std::uint32_t, Extent> out;
    for (int y = 0; y < ids.height; ++y)
        for (int x = 0; x < ids.width; ++x) {
            const std::uint32_t id = ids.at(x, y);
            if (id == 0) continue;
            auto [it, inserted] = out.try_emplace(id, Extent{x, y, x, y});
            Extent& e = it->second;
            e.x0 = std::min(e.x0, x);
            e.y0 = std::min(e.y0, y);
            e.x1 = std::max(e.x1, x);
            e.y1 = std::max(e.y1, y);
            ++e.pixels;
        }
    return out;
}

PixelBox box_of(const Extent& e) { return {e.x0, e.y0, e.x1 - e.x0 + 1, e.y1 - e.y0 + 1}; }

double fraction(std::uint64_t visible, std::uint64_t unoccluded) {
    return unoccluded ? static_cast<double>(visible) / static_cast<double>(unoccluded) : 0.0;
}

}  // namespace

std::vector<InstanceAnnotation> measure_instances(const IdMap& ids, const SceneGraph& scene) {
    std::vector<InstanceAnnotation> out;
    const Resolution res{ids.width, ids.height};
    for (const auto& [id, e] : scan(ids)) {
        const PartInstance* part = scene.find(id);
        if (!part) throw StructuralError("instance id " + std::to_string(id) + " in the id map is not in the scene");
        if (!part->labeled()) continue;
        const auto index = static_cast<std::size_t>(part - scene.parts.data());
        InstanceAnnotation a;
        a.instance_id = id;
        a.class_label = *part->class_label;
        a.bbox = box_of(e);
        a.visible_pixels = e.pixels;
        a.unoccluded_pixels = std::max(solo_visible_pixels(scene, index, res), e.pixels);
        a.visibility_fraction = fraction(a.visible_pixels, a.unoccluded_pixels);
        out.push_back(std::move(a));
    }
    return out;
}

std::vector<InstanceAnnotation> remeasure_instances(const IdMap& ids, const std::vector<InstanceAnnotation>& previous) {
    const auto extents = scan(ids);
    std::vector<InstanceAnnotation> out;
    for (const InstanceAnnotation& p : previous) {
        const auto it = extents.find(p.instance_id);
        if (it == extents.end()) continue;
        InstanceAnnotation a = p;
        a.bbox = box_of(it->second);
        a.visible_pixels = it->second.pixels;
        a.visibility_fraction = fraction(a.visible_pixels, a.unoccluded_pixels);
        out.push_back(std::move(a));
    }
    return out;
}

std::vector<InstanceAnnotation> filter_annotations(const std::vector<InstanceAnnotation>& candidates,
                                                   const LabelPolicy& policy) {
    std::vector<InstanceAnnotation> out;
    for (const InstanceAnnotation& a : candidates)
        if (a.visible_pixels >= 1 && policy.accepts(a)) out.push_back(a);
    return out;
}

std::vector<InstanceAnnotation> extract_annotations(const FrameBuffers& frame, const SceneGraph& scene,
                                                    const LabelPolicy& policy) {
    const IdMap& ids = frame.instance_id;
    if (frame.beauty.width != ids.width || frame.beauty.height != ids.height)
        throw StructuralError("beauty image is " + std::to_string(frame.beauty.width) + "x" +
                              std::to_string(frame.beauty.height) + " but the id map is " + std::to_string(ids.width) +
                              "x" + std::to_string(ids.height));
    if (!frame.linear.data.empty() && (frame.linear.width != ids.width || frame.linear.height != ids.height))
        throw StructuralError("radiance buffer and id map differ in size");
    if (ids.ids.size() != static_cast<std::size_t>(ids.width) * static_cast<std::size_t>(ids.height))
        throw StructuralError("id map storage does not match its dimensions");
    return filter_annotations(measure_instances(ids, scene), policy);
}

Json to_json(const InstanceAnnotation& a) {
    return Json{{"instance_id", a.instance_id},
                {"class_label", a.class_label},
                {"bbox", {a.bbox.x, a.bbox.y, a.bbox.w, a.bbox.h}},
                {"visible_pixels", a.visible_pixels},
                {"unoccluded_pixels", a.unoccluded_pixels},
                {"visibility_fraction", a.visibility_fraction}};
}

InstanceAnnotation annotation_from_json(const Json& j, const std::string& path) {
    using namespace json_field;
    InstanceAnnotation a;
    a.instance_id = static_cast<std::uint32_t>(integer(j, "instance_id", path));
    a.class_label = string(j, "class_label", path);
    const Json& b = require(j, "bbox", path);
    if (!b.is_array() || b.size() != 4) throw ConfigError(path + ".bbox", "must be [x, y, w, h]");
    a.bbox = {b[0].get<int>(), b[1].get<int>(), b[2].get<int>(), b[3].get<int>()};
    a.visible_pixels = static_cast<std::uint64_t>(integer(j, "visible_pixels", path));
    a.unoccluded_pixels = static_cast<std::uint64_t>(integer(j, "unoccluded_pixels", path));
    a.visibility_fraction = number(j, "visibility_fraction", path);
    return a;
}

}  // namespace drgen
