#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "drgen/image.hpp"
#include "drgen/json_io.hpp"
#include "drgen/renderer.hpp"
#include "drgen/scene.hpp"

namespace drgen {

/// Integer pixel box: columns [x, x+w), rows [y, y+h).
struct PixelBox {
    int x = 0, y = 0, w = 0, h = 0;
    friend bool operator==(const PixelBox&, const PixelBox&) = default;
};

struct InstanceAnnotation {
    std::uint32_t instance_id = 0;
    std::string class_label;
    PixelBox bbox;  // tight over visible pixels
    std::uint64_t visible_pixels = 0;
    std::uint64_t unoccluded_pixels = 0;  // from the solo-visibility pass
    double visibility_fraction = 0.0;

    friend bool operator==(const InstanceAnnotation&, const InstanceAnnotation&) = default;
};

struct LabelPolicy {
    double min_visible_pixels = 25;
    double min_visibility_fraction = 0.25;

    void validate(const std::string& path = "label_policy") const;
    bool accepts(const InstanceAnnotation& a) const {
        return static_cast<double>(a.visible_pixels) >= min_visible_pixels &&
               a.visibility_fraction >= min_visibility_fraction;
    }
    friend bool operator==(const LabelPolicy&, const LabelPolicy&) = default;
};

Json to_json(const LabelPolicy& p);
LabelPolicy label_policy_from_json(const Json& j, const std::string& path = "label_policy");

/// Pixels whose center ray hits the part when it is rendered alone.
std::uint64_t solo_visible_pixels(const SceneGraph& scene, std::size_t part_index, Resolution resolution);

/// Every labeled instance with at least one visible pixel, before policy
/// filtering, ordered by instance id.
std::vector<InstanceAnnotation> measure_instances(const IdMap& ids, const SceneGraph& scene);

/// Recomputes boxes and visible counts from an id map, keeping the class
/// labels and solo counts of `previous` (used when relabeling stored frames).
std::vector<InstanceAnnotation> remeasure_instances(const IdMap& ids, const std::vector<InstanceAnnotation>& previous);

std::vector<InstanceAnnotation> filter_annotations(const std::vector<InstanceAnnotation>& candidates,
                                                   const LabelPolicy& policy);

/// Throws StructuralError when the buffers disagree in size or the id map
/// names instances that are not in the scene.
std::vector<InstanceAnnotation> extract_annotations(const FrameBuffers& frame, const SceneGraph& scene,
                                                    const LabelPolicy& policy);

Json to_json(const InstanceAnnotation& a);
InstanceAnnotation annotation_from_json(const Json& j, const std::string& path);

}  // namespace drgen
