#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "drgen/camera.hpp"
#include "drgen/environment.hpp"
#include "drgen/image.hpp"
#include "drgen/json_io.hpp"
#include "drgen/material.hpp"
#include "drgen/mesh.hpp"

namespace drgen {

struct PartInstance {
    std::string name;
    std::shared_ptr<const Mesh> mesh;
    /// Where the mesh came from: a file path or "primitive:<kind>".
    std::string mesh_source;
    Transform transform;
    /// Labeled inspection component when set; context geometry otherwise.
    std::optional<std::string> class_label;
    std::uint32_t instance_id = 0;
    /// Fixed assignment from the scene file (used by the photo-realistic strategy).
    std::optional<MaterialSpec> fixed_material;
    /// Material bound for the current frame.
    std::optional<MaterialSpec> material;

    bool labeled() const { return class_label.has_value(); }
    Aabb world_bounds() const;
    /// Bound material, else the fixed one, else a neutral grey.
    const MaterialSpec& effective_material() const;
};

/// Camera-facing textured quad. Corners are ordered top-left, top-right,
/// bottom-right, bottom-left as seen from the camera. It renders the image
/// unlit and terminates paths; it never carries a label.
struct Backplate {
    std::array<Vec3, 4> corners;
    std::shared_ptr<const Image> image;  // linear RGB; null renders black
    std::string image_source;

    Vec3 normal() const;
    Aabb bounds() const;
};

struct RegionOfInterest {
    Aabb box;
    friend bool operator==(const RegionOfInterest&, const RegionOfInterest&) = default;
};

struct SceneGraph {
    std::vector<PartInstance> parts;
    PinholeCamera camera;
    EnvironmentLight environment;
    std::optional<Backplate> backplate;
    RegionOfInterest roi;

    /// Throws on any violated scene invariant.
    void validate() const;
    /// Sorted, de-duplicated class labels of all labeled parts.
    std::vector<std::string> class_labels() const;
    const PartInstance* find(std::uint32_t instance_id) const;
    std::uint32_t max_instance_id() const;
    /// Union of world bounds of all labeled parts.
    Aabb labeled_bounds() const;
};

/// True iff all eight ROI corners project inside the image at positive depth.
/// Occlusion is not considered.
bool roi_fully_visible(const PinholeCamera& camera, const RegionOfInterest& roi);

/// Ray-parity test against the part's world-space triangles.
bool point_inside_part(const PartInstance& part, const Vec3& world_point);

/// Loads a scene description. Relative paths resolve against the file's directory.
SceneGraph load_scene(const std::filesystem::path& path);
SceneGraph scene_from_json(const Json& doc, const std::filesystem::path& base_dir);

}  // namespace drgen
