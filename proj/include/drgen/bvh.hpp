#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "drgen/math.hpp"

namespace drgen {

struct SceneGraph;

/// World-space triangle with a back-reference to its source.
struct BvhTriangle {
    Vec3 v0, v1, v2;
    std::uint32_t part = 0;   // index into SceneGraph::parts, or kBackplatePart
    std::uint32_t local = 0;  // triangle index within the part's mesh (or backplate half)
};

inline constexpr std::uint32_t kBackplatePart = std::numeric_limits<std::uint32_t>::max();
inline constexpr int kMaxLeafSize = 4;

struct BvhHit {
    double t = 0.0;
    double b1 = 0.0, b2 = 0.0;
    std::uint32_t triangle = 0;  // index into Bvh::triangles()
};

/// Binary BVH, binned-SAH build, leaves hold at most kMaxLeafSize triangles.
/// Nearest-hit queries break exact t ties toward the lower triangle index,
/// matching an exhaustive scan in input order.
class Bvh {
public:
    struct Node {
        Aabb bounds;
        std::uint32_t first = 0;  // leaf: offset into order(); inner: left child index
        std::uint32_t count = 0;  // leaf: triangle count; inner: 0
        std::uint32_t right = 0;  // inner: right child index
        bool leaf() const { return count > 0; }
    };

    Bvh() = default;
    explicit Bvh(std::vector<BvhTriangle> triangles);

    std::optional<BvhHit> intersect(const Ray& ray, double t_min, double t_max) const;
    bool occluded(const Ray& ray, double t_min, double t_max) const;

    const std::vector<BvhTriangle>& triangles() const { return triangles_; }
    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<std::uint32_t>& order() const { return order_; }
    bool empty() const { return triangles_.empty(); }

private:
    std::vector<BvhTriangle> triangles_;
    std::vector<Node> nodes_;
    std::vector<std::uint32_t> order_;
};

/// Flattens all parts (and the backplate, if present) into world space.
std::vector<BvhTriangle> flatten_scene(const SceneGraph& scene);
Bvh build_bvh(const SceneGraph& scene);

}  // namespace drgen
