#include "drgen/bvh.hpp"

#include <algorithm>
#include <array>
#include <numeric>

#include "drgen/scene.hpp"
#include "drgen/triangle.hpp"

namespace drgen {

namespace {

constexpr int kBins = 16;
constexpr double kTraversalCost = 1.0;
constexpr double kIntersectCost = 1.5;
// Past this depth splits fall back to the index median, which bounds the
// total depth (and the traversal stack) at about kSahDepth + log2(n).
constexpr int kSahDepth = 48;

Aabb triangle_bounds(const BvhTriangle& t) {
    Aabb b;
    b.expand(t.v0);
    b.expand(t.v1);
    b.expand(t.v2);
    return b;
}

// Conservative padding so rounding in the slab test never culls a box that
// the exact triangle test would hit.
Aabb padded(Aabb b) {
    const double mag = std::max(
        {std::abs(b.lo.x), std::abs(b.lo.y), std::abs(b.lo.z), std::abs(b.hi.x), std::abs(b.hi.y), std::abs(b.hi.z)});
    const double pad = 1e-9 * (1.0 + mag);
    b.lo -= Vec3{pad, pad, pad};
    b.hi += Vec3{pad, pad, pad};
    return b;
}

struct RayBoxContext {
    Vec3 origin;
    Vec3 inv;
    std::array<bool, 3> zero;
};

RayBoxContext make_context(const Ray& ray) {
    RayBoxContext c{ray.origin, {}, {}};
    for (int k = 0; k < 3; ++k) {
        c.zero[static_cast<size_t>(k)] = ray.direction[k] == 0.0;
        c.inv[k] = c.zero[static_cast<size_t>(k)] ? 0.0 : 1.0 / ray.direction[k];
    }
    return c;
}

/// Entry distance of the ray into the box within [t_min, t_max], or +inf on a miss.
double slab_entry(const RayBoxContext& c, const Aabb& b, double t_min, double t_max) {
    double tn = t_min, tf = t_max;
    for (int k = 0; k < 3; ++k) {
        if (c.zero[static_cast<size_t>(k)]) {
            if (c.origin[k] < b.lo[k] || c.origin[k] > b.hi[k]) return kInfinity;
            continue;
        }
        double t0 = (b.lo[k] - c.origin[k]) * c.inv[k];
        double t1 = (b.hi[k] - c.origin[k]) * c.inv[k];
        if (t0 > t1) std::swap(t0, t1);
        tn = std::max(tn, t0);
        tf = std::min(tf, t1);
        if (tn > tf) return kInfinity;
    }
    return tn;
}

struct Builder {
    const std::vector<BvhTriangle>& tris;
    std::vector<Aabb> bounds;
    std::vector<Vec3> centroids;
    std::vector<std::uint32_t>& order;
    std::vector<Bvh::Node>& nodes;

    void build(std::uint32_t node, std::uint32_t begin, std::uint32_t end, int depth) {
        Aabb box, cbox;
        for (std::uint32_t i = begin; i < end; ++i) {
            box.expand(bounds[order[i]]);
            cbox.expand(centroids[order[i]]);
        }
        nodes[node].bounds = padded(box);
        const std::uint32_t count = end - begin;
        if (count <= 1) {
            make_leaf(node, begin, count);
            return;
        }

        // Binned SAH over all three axes.
        int best_axis = -1;
        int best_split = 0;
        double best_cost = kInfinity;
        const Vec3 ext = cbox.extent();
        for (int axis = 0; axis < 3; ++axis) {
            if (!(ext[axis] > 0.0)) continue;
            std::array<Aabb, kBins> bin_box{};
            std::array<std::uint32_t, kBins> bin_count{};
            const double scale = kBins / ext[axis];
            for (std::uint32_t i = begin; i < end; ++i) {
                const int b =
                    std::min(kBins - 1, static_cast<int>((centroids[order[i]][axis] - cbox.lo[axis]) * scale));
                bin_box[static_cast<size_t>(b)].expand(bounds[order[i]]);
                ++bin_count[static_cast<size_t>(b)];
            }
            std::array<double, kBins> right_area{};
            std::array<std::uint32_t, kBins> right_count{};
            Aabb acc;
            std::uint32_t n = 0;
            for (int b = kBins - 1; b > 0; --b) {
                acc.expand(bin_box[static_cast<size_t>(b)]);
                n += bin_count[static_cast<size_t>(b)];
                right_area[static_cast<size_t>(b)] = acc.surface_area();
                right_count[static_cast<size_t>(b)] = n;
            }
            acc = Aabb{};
            n = 0;
            for (int b = 0; b < kBins - 1; ++b) {
                acc.expand(bin_box[static_cast<size_t>(b)]);
                n += bin_count[static_cast<size_t>(b)];
                const std::uint32_t rn = right_count[static_cast<size_t>(b + 1)];
                if (n == 0 || rn == 0) continue;
                const double cost = acc.surface_area() * n + right_area[static_cast<size_t>(b + 1)] * rn;
                if (cost < best_cost) {
                    best_cost = cost;
                    best_axis = axis;
                    best_split = b;
                }
            }
        }

        const double area = box.surface_area();
        const double leaf_cost = kIntersectCost * count;
        const double split_cost =
            best_axis >= 0 && area > 0.0 ? kTraversalCost + kIntersectCost * best_cost / area : kInfinity;
        if (count <= static_cast<std::uint32_t>(kMaxLeafSize) && leaf_cost <= split_cost) {
            make_leaf(node, begin, count);
            return;
        }

        std::uint32_t mid;
        if (best_axis >= 0 && depth < kSahDepth) {
            const double scale = kBins / ext[best_axis];
            auto* first = order.data() + begin;
            auto* last = order.data() + end;
            auto* pivot = std::partition(first, last, [&](std::uint32_t i) {
                const int b =
                    std::min(kBins - 1, static_cast<int>((centroids[i][best_axis] - cbox.lo[best_axis]) * scale));
                return b <= best_split;
            });
            mid = static_cast<std::uint32_t>(pivot - order.data());
        } else {
            mid = begin + count / 2;  // coincident centroids: split by position in the list
        }
        if (mid == begin || mid == end) mid = begin + count / 2;

        const auto left = static_cast<std::uint32_t>(nodes.size());
        nodes.emplace_back();
        nodes.emplace_back();
        nodes[node].first = left;
        nodes[node].right = left + 1;
        nodes[node].count = 0;
        build(left, begin, mid, depth + 1);
        build(left + 1, mid, end, depth + 1);
    }

    void make_leaf(std::uint32_t node, std::uint32_t begin, std::uint32_t count) {
        nodes[node].first = begin;
        nodes[node].count = count;
    }
};

}  // namespace

Bvh::Bvh(std::vector<BvhTriangle> triangles) : triangles_(std::move(triangles)) {
    if (triangles_.empty()) return;
    order_.resize(triangles_.size());
    std::iota(order_.begin(), order_.end(), 0u);
    Builder b{triangles_, {}, {}, order_, nodes_};
    b.bounds.reserve(triangles_.size());
    b.centroids.reserve(triangles_.size());
    for (const BvhTriangle& t : triangles_) {
        b.bounds.push_back(triangle_bounds(t));
        b.centroids.push_back((t.v0 + t.v1 + t.v2) / 3.0);
    }
    nodes_.reserve(2 * triangles_.size());
    nodes_.emplace_back();
    b.build(0, 0, static_cast<std::uint32_t>(triangles_.size()), 0);
}

std::optional<BvhHit> Bvh::intersect(const Ray& ray, double t_min, double t_max) const {
    if (nodes_.empty()) return std::nullopt;
    const RayBoxContext ctx = make_context(ray);
    std::optional<BvhHit> best;
    double best_t = t_max;

    std::array<std::uint32_t, 128> stack{};
    int sp = 0;
    if (slab_entry(ctx, nodes_[0].bounds, t_min, t_max) == kInfinity) return std::nullopt;
    stack[static_cast<size_t>(sp++)] = 0;
    while (sp > 0) {
        const Node& node = nodes_[stack[static_cast<size_t>(--sp)]];
        if (node.leaf()) {
            for (std::uint32_t k = 0; k < node.count; ++k) {
                const std::uint32_t id = order_[node.first + k];
                const BvhTriangle& tri = triangles_[id];
                // Upper bound just above best_t so exact ties are still reported.
                const double bound = best ? std::nextafter(best_t, kInfinity) : t_max;
                const auto h = intersect_triangle(ray, tri.v0, tri.v1, tri.v2, t_min, bound);
                if (!h) continue;
                if (!best || h->t < best_t || (h->t == best_t && id < best->triangle)) {
                    best = BvhHit{h->t, h->b1, h->b2, id};
                    best_t = h->t;
                }
            }
            continue;
        }
        const double tl = slab_entry(ctx, nodes_[node.first].bounds, t_min, best_t);
        const double tr = slab_entry(ctx, nodes_[node.right].bounds, t_min, best_t);
        const bool hit_l = tl != kInfinity, hit_r = tr != kInfinity;
        if (hit_l && hit_r) {
            if (tl <= tr) {
                stack[static_cast<size_t>(sp++)] = node.right;
                stack[static_cast<size_t>(sp++)] = node.first;
            } else {
                stack[static_cast<size_t>(sp++)] = node.first;
                stack[static_cast<size_t>(sp++)] = node.right;
            }
        } else if (hit_l) {
            stack[static_cast<size_t>(sp++)] = node.first;
        } else if (hit_r) {
            stack[static_cast<size_t>(sp++)] = node.right;
        }
    }
    return best;
}

bool Bvh::occluded(const Ray& ray, double t_min, double t_max) const {
    if (nodes_.empty()) return false;
    const RayBoxContext ctx = make_context(ray);
    std::array<std::uint32_t, 128> stack{};
    int sp = 0;
    stack[static_cast<size_t>(sp++)] = 0;
    while (sp > 0) {
        const Node& node = nodes_[stack[static_cast<size_t>(--sp)]];
        if (slab_entry(ctx, node.bounds, t_min, t_max) == kInfinity) continue;
        if (node.leaf()) {
            for (std::uint32_t k = 0; k < node.count; ++k) {
                const BvhTriangle& tri = triangles_[order_[node.first + k]];
                if (intersect_triangle(ray, tri.v0, tri.v1, tri.v2, t_min, t_max)) return true;
            }
            continue;
        }
        stack[static_cast<size_t>(sp++)] = node.right;
        stack[static_cast<size_t>(sp++)] = node.first;
    }
    return false;
}

std::vector<BvhTriangle> flatten_scene(const SceneGraph& scene) {
    std::vector<BvhTriangle> out;
    for (std::size_t p = 0; p < scene.parts.size(); ++p) {
        const PartInstance& part = scene.parts[p];
        if (!part.mesh) continue;
        const Affine a = Affine::from(part.transform);
        std::vector<Vec3> world;
        world.reserve(part.mesh->vertices.size());
        for (const Vec3& v : part.mesh->vertices) world.push_back(a.point(v));
        for (std::size_t t = 0; t < part.mesh->triangles.size(); ++t) {
            const auto& tri = part.mesh->triangles[t];
            out.push_back({world[tri[0]], world[tri[1]], world[tri[2]], static_cast<std::uint32_t>(p),
                           static_cast<std::uint32_t>(t)});
        }
    }
    if (scene.backplate) {
        const auto& c = scene.backplate->corners;
        out.push_back({c[0], c[1], c[2], kBackplatePart, 0});
        out.push_back({c[0], c[2], c[3], kBackplatePart, 1});
    }
    return out;
}

Bvh build_bvh(const SceneGraph& scene) { return Bvh(flatten_scene(scene)); }

}  // namespace drgen
