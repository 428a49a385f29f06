#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "drgen/math.hpp"

namespace drgen {

/// Indexed triangle mesh in meters. Always carries one unit normal per vertex.
struct Mesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<std::uint32_t, 3>> triangles;
    std::vector<Vec3> normals;

    Aabb bounds() const;
    /// Throws StructuralError if any invariant fails.
    void validate() const;

    friend bool operator==(const Mesh&, const Mesh&) = default;
};

/// Area-weighted per-vertex normals from face cross products. Vertices with no
/// incident area get +z.
std::vector<Vec3> compute_vertex_normals(const std::vector<Vec3>& vertices,
                                         const std::vector<std::array<std::uint32_t, 3>>& triangles);

/// Reads the ASCII `v` / `vn` / `f` format. Polygons are fan-triangulated;
/// `f` entries may use `v`, `v//vn` or `v/vt/vn` forms. When every face corner
/// names a normal, vertices are split per distinct (position, normal) pair.
/// Otherwise file normals are used only when their count matches the vertex
/// count, and recomputed from faces when they are absent or unusable.
Mesh load_mesh(const std::filesystem::path& path);
Mesh parse_mesh(std::string_view text, const std::string& source_name = "<memory>");

/// Writes `v`, `vn` and `f i j k` records with round-trip precision.
void save_mesh(const std::filesystem::path& path, const Mesh& mesh);
std::string format_mesh(const Mesh& mesh);

// Procedural primitives, centered on the origin.
Mesh make_box(const Vec3& half_extent);
Mesh make_uv_sphere(double radius, int rings, int segments);
/// Closed cylinder along +y from y = 0 to y = height.
Mesh make_cylinder(double radius, double height, int segments);
/// Single quad in the xy plane facing +z.
Mesh make_quad(double half_width, double half_height);

}  // namespace drgen
