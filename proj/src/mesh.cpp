#include "drgen/mesh.hpp"

#include <charconv>
#include <cstdio>
#include <map>
#include <string>
#include <string_view>

#include "drgen/error.hpp"
#include "drgen/io.hpp"

namespace drgen {

Aabb Mesh::bounds() const {
    Aabb b;
    for (const Vec3& v : vertices) b.expand(v);
    return b;
}

void Mesh::validate() const {
    if (triangles.empty()) throw StructuralError("mesh has no triangles");
    if (normals.size() != vertices.size()) throw StructuralError("mesh normal count does not match vertex count");
    for (const auto& t : triangles)
        for (const std::uint32_t i : t)
            if (i >= vertices.size()) throw StructuralError("triangle index " + std::to_string(i) + " out of range");
    for (const Vec3& n : normals)
        if (!(std::abs(length(n) - 1.0) <= 1e-4)) throw StructuralError("mesh normal is not unit length");
}

std::vector<Vec3> compute_vertex_normals(const std::vector<Vec3>& vertices,
                                         const std::vector<std::array<std::uint32_t, 3>>& triangles) {
    std::vector<Vec3> acc(vertices.size());
    for (const auto& t : triangles) {
        // Unnormalized cross product has length 2 * area, which is the weight.
        const Vec3 n = cross(vertices[t[1]] - vertices[t[0]], vertices[t[2]] - vertices[t[0]]);
        for (const std::uint32_t i : t) acc[i] += n;
    }
    for (Vec3& n : acc) {
        const double len = length(n);
        n = len > 0.0 ? n / len : Vec3{0, 0, 1};
    }
    return acc;
}

namespace {

struct Cursor {
    std::string_view rest;

    std::string_view token() {
        std::size_t i = 0;
        while (i < rest.size() && (rest[i] == ' ' || rest[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < rest.size() && rest[j] != ' ' && rest[j] != '\t') ++j;
        std::string_view tok = rest.substr(i, j - i);
        rest.remove_prefix(j);
        return tok;
    }
};

bool parse_double(std::string_view s, double& out) {
    if (s.empty()) return false;
    // strtod accepts forms from_chars rejects in some libstdc++ builds (e.g. leading '+').
    std::string tmp(s);
    char* end = nullptr;
    out = std::strtod(tmp.c_str(), &end);
    return end == tmp.c_str() + tmp.size() && std::isfinite(out);
}

bool parse_index(std::string_view s, long& out) {
    if (s.empty()) return false;
    const auto* first = s.data();
    const auto* last = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last && out != 0;
}

}  // namespace

Mesh parse_mesh(std::string_view text, const std::string& source_name) {
    std::vector<Vec3> positions;
    std::vector<Vec3> file_normals;
    // Each face corner is (position index, normal index or -1).
    std::vector<std::array<std::pair<long, long>, 3>> corners;
    bool any_face_normal = false;
    bool any_plain_corner = false;

    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const std::size_t eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

        Cursor cur{line};
        const std::string_view kw = cur.token();
        if (kw.empty() || kw.front() == '#') continue;

        if (kw == "v" || kw == "vn") {
            Vec3 p;
            for (int k = 0; k < 3; ++k)
                if (!parse_double(cur.token(), p[k]))
                    throw ParseError(source_name, line_no,
                                     "expected three finite coordinates after '" + std::string(kw) + "'");
            (kw == "v" ? positions : file_normals).push_back(p);
        } else if (kw == "f") {
            std::vector<std::pair<long, long>> poly;
            for (std::string_view tok = cur.token(); !tok.empty(); tok = cur.token()) {
                const std::size_t s1 = tok.find('/');
                long vi = 0, ni = -1;
                if (!parse_index(tok.substr(0, s1), vi))
                    throw ParseError(source_name, line_no, "bad face index '" + std::string(tok) + "'");
                if (s1 != std::string_view::npos) {
                    const std::size_t s2 = tok.find('/', s1 + 1);
                    if (s2 != std::string_view::npos && s2 + 1 < tok.size()) {
                        long n = 0;
                        if (!parse_index(tok.substr(s2 + 1), n))
                            throw ParseError(source_name, line_no, "bad normal index in '" + std::string(tok) + "'");
                        if (n < 0) n = static_cast<long>(file_normals.size()) + n + 1;
                        if (n < 1 || n > static_cast<long>(file_normals.size()))
                            throw ParseError(source_name, line_no,
                                             "normal index " + std::to_string(n) + " out of range");
                        ni = n - 1;
                    }
                }
                if (vi < 0) vi = static_cast<long>(positions.size()) + vi + 1;
                if (vi < 1 || vi > static_cast<long>(positions.size()))
                    throw ParseError(source_name, line_no,
                                     "vertex index " + std::to_string(vi) + " out of range (" +
                                         std::to_string(positions.size()) + " vertices defined)");
                (ni >= 0 ? any_face_normal : any_plain_corner) = true;
                poly.emplace_back(vi - 1, ni);
            }
            if (poly.size() < 3) throw ParseError(source_name, line_no, "face needs at least three vertices");
            for (std::size_t k = 1; k + 1 < poly.size(); ++k) corners.push_back({poly[0], poly[k], poly[k + 1]});
        }
        // Other record types (vt, o, g, s, usemtl, mtllib) carry nothing we need.
    }

    if (corners.empty()) throw ParseError(source_name, 0, "mesh is empty (no faces)");

    Mesh mesh;
    if (any_face_normal && !any_plain_corner) {
        // Split vertices on distinct (position, normal) pairs.
        std::map<std::pair<long, long>, std::uint32_t> remap;
        for (const auto& tri : corners) {
            std::array<std::uint32_t, 3> t{};
            for (int k = 0; k < 3; ++k) {
                const auto key = tri[static_cast<size_t>(k)];
                auto [it, inserted] = remap.try_emplace(key, static_cast<std::uint32_t>(mesh.vertices.size()));
                if (inserted) {
                    mesh.vertices.push_back(positions[static_cast<size_t>(key.first)]);
                    mesh.normals.push_back(file_normals[static_cast<size_t>(key.second)]);
                }
                t[static_cast<size_t>(k)] = it->second;
            }
            mesh.triangles.push_back(t);
        }
    } else {
        mesh.vertices = positions;
        for (const auto& tri : corners)
            mesh.triangles.push_back({static_cast<std::uint32_t>(tri[0].first),
                                      static_cast<std::uint32_t>(tri[1].first),
                                      static_cast<std::uint32_t>(tri[2].first)});
        if (file_normals.size() == positions.size()) mesh.normals = file_normals;
    }

    bool usable = mesh.normals.size() == mesh.vertices.size();
    for (Vec3& n : mesh.normals) {
        const double len = length(n);
        if (!(len > 1e-12)) {
            usable = false;
            break;
        }
        if (std::abs(len - 1.0) > 1e-9) n = n / len;  // leave unit normals bit-exact across save/load
    }
    if (!usable) mesh.normals = compute_vertex_normals(mesh.vertices, mesh.triangles);
    return mesh;
}

Mesh load_mesh(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw IoError("mesh file '" + path.string() + "' does not exist");
    return parse_mesh(read_text_file(path), path.string());
}

std::string format_mesh(const Mesh& mesh) {
    std::string out;
    char buf[128];
    for (const Vec3& v : mesh.vertices) {
        std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", v.x, v.y, v.z);
        out += buf;
    }
    for (const Vec3& n : mesh.normals) {
        std::snprintf(buf, sizeof buf, "vn %.17g %.17g %.17g\n", n.x, n.y, n.z);
        out += buf;
    }
    for (const auto& t : mesh.triangles) {
        std::snprintf(buf, sizeof buf, "f %u %u %u\n", t[0] + 1, t[1] + 1, t[2] + 1);
        out += buf;
    }
    return out;
}

void save_mesh(const std::filesystem::path& path, const Mesh& mesh) { write_text_file(path, format_mesh(mesh)); }

Mesh make_box(const Vec3& h) {
    Mesh m;
    // One quad per face with its own vertices so normals stay axis-aligned.
    const std::array<Vec3, 6> axes{Vec3{1, 0, 0},  Vec3{-1, 0, 0}, Vec3{0, 1, 0},
                                   Vec3{0, -1, 0}, Vec3{0, 0, 1},  Vec3{0, 0, -1}};
    for (const Vec3& n : axes) {
        const Vec3 u = std::abs(n.y) > 0.5 ? Vec3{0, 0, 1} : Vec3{0, 1, 0};
        const Vec3 v = cross(n, u);
        const auto base = static_cast<std::uint32_t>(m.vertices.size());
        const std::array<std::pair<double, double>, 4> uv{{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}}};
        for (const auto& [a, b] : uv) {
            const Vec3 p = n + v * a + u * b;
            m.vertices.push_back(p * h);
            m.normals.push_back(n);
        }
        m.triangles.push_back({base, base + 1, base + 2});
        m.triangles.push_back({base, base + 2, base + 3});
    }
    // Fix winding so geometric normals agree with the stored ones.
    for (auto& t : m.triangles) {
        const Vec3 g = cross(m.vertices[t[1]] - m.vertices[t[0]], m.vertices[t[2]] - m.vertices[t[0]]);
        if (dot(g, m.normals[t[0]]) < 0) std::swap(t[1], t[2]);
    }
    return m;
}

Mesh make_uv_sphere(double radius, int rings, int segments) {
    Mesh m;
    for (int r = 0; r <= rings; ++r) {
        const double theta = kPi * r / rings;
        for (int s = 0; s <= segments; ++s) {
            const double phi = kTwoPi * s / segments;
            const Vec3 n{std::sin(theta) * std::cos(phi), std::cos(theta), std::sin(theta) * std::sin(phi)};
            m.vertices.push_back(n * radius);
            m.normals.push_back(n);
        }
    }
    const auto row = static_cast<std::uint32_t>(segments + 1);
    for (int r = 0; r < rings; ++r) {
        for (int s = 0; s < segments; ++s) {
            const std::uint32_t a = static_cast<std::uint32_t>(r) * row + static_cast<std::uint32_t>(s);
            const std::uint32_t b = a + row;
            if (r != 0) m.triangles.push_back({a, a + 1, b});
            if (r != rings - 1) m.triangles.push_back({a + 1, b + 1, b});
        }
    }
    for (auto& t : m.triangles) {
        const Vec3 g = cross(m.vertices[t[1]] - m.vertices[t[0]], m.vertices[t[2]] - m.vertices[t[0]]);
        if (dot(g, m.vertices[t[0]] + m.vertices[t[1]] + m.vertices[t[2]]) < 0) std::swap(t[1], t[2]);
    }
    return m;
}

Mesh make_cylinder(double radius, double height, int segments) {
    Mesh m;
    auto ring = [&](double y, bool side, const Vec3& cap_normal) {
        const auto base = static_cast<std::uint32_t>(m.vertices.size());
        for (int s = 0; s < segments; ++s) {
            const double phi = kTwoPi * s / segments;
            const Vec3 radial{std::cos(phi), 0, std::sin(phi)};
            m.vertices.push_back(Vec3{radial.x * radius, y, radial.z * radius});
            m.normals.push_back(side ? radial : cap_normal);
        }
        return base;
    };
    const std::uint32_t seg = static_cast<std::uint32_t>(segments);
    const std::uint32_t side_lo = ring(0.0, true, {});
    const std::uint32_t side_hi = ring(height, true, {});
    for (std::uint32_t s = 0; s < seg; ++s) {
        const std::uint32_t n = (s + 1) % seg;
        m.triangles.push_back({side_lo + s, side_hi + s, side_lo + n});
        m.triangles.push_back({side_lo + n, side_hi + s, side_hi + n});
    }
    for (const bool top : {false, true}) {
        const Vec3 cn{0, top ? 1.0 : -1.0, 0};
        const std::uint32_t rim = ring(top ? height : 0.0, false, cn);
        const auto center = static_cast<std::uint32_t>(m.vertices.size());
        m.vertices.push_back({0, top ? height : 0.0, 0});
        m.normals.push_back(cn);
        for (std::uint32_t s = 0; s < seg; ++s) m.triangles.push_back({center, rim + s, rim + (s + 1) % seg});
    }
    for (auto& t : m.triangles) {
        const Vec3 g = cross(m.vertices[t[1]] - m.vertices[t[0]], m.vertices[t[2]] - m.vertices[t[0]]);
        if (dot(g, m.normals[t[0]] + m.normals[t[1]] + m.normals[t[2]]) < 0) std::swap(t[1], t[2]);
    }
    return m;
}

Mesh make_quad(double half_width, double half_height) {
    Mesh m;
    m.vertices = {{-half_width, -half_height, 0},
                  {half_width, -half_height, 0},
                  {half_width, half_height, 0},
                  {-half_width, half_height, 0}};
    m.normals.assign(4, Vec3{0, 0, 1});
    m.triangles = {{0, 1, 2}, {0, 2, 3}};
    return m;
}

}  // namespace drgen
