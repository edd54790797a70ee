#include "gemt/mesh.hpp"

#include "gemt/errors.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <utility>

namespace gemt {

void validate_mesh(const PhenotypeMesh& mesh) {
    if (mesh.triangles.empty()) throw DegenerateMesh("mesh has no triangles");
    const int n = static_cast<int>(mesh.vertices.size());
    for (const Eigen::Vector3i& t : mesh.triangles) {
        for (int j = 0; j < 3; ++j) {
            if (t[j] < 0 || t[j] >= n)
                throw DegenerateMesh("triangle index out of range: " + std::to_string(t[j]));
        }
    }
    for (const Eigen::Vector3d& v : mesh.vertices) {
        if (!v.allFinite()) throw DegenerateMesh("non-finite vertex coordinate");
    }
}

MeshBounds bounding_box(const PhenotypeMesh& mesh) {
    if (mesh.vertices.empty()) throw DegenerateMesh("mesh has no vertices");
    MeshBounds b;
    b.min.setConstant(std::numeric_limits<double>::infinity());
    b.max.setConstant(-std::numeric_limits<double>::infinity());
    for (const Eigen::Vector3d& v : mesh.vertices) {
        b.min = b.min.cwiseMin(v);
        b.max = b.max.cwiseMax(v);
    }
    return b;
}

double surface_area(const PhenotypeMesh& mesh) {
    double area = 0.0;
    for (const Eigen::Vector3i& t : mesh.triangles) {
        const Eigen::Vector3d& a = mesh.vertices[t[0]];
        const Eigen::Vector3d& b = mesh.vertices[t[1]];
        const Eigen::Vector3d& c = mesh.vertices[t[2]];
        area += 0.5 * (b - a).cross(c - a).norm();
    }
    return area;
}

double signed_volume(const PhenotypeMesh& mesh) {
    double volume = 0.0;
    for (const Eigen::Vector3i& t : mesh.triangles) {
        const Eigen::Vector3d& a = mesh.vertices[t[0]];
        const Eigen::Vector3d& b = mesh.vertices[t[1]];
        const Eigen::Vector3d& c = mesh.vertices[t[2]];
        volume += a.dot(b.cross(c)) / 6.0;
    }
    return volume;
}

bool is_watertight(const PhenotypeMesh& mesh) {
    if (mesh.triangles.empty()) return false;
    std::map<std::pair<int, int>, int> edge_count;
    for (const Eigen::Vector3i& t : mesh.triangles) {
        for (int j = 0; j < 3; ++j) {
            int a = t[j];
            int b = t[(j + 1) % 3];
            if (a == b) return false;
            if (a > b) std::swap(a, b);
            ++edge_count[{a, b}];
        }
    }
    for (const auto& [edge, count] : edge_count) {
        (void)edge;
        if (count != 2) return false;
    }
    return true;
}

UnitCubeFit normalize_to_unit_cube(const PhenotypeMesh& mesh) {
    validate_mesh(mesh);
    const MeshBounds b = bounding_box(mesh);
    const double longest = b.extent().maxCoeff();
    if (!(longest > 0.0)) throw DegenerateMesh("mesh has zero extent");

    UnitCubeFit fit;
    fit.scale = 1.0 / longest;
    fit.offset = b.center();
    fit.mesh = mesh;
    for (Eigen::Vector3d& v : fit.mesh.vertices) v = (v - fit.offset) * fit.scale;
    return fit;
}

PhenotypeMesh translated(const PhenotypeMesh& mesh, const Eigen::Vector3d& delta) {
    PhenotypeMesh out = mesh;
    for (Eigen::Vector3d& v : out.vertices) v += delta;
    return out;
}

PhenotypeMesh scaled(const PhenotypeMesh& mesh, double factor) {
    PhenotypeMesh out = mesh;
    for (Eigen::Vector3d& v : out.vertices) v *= factor;
    return out;
}

PhenotypeMesh rotated(const PhenotypeMesh& mesh, const Eigen::Matrix3d& rotation) {
    PhenotypeMesh out = mesh;
    for (Eigen::Vector3d& v : out.vertices) v = rotation * v;
    return out;
}

PhenotypeMesh mirrored_z(const PhenotypeMesh& mesh) {
    PhenotypeMesh out = mesh;
    for (Eigen::Vector3d& v : out.vertices) v.z() = -v.z();
    // Restore outward winding after the reflection.
    for (Eigen::Vector3i& t : out.triangles) std::swap(t[1], t[2]);
    return out;
}

PhenotypeMesh make_box(const Eigen::Vector3d& size, const Eigen::Vector3d& center) {
    const Eigen::Vector3d h = 0.5 * size;
    PhenotypeMesh m;
    m.vertices = {
        center + Eigen::Vector3d(-h.x(), -h.y(), -h.z()),
        center + Eigen::Vector3d(h.x(), -h.y(), -h.z()),
        center + Eigen::Vector3d(h.x(), h.y(), -h.z()),
        center + Eigen::Vector3d(-h.x(), h.y(), -h.z()),
        center + Eigen::Vector3d(-h.x(), -h.y(), h.z()),
        center + Eigen::Vector3d(h.x(), -h.y(), h.z()),
        center + Eigen::Vector3d(h.x(), h.y(), h.z()),
        center + Eigen::Vector3d(-h.x(), h.y(), h.z()),
    };
    m.triangles = {
        {0, 2, 1}, {0, 3, 2},  // -z
        {4, 5, 6}, {4, 6, 7},  // +z
        {0, 1, 5}, {0, 5, 4},  // -y
        {3, 7, 6}, {3, 6, 2},  // +y
        {0, 4, 7}, {0, 7, 3},  // -x
        {1, 2, 6}, {1, 6, 5},  // +x
    };
    return m;
}

PhenotypeMesh make_wedge(const Eigen::Vector3d& size, const Eigen::Vector3d& center) {
    const Eigen::Vector3d h = 0.5 * size;
    // Triangular cross-section in xz (sharp edge at the front, -x), extruded
    // along y. The slanted face rises from front-bottom to rear-top.
    PhenotypeMesh m;
    m.vertices = {
        center + Eigen::Vector3d(-h.x(), -h.y(), -h.z()),  // 0 front bottom, -y
        center + Eigen::Vector3d(h.x(), -h.y(), -h.z()),   // 1 rear bottom, -y
        center + Eigen::Vector3d(h.x(), -h.y(), h.z()),    // 2 rear top, -y
        center + Eigen::Vector3d(-h.x(), h.y(), -h.z()),   // 3 front bottom, +y
        center + Eigen::Vector3d(h.x(), h.y(), -h.z()),    // 4 rear bottom, +y
        center + Eigen::Vector3d(h.x(), h.y(), h.z()),     // 5 rear top, +y
    };
    m.triangles = {
        {0, 1, 2},             // -y cap
        {3, 5, 4},             // +y cap
        {0, 4, 1}, {0, 3, 4},  // bottom (-z)
        {1, 5, 2}, {1, 4, 5},  // rear (+x)
        {0, 5, 3}, {0, 2, 5},  // slanted face
    };
    return m;
}

PhenotypeMesh make_ellipsoid(const Eigen::Vector3d& radii, int stacks, int slices,
                             const Eigen::Vector3d& center) {
    PhenotypeMesh m;
    const int top = 0;
    m.vertices.emplace_back(center + Eigen::Vector3d(0, 0, radii.z()));
    for (int i = 1; i < stacks; ++i) {
        const double phi = M_PI * i / stacks;          // from +z pole
        for (int j = 0; j < slices; ++j) {
            const double theta = 2.0 * M_PI * j / slices;
            m.vertices.emplace_back(center + Eigen::Vector3d(radii.x() * std::sin(phi) * std::cos(theta),
                                                             radii.y() * std::sin(phi) * std::sin(theta),
                                                             radii.z() * std::cos(phi)));
        }
    }
    const int bottom = static_cast<int>(m.vertices.size());
    m.vertices.emplace_back(center + Eigen::Vector3d(0, 0, -radii.z()));

    auto ring = [&](int i, int j) { return 1 + (i - 1) * slices + (j % slices); };

    for (int j = 0; j < slices; ++j)
        m.triangles.push_back({top, ring(1, j), ring(1, j + 1)});
    for (int i = 1; i + 1 < stacks; ++i) {
        for (int j = 0; j < slices; ++j) {
            const int a = ring(i, j), b = ring(i, j + 1), c = ring(i + 1, j), d = ring(i + 1, j + 1);
            m.triangles.push_back({a, c, d});
            m.triangles.push_back({a, d, b});
        }
    }
    for (int j = 0; j < slices; ++j)
        m.triangles.push_back({bottom, ring(stacks - 1, j + 1), ring(stacks - 1, j)});
    return m;
}

PhenotypeMesh make_icosphere(double radius, int subdivisions) {
    // Icosahedron, then midpoint subdivision with projection to the sphere.
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Eigen::Vector3d> verts = {
        {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
        {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1},
    };
    for (Eigen::Vector3d& v : verts) v.normalize();
    std::vector<Eigen::Vector3i> tris = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
        {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
        {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1},
    };

    for (int s = 0; s < subdivisions; ++s) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int a, int b) {
            auto key = std::minmax(a, b);
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            Eigen::Vector3d v = (verts[a] + verts[b]).normalized();
            verts.push_back(v);
            int idx = static_cast<int>(verts.size()) - 1;
            midpoint.emplace(key, idx);
            return idx;
        };
        std::vector<Eigen::Vector3i> next;
        next.reserve(tris.size() * 4);
        for (const Eigen::Vector3i& tri : tris) {
            const int ab = mid(tri[0], tri[1]);
            const int bc = mid(tri[1], tri[2]);
            const int ca = mid(tri[2], tri[0]);
            next.push_back({tri[0], ab, ca});
            next.push_back({tri[1], bc, ab});
            next.push_back({tri[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        tris = std::move(next);
    }

    PhenotypeMesh m;
    m.vertices.reserve(verts.size());
    for (const Eigen::Vector3d& v : verts) m.vertices.push_back(v * radius);
    m.triangles = std::move(tris);
    return m;
}

PhenotypeMesh merge_meshes(const std::vector<PhenotypeMesh>& parts) {
    PhenotypeMesh out;
    for (const PhenotypeMesh& part : parts) {
        const int base = static_cast<int>(out.vertices.size());
        out.vertices.insert(out.vertices.end(), part.vertices.begin(), part.vertices.end());
        for (const Eigen::Vector3i& t : part.triangles)
            out.triangles.push_back({t[0] + base, t[1] + base, t[2] + base});
    }
    return out;
}

} // namespace gemt
