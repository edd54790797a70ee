#pragma once

#include "gemt/types.hpp"

#include <Eigen/Core>

namespace gemt {

struct MeshBounds {
    Eigen::Vector3d min;
    Eigen::Vector3d max;
    Eigen::Vector3d extent() const { return max - min; }
    Eigen::Vector3d center() const { return 0.5 * (min + max); }
};

// Throws DegenerateMesh on zero triangles, out-of-range indices, or
// non-finite coordinates.
void validate_mesh(const PhenotypeMesh& mesh);

MeshBounds bounding_box(const PhenotypeMesh& mesh);

double surface_area(const PhenotypeMesh& mesh);

// Signed tetrahedron sum; positive for outward-facing CCW winding.
double signed_volume(const PhenotypeMesh& mesh);

// Every undirected edge is shared by exactly two triangles. Disjoint closed
// components qualify.
bool is_watertight(const PhenotypeMesh& mesh);

struct UnitCubeFit {
    PhenotypeMesh mesh;       // centered at the origin, max extent exactly 1
    double scale = 1.0;       // applied uniform scale factor
    Eigen::Vector3d offset;   // subtracted center
};

// Uniformly scales the mesh to fit a unit cube before physical evaluation;
// the applied factor is recorded so raw units stay reconstructible.
UnitCubeFit normalize_to_unit_cube(const PhenotypeMesh& mesh);

PhenotypeMesh translated(const PhenotypeMesh& mesh, const Eigen::Vector3d& delta);
PhenotypeMesh scaled(const PhenotypeMesh& mesh, double factor);
PhenotypeMesh rotated(const PhenotypeMesh& mesh, const Eigen::Matrix3d& rotation);
PhenotypeMesh mirrored_z(const PhenotypeMesh& mesh);  // flips the up axis

// Primitive builders. All outputs are watertight with outward CCW winding.
PhenotypeMesh make_box(const Eigen::Vector3d& size,
                       const Eigen::Vector3d& center = Eigen::Vector3d::Zero());
// Right-triangular prism: a ramp rising along +x toward +z, extruded in y.
PhenotypeMesh make_wedge(const Eigen::Vector3d& size,
                         const Eigen::Vector3d& center = Eigen::Vector3d::Zero());
PhenotypeMesh make_ellipsoid(const Eigen::Vector3d& radii, int stacks = 12, int slices = 16,
                             const Eigen::Vector3d& center = Eigen::Vector3d::Zero());
PhenotypeMesh make_icosphere(double radius, int subdivisions);

// Disjoint union; component meshes keep their own closed surfaces.
PhenotypeMesh merge_meshes(const std::vector<PhenotypeMesh>& parts);

} // namespace gemt
