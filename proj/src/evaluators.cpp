#include "gemt/evaluators.hpp"

#include "gemt/errors.hpp"
#include "gemt/mesh.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <limits>

namespace gemt {

namespace {

struct ProjectionBasis {
    Eigen::Vector3d u, v;
};

ProjectionBasis basis_for_axis(const Eigen::Vector3d& axis) {
    const double len = axis.norm();
    if (!(len > 0.0)) throw ZeroAxis("projection axis must be non-zero");
    const Eigen::Vector3d w = axis / len;
    const Eigen::Vector3d ref =
        std::abs(w.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
    ProjectionBasis b;
    b.u = w.cross(ref).normalized();
    b.v = w.cross(b.u);
    return b;
}

} // namespace

double projected_frontal_area(const PhenotypeMesh& mesh, const Eigen::Vector3d& axis,
                              int resolution) {
    validate_mesh(mesh);
    const ProjectionBasis basis = basis_for_axis(axis);

    std::vector<Eigen::Vector2d> projected;
    projected.reserve(mesh.vertices.size());
    Eigen::Vector2d lo(std::numeric_limits<double>::infinity(),
                       std::numeric_limits<double>::infinity());
    Eigen::Vector2d hi = -lo;
    for (const Eigen::Vector3d& p : mesh.vertices) {
        const Eigen::Vector2d q(p.dot(basis.u), p.dot(basis.v));
        projected.push_back(q);
        lo = lo.cwiseMin(q);
        hi = hi.cwiseMax(q);
    }

    const double side = (hi - lo).maxCoeff();
    if (!(side > 0.0)) return 0.0;  // projection collapses to a point or segment

    // Square raster window centered on the projected bounding box. The grid
    // scales with the mesh, which is what makes the area scale exactly
    // quadratically under uniform mesh scaling.
    const Eigen::Vector2d center = 0.5 * (lo + hi);
    const Eigen::Vector2d origin = center - 0.5 * Eigen::Vector2d(side, side);
    const double cell = side / resolution;
    const double eps = 1e-12 * side * side;

    std::vector<std::uint8_t> covered(static_cast<std::size_t>(resolution) * resolution, 0);

    for (const Eigen::Vector3i& t : mesh.triangles) {
        const Eigen::Vector2d& a = projected[t[0]];
        const Eigen::Vector2d& b = projected[t[1]];
        const Eigen::Vector2d& c = projected[t[2]];

        const double twice_area = (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
        if (std::abs(twice_area) < eps) continue;  // edge-on triangle, no silhouette

        const double min_x = std::min({a.x(), b.x(), c.x()});
        const double max_x = std::max({a.x(), b.x(), c.x()});
        const double min_y = std::min({a.y(), b.y(), c.y()});
        const double max_y = std::max({a.y(), b.y(), c.y()});
        int jx0 = std::max(0, static_cast<int>(std::floor((min_x - origin.x()) / cell - 0.5)));
        int jx1 = std::min(resolution - 1,
                           static_cast<int>(std::ceil((max_x - origin.x()) / cell - 0.5)));
        int jy0 = std::max(0, static_cast<int>(std::floor((min_y - origin.y()) / cell - 0.5)));
        int jy1 = std::min(resolution - 1,
                           static_cast<int>(std::ceil((max_y - origin.y()) / cell - 0.5)));

        const double sign = twice_area > 0 ? 1.0 : -1.0;
        for (int jy = jy0; jy <= jy1; ++jy) {
            const double py = origin.y() + (jy + 0.5) * cell;
            for (int jx = jx0; jx <= jx1; ++jx) {
                const double px = origin.x() + (jx + 0.5) * cell;
                const double d0 = sign * ((b.x() - a.x()) * (py - a.y()) - (b.y() - a.y()) * (px - a.x()));
                if (d0 < 0) continue;
                const double d1 = sign * ((c.x() - b.x()) * (py - b.y()) - (c.y() - b.y()) * (px - b.x()));
                if (d1 < 0) continue;
                const double d2 = sign * ((a.x() - c.x()) * (py - c.y()) - (a.y() - c.y()) * (px - c.x()));
                if (d2 < 0) continue;
                covered[static_cast<std::size_t>(jy) * resolution + jx] = 1;
            }
        }
    }

    std::size_t count = 0;
    for (std::uint8_t cell_covered : covered) count += cell_covered;
    return static_cast<double>(count) * cell * cell;
}

double drag_proxy(const PhenotypeMesh& mesh, const Eigen::Vector3d& axis, int resolution) {
    const double frontal = projected_frontal_area(mesh, axis, resolution);
    const double surface = surface_area(mesh);
    // frontal * (1 + surface / (2 * frontal)) - 1, written in its reduced
    // form so a vanishing frontal area stays well-defined.
    return frontal + 0.5 * surface - 1.0;
}

double lift_proxy(const PhenotypeMesh& mesh, const Eigen::Vector3d& axis,
                  const Eigen::Vector3d& up) {
    validate_mesh(mesh);
    if (!(axis.norm() > 0.0) || !(up.norm() > 0.0)) throw ZeroAxis("axis and up must be non-zero");
    const Eigen::Vector3d w = axis.normalized();
    const Eigen::Vector3d u = up.normalized();

    double sum = 0.0;
    for (const Eigen::Vector3i& t : mesh.triangles) {
        const Eigen::Vector3d& a = mesh.vertices[t[0]];
        const Eigen::Vector3d& b = mesh.vertices[t[1]];
        const Eigen::Vector3d& c = mesh.vertices[t[2]];
        const Eigen::Vector3d cross = (b - a).cross(c - a);
        const double twice_area = cross.norm();
        if (twice_area <= 0.0) continue;
        const Eigen::Vector3d normal = cross / twice_area;
        sum += 0.5 * twice_area * normal.dot(u) * normal.dot(w);
    }
    return sum / static_cast<double>(mesh.triangles.size());
}

double combined_cost(double phys_norm, double visual, double alpha) {
    if (alpha < 0.0 || alpha > 1.0) throw AlphaOutOfRange("alpha must lie in [0,1]");
    return (1.0 - alpha) * phys_norm + alpha * (1.0 - visual);
}

double combined_cost(const Eigen::VectorXd& phys_norm, double visual, double alpha) {
    const double phys = phys_norm.size() == 0 ? 0.0 : phys_norm.mean();
    return combined_cost(phys, visual, alpha);
}

ConstrainedObjectives constrained_objectives(const Eigen::VectorXd& phys_norm, double visual,
                                             double lower, double upper) {
    if (lower < 0.0 || upper > 1.0 || lower > upper)
        throw BoundsInvalid("visual bounds must satisfy 0 <= lower <= upper <= 1");
    ConstrainedObjectives out;
    out.objectives = phys_norm;
    out.violation = std::max(0.0, lower - visual) + std::max(0.0, visual - upper);
    out.feasible = out.violation == 0.0;
    return out;
}

double minmax_normalize(double value, double lo, double hi) {
    if (!(hi > lo)) return 0.5;
    return (value - lo) / (hi - lo);
}

RunningNormalizer::RunningNormalizer(int num_tasks, int num_objectives)
    : num_tasks_(num_tasks),
      num_objectives_(num_objectives),
      lo_(static_cast<std::size_t>(num_tasks) * num_objectives,
          std::numeric_limits<double>::infinity()),
      hi_(static_cast<std::size_t>(num_tasks) * num_objectives,
          -std::numeric_limits<double>::infinity()),
      seen_(static_cast<std::size_t>(num_tasks) * num_objectives, false) {}

std::size_t RunningNormalizer::slot(int task_index, int objective) const {
    const int t = task_index - 1;
    if (t < 0 || t >= num_tasks_ || objective < 0 || objective >= num_objectives_)
        throw Error("normalizer slot out of range");
    return static_cast<std::size_t>(t) * num_objectives_ + objective;
}

void RunningNormalizer::observe(int task_index, int objective, double value) {
    const std::size_t s = slot(task_index, objective);
    lo_[s] = std::min(lo_[s], value);
    hi_[s] = std::max(hi_[s], value);
    seen_[s] = true;
}

double RunningNormalizer::normalize(int task_index, int objective, double value) const {
    const std::size_t s = slot(task_index, objective);
    if (!seen_[s]) return 0.5;
    return minmax_normalize(value, lo_[s], hi_[s]);
}

bool RunningNormalizer::seen(int task_index, int objective) const {
    return seen_[slot(task_index, objective)];
}

double RunningNormalizer::stored_min(int task_index, int objective) const {
    return lo_[slot(task_index, objective)];
}

double RunningNormalizer::stored_max(int task_index, int objective) const {
    return hi_[slot(task_index, objective)];
}

void RunningNormalizer::restore(int task_index, int objective, double lo, double hi) {
    const std::size_t s = slot(task_index, objective);
    lo_[s] = lo;
    hi_[s] = hi;
    seen_[s] = true;
}

PhysicalBackend::PhysicalBackend(std::string name, std::vector<std::string> objectives,
                                 int resolution)
    : name_(std::move(name)), objectives_(std::move(objectives)), resolution_(resolution) {}

PhysicalBackend PhysicalBackend::named(const std::string& name, int raster_resolution) {
    if (name == "frontal_area")
        return PhysicalBackend(name, {"frontal_area"}, raster_resolution);
    if (name == "drag") return PhysicalBackend(name, {"drag_proxy"}, raster_resolution);
    if (name == "drag_lift")
        return PhysicalBackend(name, {"drag_proxy", "lift_proxy"}, raster_resolution);
    throw ConfigError("unknown physical adapter '" + name + "'");
}

Eigen::VectorXd PhysicalBackend::evaluate(const PhenotypeMesh& mesh) const {
    // Designs are scaled into the unit cube first, mirroring the practice of
    // shrinking meshes to cut simulation cost; raw scale is not an objective.
    const UnitCubeFit fit = normalize_to_unit_cube(mesh);
    Eigen::VectorXd values(objective_count());
    for (int i = 0; i < objective_count(); ++i) {
        const std::string& objective = objectives_[static_cast<std::size_t>(i)];
        if (objective == "frontal_area")
            values[i] = projected_frontal_area(fit.mesh, kFlowAxis, resolution_);
        else if (objective == "drag_proxy")
            values[i] = drag_proxy(fit.mesh, kFlowAxis, resolution_);
        else if (objective == "lift_proxy")
            values[i] = lift_proxy(fit.mesh, kFlowAxis, kUpAxis);
        else
            throw ConfigError("unknown physical objective '" + objective + "'");
    }
    return values;
}

} // namespace gemt
