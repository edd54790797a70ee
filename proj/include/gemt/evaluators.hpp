#pragma once

#include "gemt/config.hpp"
#include "gemt/types.hpp"

#include <Eigen/Core>

#include <string>
#include <vector>

namespace gemt {

// Canonical pose: +x is the vehicle's forward (flow) axis, +z is up.
inline const Eigen::Vector3d kFlowAxis{1.0, 0.0, 0.0};
inline const Eigen::Vector3d kUpAxis{0.0, 0.0, 1.0};

// Area of the union of triangle projections onto the plane perpendicular to
// axis. Projected triangles are rasterized onto a resolution^2 grid over the
// projected bounding square; overlaps count once.
double projected_frontal_area(const PhenotypeMesh& mesh, const Eigen::Vector3d& axis,
                              int resolution = 512);

// Geometric drag heuristic, not CFD: frontal area inflated by a skin-friction
// term, frontal * (1 + surface / (2 * frontal)) - 1.
double drag_proxy(const PhenotypeMesh& mesh, const Eigen::Vector3d& axis, int resolution = 512);

// Geometric lift heuristic, not CFD: signed mean over triangles of
// area * (normal . up) * (normal . axis).
double lift_proxy(const PhenotypeMesh& mesh, const Eigen::Vector3d& axis,
                  const Eigen::Vector3d& up);

// (1 - alpha) * phys + alpha * (1 - vis). Throws AlphaOutOfRange.
double combined_cost(double phys_norm, double visual, double alpha);
// Mean-reduces M normalized physical entries first.
double combined_cost(const Eigen::VectorXd& phys_norm, double visual, double alpha);

struct ConstrainedObjectives {
    Eigen::VectorXd objectives;
    bool feasible = true;
    double violation = 0.0;
};

// Feasible iff lower <= visual <= upper (closed bounds); violation is the
// total distance outside. Throws BoundsInvalid.
ConstrainedObjectives constrained_objectives(const Eigen::VectorXd& phys_norm, double visual,
                                             double lower, double upper);

// (value - min) / (max - min); 0.5 when the range is degenerate or unseen.
double minmax_normalize(double value, double lo, double hi);

// Running min/max per (task, objective). Observations accumulate over the
// whole run; stored records are re-normalized at generation boundaries.
class RunningNormalizer {
public:
    RunningNormalizer() = default;
    RunningNormalizer(int num_tasks, int num_objectives);

    void observe(int task_index, int objective, double value);  // task_index 1-based
    double normalize(int task_index, int objective, double value) const;
    bool seen(int task_index, int objective) const;

    int num_tasks() const { return num_tasks_; }
    int num_objectives() const { return num_objectives_; }
    double stored_min(int task_index, int objective) const;
    double stored_max(int task_index, int objective) const;
    void restore(int task_index, int objective, double lo, double hi);

private:
    std::size_t slot(int task_index, int objective) const;
    int num_tasks_ = 0;
    int num_objectives_ = 0;
    std::vector<double> lo_, hi_;
    std::vector<bool> seen_;
};

// Named physical evaluator backend. Meshes are normalized into the unit cube
// before scoring and all objectives are reported raw (sense handled later).
class PhysicalBackend {
public:
    static PhysicalBackend named(const std::string& name, int raster_resolution);

    const std::string& name() const { return name_; }
    const std::vector<std::string>& objective_names() const { return objectives_; }
    int objective_count() const { return static_cast<int>(objectives_.size()); }

    Eigen::VectorXd evaluate(const PhenotypeMesh& mesh) const;

private:
    PhysicalBackend(std::string name, std::vector<std::string> objectives, int resolution);
    std::string name_;
    std::vector<std::string> objectives_;
    int resolution_ = 512;
};

} // namespace gemt
