#pragma once

#include "gemt/config.hpp"
#include "gemt/types.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace gemt {

// Factorial ranks from an N x K factorial-cost matrix: per task (column),
// rank 1 is the smallest cost, ties broken by stable row order. Every column
// of the result is a permutation of 1..N.
Eigen::MatrixXi factorial_ranks(const Eigen::MatrixXd& costs);

// Scalar fitness per row: the minimum rank across tasks; lower is fitter.
Eigen::VectorXi scalar_fitness(const Eigen::MatrixXi& ranks);

// Parents followed by offspring, with origin-of-merge flags.
struct JointPopulation {
    Population members;
    std::vector<bool> from_offspring;
};

JointPopulation make_joint(const Population& parents, const Population& offspring);

// True for members that survive deduplication: among equal genotype keys the
// offspring copy wins, and among duplicate offspring the lowest offspring
// index wins.
std::vector<bool> dedup_kept_mask(const JointPopulation& joint);

JointPopulation dedup(const JointPopulation& joint);

// Repeated seeded tournaments without replacement of winners. Comparison key
// is (feasible-first in multi-objective mode, scalar fitness, combined cost,
// stable index). Returns indices into joint.members in selection order; all
// members survive when the joint population is not larger than n.
std::vector<std::size_t> tournament_survival(const JointPopulation& joint, int n,
                                             int tournament_size, ObjectiveMode mode,
                                             std::uint64_t seed);

// Scalar factorial cost for one task in multi-objective mode: non-dominated
// front index plus a crowding-distance complement tie-break, with infeasible
// individuals ordered after all feasible ones by violation.
Eigen::VectorXd per_task_mo_cost(const std::vector<Eigen::VectorXd>& objectives,
                                 const std::vector<bool>& feasible,
                                 const std::vector<double>& violation);

} // namespace gemt
