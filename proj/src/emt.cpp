#include "gemt/emt.hpp"

#include "gemt/errors.hpp"
#include "gemt/prompt.hpp"
#include "gemt/prompt_ops.hpp"
#include "gemt/seeds.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>

namespace gemt {

Eigen::MatrixXi factorial_ranks(const Eigen::MatrixXd& costs) {
    const Eigen::Index n = costs.rows();
    const Eigen::Index k = costs.cols();
    if (n == 0 || k == 0) throw MissingFitness("factorial_ranks needs a non-empty cost matrix");

    Eigen::MatrixXi ranks(n, k);
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    for (Eigen::Index task = 0; task < k; ++task) {
        std::iota(order.begin(), order.end(), Eigen::Index{0});
        std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
            return costs(a, task) < costs(b, task);
        });
        for (Eigen::Index pos = 0; pos < n; ++pos)
            ranks(order[static_cast<std::size_t>(pos)], task) = static_cast<int>(pos) + 1;
    }
    return ranks;
}

Eigen::VectorXi scalar_fitness(const Eigen::MatrixXi& ranks) {
    return ranks.rowwise().minCoeff();
}

JointPopulation make_joint(const Population& parents, const Population& offspring) {
    JointPopulation joint;
    joint.members.reserve(parents.size() + offspring.size());
    joint.members.insert(joint.members.end(), parents.begin(), parents.end());
    joint.members.insert(joint.members.end(), offspring.begin(), offspring.end());
    joint.from_offspring.assign(parents.size(), false);
    joint.from_offspring.insert(joint.from_offspring.end(), offspring.size(), true);
    return joint;
}

std::vector<bool> dedup_kept_mask(const JointPopulation& joint) {
    // Winner per key: the first offspring copy if one exists, else the first
    // parent copy.
    std::map<std::string, std::size_t> winner;
    for (std::size_t i = 0; i < joint.members.size(); ++i) {
        const std::string key = genotype_key(joint.members[i].genotype);
        auto [it, inserted] = winner.try_emplace(key, i);
        if (!inserted && joint.from_offspring[i] && !joint.from_offspring[it->second])
            it->second = i;
    }
    std::vector<bool> kept(joint.members.size(), false);
    for (const auto& [key, index] : winner) {
        (void)key;
        kept[index] = true;
    }
    return kept;
}

JointPopulation dedup(const JointPopulation& joint) {
    const std::vector<bool> kept = dedup_kept_mask(joint);
    JointPopulation out;
    for (std::size_t i = 0; i < joint.members.size(); ++i) {
        if (!kept[i]) continue;
        out.members.push_back(joint.members[i]);
        out.from_offspring.push_back(joint.from_offspring[i]);
    }
    return out;
}

namespace {

// (infeasible, scalar fitness, combined cost, stable index), all ascending.
bool survival_less(const JointPopulation& joint, std::size_t a, std::size_t b,
                   ObjectiveMode mode) {
    const FitnessRecord& fa = *joint.members[a].fitness;
    const FitnessRecord& fb = *joint.members[b].fitness;
    if (mode == ObjectiveMode::multi_objective && fa.feasible != fb.feasible) return fa.feasible;
    if (fa.scalar_fitness != fb.scalar_fitness) return fa.scalar_fitness < fb.scalar_fitness;
    if (fa.combined_cost != fb.combined_cost) return fa.combined_cost < fb.combined_cost;
    return a < b;
}

} // namespace

std::vector<std::size_t> tournament_survival(const JointPopulation& joint, int n,
                                             int tournament_size, ObjectiveMode mode,
                                             std::uint64_t seed) {
    for (const Individual& ind : joint.members)
        if (!ind.fitness || !ind.fitness->has_ranks())
            throw MissingFitness("survival selection requires ranked individuals");

    std::vector<std::size_t> all(joint.members.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    if (all.size() <= static_cast<std::size_t>(n)) return all;  // refill next generation

    // Feasibility-first is a pool-level precedence in multi-objective mode:
    // an infeasible member cannot win a slot while feasible members remain
    // available, so tournaments draw from the feasible pool until it is
    // exhausted.
    std::vector<std::size_t> pool, overflow;
    if (mode == ObjectiveMode::multi_objective) {
        for (std::size_t i : all)
            (joint.members[i].fitness->feasible ? pool : overflow).push_back(i);
    } else {
        pool = std::move(all);
    }

    Rng rng(seed);
    std::vector<std::size_t> survivors;
    survivors.reserve(static_cast<std::size_t>(n));
    while (survivors.size() < static_cast<std::size_t>(n)) {
        if (pool.empty()) std::swap(pool, overflow);
        // One tournament: up to tournament_size distinct picks from the pool.
        const std::size_t draws =
            std::min<std::size_t>(static_cast<std::size_t>(tournament_size), pool.size());
        std::size_t winner_slot = 0;
        for (std::size_t d = 0; d < draws; ++d) {
            const std::size_t pick = d + rng.uniform_index(pool.size() - d);
            std::swap(pool[d], pool[pick]);
            if (d == 0 || survival_less(joint, pool[d], pool[winner_slot], mode)) winner_slot = d;
        }
        survivors.push_back(pool[winner_slot]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(winner_slot));
    }
    return survivors;
}

namespace {

bool dominates(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    bool strictly_better = false;
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
        if (a[i] < b[i]) strictly_better = true;
    }
    return strictly_better;
}

} // namespace

Eigen::VectorXd per_task_mo_cost(const std::vector<Eigen::VectorXd>& objectives,
                                 const std::vector<bool>& feasible,
                                 const std::vector<double>& violation) {
    const std::size_t n = objectives.size();
    if (n == 0) throw MissingObjectives("per_task_mo_cost needs objective vectors");
    if (feasible.size() != n || violation.size() != n)
        throw MissingObjectives("feasibility data must match the objective count");
    for (const Eigen::VectorXd& v : objectives)
        if (v.size() == 0 || v.size() != objectives.front().size())
            throw MissingObjectives("objective vectors must share a non-zero dimension");

    constexpr double kInfeasibleBase = 1e6;
    Eigen::VectorXd cost(static_cast<Eigen::Index>(n));

    std::vector<std::size_t> pool;  // feasible points enter the dominance sort
    for (std::size_t i = 0; i < n; ++i) {
        if (feasible[i]) pool.push_back(i);
        else cost[static_cast<Eigen::Index>(i)] = kInfeasibleBase + violation[i];
    }

    // Plain O(n^2) non-dominated sorting; joint populations are small.
    std::vector<int> front(n, 0);
    std::vector<std::size_t> remaining = pool;
    int level = 0;
    while (!remaining.empty()) {
        ++level;
        std::vector<std::size_t> current, rest;
        for (std::size_t i : remaining) {
            bool dominated = false;
            for (std::size_t j : remaining) {
                if (i != j && dominates(objectives[j], objectives[i])) {
                    dominated = true;
                    break;
                }
            }
            (dominated ? rest : current).push_back(i);
        }
        for (std::size_t i : current) front[i] = level;
        remaining = std::move(rest);
    }

    // Crowding distance per front, standard NSGA-II form.
    std::map<int, std::vector<std::size_t>> by_front;
    for (std::size_t i : pool) by_front[front[i]].push_back(i);
    const Eigen::Index m = objectives.empty() ? 0 : objectives.front().size();
    std::vector<double> crowding(n, 0.0);
    for (auto& [f, members] : by_front) {
        (void)f;
        if (members.size() <= 2) {
            for (std::size_t i : members) crowding[i] = std::numeric_limits<double>::infinity();
            continue;
        }
        for (Eigen::Index obj = 0; obj < m; ++obj) {
            std::vector<std::size_t> order = members;
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return objectives[a][obj] < objectives[b][obj];
            });
            const double span = objectives[order.back()][obj] - objectives[order.front()][obj];
            crowding[order.front()] = std::numeric_limits<double>::infinity();
            crowding[order.back()] = std::numeric_limits<double>::infinity();
            if (span <= 0.0) continue;
            for (std::size_t pos = 1; pos + 1 < order.size(); ++pos) {
                if (std::isinf(crowding[order[pos]])) continue;
                crowding[order[pos]] +=
                    (objectives[order[pos + 1]][obj] - objectives[order[pos - 1]][obj]) / span;
            }
        }
    }

    // Flatten (front, crowding) lexicographically: larger crowding means a
    // smaller tie-break term, and front levels never collide.
    for (std::size_t i : pool) {
        const double tie =
            std::isinf(crowding[i]) ? 0.0 : 0.99 / (1.0 + crowding[i]);
        cost[static_cast<Eigen::Index>(i)] = static_cast<double>(front[i]) + tie;
    }
    return cost;
}

} // namespace gemt
