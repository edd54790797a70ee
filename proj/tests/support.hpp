#pragma once

// Shared fixtures and stub oracles for the test suites.

#include "gemt/config.hpp"
#include "gemt/mesh.hpp"
#include "gemt/oracles.hpp"
#include "gemt/prompt.hpp"

#include <string>
#include <utility>
#include <vector>

namespace gemt::test {

inline std::vector<Task> two_tasks() {
    return {make_task(1, "car"), make_task(2, "airplane")};
}

inline RunConfig small_config(int population = 8, int generations = 3) {
    RunConfig config;
    config.tasks = two_tasks();
    config.population_size = population;
    config.max_generations = generations;
    config.seed = 42;
    return config;
}

// Independent signed-tetrahedron volume, kept separate from the library path
// it is used to check.
inline double oracle_signed_volume(const PhenotypeMesh& mesh) {
    double v = 0.0;
    for (const Eigen::Vector3i& t : mesh.triangles) {
        const Eigen::Vector3d& a = mesh.vertices[t[0]];
        const Eigen::Vector3d& b = mesh.vertices[t[1]];
        const Eigen::Vector3d& c = mesh.vertices[t[2]];
        v += (a.x() * (b.y() * c.z() - b.z() * c.y()) - a.y() * (b.x() * c.z() - b.z() * c.x()) +
              a.z() * (b.x() * c.y() - b.y() * c.x())) /
             6.0;
    }
    return v;
}

// Synthetic evaluated individual for selection/breeding tests.
inline Individual evaluated(const Task& task, const std::string& descriptor, double cost,
                            bool feasible = true, int scalar_fitness = 0, int num_tasks = 2) {
    Individual ind;
    ind.genotype = render_prompt(task, descriptor);
    ind.phenotype = make_box({1, 1, 1});
    FitnessRecord fr;
    fr.physical_raw = Eigen::VectorXd::Constant(1, cost);
    fr.physical_norm = Eigen::VectorXd::Constant(1, cost);
    fr.visual_score = 0.5;
    fr.task_visual = Eigen::VectorXd::Constant(num_tasks, 0.5);
    fr.combined_cost = cost;
    fr.task_cost = Eigen::VectorXd::Constant(num_tasks, cost);
    fr.feasible = feasible;
    fr.constraint_violation = feasible ? 0.0 : 0.1;
    if (scalar_fitness > 0)
        fr.set_factorial_ranks(Eigen::VectorXi::Constant(num_tasks, scalar_fitness));
    ind.fitness = std::move(fr);
    return ind;
}

// Language oracle that always fails; used for fallback paths.
class FailingLanguageOracle final : public LanguageOracle {
public:
    explicit FailingLanguageOracle(bool fail_self = true) : fail_self_(fail_self) {}
    OracleInfo info() const override { return {"failing", true, 0, 0}; }
    std::string generate(const LanguageRequest& request) override {
        if (!fail_self_ && (request.bundle.kind == InstructionKind::self_mate ||
                            request.bundle.kind == InstructionKind::reflect ||
                            request.bundle.kind == InstructionKind::initialize))
            return fallback_reply(request);
        throw OracleFailure("scripted failure");
    }

private:
    static std::string fallback_reply(const LanguageRequest& request) {
        if (request.bundle.kind == InstructionKind::reflect) return "no comment";
        if (request.bundle.kind == InstructionKind::initialize) return "a plain form";
        return "A " + request.bundle.child_task_phrase + " in the shape of a plain form.";
    }
    bool fail_self_;
};

// Language oracle that replays a fixed reply.
class FixedLanguageOracle final : public LanguageOracle {
public:
    explicit FixedLanguageOracle(std::string reply) : reply_(std::move(reply)) {}
    OracleInfo info() const override { return {"fixed", true, 0, 0}; }
    std::string generate(const LanguageRequest&) override { return reply_; }

private:
    std::string reply_;
};

} // namespace gemt::test
