#pragma once

#include "gemt/config.hpp"
#include "gemt/instructions.hpp"
#include "gemt/oracles.hpp"

#include <string>
#include <vector>

namespace gemt {

// Shared state for one generation's mating calls: the oracle, the rendered
// population context, and the reflection text attached to every instruction.
struct MatingContext {
    LanguageOracle* oracle = nullptr;
    const InstructionTemplates* templates = nullptr;
    std::string problem_description;
    std::vector<PromptCost> population_context;
    std::string reflection;
    std::vector<std::string> task_targets;
    int token_budget = kDefaultTokenBudget;
};

MatingContext make_mating_context(LanguageOracle& oracle, const InstructionTemplates& templates,
                                  const Population& population, const RunConfig& config,
                                  std::string reflection);

// n_per_task unique genotypes per task. Duplicates are regenerated a bounded
// number of times, then disambiguated with a deterministic numeric suffix.
std::vector<Genotype> initialize_population(LanguageOracle& oracle,
                                            const InstructionTemplates& templates,
                                            const std::vector<Task>& tasks, int n_per_task,
                                            int token_budget, std::uint64_t seed);

InstructionBundle make_reflection_bundle(const Population& population, const RunConfig& config);

// Free reflection text attached to this generation's mating instructions.
std::string reflect(LanguageOracle& oracle, const InstructionTemplates& templates,
                    const InstructionBundle& bundle, std::uint64_t seed);

Genotype self_mate(const MatingContext& ctx, const Genotype& parent, const Task& task,
                   std::uint64_t seed);

// All parents must share the task. Throws MixedDomainParents.
Genotype same_domain_mate(const MatingContext& ctx, const std::vector<Genotype>& parents,
                          const Task& task, std::uint64_t seed);

// Parents must span at least two tasks and child_task must be one of theirs.
// Throws SingleDomainParents / TaskMismatch.
Genotype cross_domain_mate(const MatingContext& ctx, const std::vector<Genotype>& parents,
                           const Task& child_task, std::uint64_t seed);

// Exactly N offspring. Branch per slot: p_self -> self-mating; p_cross ->
// mating across two distinct domains; otherwise an unconstrained tournament
// pair that mates same- or cross-domain depending on the winners' tasks.
// After a bounded number of failed attempts a slot falls back to self-mating
// the best individual of a seeded-random task.
Population generate_offspring(const MatingContext& ctx, const Population& population,
                              const RunConfig& config, int generation, std::uint64_t run_seed);

// Parent-selection comparison key: combined cost in single-objective mode,
// (feasible-first, scalar fitness, cost) in multi-objective mode.
bool fitter_than(const Individual& a, const Individual& b, ObjectiveMode mode);

} // namespace gemt
