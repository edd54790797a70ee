#include "gemt/prompt_ops.hpp"

#include "gemt/errors.hpp"
#include "gemt/seeds.hpp"

#include <algorithm>
#include <set>

namespace gemt {

namespace {

constexpr int kInitializeRetries = 8;
constexpr int kSlotAttempts = 3;

// First non-empty line of the oracle's reply.
std::string first_line(std::string_view text) {
    std::size_t begin = 0;
    while (begin < text.size()) {
        std::size_t end = text.find('\n', begin);
        if (end == std::string_view::npos) end = text.size();
        std::string line = trim(text.substr(begin, end - begin));
        if (!line.empty()) return line;
        begin = end + 1;
    }
    return "";
}

std::string strip_quotes_and_period(std::string text) {
    text = trim(text);
    if (text.size() >= 2 && (text.front() == '"' || text.front() == '\'') &&
        text.back() == text.front())
        text = trim(text.substr(1, text.size() - 2));
    while (!text.empty() && text.back() == '.') text.pop_back();
    return trim(text);
}

// Template-or-repair extraction: a reply that parses as a rendered prompt
// yields its descriptor; anything else gets one repair attempt where the raw
// reply is re-wrapped as a descriptor.
std::string extract_descriptor(const std::string& reply) {
    const std::string line = first_line(reply);
    if (line.empty()) throw MalformedOracleOutput("oracle returned no usable text");
    if (auto parts = parse_prompt(line)) return parts->descriptor;
    const std::string repaired = strip_quotes_and_period(line);
    if (repaired.empty()) throw MalformedOracleOutput("oracle reply is not a descriptor: " + line);
    return repaired;
}

Genotype mate_via_oracle(const MatingContext& ctx, InstructionBundle bundle, const Task& task,
                         std::uint64_t seed) {
    bundle.problem_description = ctx.problem_description;
    bundle.population_context = ctx.population_context;
    bundle.reflection = ctx.reflection;
    bundle.task_targets = ctx.task_targets;
    bundle.child_task_phrase = task.domain_phrase;

    LanguageRequest request;
    request.instruction_text = render_instruction(*ctx.templates, bundle);
    request.bundle = std::move(bundle);
    request.max_tokens = ctx.token_budget;
    request.seed = seed;

    const std::string reply = ctx.oracle->generate(request);
    return render_prompt(task, extract_descriptor(reply), ctx.token_budget);
}

const Task& task_by_index(const RunConfig& config, int index) {
    for (const Task& t : config.tasks)
        if (t.index == index) return t;
    throw TaskMismatch("no task with index " + std::to_string(index));
}

} // namespace

bool fitter_than(const Individual& a, const Individual& b, ObjectiveMode mode) {
    if (!a.fitness || !b.fitness) throw MissingFitness("comparison requires evaluated individuals");
    const FitnessRecord& fa = *a.fitness;
    const FitnessRecord& fb = *b.fitness;
    if (mode == ObjectiveMode::multi_objective) {
        if (fa.feasible != fb.feasible) return fa.feasible;
        if (fa.has_ranks() && fb.has_ranks() && fa.scalar_fitness != fb.scalar_fitness)
            return fa.scalar_fitness < fb.scalar_fitness;
    }
    return fa.combined_cost < fb.combined_cost;
}

MatingContext make_mating_context(LanguageOracle& oracle, const InstructionTemplates& templates,
                                  const Population& population, const RunConfig& config,
                                  std::string reflection) {
    MatingContext ctx;
    ctx.oracle = &oracle;
    ctx.templates = &templates;
    ctx.problem_description = default_problem_description();
    ctx.reflection = std::move(reflection);
    for (const Task& t : config.tasks) ctx.task_targets.push_back(t.domain_phrase);
    for (const Individual& ind : population) {
        if (!ind.fitness) throw MissingFitness("population must be evaluated before mating");
        ctx.population_context.push_back({ind.genotype.prompt, ind.fitness->combined_cost});
    }
    return ctx;
}

std::vector<Genotype> initialize_population(LanguageOracle& oracle,
                                            const InstructionTemplates& templates,
                                            const std::vector<Task>& tasks, int n_per_task,
                                            int token_budget, std::uint64_t seed) {
    if (n_per_task < 1) throw EmptyInput("n_per_task must be >= 1");
    if (tasks.empty()) throw EmptyInput("at least one task is required");

    std::vector<std::string> targets;
    for (const Task& t : tasks) targets.push_back(t.domain_phrase);

    std::vector<Genotype> genotypes;
    std::set<std::string> used_keys;
    for (const Task& task : tasks) {
        for (int i = 0; i < n_per_task; ++i) {
            InstructionBundle bundle;
            bundle.kind = InstructionKind::initialize;
            bundle.problem_description = default_problem_description();
            bundle.task_targets = targets;
            bundle.requested_count = 1;
            bundle.child_task_phrase = task.domain_phrase;

            LanguageRequest request;
            request.instruction_text = render_instruction(templates, bundle);
            request.bundle = bundle;
            request.max_tokens = token_budget;

            Genotype candidate;
            bool accepted = false;
            for (int attempt = 0; attempt < kInitializeRetries; ++attempt) {
                request.seed = derive_seed(seed, "init",
                                           static_cast<std::uint64_t>(task.index),
                                           static_cast<std::uint64_t>(i) * kInitializeRetries +
                                               attempt);
                candidate =
                    render_prompt(task, extract_descriptor(oracle.generate(request)), token_budget);
                if (used_keys.insert(genotype_key(candidate)).second) {
                    accepted = true;
                    break;
                }
            }
            if (!accepted) {
                // Deterministic numeric suffix breaks the tie.
                for (int suffix = 2;; ++suffix) {
                    Genotype variant = render_prompt(
                        task, candidate.descriptor + " " + std::to_string(suffix), token_budget);
                    if (used_keys.insert(genotype_key(variant)).second) {
                        candidate = variant;
                        break;
                    }
                }
            }
            genotypes.push_back(candidate);
        }
    }
    return genotypes;
}

InstructionBundle make_reflection_bundle(const Population& population, const RunConfig& config) {
    InstructionBundle bundle;
    bundle.kind = InstructionKind::reflect;
    bundle.problem_description = default_problem_description();
    for (const Task& t : config.tasks) bundle.task_targets.push_back(t.domain_phrase);
    for (const Individual& ind : population) {
        if (!ind.fitness) throw MissingFitness("population must be evaluated before reflection");
        bundle.population_context.push_back({ind.genotype.prompt, ind.fitness->combined_cost});
    }
    return bundle;
}

std::string reflect(LanguageOracle& oracle, const InstructionTemplates& templates,
                    const InstructionBundle& bundle, std::uint64_t seed) {
    if (bundle.kind != InstructionKind::reflect)
        throw EmptyInput("reflect requires a reflect bundle");
    validate_bundle(bundle);

    LanguageRequest request;
    request.instruction_text = render_instruction(templates, bundle);
    request.bundle = bundle;
    request.seed = seed;
    return oracle.generate(request);
}

Genotype self_mate(const MatingContext& ctx, const Genotype& parent, const Task& task,
                   std::uint64_t seed) {
    if (parent.task_index != task.index)
        throw TaskMismatch("parent does not belong to the given task");
    InstructionBundle bundle;
    bundle.kind = InstructionKind::self_mate;
    bundle.parent_prompts = {parent.prompt};
    return mate_via_oracle(ctx, std::move(bundle), task, seed);
}

Genotype same_domain_mate(const MatingContext& ctx, const std::vector<Genotype>& parents,
                          const Task& task, std::uint64_t seed) {
    if (parents.size() < 2) throw EmptyInput("same-domain mating needs at least two parents");
    for (const Genotype& p : parents)
        if (p.task_index != task.index)
            throw MixedDomainParents("same-domain parents must share one task");

    InstructionBundle bundle;
    bundle.kind = InstructionKind::same_domain_mate;
    for (const Genotype& p : parents) bundle.parent_prompts.push_back(p.prompt);
    return mate_via_oracle(ctx, std::move(bundle), task, seed);
}

Genotype cross_domain_mate(const MatingContext& ctx, const std::vector<Genotype>& parents,
                           const Task& child_task, std::uint64_t seed) {
    if (parents.size() < 2) throw EmptyInput("cross-domain mating needs at least two parents");
    std::set<int> domains;
    for (const Genotype& p : parents) domains.insert(p.task_index);
    if (domains.size() < 2)
        throw SingleDomainParents("cross-domain parents must span at least two tasks");
    if (!domains.count(child_task.index))
        throw TaskMismatch("child task must be one of the parents' tasks");

    InstructionBundle bundle;
    bundle.kind = InstructionKind::cross_domain_mate;
    for (const Genotype& p : parents) bundle.parent_prompts.push_back(p.prompt);
    return mate_via_oracle(ctx, std::move(bundle), child_task, seed);
}

namespace {

// Tournament over the given candidate indices: up to tournament_size distinct
// seeded picks, fittest wins.
std::size_t tournament_pick(const Population& population, std::vector<std::size_t> candidates,
                            int tournament_size, ObjectiveMode mode, Rng& rng) {
    if (candidates.empty()) throw EmptyInput("tournament over an empty pool");
    const std::size_t draws =
        std::min<std::size_t>(static_cast<std::size_t>(tournament_size), candidates.size());
    std::size_t best = 0;
    bool have_best = false;
    for (std::size_t d = 0; d < draws; ++d) {
        const std::size_t pick = d + rng.uniform_index(candidates.size() - d);
        std::swap(candidates[d], candidates[pick]);
        const std::size_t idx = candidates[d];
        if (!have_best || fitter_than(population[idx], population[best], mode)) {
            best = idx;
            have_best = true;
        }
    }
    return best;
}

std::vector<int> present_task_indices(const Population& population) {
    std::set<int> seen;
    for (const Individual& ind : population) seen.insert(ind.genotype.task_index);
    return {seen.begin(), seen.end()};
}

std::vector<std::size_t> indices_of_task(const Population& population, int task_index) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < population.size(); ++i)
        if (population[i].genotype.task_index == task_index) out.push_back(i);
    return out;
}

} // namespace

Population generate_offspring(const MatingContext& ctx, const Population& population,
                              const RunConfig& config, int generation, std::uint64_t run_seed) {
    if (population.empty()) throw EmptyInput("cannot breed from an empty population");
    for (const Individual& ind : population)
        if (!ind.fitness) throw MissingFitness("population must be evaluated before breeding");

    const int n = config.population_size;
    const ObjectiveMode mode = config.objective_mode;
    const std::vector<int> tasks_present = present_task_indices(population);

    std::vector<std::size_t> all_indices(population.size());
    for (std::size_t i = 0; i < all_indices.size(); ++i) all_indices[i] = i;

    Population offspring;
    offspring.reserve(static_cast<std::size_t>(n));

    for (int slot = 0; slot < n; ++slot) {
        const std::uint64_t slot_seed =
            derive_seed(run_seed, "offspring", static_cast<std::uint64_t>(generation),
                        static_cast<std::uint64_t>(slot));
        Rng rng(slot_seed);
        const double branch = rng.uniform();

        Individual child;
        child.generation_created = generation;
        bool produced = false;

        for (int attempt = 0; attempt < kSlotAttempts && !produced; ++attempt) {
            const std::uint64_t op_seed = derive_seed(slot_seed, "op", attempt);
            try {
                if (branch < config.self_mating_probability) {
                    const std::size_t p = tournament_pick(population, all_indices,
                                                          config.tournament_size, mode, rng);
                    const Task& task = task_by_index(config, population[p].genotype.task_index);
                    child.genotype = self_mate(ctx, population[p].genotype, task, op_seed);
                    child.origin = Origin::self_mate;
                } else if (branch < config.self_mating_probability +
                                        config.cross_domain_probability &&
                           tasks_present.size() >= 2) {
                    // Force parents from two distinct domains.
                    const std::size_t a = rng.uniform_index(tasks_present.size());
                    std::size_t b = rng.uniform_index(tasks_present.size() - 1);
                    if (b >= a) ++b;
                    const int task_a = tasks_present[a];
                    const int task_b = tasks_present[static_cast<std::size_t>(b)];
                    const std::size_t pa =
                        tournament_pick(population, indices_of_task(population, task_a),
                                        config.tournament_size, mode, rng);
                    const std::size_t pb =
                        tournament_pick(population, indices_of_task(population, task_b),
                                        config.tournament_size, mode, rng);
                    const int child_task_index = rng.chance(0.5) ? task_a : task_b;
                    child.genotype =
                        cross_domain_mate(ctx, {population[pa].genotype, population[pb].genotype},
                                          task_by_index(config, child_task_index), op_seed);
                    child.origin = Origin::cross_domain;
                } else {
                    // Unconstrained pair; the winners' tasks decide the operator.
                    const std::size_t pa = tournament_pick(population, all_indices,
                                                           config.tournament_size, mode, rng);
                    std::size_t pb = pa;
                    for (int redraw = 0; redraw < 3 && pb == pa; ++redraw)
                        pb = tournament_pick(population, all_indices, config.tournament_size, mode,
                                             rng);
                    const int task_a = population[pa].genotype.task_index;
                    const int task_b = population[pb].genotype.task_index;
                    if (task_a == task_b) {
                        child.genotype = same_domain_mate(
                            ctx, {population[pa].genotype, population[pb].genotype},
                            task_by_index(config, task_a), op_seed);
                        child.origin = Origin::same_domain;
                    } else {
                        const int child_task_index = rng.chance(0.5) ? task_a : task_b;
                        child.genotype = cross_domain_mate(
                            ctx, {population[pa].genotype, population[pb].genotype},
                            task_by_index(config, child_task_index), op_seed);
                        child.origin = Origin::cross_domain;
                    }
                }
                produced = true;
            } catch (const Error&) {
                // Operator failed; retry the slot with a fresh operator seed.
            }
        }

        if (!produced) {
            // Fall back to self-mating the best individual of a random task.
            const int task_index = tasks_present[rng.uniform_index(tasks_present.size())];
            const std::vector<std::size_t> pool = indices_of_task(population, task_index);
            std::size_t best = pool.front();
            for (const std::size_t idx : pool)
                if (fitter_than(population[idx], population[best], mode)) best = idx;
            const Task& task = task_by_index(config, task_index);
            child.genotype = self_mate(ctx, population[best].genotype, task,
                                       derive_seed(slot_seed, "fallback"));
            child.origin = Origin::self_mate;
        }

        offspring.push_back(std::move(child));
    }
    return offspring;
}

} // namespace gemt
