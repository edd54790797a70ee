#include "gemt/evolution.hpp"

#include "gemt/errors.hpp"
#include "gemt/parallel.hpp"
#include "gemt/prompt_ops.hpp"
#include "gemt/seeds.hpp"

#include <algorithm>

namespace gemt {

void offer_to_archive(Archive& archive, const Individual& individual, int generation) {
    if (!individual.fitness) return;
    const int task = individual.genotype.task_index;
    const double cost = individual.fitness->combined_cost;
    auto it = archive.find(task);
    if (it == archive.end() || cost < it->second.best_cost)
        archive[task] = ArchiveEntry{individual, cost, generation};
}

namespace {

class Driver {
public:
    Driver(const RunConfig& config, const OracleSet& oracles,
           const InstructionTemplates& templates, const EvolutionOptions& options)
        : config_(config),
          oracles_(oracles),
          templates_(templates),
          options_(options),
          backend_(PhysicalBackend::named(config.oracle_selection.physical,
                                          config.raster_resolution)),
          normalizer_(static_cast<int>(config.tasks.size()), backend_.objective_count()),
          run_id_(run_id_for(config)) {
        oracles_deterministic_ = oracles_.language->info().deterministic &&
                                 oracles_.generator->info().deterministic &&
                                 oracles_.visual->info().deterministic;
        // Honor adapters that declare themselves serial-only.
        threads_ = config_.threads;
        if (!oracles_deterministic_concurrency_safe()) threads_ = 1;
    }

    RunResult run() {
        RunResult result;
        int start_generation = 0;
        if (options_.resume) {
            population_ = options_.resume->population;
            archive_ = options_.resume->archive;
            normalizer_ = options_.resume->normalizer;
            start_generation = options_.resume->completed_generation + 1;
        } else {
            initial_generation();
            start_generation = 1;
            if (stop_requested(0)) return finish(result, 0);
        }

        for (int generation = start_generation; generation <= config_.max_generations;
             ++generation) {
            step(generation);
            if (stop_requested(generation)) return finish(result, generation);
        }
        return finish(result, config_.max_generations);
    }

private:
    bool oracles_deterministic_concurrency_safe() const {
        // OracleInfo has no dedicated concurrency field; remote adapters are
        // non-deterministic and get serialized, mocks are stateless.
        return oracles_.generator->info().deterministic && oracles_.visual->info().deterministic;
    }

    bool stop_requested(int generation) const {
        return options_.stop_after_generation >= 0 &&
               generation >= options_.stop_after_generation;
    }

    RunResult finish(RunResult& result, int completed) {
        result.population = population_;
        result.archive = archive_;
        result.records = std::move(records_);
        result.completed_generations = completed;
        result.finished = completed >= config_.max_generations;
        return std::move(result);
    }

    const Task& task_at(int index) const {
        for (const Task& t : config_.tasks)
            if (t.index == index) return t;
        throw TaskMismatch("unknown task index " + std::to_string(index));
    }

    double sense_adjusted(const Task& task, int objective, double raw) const {
        const Sense sense = config_.sense_for(task, backend_.objective_names()[objective]);
        return sense == Sense::maximize ? -raw : raw;
    }

    // Phenotype + raw physics + per-task visual scores; no normalizer access
    // so the fan-out can run concurrently.
    void evaluate_cohort(Population& cohort, int generation, std::string_view seed_tag) {
        const int K = static_cast<int>(config_.tasks.size());
        parallel_for(cohort.size(), threads_, [&](std::size_t idx) {
            Individual& ind = cohort[idx];
            const std::uint64_t pheno_seed =
                derive_seed(config_.seed, seed_tag, static_cast<std::uint64_t>(generation),
                            static_cast<std::uint64_t>(idx));

            Eigen::VectorXd raw_sum = Eigen::VectorXd::Zero(backend_.objective_count());
            Eigen::VectorXd visual_sum = Eigen::VectorXd::Zero(K);
            std::optional<PhenotypeMesh> first_mesh;
            for (int s = 0; s < config_.phenotype_samples; ++s) {
                const std::uint64_t sample_seed =
                    derive_seed(pheno_seed, "sample", static_cast<std::uint64_t>(s));
                PhenotypeMesh mesh = generate_phenotype(*oracles_.generator, ind.genotype,
                                                        generation, sample_seed);
                raw_sum += backend_.evaluate(mesh);
                for (int k = 0; k < K; ++k)
                    visual_sum[k] += visual_score(*oracles_.visual, mesh, config_.tasks[k]);
                if (!first_mesh) first_mesh = std::move(mesh);
            }

            FitnessRecord fr;
            fr.physical_raw = raw_sum / config_.phenotype_samples;
            fr.task_visual = visual_sum / config_.phenotype_samples;
            const int own = ind.genotype.task_index;
            fr.visual_score = fr.task_visual[own - 1];
            fr.constraint_violation = std::max(0.0, config_.visual_lower - fr.visual_score) +
                                      std::max(0.0, fr.visual_score - config_.visual_upper);
            fr.feasible = fr.constraint_violation == 0.0;
            ind.phenotype = std::move(first_mesh);
            ind.fitness = std::move(fr);
        });
    }

    void observe_cohort(const Population& cohort) {
        for (const Individual& ind : cohort) {
            const Eigen::VectorXd& raw = ind.fitness->physical_raw;
            for (const Task& task : config_.tasks)
                for (int m = 0; m < backend_.objective_count(); ++m)
                    normalizer_.observe(task.index, m, sense_adjusted(task, m, raw[m]));
        }
    }

    // Re-normalizes one record under the current normalizer state and
    // recomputes the per-task Eq.-1 costs.
    void refresh_costs(Individual& ind) const {
        FitnessRecord& fr = *ind.fitness;
        const int K = static_cast<int>(config_.tasks.size());
        const int M = backend_.objective_count();
        fr.task_cost.resize(K);
        for (int k = 0; k < K; ++k) {
            const Task& task = config_.tasks[static_cast<std::size_t>(k)];
            Eigen::VectorXd norm(M);
            for (int m = 0; m < M; ++m)
                norm[m] = normalizer_.normalize(task.index, m,
                                                sense_adjusted(task, m, fr.physical_raw[m]));
            fr.task_cost[k] = combined_cost(norm, fr.task_visual[k], config_.alpha);
            if (task.index == ind.genotype.task_index) {
                fr.physical_norm = norm;
                fr.combined_cost = fr.task_cost[k];
            }
        }
    }

    // Per-task normalized objective vectors for the multi-objective factorial
    // cost (sense already folded in, so every objective is minimized).
    Eigen::VectorXd mo_task_costs(const Population& members, const Task& task) const {
        const int M = backend_.objective_count();
        std::vector<Eigen::VectorXd> objectives;
        std::vector<bool> feasible;
        std::vector<double> violation;
        objectives.reserve(members.size());
        for (const Individual& ind : members) {
            const FitnessRecord& fr = *ind.fitness;
            Eigen::VectorXd norm(M);
            for (int m = 0; m < M; ++m)
                norm[m] = normalizer_.normalize(task.index, m,
                                                sense_adjusted(task, m, fr.physical_raw[m]));
            const double vis = fr.task_visual[task.index - 1];
            const auto constrained =
                constrained_objectives(norm, vis, config_.visual_lower, config_.visual_upper);
            objectives.push_back(constrained.objectives);
            feasible.push_back(constrained.feasible);
            violation.push_back(constrained.violation);
        }
        return per_task_mo_cost(objectives, feasible, violation);
    }

    void rank_members(Population& members) const {
        const Eigen::Index n = static_cast<Eigen::Index>(members.size());
        const Eigen::Index K = static_cast<Eigen::Index>(config_.tasks.size());
        Eigen::MatrixXd costs(n, K);
        for (Eigen::Index k = 0; k < K; ++k) {
            const Task& task = config_.tasks[static_cast<std::size_t>(k)];
            if (config_.objective_mode == ObjectiveMode::multi_objective) {
                costs.col(k) = mo_task_costs(members, task);
            } else {
                for (Eigen::Index i = 0; i < n; ++i)
                    costs(i, k) = members[static_cast<std::size_t>(i)].fitness->task_cost[k];
            }
        }
        const Eigen::MatrixXi ranks = factorial_ranks(costs);
        for (Eigen::Index i = 0; i < n; ++i) {
            FitnessRecord& fr = *members[static_cast<std::size_t>(i)].fitness;
            if (config_.objective_mode == ObjectiveMode::multi_objective)
                fr.task_cost = costs.row(i).transpose();
            fr.set_factorial_ranks(ranks.row(i).transpose());
        }
    }

    std::optional<double> novelty_for(const Individual& ind) const {
        if (!options_.novelty_baselines) return std::nullopt;
        auto it = options_.novelty_baselines->find(ind.genotype.task_index);
        if (it == options_.novelty_baselines->end() || !ind.phenotype) return std::nullopt;
        const Task& task = task_at(ind.genotype.task_index);
        return novelty_score(*ind.phenotype, task, *oracles_.visual, it->second);
    }

    RunLogRecord make_record(const Individual& ind, int generation, std::size_t idx,
                             bool deduplicated) const {
        const FitnessRecord& fr = *ind.fitness;
        RunLogRecord r;
        r.run_id = run_id_;
        r.generation = generation;
        r.individual_id = "g" + std::to_string(generation) + "_i" + std::to_string(idx);
        r.task_index = ind.genotype.task_index;
        r.origin = ind.origin;
        r.prompt = ind.genotype.prompt;
        r.phys_raw.assign(fr.physical_raw.data(), fr.physical_raw.data() + fr.physical_raw.size());
        r.phys_norm.assign(fr.physical_norm.data(),
                           fr.physical_norm.data() + fr.physical_norm.size());
        r.visual_score = fr.visual_score;
        r.combined_cost = fr.combined_cost;
        if (!deduplicated && fr.has_ranks()) {
            r.factorial_ranks.assign(fr.factorial_ranks.data(),
                                     fr.factorial_ranks.data() + fr.factorial_ranks.size());
            r.scalar_fitness = fr.scalar_fitness;
        }
        r.feasible = fr.feasible;
        r.constraint_violation = fr.constraint_violation;
        r.novelty_score = novelty_for(ind);
        r.deduplicated = deduplicated;
        r.language_adapter = oracles_.language->info().name;
        r.generator_adapter = oracles_.generator->info().name;
        r.visual_adapter = oracles_.visual->info().name;
        r.physical_adapter = backend_.name();
        r.oracles_deterministic = oracles_deterministic_;
        r.variation_seed = generation == 0
                               ? 0
                               : derive_seed(config_.seed, "offspring",
                                             static_cast<std::uint64_t>(generation),
                                             static_cast<std::uint64_t>(idx));
        r.phenotype_seed =
            derive_seed(config_.seed, generation == 0 ? "phenotype0" : "phenotype",
                        static_cast<std::uint64_t>(generation), static_cast<std::uint64_t>(idx));
        return r;
    }

    void emit(int generation, std::vector<RunLogRecord> records, bool final_generation,
              int joint_size, int joint_feasible) {
        if (options_.on_generation) {
            GenerationSummary summary;
            summary.generation = generation;
            summary.records = &records;
            summary.population = &population_;
            summary.archive = &archive_;
            summary.normalizer = &normalizer_;
            summary.joint_size = joint_size;
            summary.joint_feasible = joint_feasible;
            summary.final_generation = final_generation;
            options_.on_generation(summary);
        }
        records_.insert(records_.end(), std::make_move_iterator(records.begin()),
                        std::make_move_iterator(records.end()));
    }

    static int count_feasible(const Population& members) {
        int feasible = 0;
        for (const Individual& ind : members)
            if (ind.fitness && ind.fitness->feasible) ++feasible;
        return feasible;
    }

    void initial_generation() {
        const int n = config_.population_size;
        const int K = static_cast<int>(config_.tasks.size());

        Population cohort;
        for (int k = 0; k < K; ++k) {
            const int share = n / K + (k < n % K ? 1 : 0);
            if (share == 0) continue;
            const std::vector<Genotype> genotypes = initialize_population(
                *oracles_.language, templates_, {config_.tasks[static_cast<std::size_t>(k)]},
                share, generator_budget(), derive_seed(config_.seed, "initialize"));
            for (const Genotype& g : genotypes) {
                Individual ind;
                ind.genotype = g;
                ind.origin = Origin::initial;
                ind.generation_created = 0;
                cohort.push_back(std::move(ind));
            }
        }

        evaluate_cohort(cohort, 0, "phenotype0");
        observe_cohort(cohort);
        for (Individual& ind : cohort) refresh_costs(ind);
        rank_members(cohort);
        for (const Individual& ind : cohort) offer_to_archive(archive_, ind, 0);

        population_ = std::move(cohort);
        std::vector<RunLogRecord> records;
        for (std::size_t i = 0; i < population_.size(); ++i)
            records.push_back(make_record(population_[i], 0, i, false));
        const int joint_feasible = count_feasible(population_);
        emit(0, std::move(records), false, static_cast<int>(population_.size()), joint_feasible);
    }

    int generator_budget() const {
        const long budget = oracles_.generator->info().max_context_tokens;
        return budget > 0 ? static_cast<int>(budget) : kDefaultTokenBudget;
    }

    void step(int generation) {
        if (config_.reevaluate_survivors) {
            evaluate_cohort(population_, generation, "reevaluate");
            observe_cohort(population_);
        }

        // Reflection is attached to every mating instruction this generation.
        const std::string reflection =
            reflect(*oracles_.language, templates_, make_reflection_bundle(population_, config_),
                    derive_seed(config_.seed, "reflect", static_cast<std::uint64_t>(generation)));
        const MatingContext ctx = make_mating_context(*oracles_.language, templates_, population_,
                                                      config_, reflection);

        Population offspring =
            generate_offspring(ctx, population_, config_, generation, config_.seed);
        evaluate_cohort(offspring, generation, "phenotype");

        // ---- generation barrier ----
        observe_cohort(offspring);
        for (Individual& ind : population_) refresh_costs(ind);
        for (Individual& ind : offspring) refresh_costs(ind);

        JointPopulation joint = make_joint(population_, offspring);
        const std::vector<bool> kept = dedup_kept_mask(joint);

        Population live;
        std::vector<std::size_t> live_to_joint;
        for (std::size_t i = 0; i < joint.members.size(); ++i) {
            if (!kept[i]) continue;
            live.push_back(joint.members[i]);
            live_to_joint.push_back(i);
        }
        rank_members(live);

        JointPopulation ranked;
        ranked.members = live;
        ranked.from_offspring.reserve(live.size());
        for (const std::size_t j : live_to_joint)
            ranked.from_offspring.push_back(joint.from_offspring[j]);

        const std::vector<std::size_t> survivors = tournament_survival(
            ranked, config_.population_size, config_.tournament_size, config_.objective_mode,
            derive_seed(config_.seed, "survival", static_cast<std::uint64_t>(generation)));

        for (const Individual& ind : offspring) offer_to_archive(archive_, ind, generation);

        // Records for this generation's evaluated cohort, ranked state where
        // the copy survived dedup.
        std::vector<RunLogRecord> records;
        const std::size_t parent_count = population_.size();
        std::vector<std::ptrdiff_t> joint_to_live(joint.members.size(), -1);
        for (std::size_t pos = 0; pos < live_to_joint.size(); ++pos)
            joint_to_live[live_to_joint[pos]] = static_cast<std::ptrdiff_t>(pos);
        for (std::size_t idx = 0; idx < offspring.size(); ++idx) {
            const std::size_t joint_idx = parent_count + idx;
            if (kept[joint_idx]) {
                const std::size_t live_idx = static_cast<std::size_t>(joint_to_live[joint_idx]);
                records.push_back(make_record(live[live_idx], generation, idx, false));
            } else {
                records.push_back(make_record(offspring[idx], generation, idx, true));
            }
        }

        Population next;
        next.reserve(survivors.size());
        for (const std::size_t s : survivors) next.push_back(live[s]);
        population_ = std::move(next);

        emit(generation, std::move(records), generation == config_.max_generations,
             static_cast<int>(live.size()), count_feasible(live));
    }

    const RunConfig& config_;
    const OracleSet& oracles_;
    const InstructionTemplates& templates_;
    const EvolutionOptions& options_;
    PhysicalBackend backend_;
    RunningNormalizer normalizer_;
    Archive archive_;
    Population population_;
    std::vector<RunLogRecord> records_;
    std::string run_id_;
    bool oracles_deterministic_ = true;
    int threads_ = 0;
};

} // namespace

RunResult run_evolution(const RunConfig& config, const OracleSet& oracles,
                        const InstructionTemplates& templates, const EvolutionOptions& options) {
    config.validate();
    if (!oracles.language || !oracles.generator || !oracles.visual)
        throw ConfigError("all three oracles must be provided");
    Driver driver(config, oracles, templates, options);
    return driver.run();
}

} // namespace gemt
