#include "gemt/evolution.hpp"

#include "gemt/errors.hpp"
#include "gemt/mock_oracles.hpp"
#include "gemt/oracle_factory.hpp"
#include "gemt/prompt.hpp"
#include "support.hpp"

#include <doctest.h>

#include <map>

using namespace gemt;
using namespace gemt::test;

namespace {

RunConfig mock_config(int population, int generations, std::uint64_t seed) {
    RunConfig config = small_config(population, generations);
    config.seed = seed;
    return config;
}

std::string serialize_records(const std::vector<RunLogRecord>& records) {
    std::string out;
    for (const RunLogRecord& r : records) out += to_log_line(r) + "\n";
    return out;
}

} // namespace

TEST_CASE("a mock run completes with exact evaluation accounting") {
    const RunConfig config = mock_config(8, 5, 42);
    const OracleSet oracles = make_oracles(config);
    const InstructionTemplates templates = default_instruction_templates();

    std::map<int, std::vector<double>> archive_best_by_task;
    int barriers = 0;
    EvolutionOptions options;
    options.on_generation = [&](const GenerationSummary& summary) {
        ++barriers;
        CHECK(summary.population->size() <= 8);
        for (const auto& [task, entry] : *summary.archive)
            archive_best_by_task[task].push_back(entry.best_cost);
        for (const RunLogRecord& r : *summary.records)
            CHECK(parse_prompt(r.prompt).has_value());
    };

    const RunResult result = run_evolution(config, oracles, templates, options);
    CHECK(result.finished);
    CHECK(result.completed_generations == 5);
    CHECK(result.records.size() == 8 + 8 * 5);
    CHECK(result.population.size() == 8);
    CHECK(barriers == 6);

    // Archive best per task is monotone non-increasing across barriers.
    for (const auto& [task, series] : archive_best_by_task) {
        CAPTURE(task);
        for (std::size_t i = 1; i < series.size(); ++i) CHECK(series[i] <= series[i - 1] + 1e-15);
    }
}

TEST_CASE("G = 1 evaluates exactly two cohorts") {
    const RunConfig config = mock_config(6, 1, 9);
    const OracleSet oracles = make_oracles(config);
    const RunResult result =
        run_evolution(config, oracles, default_instruction_templates());
    CHECK(result.records.size() == 12);
}

TEST_CASE("identical config and seed replay bit-identical records") {
    const RunConfig config = mock_config(8, 4, 1234);
    const OracleSet oracles = make_oracles(config);
    const InstructionTemplates templates = default_instruction_templates();

    const RunResult a = run_evolution(config, oracles, templates);
    const RunResult b = run_evolution(config, oracles, templates);
    CHECK(serialize_records(a.records) == serialize_records(b.records));

    RunConfig parallel = config;
    parallel.threads = 4;
    const RunResult c = run_evolution(parallel, make_oracles(parallel), templates);
    CHECK(serialize_records(c.records) == serialize_records(a.records));
}

TEST_CASE("stop_after plus resume equals an uninterrupted run") {
    const RunConfig config = mock_config(8, 6, 77);
    const OracleSet oracles = make_oracles(config);
    const InstructionTemplates templates = default_instruction_templates();

    const RunResult full = run_evolution(config, oracles, templates);

    ResumeState resume;
    {
        EvolutionOptions options;
        RunningNormalizer normalizer_snapshot;
        options.stop_after_generation = 3;
        options.on_generation = [&](const GenerationSummary& summary) {
            resume.completed_generation = summary.generation;
            resume.population = *summary.population;
            resume.archive = *summary.archive;
            resume.normalizer = *summary.normalizer;
        };
        const RunResult head = run_evolution(config, oracles, templates, options);
        CHECK_FALSE(head.finished);
        CHECK(head.completed_generations == 3);
    }

    EvolutionOptions tail_options;
    tail_options.resume = &resume;
    const RunResult tail = run_evolution(config, oracles, templates, tail_options);
    CHECK(tail.finished);

    // Final population and archive agree with the uninterrupted run.
    REQUIRE(tail.population.size() == full.population.size());
    for (std::size_t i = 0; i < full.population.size(); ++i)
        CHECK(tail.population[i].genotype.prompt == full.population[i].genotype.prompt);
    for (const auto& [task, entry] : full.archive) {
        REQUIRE(tail.archive.count(task));
        CHECK(tail.archive.at(task).best_cost == entry.best_cost);
        CHECK(tail.archive.at(task).individual.genotype.prompt ==
              entry.individual.genotype.prompt);
    }
}

TEST_CASE("novelty baselines attach Eq.-3 scores to every record") {
    const RunConfig config = mock_config(6, 2, 5);
    const OracleSet oracles = make_oracles(config);

    std::map<int, NoveltyBaseline> baselines;
    for (const Task& task : config.tasks)
        baselines[task.index] =
            build_novelty_baseline(*oracles.generator, *oracles.visual, task, 20, 3);

    EvolutionOptions options;
    options.novelty_baselines = &baselines;
    const RunResult result =
        run_evolution(config, oracles, default_instruction_templates(), options);
    for (const RunLogRecord& r : result.records) {
        REQUIRE(r.novelty_score.has_value());
        const double expected_mean = baselines.at(r.task_index).baseline_mean;
        CHECK(*r.novelty_score >= -expected_mean - 1e-12);
        CHECK(*r.novelty_score <= 1.0 - expected_mean + 1e-12);
    }
}

TEST_CASE("multi-objective runs never keep infeasible survivors when enough feasible exist") {
    RunConfig config = mock_config(10, 4, 11);
    config.objective_mode = ObjectiveMode::multi_objective;
    config.oracle_selection.physical = "drag_lift";
    config.objective_sense["airplane"]["lift_proxy"] = Sense::maximize;

    const OracleSet oracles = make_oracles(config);
    EvolutionOptions options;
    bool law_exercised = false;
    options.on_generation = [&](const GenerationSummary& summary) {
        if (summary.generation == 0) return;
        if (summary.joint_feasible >= config.population_size) {
            law_exercised = true;
            for (const Individual& ind : *summary.population)
                CHECK(ind.fitness->feasible);
        }
    };
    const RunResult result =
        run_evolution(config, oracles, default_instruction_templates(), options);
    CHECK(result.finished);
    CHECK(law_exercised);  // the check must not be vacuous
}

TEST_CASE("records carry adapter names and dedup bookkeeping") {
    const RunConfig config = mock_config(8, 3, 21);
    const OracleSet oracles = make_oracles(config);
    const RunResult result =
        run_evolution(config, oracles, default_instruction_templates());

    std::size_t ranked = 0;
    for (const RunLogRecord& r : result.records) {
        CHECK(r.language_adapter == "scripted");
        CHECK(r.generator_adapter == "procedural");
        CHECK(r.visual_adapter == "tag_overlap");
        CHECK(r.physical_adapter == "frontal_area");
        CHECK(r.oracles_deterministic);
        if (r.deduplicated) {
            CHECK(r.factorial_ranks.empty());
        } else {
            ++ranked;
            CHECK_FALSE(r.factorial_ranks.empty());
            int min_rank = r.factorial_ranks[0];
            for (int v : r.factorial_ranks) min_rank = std::min(min_rank, v);
            CHECK(r.scalar_fitness == min_rank);
        }
    }
    CHECK(ranked > 0);
}

TEST_CASE("a failing generator aborts the run after the last barrier") {
    class ExplodingGenerator final : public GeneratorOracle {
    public:
        OracleInfo info() const override { return {"exploding", true, 77, 0}; }
        PhenotypeMesh generate(std::string_view prompt, std::uint64_t seed) override {
            if (++calls_ > 20) throw GenerationFailure("synthetic failure");
            return fallback_.generate(prompt, seed);
        }

    private:
        ProceduralGenerator fallback_;
        int calls_ = 0;
    };

    const RunConfig config = mock_config(8, 5, 3);
    OracleSet oracles = make_oracles(config);
    oracles.generator = std::make_shared<ExplodingGenerator>();

    int barriers = 0;
    EvolutionOptions options;
    options.on_generation = [&](const GenerationSummary&) { ++barriers; };
    CHECK_THROWS_AS(run_evolution(config, oracles, default_instruction_templates(), options),
                    GenerationFailure);
    CHECK(barriers >= 1);  // partial state reached persistence hooks
}
