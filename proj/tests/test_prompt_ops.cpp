#include "gemt/prompt_ops.hpp"

#include "gemt/errors.hpp"
#include "gemt/mock_oracles.hpp"
#include "gemt/seeds.hpp"
#include "support.hpp"

#include <doctest.h>

#include <map>
#include <set>

using namespace gemt;
using namespace gemt::test;

namespace {

MatingContext context_for(LanguageOracle& oracle, const InstructionTemplates& templates,
                          const Population& population, const RunConfig& config) {
    return make_mating_context(oracle, templates, population, config, "test reflection");
}

} // namespace

TEST_CASE("initialize_population returns n_per_task unique genotypes per task") {
    ScriptedLanguageOracle oracle;
    const InstructionTemplates templates = default_instruction_templates();
    const auto tasks = two_tasks();

    const auto genotypes =
        initialize_population(oracle, templates, tasks, 2, kDefaultTokenBudget, 7);
    REQUIRE(genotypes.size() == 4);
    std::map<int, int> per_task;
    std::set<std::string> keys;
    for (const Genotype& g : genotypes) {
        ++per_task[g.task_index];
        keys.insert(genotype_key(g));
        CHECK(parse_prompt(g.prompt).has_value());
    }
    CHECK(per_task[1] == 2);
    CHECK(per_task[2] == 2);
    CHECK(keys.size() == 4);

    const auto again = initialize_population(oracle, templates, tasks, 2, kDefaultTokenBudget, 7);
    REQUIRE(again.size() == genotypes.size());
    for (std::size_t i = 0; i < genotypes.size(); ++i)
        CHECK(again[i].prompt == genotypes[i].prompt);
}

TEST_CASE("initialize_population rejects n_per_task < 1") {
    ScriptedLanguageOracle oracle;
    const InstructionTemplates templates = default_instruction_templates();
    CHECK_THROWS_AS(initialize_population(oracle, templates, two_tasks(), 0, 77, 7), EmptyInput);
}

TEST_CASE("exhausted duplicate retries fall back to numeric suffixes") {
    FixedLanguageOracle oracle("a stubborn shape");
    const InstructionTemplates templates = default_instruction_templates();
    const std::vector<Task> tasks = {make_task(1, "car")};
    const auto genotypes = initialize_population(oracle, templates, tasks, 3, 77, 1);
    REQUIRE(genotypes.size() == 3);
    CHECK(genotypes[0].descriptor == "a stubborn shape");
    CHECK(genotypes[1].descriptor == "a stubborn shape 2");
    CHECK(genotypes[2].descriptor == "a stubborn shape 3");
}

TEST_CASE("reflect requires a non-empty population context") {
    ScriptedLanguageOracle oracle;
    const InstructionTemplates templates = default_instruction_templates();
    InstructionBundle bundle;
    bundle.kind = InstructionKind::reflect;
    CHECK_THROWS_AS(reflect(oracle, templates, bundle, 1), EmptyInput);
}

TEST_CASE("reflect is deterministic for identical context and seed") {
    ScriptedLanguageOracle oracle;
    const InstructionTemplates templates = default_instruction_templates();
    const RunConfig config = small_config();
    Population population = {evaluated(config.tasks[0], "a sleek wedge", 0.3),
                             evaluated(config.tasks[0], "a low bullet", 0.1)};
    const auto bundle = make_reflection_bundle(population, config);
    CHECK(reflect(oracle, templates, bundle, 5) == reflect(oracle, templates, bundle, 5));
}

TEST_CASE("self_mate keeps the parent's task") {
    ScriptedLanguageOracle oracle;
    const InstructionTemplates templates = default_instruction_templates();
    const RunConfig config = small_config();
    Population population = {evaluated(config.tasks[0], "a fast wedge", 0.3)};
    const MatingContext ctx = context_for(oracle, templates, population, config);

    const Genotype child =
        self_mate(ctx, population[0].genotype, config.tasks[0], 11);
    CHECK(child.task_index == config.tasks[0].index);
    CHECK(parse_prompt(child.prompt)->domain_phrase == "car");
    const Genotype again = self_mate(ctx, population[0].genotype, config.tasks[0], 11);
    CHECK(again.prompt == child.prompt);
}

TEST_CASE("same_domain_mate rejects mixed parents") {
    ScriptedLanguageOracle oracle;
    const InstructionTemplates templates = default_instruction_templates();
    const RunConfig config = small_config();
    Population population = {evaluated(config.tasks[0], "a sleek wedge", 0.3),
                             evaluated(config.tasks[1], "a swept wing", 0.2)};
    const MatingContext ctx = context_for(oracle, templates, population, config);

    CHECK_THROWS_AS(same_domain_mate(ctx, {population[0].genotype, population[1].genotype},
                                     config.tasks[0], 1),
                    MixedDomainParents);
}

TEST_CASE("cross_domain_mate guards its preconditions") {
    ScriptedLanguageOracle oracle;
    const InstructionTemplates templates = default_instruction_templates();
    RunConfig config = small_config();
    config.tasks.push_back(make_task(3, "boat"));
    Population population = {evaluated(config.tasks[0], "a sleek wedge", 0.3, true, 0, 3),
                             evaluated(config.tasks[0], "a low bullet", 0.2, true, 0, 3),
                             evaluated(config.tasks[1], "a swept wing", 0.2, true, 0, 3)};
    const MatingContext ctx = context_for(oracle, templates, population, config);

    CHECK_THROWS_AS(cross_domain_mate(ctx, {population[0].genotype, population[1].genotype},
                                      config.tasks[0], 1),
                    SingleDomainParents);
    CHECK_THROWS_AS(cross_domain_mate(ctx, {population[0].genotype, population[2].genotype},
                                      config.tasks[2], 1),
                    TaskMismatch);

    const Genotype child = cross_domain_mate(
        ctx, {population[0].genotype, population[2].genotype}, config.tasks[1], 1);
    CHECK(parse_prompt(child.prompt)->domain_phrase == "airplane");
    CHECK(child.task_index == 2);
}

TEST_CASE("malformed oracle output is repaired once, then rejected") {
    const InstructionTemplates templates = default_instruction_templates();
    const RunConfig config = small_config();
    Population population = {evaluated(config.tasks[0], "a fast wedge", 0.3)};

    // Free-text reply: repaired by re-wrapping it as a descriptor.
    FixedLanguageOracle freeform("sleek and very low");
    const MatingContext ctx1 = context_for(freeform, templates, population, config);
    const Genotype repaired = self_mate(ctx1, population[0].genotype, config.tasks[0], 1);
    CHECK(repaired.prompt == "A car in the shape of sleek and very low.");

    // Nothing usable: error after the repair attempt.
    FixedLanguageOracle empty("\"\"");
    const MatingContext ctx2 = context_for(empty, templates, population, config);
    CHECK_THROWS_AS(self_mate(ctx2, population[0].genotype, config.tasks[0], 1),
                    MalformedOracleOutput);
}

TEST_CASE("generate_offspring produces exactly N template-valid children") {
    ScriptedLanguageOracle oracle;
    const InstructionTemplates templates = default_instruction_templates();
    RunConfig config = small_config(10, 3);
    Population population;
    for (int i = 0; i < 5; ++i) {
        population.push_back(
            evaluated(config.tasks[0], "a sleek wedge " + std::to_string(i), 0.1 * i));
        population.push_back(
            evaluated(config.tasks[1], "a swept wing " + std::to_string(i), 0.1 * i + 0.05));
    }
    const MatingContext ctx = context_for(oracle, templates, population, config);

    const Population offspring = generate_offspring(ctx, population, config, 1, 42);
    REQUIRE(offspring.size() == 10);
    for (const Individual& child : offspring) {
        CHECK(parse_prompt(child.genotype.prompt).has_value());
        CHECK(child.generation_created == 1);
        CHECK(child.origin != Origin::initial);
    }

    const Population again = generate_offspring(ctx, population, config, 1, 42);
    for (std::size_t i = 0; i < offspring.size(); ++i) {
        CHECK(again[i].genotype.prompt == offspring[i].genotype.prompt);
        CHECK(again[i].origin == offspring[i].origin);
    }
}

TEST_CASE("p_self = 1 forces pure self-mating") {
    ScriptedLanguageOracle oracle;
    const InstructionTemplates templates = default_instruction_templates();
    RunConfig config = small_config(12, 1);
    config.self_mating_probability = 1.0;
    config.cross_domain_probability = 0.0;
    Population population = {evaluated(config.tasks[0], "a sleek wedge", 0.1),
                             evaluated(config.tasks[1], "a swept wing", 0.2)};
    const MatingContext ctx = context_for(oracle, templates, population, config);

    for (const Individual& child : generate_offspring(ctx, population, config, 1, 9))
        CHECK(child.origin == Origin::self_mate);
}

TEST_CASE("single-task runs with p_self = 0 breed same-domain only") {
    ScriptedLanguageOracle oracle;
    const InstructionTemplates templates = default_instruction_templates();
    RunConfig config = small_config(12, 1);
    config.tasks = {make_task(1, "car")};
    config.self_mating_probability = 0.0;
    config.cross_domain_probability = 0.3;  // impossible with one task
    Population population = {evaluated(config.tasks[0], "a sleek wedge", 0.1, true, 0, 1),
                             evaluated(config.tasks[0], "a low bullet", 0.2, true, 0, 1),
                             evaluated(config.tasks[0], "a flat slab", 0.3, true, 0, 1)};
    const MatingContext ctx = context_for(oracle, templates, population, config);

    for (const Individual& child : generate_offspring(ctx, population, config, 1, 9))
        CHECK(child.origin == Origin::same_domain);
}

TEST_CASE("unevaluated populations cannot breed") {
    ScriptedLanguageOracle oracle;
    const InstructionTemplates templates = default_instruction_templates();
    const RunConfig config = small_config();
    Population population = {evaluated(config.tasks[0], "a sleek wedge", 0.1)};
    population[0].fitness.reset();
    CHECK_THROWS_AS(
        make_mating_context(oracle, templates, population, config, ""), MissingFitness);
}

TEST_CASE("origin frequencies follow the configured probabilities") {
    ScriptedLanguageOracle oracle;
    const InstructionTemplates templates = default_instruction_templates();

    // chi-squared threshold for 1 degree of freedom at p = 0.001
    const double kChi2 = 10.828;

    SUBCASE("single task: p_self vs same-domain") {
        RunConfig config = small_config(100, 1);
        config.tasks = {make_task(1, "car")};
        config.self_mating_probability = 0.2;
        config.cross_domain_probability = 0.0;
        Population population = {evaluated(config.tasks[0], "a sleek wedge", 0.1, true, 0, 1),
                                 evaluated(config.tasks[0], "a low bullet", 0.2, true, 0, 1),
                                 evaluated(config.tasks[0], "a flat slab", 0.3, true, 0, 1),
                                 evaluated(config.tasks[0], "a tapered dart", 0.4, true, 0, 1)};
        const MatingContext ctx = context_for(oracle, templates, population, config);

        int self_count = 0, total = 0;
        for (int generation = 1; generation <= 100; ++generation) {
            for (const Individual& child :
                 generate_offspring(ctx, population, config, generation, 1234)) {
                ++total;
                if (child.origin == Origin::self_mate) ++self_count;
            }
        }
        REQUIRE(total == 10000);
        const double expected_self = 0.2 * total;
        const double expected_same = 0.8 * total;
        const double chi2 =
            (self_count - expected_self) * (self_count - expected_self) / expected_self +
            (total - self_count - expected_same) * (total - self_count - expected_same) /
                expected_same;
        CHECK(chi2 < kChi2);
    }

    SUBCASE("two tasks: p_self vs forced cross-domain") {
        RunConfig config = small_config(100, 1);
        config.self_mating_probability = 0.4;
        config.cross_domain_probability = 0.6;
        Population population = {evaluated(config.tasks[0], "a sleek wedge", 0.1),
                                 evaluated(config.tasks[0], "a low bullet", 0.2),
                                 evaluated(config.tasks[1], "a swept wing", 0.15),
                                 evaluated(config.tasks[1], "a slender dart", 0.25)};
        const MatingContext ctx = context_for(oracle, templates, population, config);

        int self_count = 0, cross_count = 0, total = 0;
        for (int generation = 1; generation <= 100; ++generation) {
            for (const Individual& child :
                 generate_offspring(ctx, population, config, generation, 777)) {
                ++total;
                if (child.origin == Origin::self_mate) ++self_count;
                if (child.origin == Origin::cross_domain) ++cross_count;
            }
        }
        REQUIRE(total == 10000);
        CHECK(self_count + cross_count == total);  // p_self + p_cross = 1
        const double expected_self = 0.4 * total;
        const double expected_cross = 0.6 * total;
        const double chi2 =
            (self_count - expected_self) * (self_count - expected_self) / expected_self +
            (cross_count - expected_cross) * (cross_count - expected_cross) / expected_cross;
        CHECK(chi2 < kChi2);
    }
}

TEST_CASE("failed operators fall back to self-mating the best individual") {
    // Mating operators fail, self-mating succeeds: every slot lands on the
    // fallback path.
    FailingLanguageOracle oracle(/*fail_self=*/false);
    const InstructionTemplates templates = default_instruction_templates();
    RunConfig config = small_config(6, 1);
    config.self_mating_probability = 0.0;
    config.cross_domain_probability = 0.5;
    Population population = {evaluated(config.tasks[0], "a sleek wedge", 0.1),
                             evaluated(config.tasks[1], "a swept wing", 0.2)};
    const MatingContext ctx = context_for(oracle, templates, population, config);

    const Population offspring = generate_offspring(ctx, population, config, 1, 3);
    REQUIRE(offspring.size() == 6);
    for (const Individual& child : offspring) CHECK(child.origin == Origin::self_mate);
}

TEST_CASE("a fully failing oracle propagates the failure") {
    FailingLanguageOracle oracle(/*fail_self=*/true);
    const InstructionTemplates templates = default_instruction_templates();
    RunConfig config = small_config(4, 1);
    Population population = {evaluated(config.tasks[0], "a sleek wedge", 0.1),
                             evaluated(config.tasks[1], "a swept wing", 0.2)};
    const MatingContext ctx = context_for(oracle, templates, population, config);
    CHECK_THROWS_AS(generate_offspring(ctx, population, config, 1, 3), OracleFailure);
}
