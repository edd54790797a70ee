#pragma once

#include "gemt/config.hpp"
#include "gemt/emt.hpp"
#include "gemt/evaluators.hpp"
#include "gemt/instructions.hpp"
#include "gemt/logging.hpp"
#include "gemt/metrics.hpp"
#include "gemt/oracles.hpp"

#include <functional>
#include <map>

namespace gemt {

// Best-ever individual per task by combined cost, with the cost snapshot
// taken at its evaluation barrier; the per-task best is therefore monotone
// non-increasing by construction.
struct ArchiveEntry {
    Individual individual;
    double best_cost = 0.0;
    int generation = 0;
};
using Archive = std::map<int, ArchiveEntry>;  // keyed by task index

void offer_to_archive(Archive& archive, const Individual& individual, int generation);

struct GenerationSummary {
    int generation = 0;  // 0 is the initial cohort
    const std::vector<RunLogRecord>* records = nullptr;   // evaluated at this barrier
    const Population* population = nullptr;               // survivors entering the next generation
    const Archive* archive = nullptr;
    const RunningNormalizer* normalizer = nullptr;
    int joint_size = 0;      // deduplicated joint population entering survival
    int joint_feasible = 0;  // feasible members of that joint population
    bool final_generation = false;
};

struct ResumeState {
    int completed_generation = 0;
    Population population;
    Archive archive;
    RunningNormalizer normalizer;
};

struct EvolutionOptions {
    std::function<void(const GenerationSummary&)> on_generation;
    const ResumeState* resume = nullptr;
    // When present, every evaluated individual gets Eq.-3 novelty attached.
    const std::map<int, NoveltyBaseline>* novelty_baselines = nullptr;
    // Testing / checkpoint aid: stop cleanly after this generation barrier.
    int stop_after_generation = -1;
};

struct RunResult {
    Population population;
    Archive archive;
    std::vector<RunLogRecord> records;  // records produced by this invocation
    int completed_generations = 0;
    bool finished = false;
};

// initialize -> evaluate -> [reflect -> offspring -> phenotypes -> evaluate ->
// join -> dedup -> rank -> survive] x G, generation-synchronous with parallel
// evaluation fan-out between barriers.
RunResult run_evolution(const RunConfig& config, const OracleSet& oracles,
                        const InstructionTemplates& templates,
                        const EvolutionOptions& options = {});

} // namespace gemt
