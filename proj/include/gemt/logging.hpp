#pragma once

#include "gemt/types.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace gemt {

// One append-only record per evaluated individual, written at the generation
// barrier. Values are snapshots under that generation's normalization.
struct RunLogRecord {
    std::string run_id;
    int generation = 0;
    std::string individual_id;  // "g<generation>_i<index>"
    int task_index = 0;
    Origin origin = Origin::initial;
    std::string prompt;
    std::vector<double> phys_raw;
    std::vector<double> phys_norm;
    double visual_score = 0.0;
    double combined_cost = 0.0;
    std::vector<int> factorial_ranks;  // empty when removed as a duplicate pre-ranking
    int scalar_fitness = 0;            // 0 when unranked
    bool feasible = true;
    double constraint_violation = 0.0;
    std::optional<double> novelty_score;
    bool deduplicated = false;  // removed by joint-population dedup at its own barrier
    std::string language_adapter;
    std::string generator_adapter;
    std::string visual_adapter;
    std::string physical_adapter;
    bool oracles_deterministic = true;
    std::uint64_t variation_seed = 0;
    std::uint64_t phenotype_seed = 0;
};

nlohmann::json to_json(const RunLogRecord& record);
RunLogRecord record_from_json(const nlohmann::json& j);

// Single-line JSON with deterministic key order.
std::string to_log_line(const RunLogRecord& record);
RunLogRecord record_from_line(const std::string& line);

} // namespace gemt
