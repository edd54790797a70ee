#include "gemt/logging.hpp"

#include "gemt/errors.hpp"

namespace gemt {

using nlohmann::json;

json to_json(const RunLogRecord& r) {
    json j;
    j["run_id"] = r.run_id;
    j["generation"] = r.generation;
    j["individual_id"] = r.individual_id;
    j["task_index"] = r.task_index;
    j["origin"] = std::string(to_string(r.origin));
    j["prompt"] = r.prompt;
    j["phys_raw"] = r.phys_raw;
    j["phys_norm"] = r.phys_norm;
    j["visual_score"] = r.visual_score;
    j["combined_cost"] = r.combined_cost;
    j["factorial_ranks"] = r.factorial_ranks;
    j["scalar_fitness"] = r.scalar_fitness;
    j["feasible"] = r.feasible;
    j["constraint_violation"] = r.constraint_violation;
    if (r.novelty_score) j["novelty_score"] = *r.novelty_score;
    else j["novelty_score"] = nullptr;
    j["deduplicated"] = r.deduplicated;
    j["language_adapter"] = r.language_adapter;
    j["generator_adapter"] = r.generator_adapter;
    j["visual_adapter"] = r.visual_adapter;
    j["physical_adapter"] = r.physical_adapter;
    j["oracles_deterministic"] = r.oracles_deterministic;
    j["variation_seed"] = r.variation_seed;
    j["phenotype_seed"] = r.phenotype_seed;
    return j;
}

RunLogRecord record_from_json(const json& j) {
    RunLogRecord r;
    r.run_id = j.at("run_id").get<std::string>();
    r.generation = j.at("generation").get<int>();
    r.individual_id = j.at("individual_id").get<std::string>();
    r.task_index = j.at("task_index").get<int>();
    r.origin = origin_from_string(j.at("origin").get<std::string>());
    r.prompt = j.at("prompt").get<std::string>();
    r.phys_raw = j.at("phys_raw").get<std::vector<double>>();
    r.phys_norm = j.at("phys_norm").get<std::vector<double>>();
    r.visual_score = j.at("visual_score").get<double>();
    r.combined_cost = j.at("combined_cost").get<double>();
    r.factorial_ranks = j.at("factorial_ranks").get<std::vector<int>>();
    r.scalar_fitness = j.at("scalar_fitness").get<int>();
    r.feasible = j.at("feasible").get<bool>();
    r.constraint_violation = j.at("constraint_violation").get<double>();
    if (!j.at("novelty_score").is_null()) r.novelty_score = j.at("novelty_score").get<double>();
    r.deduplicated = j.at("deduplicated").get<bool>();
    r.language_adapter = j.at("language_adapter").get<std::string>();
    r.generator_adapter = j.at("generator_adapter").get<std::string>();
    r.visual_adapter = j.at("visual_adapter").get<std::string>();
    r.physical_adapter = j.at("physical_adapter").get<std::string>();
    r.oracles_deterministic = j.at("oracles_deterministic").get<bool>();
    r.variation_seed = j.at("variation_seed").get<std::uint64_t>();
    r.phenotype_seed = j.at("phenotype_seed").get<std::uint64_t>();
    return r;
}

std::string to_log_line(const RunLogRecord& record) { return to_json(record).dump(); }

RunLogRecord record_from_line(const std::string& line) {
    try {
        return record_from_json(json::parse(line));
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad log record: ") + e.what());
    }
}

} // namespace gemt
