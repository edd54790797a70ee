#pragma once

#include "gemt/types.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace gemt {

enum class ObjectiveMode { single_objective, multi_objective };
enum class Sense { minimize, maximize };

std::string_view to_string(ObjectiveMode mode);
std::string_view to_string(Sense sense);

// Named adapters per oracle role. Built-ins: language "scripted" | "remote",
// generator "procedural", visual "tag_overlap" | "remote", physical
// "frontal_area" | "drag" | "drag_lift".
struct OracleSelection {
    std::string language = "scripted";
    std::string generator = "procedural";
    std::string visual = "tag_overlap";
    std::string physical = "frontal_area";
};

struct RunConfig {
    std::vector<Task> tasks;
    int population_size = 20;
    int max_generations = 20;
    double alpha = 0.55;
    double visual_lower = 0.5;
    double visual_upper = 1.0;
    ObjectiveMode objective_mode = ObjectiveMode::single_objective;
    double self_mating_probability = 0.2;
    double cross_domain_probability = 0.3;
    int tournament_size = 2;
    std::uint64_t seed = 0;
    OracleSelection oracle_selection;
    int novelty_baseline_samples = 1000;

    // Engine extensions beyond the core parameter set.
    int phenotype_samples = 1;        // samples per genotype, mean-aggregated
    bool reevaluate_survivors = false;
    int threads = 0;                  // 0 = hardware concurrency
    int raster_resolution = 512;      // frontal-area grid
    std::string instruction_dir;      // optional template override directory
    std::string keyword_table_path;   // optional mock keyword table file
    std::string synonym_table_path;   // optional mock synonym table file
    // domain phrase -> objective name -> sense (default minimize)
    std::map<std::string, std::map<std::string, Sense>> objective_sense;

    Sense sense_for(const Task& task, const std::string& objective) const;

    // Throws ConfigError when any invariant fails.
    void validate() const;
};

// Hierarchical key/value text: "key = value" lines, '.'-separated key paths,
// '#' comments, comma lists. Unknown keys are rejected.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

// Canonical snapshot form: fixed key order and number formatting, so a
// snapshot hashes and diffs deterministically.
std::string config_to_text(const RunConfig& config);

// Stable identifier derived from the canonical snapshot text.
std::string run_id_for(const RunConfig& config);

} // namespace gemt
