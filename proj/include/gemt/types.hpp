#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gemt {

// One design target (e.g. "car") optimized concurrently with the others.
struct Task {
    int index = 0;              // 1-based, unique within a run
    std::string domain_phrase;  // e.g. "car"
    std::string label;          // "A car"; the novelty metric scores against this
};

// Builds a task with the default "A <domain>" label unless one is given.
Task make_task(int index, std::string domain_phrase, std::string label = "");

// A structured text prompt conditioned on one task.
struct Genotype {
    int task_index = 0;
    std::string descriptor;  // the evolved free part
    std::string prompt;      // exact rendered template
    int token_count = 0;
};

enum class Origin { initial, self_mate, same_domain, cross_domain, survivor };

std::string_view to_string(Origin origin);
Origin origin_from_string(std::string_view text);

struct MeshProvenance {
    std::string genotype_key;
    int generation = 0;
    std::uint64_t generator_seed = 0;
    std::string recipe;              // mock recipe family; empty for remote meshes
    std::vector<std::string> tags;   // keyword/feature tags recorded at generation
};

// Indexed triangle mesh. Length units are arbitrary but consistent.
struct PhenotypeMesh {
    std::vector<Eigen::Vector3d> vertices;
    std::vector<Eigen::Vector3i> triangles;  // CCW outward-facing winding
    MeshProvenance provenance;
};

// Scores attached to one individual. Per-task vectors exist because every
// genotype is ranked against every task, reusing one phenotype with
// task-specific visual scores.
struct FitnessRecord {
    Eigen::VectorXd physical_raw;    // M entries, evaluator units
    Eigen::VectorXd physical_norm;   // M entries in [0,1], own-task normalization
    double visual_score = 0.0;       // own task, in [0,1]
    Eigen::VectorXd task_visual;     // K entries, visual score against each task
    double combined_cost = 0.0;      // own-task scalarized cost
    Eigen::VectorXd task_cost;       // K entries, factorial cost per task
    Eigen::VectorXi factorial_ranks; // K entries; set at the ranking barrier
    int scalar_fitness = 0;          // min over factorial_ranks; lower is fitter
    bool feasible = true;
    double constraint_violation = 0.0;

    // The only way ranks enter a record; derives scalar_fitness = min_k rank_k.
    void set_factorial_ranks(const Eigen::VectorXi& ranks);

    bool has_ranks() const { return factorial_ranks.size() > 0; }
};

struct Individual {
    Genotype genotype;
    std::optional<PhenotypeMesh> phenotype;
    std::optional<FitnessRecord> fitness;  // present implies phenotype present
    Origin origin = Origin::initial;
    int generation_created = 0;
};

using Population = std::vector<Individual>;

} // namespace gemt
