#pragma once

#include "gemt/prompt.hpp"
#include "gemt/types.hpp"

#include <memory>
#include <string>
#include <vector>

namespace gemt {

struct OracleInfo {
    std::string name;
    bool deterministic = true;  // remote adapters must declare false
    long max_context_tokens = 0;  // language: C; generator: L
    long vocabulary_size = 0;     // language: V_c; generator: V
};

enum class InstructionKind { initialize, reflect, self_mate, same_domain_mate, cross_domain_mate };

std::string_view to_string(InstructionKind kind);

struct PromptCost {
    std::string prompt;
    double combined_cost = 0.0;
};

// Structured carrier behind every language-oracle call. The scripted oracle
// consumes the structure; remote adapters receive the rendered text.
struct InstructionBundle {
    InstructionKind kind = InstructionKind::initialize;
    std::string problem_description;
    std::vector<PromptCost> population_context;  // required except for initialize
    std::vector<std::string> task_targets;       // domain phrases involved
    int requested_count = 1;

    // Render-time extras.
    std::vector<std::string> parent_prompts;
    std::string reflection;
    std::string child_task_phrase;
};

// Throws EmptyInput when a non-initialize bundle has no population context.
void validate_bundle(const InstructionBundle& bundle);

struct LanguageRequest {
    InstructionBundle bundle;
    std::string instruction_text;
    int max_tokens = kDefaultTokenBudget;
    double temperature = 0.7;
    std::uint64_t seed = 0;
};

class LanguageOracle {
public:
    virtual ~LanguageOracle() = default;
    virtual OracleInfo info() const = 0;
    // Returns free text; mating calls are expected to yield a prompt or a
    // bare descriptor. Throws OracleFailure.
    virtual std::string generate(const LanguageRequest& request) = 0;
};

class GeneratorOracle {
public:
    virtual ~GeneratorOracle() = default;
    virtual OracleInfo info() const = 0;
    // Prompt text in, watertight mesh out. Provenance fields other than
    // generation are filled by the oracle. Throws GenerationFailure.
    virtual PhenotypeMesh generate(std::string_view prompt, std::uint64_t seed) = 0;
};

// Checks the token budget, runs the generator, and stamps provenance.
PhenotypeMesh generate_phenotype(GeneratorOracle& oracle, const Genotype& genotype,
                                 int generation, std::uint64_t seed);

class VisualOracle {
public:
    virtual ~VisualOracle() = default;
    virtual OracleInfo info() const = 0;
    // Probability-like score in [0,1] that the mesh matches the domain text.
    virtual double score(const PhenotypeMesh& mesh, std::string_view domain_text) = 0;
};

// Clamped convenience wrapper scoring against the task's domain phrase.
double visual_score(VisualOracle& oracle, const PhenotypeMesh& mesh, const Task& task);

struct OracleSet {
    std::shared_ptr<LanguageOracle> language;
    std::shared_ptr<GeneratorOracle> generator;
    std::shared_ptr<VisualOracle> visual;
};

} // namespace gemt
