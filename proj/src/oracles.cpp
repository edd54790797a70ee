#include "gemt/oracles.hpp"

#include "gemt/errors.hpp"
#include "gemt/mesh.hpp"

#include <algorithm>

namespace gemt {

std::string_view to_string(InstructionKind kind) {
    switch (kind) {
    case InstructionKind::initialize: return "initialize";
    case InstructionKind::reflect: return "reflect";
    case InstructionKind::self_mate: return "self_mate";
    case InstructionKind::same_domain_mate: return "same_domain_mate";
    case InstructionKind::cross_domain_mate: return "cross_domain_mate";
    }
    return "initialize";
}

void validate_bundle(const InstructionBundle& bundle) {
    if (bundle.kind != InstructionKind::initialize && bundle.population_context.empty())
        throw EmptyInput("population context is required for all instruction kinds except initialize");
}

PhenotypeMesh generate_phenotype(GeneratorOracle& oracle, const Genotype& genotype,
                                 int generation, std::uint64_t seed) {
    const long budget = oracle.info().max_context_tokens;
    if (budget > 0 && genotype.token_count > budget)
        throw TokenBudgetExceeded("genotype exceeds generator token budget");

    PhenotypeMesh mesh = oracle.generate(genotype.prompt, seed);
    validate_mesh(mesh);
    mesh.provenance.genotype_key = genotype_key(genotype);
    mesh.provenance.generation = generation;
    mesh.provenance.generator_seed = seed;
    return mesh;
}

double visual_score(VisualOracle& oracle, const PhenotypeMesh& mesh, const Task& task) {
    const double raw = oracle.score(mesh, task.domain_phrase);
    return std::clamp(raw, 0.0, 1.0);
}

} // namespace gemt
