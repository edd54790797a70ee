#pragma once

#include "gemt/oracles.hpp"

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace gemt {

// ---------------------------------------------------------------------------
// Scripted language oracle: a deterministic stand-in for the remote LLM.
// ---------------------------------------------------------------------------

using SynonymTable = std::map<std::string, std::string>;

SynonymTable default_synonym_table();
// Two-column "word synonym" lines; '#' comments.
SynonymTable load_synonym_table(const std::filesystem::path& path);

struct ScriptedOracleOptions {
    SynonymTable synonyms = default_synonym_table();
    // Chance that a freshly combined descriptor is additionally mutated by
    // the synonym rule (same- and cross-domain mating).
    double mating_mutation_probability = 0.5;
};

class ScriptedLanguageOracle final : public LanguageOracle {
public:
    ScriptedLanguageOracle() : ScriptedLanguageOracle(ScriptedOracleOptions{}) {}
    explicit ScriptedLanguageOracle(ScriptedOracleOptions options);

    OracleInfo info() const override;
    std::string generate(const LanguageRequest& request) override;

private:
    std::string initialize(const LanguageRequest& request) const;
    std::string reflect(const LanguageRequest& request) const;
    std::string mate(const LanguageRequest& request) const;

    ScriptedOracleOptions options_;
};

// ---------------------------------------------------------------------------
// Procedural phenotype generator: keyword table -> primitive recipe -> mesh.
// ---------------------------------------------------------------------------

struct PrimitiveRecipe {
    enum class Base { box, ellipsoid, wedge, fuselage_with_wings };
    Base base = Base::box;
    Eigen::Vector3d scale{2.0, 1.0, 0.8};  // full extents before features
    bool spoiler = false;
    bool canard = false;
    bool tail = false;
    std::uint64_t perturbation_seed = 0;
};

std::string_view to_string(PrimitiveRecipe::Base base);

// keyword -> recipe feature; features are the four base family names plus
// "spoiler", "canard", "tail".
using KeywordTable = std::map<std::string, std::string>;

KeywordTable default_keyword_table();
// Two-column "keyword feature" lines; '#' comments.
KeywordTable load_keyword_table(const std::filesystem::path& path);

// Pure function of (prompt key, seed). Descriptor keywords take precedence
// over the rest of the prompt; non-keyword words hash into bounded (+-20%)
// scale perturbations.
PrimitiveRecipe recipe_for_prompt(const KeywordTable& table, std::string_view prompt,
                                  std::uint64_t seed, std::vector<std::string>* tags = nullptr);

PhenotypeMesh build_recipe_mesh(const PrimitiveRecipe& recipe);

class ProceduralGenerator final : public GeneratorOracle {
public:
    ProceduralGenerator() : ProceduralGenerator(default_keyword_table()) {}
    explicit ProceduralGenerator(KeywordTable table);

    OracleInfo info() const override;
    PhenotypeMesh generate(std::string_view prompt, std::uint64_t seed) override;

private:
    KeywordTable table_;
};

// ---------------------------------------------------------------------------
// Tag-overlap visual oracle: mock vision-language scorer.
// ---------------------------------------------------------------------------

struct DomainProfile {
    std::map<std::string, double> family_affinity;  // recipe family -> [0,1]
    std::set<std::string> words;                    // domain-typical tag words
};

using DomainProfileTable = std::map<std::string, DomainProfile>;

DomainProfileTable default_domain_profiles();

class TagOverlapVisual final : public VisualOracle {
public:
    TagOverlapVisual() : TagOverlapVisual(default_domain_profiles()) {}
    explicit TagOverlapVisual(DomainProfileTable profiles);

    OracleInfo info() const override;
    double score(const PhenotypeMesh& mesh, std::string_view domain_text) override;

private:
    DomainProfileTable profiles_;
};

// Coarse shape descriptors derived from the bounding box; part of the tag
// vocabulary the visual mock matches against.
std::vector<std::string> geometry_tags(const PhenotypeMesh& mesh);

} // namespace gemt
