#include "gemt/mock_oracles.hpp"

#include "gemt/errors.hpp"
#include "gemt/mesh.hpp"
#include "gemt/seeds.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

namespace gemt {

namespace {

const std::vector<std::string>& adjective_pool() {
    static const std::vector<std::string> pool = {
        "sleek",     "swift",  "compact", "low",         "slender",  "smooth",
        "angular",   "sturdy", "curved",  "tapered",     "polished", "bold",
        "light",     "broad",  "flat",    "streamlined",
    };
    return pool;
}

const std::vector<std::string>& noun_pool() {
    static const std::vector<std::string> pool = {
        "wedge", "bullet", "arrow", "wing",  "shell", "teardrop", "dart", "capsule",
        "blade", "dome",   "fin",   "hull",  "pod",   "spear",    "box",  "slab",
    };
    return pool;
}

// Domain-conditioned noun choices, standing in for the LLM's prior knowledge
// of what belongs to each domain.
const std::vector<std::string>& nouns_for_domain(const std::string& domain) {
    static const std::vector<std::string> ground = {
        "wedge", "slab", "box", "bullet", "teardrop", "capsule", "shell", "dart",
    };
    static const std::vector<std::string> air = {
        "wing", "arrow", "dart", "spear", "fin", "blade", "teardrop", "wedge",
    };
    const std::string key = lower(domain);
    if (key.find("car") != std::string::npos || key.find("truck") != std::string::npos ||
        key.find("van") != std::string::npos)
        return ground;
    if (key.find("plane") != std::string::npos || key.find("jet") != std::string::npos ||
        key.find("glider") != std::string::npos)
        return air;
    return noun_pool();
}

bool is_article(const std::string& word) { return word == "a" || word == "an" || word == "the"; }

std::vector<std::string> content_words(std::string_view descriptor) {
    std::vector<std::string> out;
    for (const std::string& w : split_words(lower(descriptor)))
        if (!is_article(w)) out.push_back(w);
    return out;
}

// Keeps the first max_words words; used to honor the generator token budget.
std::vector<std::string> capped(std::vector<std::string> words, int max_words) {
    if (max_words > 0 && static_cast<int>(words.size()) > max_words)
        words.resize(static_cast<std::size_t>(max_words));
    return words;
}

std::string join(const std::vector<std::string>& words) {
    std::string out;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (i) out += ' ';
        out += words[i];
    }
    return out;
}

std::map<std::string, std::string> load_two_column(const std::filesystem::path& path,
                                                   const char* what) {
    std::ifstream in(path);
    if (!in) throw ConfigError(std::string("cannot read ") + what + ": " + path.string());
    std::map<std::string, std::string> table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string flat = trim(line);
        if (flat.empty() || flat[0] == '#') continue;
        const auto words = split_words(flat);
        if (words.size() != 2)
            throw ParseError(std::string(what) + " line " + std::to_string(line_no) +
                             ": expected two columns");
        table[lower(words[0])] = lower(words[1]);
    }
    return table;
}

} // namespace

// ---------------------------------------------------------------------------
// Scripted language oracle
// ---------------------------------------------------------------------------

SynonymTable default_synonym_table() {
    return {
        {"fast", "swift"},     {"quick", "swift"},      {"rapid", "swift"},
        {"sleek", "streamlined"}, {"smooth", "polished"}, {"round", "curved"},
        {"boxy", "angular"},   {"big", "broad"},        {"small", "compact"},
        {"heavy", "sturdy"},   {"tall", "slender"},     {"sharp", "tapered"},
        {"shiny", "polished"}, {"wide", "broad"},       {"bright", "bold"},
        {"low", "flat"},       {"wedge", "arrow"},      {"box", "slab"},
        {"bullet", "dart"},    {"wing", "fin"},         {"sphere", "teardrop"},
        {"cube", "prism"},     {"shell", "hull"},       {"spear", "blade"},
        {"capsule", "teardrop"},
    };
}

SynonymTable load_synonym_table(const std::filesystem::path& path) {
    return load_two_column(path, "synonym table");
}

ScriptedLanguageOracle::ScriptedLanguageOracle(ScriptedOracleOptions options)
    : options_(std::move(options)) {}

OracleInfo ScriptedLanguageOracle::info() const {
    OracleInfo info;
    info.name = "scripted";
    info.deterministic = true;
    info.max_context_tokens = 16000;  // nominal context length of the stand-in
    info.vocabulary_size = 50000;
    return info;
}

std::string ScriptedLanguageOracle::generate(const LanguageRequest& request) {
    validate_bundle(request.bundle);
    switch (request.bundle.kind) {
    case InstructionKind::initialize: return initialize(request);
    case InstructionKind::reflect: return reflect(request);
    case InstructionKind::self_mate:
    case InstructionKind::same_domain_mate:
    case InstructionKind::cross_domain_mate: return mate(request);
    }
    throw OracleFailure("unhandled instruction kind");
}

std::string ScriptedLanguageOracle::initialize(const LanguageRequest& request) const {
    Rng rng(request.seed);
    std::vector<std::string> lines;
    for (int i = 0; i < request.bundle.requested_count; ++i) {
        const auto& adjectives = adjective_pool();
        const auto& nouns = nouns_for_domain(request.bundle.child_task_phrase);
        std::vector<std::string> words = {"a"};
        words.push_back(adjectives[rng.uniform_index(adjectives.size())]);
        if (rng.chance(0.3)) {
            const std::string& second = adjectives[rng.uniform_index(adjectives.size())];
            if (second != words.back()) words.push_back(second);
        }
        words.push_back(nouns[rng.uniform_index(nouns.size())]);
        lines.push_back(join(words));
    }
    return join(lines);  // callers request one descriptor at a time
}

std::string ScriptedLanguageOracle::reflect(const LanguageRequest& request) const {
    const auto& context = request.bundle.population_context;
    std::size_t best = 0, worst = 0;
    for (std::size_t i = 1; i < context.size(); ++i) {
        if (context[i].combined_cost < context[best].combined_cost) best = i;
        if (context[i].combined_cost > context[worst].combined_cost) worst = i;
    }
    char best_cost[32], worst_cost[32];
    std::snprintf(best_cost, sizeof best_cost, "%.6f", context[best].combined_cost);
    std::snprintf(worst_cost, sizeof worst_cost, "%.6f", context[worst].combined_cost);
    return "Reflection: best prompt is \"" + genotype_key(context[best].prompt) + "\" at cost " +
           best_cost + "; worst prompt is \"" + genotype_key(context[worst].prompt) +
           "\" at cost " + worst_cost +
           ". Keep the strong descriptor words and vary the weak ones.";
}

std::string ScriptedLanguageOracle::mate(const LanguageRequest& request) const {
    const InstructionBundle& bundle = request.bundle;
    if (bundle.parent_prompts.empty()) throw OracleFailure("mating requires parent prompts");
    if (bundle.child_task_phrase.empty()) throw OracleFailure("mating requires a child task");

    std::vector<std::vector<std::string>> parents;
    for (const std::string& prompt : bundle.parent_prompts) {
        const auto parts = parse_prompt(prompt);
        const std::string descriptor = parts ? parts->descriptor : std::string(prompt);
        parents.push_back(content_words(descriptor));
    }

    Rng rng(request.seed);

    // Deterministic synonym substitution on one seeded word; falls back to
    // inserting an adjective when no word is covered by the table.
    auto mutate = [&](std::vector<std::string> words) {
        std::vector<std::size_t> candidates;
        for (std::size_t i = 0; i < words.size(); ++i)
            if (options_.synonyms.count(words[i])) candidates.push_back(i);
        if (!candidates.empty()) {
            const std::size_t pick = candidates[rng.uniform_index(candidates.size())];
            words[pick] = options_.synonyms.at(words[pick]);
        } else if (!words.empty()) {
            const auto& adjectives = adjective_pool();
            words.insert(words.end() - 1, adjectives[rng.uniform_index(adjectives.size())]);
        }
        return words;
    };

    std::vector<std::string> child_words;
    switch (bundle.kind) {
    case InstructionKind::self_mate:
        child_words = mutate(parents[0]);
        break;
    case InstructionKind::same_domain_mate: {
        // Alternate words across parents, leftovers in order.
        std::size_t longest = 0;
        for (const auto& p : parents) longest = std::max(longest, p.size());
        for (std::size_t w = 0; w < longest; ++w)
            for (const auto& p : parents)
                if (w < p.size()) child_words.push_back(p[w]);
        if (rng.chance(options_.mating_mutation_probability)) child_words = mutate(child_words);
        break;
    }
    case InstructionKind::cross_domain_mate: {
        // Union in parent order, then word order; first occurrence wins.
        for (const auto& p : parents)
            for (const std::string& w : p)
                if (std::find(child_words.begin(), child_words.end(), w) == child_words.end())
                    child_words.push_back(w);
        if (rng.chance(options_.mating_mutation_probability)) child_words = mutate(child_words);
        break;
    }
    default: throw OracleFailure("not a mating kind");
    }

    if (child_words.empty()) child_words = {"simple", "form"};

    // Honor the downstream token budget: template overhead is the article,
    // the domain words, the four connector words, and the trailing period
    // glued to the last descriptor word.
    const int domain_words = count_tokens(bundle.child_task_phrase);
    const int max_desc_words = request.max_tokens - 5 - domain_words - 1;  // minus leading "a"
    child_words = capped(std::move(child_words), max_desc_words);

    Task child_task = make_task(0, bundle.child_task_phrase);
    return render_prompt_text(child_task, "a " + join(child_words));
}

// ---------------------------------------------------------------------------
// Procedural generator
// ---------------------------------------------------------------------------

std::string_view to_string(PrimitiveRecipe::Base base) {
    switch (base) {
    case PrimitiveRecipe::Base::box: return "box";
    case PrimitiveRecipe::Base::ellipsoid: return "ellipsoid";
    case PrimitiveRecipe::Base::wedge: return "wedge";
    case PrimitiveRecipe::Base::fuselage_with_wings: return "fuselage_with_wings";
    }
    return "box";
}

KeywordTable default_keyword_table() {
    return {
        // family keywords
        {"wing", "fuselage_with_wings"}, {"wings", "fuselage_with_wings"},
        {"jet", "fuselage_with_wings"},  {"plane", "fuselage_with_wings"},
        {"airplane", "fuselage_with_wings"}, {"fuselage", "fuselage_with_wings"},
        {"glider", "fuselage_with_wings"},
        {"wedge", "wedge"}, {"arrow", "wedge"}, {"dart", "wedge"},
        {"spear", "wedge"}, {"blade", "wedge"}, {"prism", "wedge"},
        {"sphere", "ellipsoid"}, {"ball", "ellipsoid"}, {"bubble", "ellipsoid"},
        {"egg", "ellipsoid"}, {"teardrop", "ellipsoid"}, {"capsule", "ellipsoid"},
        {"pod", "ellipsoid"}, {"dome", "ellipsoid"}, {"shell", "ellipsoid"},
        {"bullet", "ellipsoid"}, {"hull", "ellipsoid"}, {"banana", "ellipsoid"},
        {"box", "box"}, {"crate", "box"}, {"slab", "box"}, {"brick", "box"},
        {"car", "box"}, {"hatchback", "box"}, {"sedan", "box"}, {"van", "box"},
        {"truck", "box"}, {"wagon", "box"},
        // feature keywords
        {"spoiler", "spoiler"}, {"canard", "canard"}, {"tail", "tail"}, {"fin", "tail"},
    };
}

KeywordTable load_keyword_table(const std::filesystem::path& path) {
    return load_two_column(path, "keyword table");
}

namespace {

bool is_family(const std::string& feature) {
    return feature == "box" || feature == "ellipsoid" || feature == "wedge" ||
           feature == "fuselage_with_wings";
}

PrimitiveRecipe::Base family_from_name(const std::string& name) {
    if (name == "ellipsoid") return PrimitiveRecipe::Base::ellipsoid;
    if (name == "wedge") return PrimitiveRecipe::Base::wedge;
    if (name == "fuselage_with_wings") return PrimitiveRecipe::Base::fuselage_with_wings;
    return PrimitiveRecipe::Base::box;
}

Eigen::Vector3d base_scale(PrimitiveRecipe::Base base) {
    switch (base) {
    case PrimitiveRecipe::Base::box: return {2.0, 1.0, 0.8};
    case PrimitiveRecipe::Base::ellipsoid: return {2.4, 1.0, 0.9};
    case PrimitiveRecipe::Base::wedge: return {2.2, 1.0, 0.6};
    case PrimitiveRecipe::Base::fuselage_with_wings: return {2.6, 2.2, 0.7};
    }
    return {2.0, 1.0, 0.8};
}

// Centered pseudo-uniform draws in [-1, 1] from three slices of a hash.
Eigen::Vector3d centered_triple(std::uint64_t h) {
    auto slice = [&](int k) {
        const std::uint64_t bits = (h >> (k * 21)) & ((1ULL << 21) - 1);
        return 2.0 * (static_cast<double>(bits) / static_cast<double>((1ULL << 21) - 1)) - 1.0;
    };
    return {slice(0), slice(1), slice(2)};
}

} // namespace

namespace {

// Lowercase letter runs; punctuation and digits act as separators.
std::vector<std::string> letter_tokens(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (char c : text) {
        if (std::isalpha(static_cast<unsigned char>(c))) {
            current += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

} // namespace

PrimitiveRecipe recipe_for_prompt(const KeywordTable& table, std::string_view prompt,
                                  std::uint64_t seed, std::vector<std::string>* tags) {
    // Operate on the genotype key so case/whitespace variants of one prompt
    // produce identical recipes.
    const std::string key = genotype_key(prompt);

    // Keyword scan order: descriptor words first, then the rest of the prompt.
    std::vector<std::string> scan;
    const std::size_t split = key.find(" in the shape of ");
    if (key.rfind("a ", 0) == 0 && split != std::string::npos) {
        const std::string descriptor = key.substr(split + 17);
        const std::string domain = key.substr(2, split - 2);
        scan = letter_tokens(descriptor);
        for (const std::string& w : letter_tokens(domain)) scan.push_back(w);
    } else {
        scan = letter_tokens(key);
    }

    PrimitiveRecipe recipe;
    recipe.perturbation_seed = seed;
    bool family_set = false;
    std::vector<std::string> matched;
    std::vector<std::string> plain;  // non-keyword words feed the perturbation
    for (const std::string& w : scan) {
        if (is_article(w)) continue;
        auto it = table.find(w);
        if (it == table.end()) {
            plain.push_back(w);
            continue;
        }
        matched.push_back(w);
        const std::string& feature = it->second;
        if (is_family(feature)) {
            if (!family_set) {
                recipe.base = family_from_name(feature);
                family_set = true;
            }
        } else if (feature == "spoiler") {
            recipe.spoiler = true;
        } else if (feature == "canard") {
            recipe.canard = true;
        } else if (feature == "tail") {
            recipe.tail = true;
        }
    }

    Eigen::Vector3d mult(1.0, 1.0, 1.0);
    for (const std::string& w : plain) {
        const Eigen::Vector3d u = centered_triple(hash64(w));
        mult = mult.cwiseProduct(Eigen::Vector3d::Ones() + 0.05 * u);
    }
    Rng rng(seed);
    for (int axis = 0; axis < 3; ++axis) mult[axis] *= 1.0 + 0.10 * (2.0 * rng.uniform() - 1.0);
    mult = mult.cwiseMax(0.8).cwiseMin(1.2);
    recipe.scale = base_scale(recipe.base).cwiseProduct(mult);

    if (tags) {
        tags->clear();
        tags->push_back(std::string(to_string(recipe.base)));
        for (const std::string& w : matched)
            if (std::find(tags->begin(), tags->end(), w) == tags->end()) tags->push_back(w);
        if (recipe.spoiler) tags->push_back("spoiler");
        if (recipe.canard) tags->push_back("canard");
        if (recipe.tail) tags->push_back("tail");
    }
    return recipe;
}

PhenotypeMesh build_recipe_mesh(const PrimitiveRecipe& recipe) {
    const Eigen::Vector3d s = recipe.scale;
    std::vector<PhenotypeMesh> parts;

    switch (recipe.base) {
    case PrimitiveRecipe::Base::box:
        parts.push_back(make_box(s));
        break;
    case PrimitiveRecipe::Base::ellipsoid:
        parts.push_back(make_ellipsoid(0.5 * s));
        break;
    case PrimitiveRecipe::Base::wedge:
        parts.push_back(make_wedge(s));
        break;
    case PrimitiveRecipe::Base::fuselage_with_wings: {
        parts.push_back(make_ellipsoid({0.5 * s.x(), 0.11 * s.x(), 0.10 * s.x()}));
        // Main wing pair as one thin span, slightly aft of center.
        parts.push_back(make_box({0.28 * s.x(), s.y(), 0.035 * s.x()},
                                 {0.05 * s.x(), 0.0, 0.0}));
        break;
    }
    }

    const double sx = s.x();
    if (recipe.spoiler)
        parts.push_back(make_wedge({0.16 * sx, 0.8 * s.y(), 0.10 * s.z()},
                                   {0.45 * sx, 0.0, 0.55 * s.z()}));
    if (recipe.canard)
        parts.push_back(make_box({0.10 * sx, 0.45 * s.y(), 0.02 * sx},
                                 {-0.38 * sx, 0.0, 0.05 * s.z()}));
    if (recipe.tail)
        parts.push_back(make_box({0.10 * sx, 0.02 * sx, 0.32 * s.z()},
                                 {0.44 * sx, 0.0, 0.30 * s.z()}));

    return merge_meshes(parts);
}

ProceduralGenerator::ProceduralGenerator(KeywordTable table) : table_(std::move(table)) {}

OracleInfo ProceduralGenerator::info() const {
    OracleInfo info;
    info.name = "procedural";
    info.deterministic = true;
    info.max_context_tokens = kDefaultTokenBudget;  // L
    info.vocabulary_size = 50000;                   // V, nominal
    return info;
}

PhenotypeMesh ProceduralGenerator::generate(std::string_view prompt, std::uint64_t seed) {
    std::vector<std::string> tags;
    const PrimitiveRecipe recipe = recipe_for_prompt(table_, prompt, seed, &tags);
    PhenotypeMesh mesh = build_recipe_mesh(recipe);
    if (mesh.triangles.empty()) throw DegenerateMesh("recipe produced no triangles");
    mesh.provenance.recipe = std::string(to_string(recipe.base));
    mesh.provenance.tags = std::move(tags);
    mesh.provenance.generator_seed = seed;
    mesh.provenance.genotype_key = genotype_key(prompt);
    return mesh;
}

// ---------------------------------------------------------------------------
// Tag-overlap visual oracle
// ---------------------------------------------------------------------------

DomainProfileTable default_domain_profiles() {
    DomainProfileTable table;
    {
        DomainProfile car;
        car.family_affinity = {{"box", 1.0},
                               {"wedge", 0.95},
                               {"ellipsoid", 0.55},
                               {"fuselage_with_wings", 0.1}};
        car.words = {"car",    "spoiler", "low",   "wide",     "compact", "sleek",
                     "sedan",  "hatchback", "wagon", "streamlined", "flat",  "angular"};
        table["car"] = std::move(car);
    }
    {
        DomainProfile airplane;
        airplane.family_affinity = {{"fuselage_with_wings", 1.0},
                                    {"wedge", 0.75},
                                    {"ellipsoid", 0.55},
                                    {"box", 0.1}};
        airplane.words = {"airplane", "plane", "wing",     "wings", "canard", "tail",
                          "fin",      "jet",   "elongated", "slender", "swept", "dart", "wide",
                          "arrow",    "glider"};
        table["airplane"] = airplane;
        table["plane"] = std::move(airplane);
    }
    return table;
}

std::vector<std::string> geometry_tags(const PhenotypeMesh& mesh) {
    const MeshBounds b = bounding_box(mesh);
    const Eigen::Vector3d e = b.extent();
    std::vector<std::string> tags;
    if (e.x() >= 1.8 * std::max(e.y(), e.z())) tags.push_back("elongated");
    if (std::max(e.y(), e.z()) <= 0.3 * e.x()) tags.push_back("slender");
    if (e.z() <= 0.35 * e.x()) tags.push_back("low");
    if (e.z() >= 0.75 * e.x()) tags.push_back("tall");
    if (e.y() >= 0.9 * e.x()) tags.push_back("wide");
    return tags;
}

TagOverlapVisual::TagOverlapVisual(DomainProfileTable profiles) : profiles_(std::move(profiles)) {}

OracleInfo TagOverlapVisual::info() const {
    OracleInfo info;
    info.name = "tag_overlap";
    info.deterministic = true;
    return info;
}

double TagOverlapVisual::score(const PhenotypeMesh& mesh, std::string_view domain_text) {
    // Merge the profiles of every recognized word in the domain text; unknown
    // domains fall back to a flat profile so scoring never fails.
    DomainProfile merged;
    int hits = 0;
    std::vector<std::string> domain_words;
    for (const std::string& w : split_words(lower(domain_text))) {
        if (is_article(w)) continue;
        domain_words.push_back(w);
        auto it = profiles_.find(w);
        if (it == profiles_.end()) continue;
        ++hits;
        for (const auto& [family, affinity] : it->second.family_affinity) {
            auto [slot, fresh] = merged.family_affinity.try_emplace(family, 0.0);
            (void)fresh;
            slot->second += affinity;
        }
        merged.words.insert(it->second.words.begin(), it->second.words.end());
    }
    for (auto& [family, affinity] : merged.family_affinity) affinity /= std::max(1, hits);
    // The domain's own words always count as matching vocabulary.
    merged.words.insert(domain_words.begin(), domain_words.end());

    double affinity = 0.35;  // unknown family / unknown domain default
    if (!mesh.provenance.recipe.empty() && hits > 0) {
        auto it = merged.family_affinity.find(mesh.provenance.recipe);
        affinity = it == merged.family_affinity.end() ? 0.3 : it->second;
    }

    std::vector<std::string> tags = mesh.provenance.tags;
    for (const std::string& g : geometry_tags(mesh)) tags.push_back(g);
    std::size_t matches = 0;
    std::size_t considered = 0;
    for (const std::string& tag : tags) {
        if (tag == mesh.provenance.recipe) continue;
        ++considered;
        if (merged.words.count(tag)) ++matches;
    }
    const double overlap =
        static_cast<double>(matches) / static_cast<double>(std::max<std::size_t>(3, considered));

    return std::clamp(0.7 * affinity + 0.3 * overlap, 0.0, 1.0);
}


} // namespace gemt
