#pragma once

#include "gemt/evaluators.hpp"
#include "gemt/oracles.hpp"
#include "gemt/types.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace gemt {

// Monte Carlo baseline for the novelty score: the mean vision-language score
// of designs sampled from the bare task label. Physical raws per sample are
// kept so the same samples double as the no-evolution comparison set.
struct NoveltyBaseline {
    int task_index = 0;
    std::string task_label;
    double baseline_mean = 0.0;
    int sample_count = 0;
    std::vector<double> scores;                   // per-sample, retained for audit
    std::vector<Eigen::VectorXd> physical_raw;    // per-sample physical objective raws
    std::vector<std::string> physical_objectives; // names matching physical_raw entries
    std::string generator_adapter;
    std::string vlm_adapter;
    std::uint64_t seed = 0;
};

// Samples B phenotypes from the task label prompt and scores each against the
// label. Physical scoring is optional and used only for reporting.
NoveltyBaseline build_novelty_baseline(GeneratorOracle& generator, VisualOracle& vlm,
                                       const Task& task, int samples, std::uint64_t seed,
                                       const PhysicalBackend* physical = nullptr);

// score - baseline_mean; positive means novel.
double novelty_score(double vlm_score, const NoveltyBaseline& baseline);
double novelty_score(const PhenotypeMesh& mesh, const Task& task, VisualOracle& vlm,
                     const NoveltyBaseline& baseline);  // throws TaskMismatch

// Structured text persistence keyed by (task label, generator adapter, vlm
// adapter, sample count, seed).
std::string baseline_cache_key(const NoveltyBaseline& baseline);
std::string baseline_cache_key(const Task& task, const std::string& generator_adapter,
                               const std::string& vlm_adapter, int samples, std::uint64_t seed);
void save_baseline(const NoveltyBaseline& baseline, const std::filesystem::path& path);
NoveltyBaseline load_baseline(const std::filesystem::path& path);

// Area dominated between a minimization front and the reference point.
// Points outside the reference are discarded (with a note to *warnings when
// given); throws EmptyInput when nothing remains.
double hypervolume_2d(const std::vector<Eigen::Vector2d>& points, const Eigen::Vector2d& reference,
                      std::vector<std::string>* warnings = nullptr);

// --- vocabulary overlap -----------------------------------------------------

struct SuffixRule {
    std::string suffix;
    std::size_t min_stem;  // keep at least this many characters
};

std::vector<SuffixRule> default_suffix_rules();
std::set<std::string> default_stopwords();
std::vector<SuffixRule> load_suffix_rules(const std::filesystem::path& path);
std::set<std::string> load_stopwords(const std::filesystem::path& path);

// Lowercased letter-run tokens, stopwords dropped, suffix-stripped.
std::vector<std::string> content_tokens(std::string_view text,
                                        const std::set<std::string>& stopwords,
                                        const std::vector<SuffixRule>& rules);

enum class OverlapMode { jaccard, smaller_set };

// Pairwise |intersection| / |union| (or / |smaller set|) of per-task
// vocabularies; the mean over task pairs when more than two tasks are given.
double vocabulary_overlap(const std::map<int, std::vector<std::string>>& prompts_by_task,
                          const std::set<std::string>& stopwords,
                          const std::vector<SuffixRule>& rules,
                          OverlapMode mode = OverlapMode::jaccard);

} // namespace gemt
