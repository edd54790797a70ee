#include "gemt/metrics.hpp"

#include "gemt/errors.hpp"
#include "gemt/prompt.hpp"
#include "gemt/seeds.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <numeric>

namespace gemt {

using nlohmann::json;

NoveltyBaseline build_novelty_baseline(GeneratorOracle& generator, VisualOracle& vlm,
                                       const Task& task, int samples, std::uint64_t seed,
                                       const PhysicalBackend* physical) {
    if (samples < 1) throw EmptyInput("baseline sample count must be >= 1");

    NoveltyBaseline baseline;
    baseline.task_index = task.index;
    baseline.task_label = task.label;
    baseline.sample_count = samples;
    baseline.generator_adapter = generator.info().name;
    baseline.vlm_adapter = vlm.info().name;
    baseline.seed = seed;
    if (physical) baseline.physical_objectives = physical->objective_names();

    for (int i = 0; i < samples; ++i) {
        const std::uint64_t sample_seed =
            derive_seed(seed, "baseline", static_cast<std::uint64_t>(task.index),
                        static_cast<std::uint64_t>(i));
        // Conventional designs: sampled from the bare task label.
        PhenotypeMesh mesh = generator.generate(task.label, sample_seed);
        const double score = std::clamp(vlm.score(mesh, task.label), 0.0, 1.0);
        baseline.scores.push_back(score);
        if (physical) baseline.physical_raw.push_back(physical->evaluate(mesh));
    }
    baseline.baseline_mean =
        std::accumulate(baseline.scores.begin(), baseline.scores.end(), 0.0) /
        static_cast<double>(baseline.scores.size());
    return baseline;
}

double novelty_score(double vlm_score, const NoveltyBaseline& baseline) {
    return vlm_score - baseline.baseline_mean;
}

double novelty_score(const PhenotypeMesh& mesh, const Task& task, VisualOracle& vlm,
                     const NoveltyBaseline& baseline) {
    if (baseline.task_index != task.index)
        throw TaskMismatch("baseline belongs to task " + std::to_string(baseline.task_index));
    return novelty_score(std::clamp(vlm.score(mesh, task.label), 0.0, 1.0), baseline);
}

std::string baseline_cache_key(const Task& task, const std::string& generator_adapter,
                               const std::string& vlm_adapter, int samples, std::uint64_t seed) {
    std::string slug = lower(task.label);
    for (char& c : slug)
        if (c == ' ') c = '_';
    return slug + "__" + generator_adapter + "__" + vlm_adapter + "__B" + std::to_string(samples) +
           "__seed" + std::to_string(seed);
}

std::string baseline_cache_key(const NoveltyBaseline& baseline) {
    Task task;
    task.index = baseline.task_index;
    task.label = baseline.task_label;
    return baseline_cache_key(task, baseline.generator_adapter, baseline.vlm_adapter,
                              baseline.sample_count, baseline.seed);
}

void save_baseline(const NoveltyBaseline& baseline, const std::filesystem::path& path) {
    json j;
    j["task_index"] = baseline.task_index;
    j["task_label"] = baseline.task_label;
    j["baseline_mean"] = baseline.baseline_mean;
    j["sample_count"] = baseline.sample_count;
    j["scores"] = baseline.scores;
    j["physical_objectives"] = baseline.physical_objectives;
    json raws = json::array();
    for (const Eigen::VectorXd& v : baseline.physical_raw)
        raws.push_back(std::vector<double>(v.data(), v.data() + v.size()));
    j["physical_raw"] = std::move(raws);
    j["generator_adapter"] = baseline.generator_adapter;
    j["vlm_adapter"] = baseline.vlm_adapter;
    j["seed"] = baseline.seed;

    std::ofstream out(path);
    if (!out) throw Error("cannot write baseline file: " + path.string());
    out << j.dump(2) << "\n";
}

NoveltyBaseline load_baseline(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot read baseline file: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError("bad baseline file " + path.string() + ": " + e.what());
    }
    NoveltyBaseline baseline;
    baseline.task_index = j.at("task_index").get<int>();
    baseline.task_label = j.at("task_label").get<std::string>();
    baseline.baseline_mean = j.at("baseline_mean").get<double>();
    baseline.sample_count = j.at("sample_count").get<int>();
    baseline.scores = j.at("scores").get<std::vector<double>>();
    baseline.physical_objectives =
        j.value("physical_objectives", std::vector<std::string>{});
    for (const auto& row : j.value("physical_raw", json::array())) {
        const auto values = row.get<std::vector<double>>();
        baseline.physical_raw.push_back(
            Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size())));
    }
    baseline.generator_adapter = j.at("generator_adapter").get<std::string>();
    baseline.vlm_adapter = j.at("vlm_adapter").get<std::string>();
    baseline.seed = j.at("seed").get<std::uint64_t>();
    return baseline;
}

double hypervolume_2d(const std::vector<Eigen::Vector2d>& points, const Eigen::Vector2d& reference,
                      std::vector<std::string>* warnings) {
    std::vector<Eigen::Vector2d> valid;
    for (const Eigen::Vector2d& p : points) {
        if (p.x() <= reference.x() && p.y() <= reference.y()) {
            valid.push_back(p);
        } else if (warnings) {
            warnings->push_back("discarding point outside reference: (" + std::to_string(p.x()) +
                                ", " + std::to_string(p.y()) + ")");
        }
    }
    if (valid.empty()) throw EmptyInput("no points dominate the reference");

    // Non-dominated front, sorted by x ascending (y strictly descending).
    std::sort(valid.begin(), valid.end(), [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
        if (a.x() != b.x()) return a.x() < b.x();
        return a.y() < b.y();
    });
    std::vector<Eigen::Vector2d> front;
    for (const Eigen::Vector2d& p : valid) {
        if (!front.empty() && p.y() >= front.back().y()) continue;  // dominated
        front.push_back(p);
    }

    double area = 0.0;
    for (std::size_t i = 0; i < front.size(); ++i) {
        const double next_x = i + 1 < front.size() ? front[i + 1].x() : reference.x();
        area += (next_x - front[i].x()) * (reference.y() - front[i].y());
    }
    return area;
}

std::vector<SuffixRule> default_suffix_rules() {
    // Order matters: longer suffixes strip first.
    return {
        {"iest", 3}, {"est", 3}, {"ies", 3}, {"ing", 3},
        {"ed", 3},   {"er", 3},  {"es", 3},  {"s", 3},
    };
}

std::set<std::string> default_stopwords() {
    return {"a",    "an",   "the",  "is",   "are",  "was",  "of",   "in",   "on",
            "at",   "to",   "for",  "with", "and",  "or",   "its",  "it",   "this",
            "that", "by",   "as",   "be",   "from", "into", "through"};
}

std::vector<SuffixRule> load_suffix_rules(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read suffix rules: " + path.string());
    std::vector<SuffixRule> rules;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string flat = trim(line);
        if (flat.empty() || flat[0] == '#') continue;
        const auto words = split_words(flat);
        if (words.size() != 2)
            throw ParseError("suffix rules line " + std::to_string(line_no) +
                             ": expected 'suffix min_stem'");
        rules.push_back({lower(words[0]), static_cast<std::size_t>(std::stoul(words[1]))});
    }
    return rules;
}

std::set<std::string> load_stopwords(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read stopword list: " + path.string());
    std::set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        const std::string flat = trim(line);
        if (flat.empty() || flat[0] == '#') continue;
        for (const std::string& w : split_words(flat)) words.insert(lower(w));
    }
    return words;
}

namespace {

std::string strip_suffixes(std::string word, const std::vector<SuffixRule>& rules) {
    for (const SuffixRule& rule : rules) {
        if (word.size() > rule.suffix.size() &&
            word.size() - rule.suffix.size() >= rule.min_stem &&
            word.compare(word.size() - rule.suffix.size(), rule.suffix.size(), rule.suffix) == 0) {
            if (rule.suffix == "s" && word.size() >= 2 && word[word.size() - 2] == 's')
                continue;  // "glass", "chassis": bare -s never strips off -ss
            word.erase(word.size() - rule.suffix.size());
            break;  // one reduction step keeps the rule table predictable
        }
    }
    return word;
}

} // namespace

std::vector<std::string> content_tokens(std::string_view text,
                                        const std::set<std::string>& stopwords,
                                        const std::vector<SuffixRule>& rules) {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&]() {
        if (current.empty()) return;
        if (!stopwords.count(current)) tokens.push_back(strip_suffixes(current, rules));
        current.clear();
    };
    for (char c : text) {
        if (std::isalpha(static_cast<unsigned char>(c)))
            current += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        else
            flush();
    }
    flush();
    return tokens;
}

double vocabulary_overlap(const std::map<int, std::vector<std::string>>& prompts_by_task,
                          const std::set<std::string>& stopwords,
                          const std::vector<SuffixRule>& rules, OverlapMode mode) {
    if (prompts_by_task.size() < 2)
        throw InsufficientTasks("vocabulary overlap needs at least two tasks");

    std::vector<std::set<std::string>> vocab;
    for (const auto& [task, prompts] : prompts_by_task) {
        (void)task;
        if (prompts.empty()) throw InsufficientTasks("every task needs at least one prompt");
        std::set<std::string> words;
        for (const std::string& prompt : prompts)
            for (const std::string& token : content_tokens(prompt, stopwords, rules))
                words.insert(token);
        vocab.push_back(std::move(words));
    }

    double total = 0.0;
    int pairs = 0;
    for (std::size_t i = 0; i < vocab.size(); ++i) {
        for (std::size_t j = i + 1; j < vocab.size(); ++j) {
            std::vector<std::string> inter;
            std::set_intersection(vocab[i].begin(), vocab[i].end(), vocab[j].begin(),
                                  vocab[j].end(), std::back_inserter(inter));
            double denom = 0.0;
            if (mode == OverlapMode::jaccard) {
                std::vector<std::string> uni;
                std::set_union(vocab[i].begin(), vocab[i].end(), vocab[j].begin(), vocab[j].end(),
                               std::back_inserter(uni));
                denom = static_cast<double>(uni.size());
            } else {
                denom = static_cast<double>(std::min(vocab[i].size(), vocab[j].size()));
            }
            total += denom > 0.0 ? static_cast<double>(inter.size()) / denom : 0.0;
            ++pairs;
        }
    }
    return total / pairs;
}

} // namespace gemt
