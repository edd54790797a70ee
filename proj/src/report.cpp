#include "gemt/report.hpp"

#include "gemt/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>

namespace gemt {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::ofstream open_csv(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write report file: " + path.string());
    return out;
}

const Task& task_by_index(const RunConfig& config, int index) {
    for (const Task& t : config.tasks)
        if (t.index == index) return t;
    throw TaskMismatch("unknown task index " + std::to_string(index));
}

void write_fitness_csv(std::ofstream& out, const RunConfig& config,
                       const std::vector<RunLogRecord>& records) {
    out << "generation,task_index,task,mean_combined_cost,variance_combined_cost,count\n";
    std::map<std::pair<int, int>, std::vector<double>> costs;
    for (const RunLogRecord& r : records) costs[{r.generation, r.task_index}].push_back(r.combined_cost);

    int max_generation = 0;
    for (const RunLogRecord& r : records) max_generation = std::max(max_generation, r.generation);

    for (int gen = 0; gen <= max_generation; ++gen) {
        for (const Task& task : config.tasks) {
            const auto it = costs.find({gen, task.index});
            if (it == costs.end() || it->second.empty()) {
                out << gen << ',' << task.index << ',' << task.domain_phrase << ",,,0\n";
                continue;
            }
            const std::vector<double>& v = it->second;
            double mean = 0.0;
            for (double c : v) mean += c;
            mean /= static_cast<double>(v.size());
            double variance = 0.0;
            for (double c : v) variance += (c - mean) * (c - mean);
            variance /= static_cast<double>(v.size());
            out << gen << ',' << task.index << ',' << task.domain_phrase << ',' << fmt(mean) << ','
                << fmt(variance) << ',' << v.size() << "\n";
        }
    }
}

struct HvInputs {
    std::vector<Eigen::VectorXd> run_raw;
    std::vector<Eigen::VectorXd> baseline_raw;
};

void write_hypervolume_csv(std::ofstream& out, const RunConfig& config,
                           const std::vector<RunLogRecord>& records,
                           const std::map<int, NoveltyBaseline>& baselines,
                           const Eigen::Vector2d& reference) {
    out << "task_index,task,run_hypervolume,baseline_hypervolume,run_points,baseline_points\n";
    const PhysicalBackend backend =
        PhysicalBackend::named(config.oracle_selection.physical, config.raster_resolution);
    if (backend.objective_count() != 2) {
        out << "warning,hypervolume needs exactly 2 physical objectives; adapter '"
            << config.oracle_selection.physical << "' provides "
            << backend.objective_count() << ",,,,\n";
        return;
    }

    for (const Task& task : config.tasks) {
        const auto baseline_it = baselines.find(task.index);
        if (baseline_it == baselines.end() || baseline_it->second.physical_raw.empty()) {
            out << "warning,no baseline sample set for task '" << task.domain_phrase
                << "'; hypervolume comparison omitted,,,,\n";
            continue;
        }

        HvInputs inputs;
        for (const RunLogRecord& r : records) {
            if (r.task_index != task.index || r.phys_raw.size() != 2) continue;
            inputs.run_raw.push_back(
                Eigen::Map<const Eigen::VectorXd>(r.phys_raw.data(), 2));
        }
        inputs.baseline_raw = baseline_it->second.physical_raw;
        if (inputs.run_raw.empty()) {
            out << "warning,no evaluated designs for task '" << task.domain_phrase << "',,,,\n";
            continue;
        }

        // Sense-adjust so both objectives are minimized, then min-max
        // normalize jointly over run + baseline so the two sets share a scale.
        auto adjust = [&](Eigen::VectorXd v) {
            for (int m = 0; m < 2; ++m)
                if (config.sense_for(task, backend.objective_names()[m]) == Sense::maximize)
                    v[m] = -v[m];
            return v;
        };
        std::vector<Eigen::VectorXd> run_adj, base_adj;
        for (const auto& v : inputs.run_raw) run_adj.push_back(adjust(v));
        for (const auto& v : inputs.baseline_raw) base_adj.push_back(adjust(v));

        Eigen::Vector2d lo(1e300, 1e300), hi(-1e300, -1e300);
        for (const auto* set : {&run_adj, &base_adj}) {
            for (const auto& v : *set) {
                lo = lo.cwiseMin(Eigen::Vector2d(v[0], v[1]));
                hi = hi.cwiseMax(Eigen::Vector2d(v[0], v[1]));
            }
        }
        auto normalize_set = [&](const std::vector<Eigen::VectorXd>& set) {
            std::vector<Eigen::Vector2d> pts;
            for (const auto& v : set)
                pts.emplace_back(minmax_normalize(v[0], lo[0], hi[0]),
                                 minmax_normalize(v[1], lo[1], hi[1]));
            return pts;
        };

        const double run_hv = hypervolume_2d(normalize_set(run_adj), reference);
        const double base_hv = hypervolume_2d(normalize_set(base_adj), reference);
        out << task.index << ',' << task.domain_phrase << ',' << fmt(run_hv) << ','
            << fmt(base_hv) << ',' << run_adj.size() << ',' << base_adj.size() << "\n";
    }
}

void write_novelty_csv(std::ofstream& out, const RunConfig& config,
                       const std::vector<RunLogRecord>& records) {
    out << "task_index,task,evaluated,novel,novel_fraction\n";
    bool any = false;
    for (const RunLogRecord& r : records)
        if (r.novelty_score) any = true;
    if (!any) {
        out << "warning,no novelty scores in the log stream; run with baselines present,,,\n";
        return;
    }
    for (const Task& task : config.tasks) {
        std::size_t evaluated = 0, novel = 0;
        for (const RunLogRecord& r : records) {
            if (r.task_index != task.index || !r.novelty_score) continue;
            ++evaluated;
            if (*r.novelty_score > 0.0) ++novel;
        }
        const double fraction =
            evaluated ? static_cast<double>(novel) / static_cast<double>(evaluated) : 0.0;
        out << task.index << ',' << task.domain_phrase << ',' << evaluated << ',' << novel << ','
            << fmt(fraction) << "\n";
    }
}

void write_vocabulary_csv(std::ofstream& out, const RunConfig& config,
                          const std::vector<RunLogRecord>& records, OverlapMode mode) {
    out << "mode,overlap\n";
    if (config.tasks.size() < 2) {
        out << "warning,vocabulary overlap needs at least two tasks\n";
        return;
    }
    std::map<int, std::vector<std::string>> prompts;
    for (const RunLogRecord& r : records) prompts[r.task_index].push_back(r.prompt);
    const double overlap =
        vocabulary_overlap(prompts, default_stopwords(), default_suffix_rules(), mode);
    out << (mode == OverlapMode::jaccard ? "jaccard" : "smaller_set") << ',' << fmt(overlap)
        << "\n";
}

} // namespace

std::map<int, NoveltyBaseline> load_matching_baselines(const RunStore& store,
                                                       const RunConfig& config) {
    std::map<int, NoveltyBaseline> result;
    const auto dir = store.baselines_dir();
    if (!std::filesystem::exists(dir)) return result;

    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());  // deterministic pick on ties

    const PhysicalBackend backend =
        PhysicalBackend::named(config.oracle_selection.physical, config.raster_resolution);
    for (const auto& file : files) {
        NoveltyBaseline baseline;
        try {
            baseline = load_baseline(file);
        } catch (const Error&) {
            continue;  // foreign file in the directory
        }
        bool task_known = false;
        for (const Task& t : config.tasks)
            if (t.index == baseline.task_index && t.label == baseline.task_label)
                task_known = true;
        if (!task_known) continue;
        if (baseline.generator_adapter != config.oracle_selection.generator) continue;
        if (!baseline.physical_objectives.empty() &&
            baseline.physical_objectives != backend.objective_names())
            continue;
        result.try_emplace(baseline.task_index, std::move(baseline));
    }
    return result;
}

ReportPaths write_reports(const RunStore& store, const ReportOptions& options) {
    const auto checkpoint = store.load_checkpoint();
    if (!checkpoint) throw IncompleteRun("no checkpoint found; nothing to report");
    if (!checkpoint->finished) throw IncompleteRun("run has not finished; resume it first");

    const RunConfig config = store.load_snapshot();
    const std::vector<RunLogRecord> records = store.read_log();
    const std::map<int, NoveltyBaseline> baselines = load_matching_baselines(store, config);

    std::filesystem::create_directories(store.reports_dir());
    ReportPaths paths;
    paths.fitness_csv = store.reports_dir() / "fitness_by_generation.csv";
    paths.hypervolume_csv = store.reports_dir() / "hypervolume.csv";
    paths.novelty_csv = store.reports_dir() / "novelty.csv";
    paths.vocabulary_csv = store.reports_dir() / "vocabulary_overlap.csv";

    {
        auto out = open_csv(paths.fitness_csv);
        write_fitness_csv(out, config, records);
    }
    {
        auto out = open_csv(paths.hypervolume_csv);
        write_hypervolume_csv(out, config, records, baselines, options.hv_reference);
    }
    {
        auto out = open_csv(paths.novelty_csv);
        write_novelty_csv(out, config, records);
    }
    {
        auto out = open_csv(paths.vocabulary_csv);
        write_vocabulary_csv(out, config, records, options.overlap_mode);
    }
    return paths;
}

} // namespace gemt
