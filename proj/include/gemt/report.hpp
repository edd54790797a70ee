#pragma once

#include "gemt/metrics.hpp"
#include "gemt/runstore.hpp"

#include <filesystem>

namespace gemt {

struct ReportOptions {
    OverlapMode overlap_mode = OverlapMode::jaccard;
    Eigen::Vector2d hv_reference{1.0, 1.0};
};

struct ReportPaths {
    std::filesystem::path fitness_csv;
    std::filesystem::path hypervolume_csv;
    std::filesystem::path novelty_csv;
    std::filesystem::path vocabulary_csv;
};

// Derives every report purely from the log stream (plus persisted baselines
// for the hypervolume comparison). Throws IncompleteRun on unfinished runs.
ReportPaths write_reports(const RunStore& store, const ReportOptions& options = {});

// Baselines usable for the run: matching generator adapter and physical
// objective set, keyed by task index; deterministic pick on ties.
std::map<int, NoveltyBaseline> load_matching_baselines(const RunStore& store,
                                                       const RunConfig& config);

} // namespace gemt
