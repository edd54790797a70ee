#pragma once

#include "gemt/config.hpp"
#include "gemt/evolution.hpp"
#include "gemt/logging.hpp"

#include <filesystem>
#include <optional>
#include <vector>

namespace gemt {

// On-disk state at a generation barrier. Population meshes are not stored;
// they are regenerated from provenance seeds on resume, which is exact for
// deterministic generators.
struct CheckpointState {
    int completed_generation = 0;
    bool finished = false;
    std::size_t log_lines = 0;
    Population population;
    Archive archive;
    RunningNormalizer normalizer;
};

// A run directory: config snapshot, append-only log stream, per-generation
// population files, archive meshes, checkpoint, baselines, and reports.
class RunStore {
public:
    explicit RunStore(std::filesystem::path dir);

    const std::filesystem::path& dir() const { return dir_; }
    std::filesystem::path config_path() const { return dir_ / "config.snapshot.cfg"; }
    std::filesystem::path log_path() const { return dir_ / "run.log.jsonl"; }
    std::filesystem::path checkpoint_path() const { return dir_ / "checkpoint.json"; }
    std::filesystem::path generations_dir() const { return dir_ / "generations"; }
    std::filesystem::path archive_dir() const { return dir_ / "archive"; }
    std::filesystem::path baselines_dir() const { return dir_ / "baselines"; }
    std::filesystem::path reports_dir() const { return dir_ / "reports"; }

    bool has_run() const;  // a snapshot or checkpoint exists

    void initialize(const RunConfig& config);  // writes directories + snapshot
    RunConfig load_snapshot() const;

    void append_log(const std::vector<RunLogRecord>& records);
    std::vector<RunLogRecord> read_log() const;
    std::size_t count_log_lines() const;
    void truncate_log(std::size_t lines);

    void write_generation(int generation, const Population& population);
    Population read_generation(int generation) const;

    void write_checkpoint(const CheckpointState& state);
    std::optional<CheckpointState> load_checkpoint() const;

    void write_archive(const Archive& archive);

    std::filesystem::path baseline_path(const std::string& cache_key) const;

private:
    std::filesystem::path dir_;
};

nlohmann::json individual_to_json(const Individual& individual);
Individual individual_from_json(const nlohmann::json& j);

} // namespace gemt
