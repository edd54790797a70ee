#include "gemt/runstore.hpp"

#include "gemt/errors.hpp"
#include "gemt/mesh_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace gemt {

using nlohmann::json;

namespace {

json vector_to_json(const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

json vector_to_json(const Eigen::VectorXi& v) {
    return std::vector<int>(v.data(), v.data() + v.size());
}

Eigen::VectorXd vector_from_json_d(const json& j) {
    const auto values = j.get<std::vector<double>>();
    return Eigen::Map<const Eigen::VectorXd>(values.data(),
                                             static_cast<Eigen::Index>(values.size()));
}

Eigen::VectorXi vector_from_json_i(const json& j) {
    const auto values = j.get<std::vector<int>>();
    return Eigen::Map<const Eigen::VectorXi>(values.data(),
                                             static_cast<Eigen::Index>(values.size()));
}

json fitness_to_json(const FitnessRecord& fr) {
    json j;
    j["physical_raw"] = vector_to_json(fr.physical_raw);
    j["physical_norm"] = vector_to_json(fr.physical_norm);
    j["visual_score"] = fr.visual_score;
    j["task_visual"] = vector_to_json(fr.task_visual);
    j["combined_cost"] = fr.combined_cost;
    j["task_cost"] = vector_to_json(fr.task_cost);
    j["factorial_ranks"] = vector_to_json(fr.factorial_ranks);
    j["scalar_fitness"] = fr.scalar_fitness;
    j["feasible"] = fr.feasible;
    j["constraint_violation"] = fr.constraint_violation;
    return j;
}

FitnessRecord fitness_from_json(const json& j) {
    FitnessRecord fr;
    fr.physical_raw = vector_from_json_d(j.at("physical_raw"));
    fr.physical_norm = vector_from_json_d(j.at("physical_norm"));
    fr.visual_score = j.at("visual_score").get<double>();
    fr.task_visual = vector_from_json_d(j.at("task_visual"));
    fr.combined_cost = j.at("combined_cost").get<double>();
    fr.task_cost = vector_from_json_d(j.at("task_cost"));
    const Eigen::VectorXi ranks = vector_from_json_i(j.at("factorial_ranks"));
    if (ranks.size() > 0) fr.set_factorial_ranks(ranks);
    fr.feasible = j.at("feasible").get<bool>();
    fr.constraint_violation = j.at("constraint_violation").get<double>();
    return fr;
}

json provenance_to_json(const MeshProvenance& p) {
    json j;
    j["genotype_key"] = p.genotype_key;
    j["generation"] = p.generation;
    j["generator_seed"] = p.generator_seed;
    j["recipe"] = p.recipe;
    j["tags"] = p.tags;
    return j;
}

MeshProvenance provenance_from_json(const json& j) {
    MeshProvenance p;
    p.genotype_key = j.at("genotype_key").get<std::string>();
    p.generation = j.at("generation").get<int>();
    p.generator_seed = j.at("generator_seed").get<std::uint64_t>();
    p.recipe = j.at("recipe").get<std::string>();
    p.tags = j.at("tags").get<std::vector<std::string>>();
    return p;
}

std::string generation_file_name(int generation) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "gen_%04d.jsonl", generation);
    return buf;
}

std::string archive_mesh_name(int task_index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "task_%02d_best.obj", task_index);
    return buf;
}

json normalizer_to_json(const RunningNormalizer& n) {
    json entries = json::array();
    for (int task = 1; task <= n.num_tasks(); ++task) {
        for (int obj = 0; obj < n.num_objectives(); ++obj) {
            if (!n.seen(task, obj)) continue;
            entries.push_back({{"task", task},
                               {"objective", obj},
                               {"min", n.stored_min(task, obj)},
                               {"max", n.stored_max(task, obj)}});
        }
    }
    return json{{"tasks", n.num_tasks()}, {"objectives", n.num_objectives()},
                {"entries", entries}};
}

RunningNormalizer normalizer_from_json(const json& j) {
    RunningNormalizer n(j.at("tasks").get<int>(), j.at("objectives").get<int>());
    for (const json& e : j.at("entries")) {
        n.restore(e.at("task").get<int>(), e.at("objective").get<int>(),
                  e.at("min").get<double>(), e.at("max").get<double>());
    }
    return n;
}

} // namespace

json individual_to_json(const Individual& individual) {
    json j;
    j["genotype"] = {{"task_index", individual.genotype.task_index},
                     {"descriptor", individual.genotype.descriptor},
                     {"prompt", individual.genotype.prompt},
                     {"token_count", individual.genotype.token_count}};
    j["origin"] = std::string(to_string(individual.origin));
    j["generation_created"] = individual.generation_created;
    j["fitness"] = individual.fitness ? fitness_to_json(*individual.fitness) : json(nullptr);
    j["provenance"] =
        individual.phenotype ? provenance_to_json(individual.phenotype->provenance) : json(nullptr);
    return j;
}

Individual individual_from_json(const json& j) {
    Individual ind;
    const json& g = j.at("genotype");
    ind.genotype.task_index = g.at("task_index").get<int>();
    ind.genotype.descriptor = g.at("descriptor").get<std::string>();
    ind.genotype.prompt = g.at("prompt").get<std::string>();
    ind.genotype.token_count = g.at("token_count").get<int>();
    ind.origin = origin_from_string(j.at("origin").get<std::string>());
    ind.generation_created = j.at("generation_created").get<int>();
    if (!j.at("fitness").is_null()) ind.fitness = fitness_from_json(j.at("fitness"));
    if (!j.at("provenance").is_null()) {
        // Meshes are not persisted; carry the provenance so callers can
        // regenerate the phenotype deterministically.
        PhenotypeMesh shell;
        shell.provenance = provenance_from_json(j.at("provenance"));
        ind.phenotype = std::move(shell);
    }
    return ind;
}

RunStore::RunStore(std::filesystem::path dir) : dir_(std::move(dir)) {}

bool RunStore::has_run() const {
    return std::filesystem::exists(config_path()) || std::filesystem::exists(checkpoint_path());
}

void RunStore::initialize(const RunConfig& config) {
    std::filesystem::create_directories(dir_);
    std::filesystem::create_directories(generations_dir());
    std::filesystem::create_directories(archive_dir());
    std::filesystem::create_directories(baselines_dir());
    std::ofstream out(config_path());
    if (!out) throw Error("cannot write config snapshot: " + config_path().string());
    out << config_to_text(config);
    // Start every run with a fresh log.
    std::ofstream(log_path(), std::ios::trunc);
}

RunConfig RunStore::load_snapshot() const { return load_config(config_path()); }

void RunStore::append_log(const std::vector<RunLogRecord>& records) {
    std::ofstream out(log_path(), std::ios::app);
    if (!out) throw Error("cannot append to log: " + log_path().string());
    for (const RunLogRecord& r : records) out << to_log_line(r) << "\n";
}

std::vector<RunLogRecord> RunStore::read_log() const {
    std::ifstream in(log_path());
    if (!in) throw Error("cannot read log: " + log_path().string());
    std::vector<RunLogRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        records.push_back(record_from_line(line));
    }
    return records;
}

std::size_t RunStore::count_log_lines() const {
    std::ifstream in(log_path());
    if (!in) return 0;
    std::size_t lines = 0;
    std::string line;
    while (std::getline(in, line))
        if (!trim(line).empty()) ++lines;
    return lines;
}

void RunStore::truncate_log(std::size_t lines) {
    std::ifstream in(log_path());
    if (!in) throw CorruptCheckpoint("missing log stream: " + log_path().string());
    std::vector<std::string> keep;
    std::string line;
    while (std::getline(in, line) && keep.size() < lines)
        if (!trim(line).empty()) keep.push_back(line);
    in.close();
    if (keep.size() < lines)
        throw CorruptCheckpoint("log stream shorter than checkpoint expects");
    std::ofstream out(log_path(), std::ios::trunc);
    for (const std::string& l : keep) out << l << "\n";
}

void RunStore::write_generation(int generation, const Population& population) {
    const auto path = generations_dir() / generation_file_name(generation);
    std::ofstream out(path);
    if (!out) throw Error("cannot write generation file: " + path.string());
    for (const Individual& ind : population) out << individual_to_json(ind).dump() << "\n";
}

Population RunStore::read_generation(int generation) const {
    const auto path = generations_dir() / generation_file_name(generation);
    std::ifstream in(path);
    if (!in) throw Error("cannot read generation file: " + path.string());
    Population population;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        population.push_back(individual_from_json(json::parse(line)));
    }
    return population;
}

void RunStore::write_checkpoint(const CheckpointState& state) {
    json j;
    j["schema"] = 1;
    j["completed_generation"] = state.completed_generation;
    j["finished"] = state.finished;
    j["log_lines"] = state.log_lines;
    json pop = json::array();
    for (const Individual& ind : state.population) pop.push_back(individual_to_json(ind));
    j["population"] = std::move(pop);
    json archive = json::array();
    for (const auto& [task, entry] : state.archive) {
        archive.push_back({{"task_index", task},
                           {"best_cost", entry.best_cost},
                           {"generation", entry.generation},
                           {"individual", individual_to_json(entry.individual)},
                           {"mesh_file", archive_mesh_name(task)}});
    }
    j["archive"] = std::move(archive);
    j["normalizer"] = normalizer_to_json(state.normalizer);

    const auto tmp = checkpoint_path().string() + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw Error("cannot write checkpoint: " + tmp);
        out << j.dump(2) << "\n";
    }
    std::filesystem::rename(tmp, checkpoint_path());
}

std::optional<CheckpointState> RunStore::load_checkpoint() const {
    std::ifstream in(checkpoint_path());
    if (!in) return std::nullopt;
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw CorruptCheckpoint(std::string("unreadable checkpoint: ") + e.what());
    }
    try {
        CheckpointState state;
        state.completed_generation = j.at("completed_generation").get<int>();
        state.finished = j.at("finished").get<bool>();
        state.log_lines = j.at("log_lines").get<std::size_t>();
        for (const json& ind : j.at("population"))
            state.population.push_back(individual_from_json(ind));
        for (const json& e : j.at("archive")) {
            ArchiveEntry entry;
            entry.best_cost = e.at("best_cost").get<double>();
            entry.generation = e.at("generation").get<int>();
            entry.individual = individual_from_json(e.at("individual"));
            const auto mesh_path = archive_dir() / e.at("mesh_file").get<std::string>();
            if (entry.individual.phenotype && std::filesystem::exists(mesh_path)) {
                const MeshProvenance provenance = entry.individual.phenotype->provenance;
                entry.individual.phenotype = read_mesh_file(mesh_path);
                entry.individual.phenotype->provenance = provenance;
            }
            state.archive[e.at("task_index").get<int>()] = std::move(entry);
        }
        state.normalizer = normalizer_from_json(j.at("normalizer"));
        return state;
    } catch (const json::exception& e) {
        throw CorruptCheckpoint(std::string("malformed checkpoint: ") + e.what());
    }
}

void RunStore::write_archive(const Archive& archive) {
    json j = json::array();
    for (const auto& [task, entry] : archive) {
        j.push_back({{"task_index", task},
                     {"prompt", entry.individual.genotype.prompt},
                     {"combined_cost", entry.best_cost},
                     {"generation", entry.generation},
                     {"mesh_file", archive_mesh_name(task)}});
        if (entry.individual.phenotype && !entry.individual.phenotype->triangles.empty())
            write_mesh_file(*entry.individual.phenotype, archive_dir() / archive_mesh_name(task));
    }
    std::ofstream out(archive_dir() / "archive.json");
    if (!out) throw Error("cannot write archive index");
    out << j.dump(2) << "\n";
}

std::filesystem::path RunStore::baseline_path(const std::string& cache_key) const {
    return baselines_dir() / (cache_key + ".json");
}

} // namespace gemt
