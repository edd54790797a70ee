// gemt — generative evolutionary multitasking engine, command-line front end.
//
// Subcommands: run, resume, report, baseline, hv. All run state lives in the
// output directory; `gemt report` and `gemt resume` work from it alone.

#include "gemt/errors.hpp"
#include "gemt/evolution.hpp"
#include "gemt/instructions.hpp"
#include "gemt/metrics.hpp"
#include "gemt/oracle_factory.hpp"
#include "gemt/prompt_ops.hpp"
#include "gemt/report.hpp"
#include "gemt/runstore.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

namespace {

using namespace gemt;

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    std::int64_t seed = -1;     // <0 keeps the config value
    std::string oracles;        // "", "mock" or "remote"
    int threads = -1;           // <0 keeps the config value
    int stop_after = -1;        // test aid: stop after this generation barrier
};

void apply_overrides(RunConfig& config, const CommonFlags& flags) {
    if (flags.seed >= 0) config.seed = static_cast<std::uint64_t>(flags.seed);
    if (flags.threads >= 0) config.threads = flags.threads;
    if (flags.oracles == "mock") {
        config.oracle_selection.language = "scripted";
        config.oracle_selection.generator = "procedural";
        config.oracle_selection.visual = "tag_overlap";
    } else if (flags.oracles == "remote") {
        config.oracle_selection.language = "remote";
        config.oracle_selection.visual = "remote";
    } else if (!flags.oracles.empty()) {
        throw ConfigError("--oracles must be 'mock' or 'remote'");
    }
}

InstructionTemplates templates_for(const RunConfig& config) {
    if (config.instruction_dir.empty()) return default_instruction_templates();
    return load_instruction_templates(config.instruction_dir);
}

// Shared by run and resume: wires persistence into the generation barrier.
struct PersistenceHook {
    RunStore* store;
    std::size_t log_lines = 0;

    void operator()(const GenerationSummary& summary) {
        store->append_log(*summary.records);
        log_lines += summary.records->size();
        store->write_generation(summary.generation, *summary.population);
        store->write_archive(*summary.archive);
        CheckpointState cp;
        cp.completed_generation = summary.generation;
        cp.finished = summary.final_generation;
        cp.log_lines = log_lines;
        cp.population = *summary.population;
        cp.archive = *summary.archive;
        cp.normalizer = *summary.normalizer;
        store->write_checkpoint(cp);
    }
};

int cmd_run(const CommonFlags& flags) {
    RunConfig config = load_config(flags.config_path);
    apply_overrides(config, flags);
    config.validate();

    RunStore store(flags.out_dir);
    if (store.has_run()) {
        std::cerr << "error: " << flags.out_dir
                  << " already contains a run; use `gemt resume` or a fresh directory\n";
        return 1;
    }
    store.initialize(config);

    const OracleSet oracles = make_oracles(config);
    const InstructionTemplates templates = templates_for(config);
    const auto baselines = load_matching_baselines(store, config);

    PersistenceHook hook{&store};
    EvolutionOptions options;
    options.on_generation = std::ref(hook);
    options.stop_after_generation = flags.stop_after;
    if (!baselines.empty()) options.novelty_baselines = &baselines;

    const RunResult result = run_evolution(config, oracles, templates, options);
    std::cout << "run " << (result.finished ? "complete" : "stopped") << " after generation "
              << result.completed_generations << "; " << hook.log_lines
              << " evaluation records in " << store.log_path().string() << "\n";
    return 0;
}

int cmd_resume(const CommonFlags& flags) {
    RunStore store(flags.out_dir);
    auto checkpoint = store.load_checkpoint();
    if (!checkpoint)
        throw CorruptCheckpoint("no checkpoint in " + flags.out_dir +
                                "; nothing to resume");
    if (checkpoint->finished) {
        std::cout << "run already complete; nothing to do\n";
        return 0;
    }

    RunConfig config = store.load_snapshot();
    if (flags.threads >= 0) config.threads = flags.threads;
    config.validate();

    store.truncate_log(checkpoint->log_lines);

    const OracleSet oracles = make_oracles(config);
    const InstructionTemplates templates = templates_for(config);
    const auto baselines = load_matching_baselines(store, config);

    // Phenotypes are not persisted; rebuild them from provenance seeds.
    for (Individual& ind : checkpoint->population) {
        if (!ind.phenotype) continue;
        const MeshProvenance provenance = ind.phenotype->provenance;
        ind.phenotype = generate_phenotype(*oracles.generator, ind.genotype,
                                           provenance.generation, provenance.generator_seed);
    }

    ResumeState resume;
    resume.completed_generation = checkpoint->completed_generation;
    resume.population = std::move(checkpoint->population);
    resume.archive = std::move(checkpoint->archive);
    resume.normalizer = checkpoint->normalizer;

    PersistenceHook hook{&store, checkpoint->log_lines};
    EvolutionOptions options;
    options.on_generation = std::ref(hook);
    options.resume = &resume;
    options.stop_after_generation = flags.stop_after;
    if (!baselines.empty()) options.novelty_baselines = &baselines;

    const RunResult result = run_evolution(config, oracles, templates, options);
    std::cout << "run " << (result.finished ? "complete" : "stopped") << " after generation "
              << result.completed_generations << "\n";
    return 0;
}

int cmd_report(const std::string& out_dir, const std::string& overlap_mode,
               const std::string& hv_ref) {
    RunStore store(out_dir);
    ReportOptions options;
    if (overlap_mode == "smaller") options.overlap_mode = OverlapMode::smaller_set;
    else if (overlap_mode != "jaccard") throw ConfigError("--overlap-mode: jaccard|smaller");
    if (!hv_ref.empty()) {
        double x = 0, y = 0;
        if (std::sscanf(hv_ref.c_str(), "%lf,%lf", &x, &y) != 2)
            throw ConfigError("--hv-ref expects 'x,y'");
        options.hv_reference = {x, y};
    }
    const ReportPaths paths = write_reports(store, options);
    std::cout << "wrote " << paths.fitness_csv.string() << "\n"
              << "wrote " << paths.hypervolume_csv.string() << "\n"
              << "wrote " << paths.novelty_csv.string() << "\n"
              << "wrote " << paths.vocabulary_csv.string() << "\n";
    return 0;
}

int cmd_baseline(const CommonFlags& flags, const std::string& task_phrase, int samples,
                 bool force) {
    RunConfig config = load_config(flags.config_path);
    apply_overrides(config, flags);
    config.validate();

    RunStore store(flags.out_dir);
    std::filesystem::create_directories(store.baselines_dir());

    const OracleSet oracles = make_oracles(config);
    const PhysicalBackend backend =
        PhysicalBackend::named(config.oracle_selection.physical, config.raster_resolution);
    const int count = samples > 0 ? samples : config.novelty_baseline_samples;
    const std::uint64_t seed = config.seed;

    for (const Task& task : config.tasks) {
        if (!task_phrase.empty() && task.domain_phrase != task_phrase) continue;
        const std::string key = baseline_cache_key(task, oracles.generator->info().name,
                                                   oracles.visual->info().name, count, seed);
        const auto path = store.baseline_path(key);
        if (!force && std::filesystem::exists(path)) {
            std::cout << "baseline cache hit: " << path.string() << "\n";
            continue;
        }
        const NoveltyBaseline baseline =
            build_novelty_baseline(*oracles.generator, *oracles.visual, task, count, seed,
                                   &backend);
        save_baseline(baseline, path);
        std::cout << "wrote baseline (" << count << " samples, mean "
                  << baseline.baseline_mean << "): " << path.string() << "\n";
    }
    return 0;
}

int cmd_hv(const std::string& points_path, const std::string& ref_text) {
    std::ifstream in(points_path);
    if (!in) throw Error("cannot read points file: " + points_path);
    std::vector<Eigen::Vector2d> points;
    std::string line;
    while (std::getline(in, line)) {
        const std::string flat = trim(line);
        if (flat.empty() || flat[0] == '#') continue;
        double x = 0, y = 0;
        if (std::sscanf(flat.c_str(), "%lf,%lf", &x, &y) != 2 &&
            std::sscanf(flat.c_str(), "%lf %lf", &x, &y) != 2)
            continue;  // header or stray text
        points.emplace_back(x, y);
    }

    Eigen::Vector2d ref(1.0, 1.0);
    if (!ref_text.empty()) {
        double x = 0, y = 0;
        if (std::sscanf(ref_text.c_str(), "%lf,%lf", &x, &y) != 2)
            throw ConfigError("--ref expects 'x,y'");
        ref = {x, y};
    }

    std::vector<std::string> warnings;
    const double value = hypervolume_2d(points, ref, &warnings);
    for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
    std::printf("%.12g\n", value);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"gemt — generative evolutionary multitasking engine"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string task_phrase, overlap_mode = "jaccard", hv_ref, points_path;
    int samples = 0;
    bool force = false;

    auto* run = app.add_subcommand("run", "Execute an evolutionary run");
    run->add_option("--config", flags.config_path, "Run configuration file")->required();
    run->add_option("--out", flags.out_dir, "Output directory")->required();
    run->add_option("--seed", flags.seed, "Override the config seed");
    run->add_option("--oracles", flags.oracles, "Adapter family: mock|remote");
    run->add_option("--threads", flags.threads, "Evaluation threads (0 = hardware)");
    run->add_option("--stop-after", flags.stop_after, "Stop after this generation barrier")
        ->group("");  // hidden; used by tests and checkpoint drills

    auto* resume = app.add_subcommand("resume", "Continue a checkpointed run");
    resume->add_option("--out", flags.out_dir, "Run directory")->required();
    resume->add_option("--threads", flags.threads, "Evaluation threads (0 = hardware)");
    resume->add_option("--stop-after", flags.stop_after, "Stop after this generation barrier")
        ->group("");

    auto* report = app.add_subcommand("report", "Write CSV reports for a finished run");
    report->add_option("--out", flags.out_dir, "Run directory")->required();
    report->add_option("--overlap-mode", overlap_mode, "Vocabulary overlap: jaccard|smaller");
    report->add_option("--hv-ref", hv_ref, "Hypervolume reference point 'x,y'");

    auto* baseline = app.add_subcommand("baseline", "Build or reuse novelty baselines");
    baseline->add_option("--config", flags.config_path, "Run configuration file")->required();
    baseline->add_option("--out", flags.out_dir, "Output directory")->required();
    baseline->add_option("--task", task_phrase, "Single task domain phrase (default: all)");
    baseline->add_option("--samples", samples, "Monte Carlo sample count (default: config)");
    baseline->add_option("--seed", flags.seed, "Override the config seed");
    baseline->add_flag("--force", force, "Rebuild even on a cache hit");

    auto* hv = app.add_subcommand("hv", "Hypervolume of a CSV point set");
    hv->add_option("--points", points_path, "CSV of 'x,y' minimization points")->required();
    hv->add_option("--ref", hv_ref, "Reference point 'x,y' (default 1,1)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(flags);
        if (resume->parsed()) return cmd_resume(flags);
        if (report->parsed()) return cmd_report(flags.out_dir, overlap_mode, hv_ref);
        if (baseline->parsed()) return cmd_baseline(flags, task_phrase, samples, force);
        if (hv->parsed()) return cmd_hv(points_path, hv_ref);
    } catch (const gemt::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
