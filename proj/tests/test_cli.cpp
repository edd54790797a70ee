// End-to-end tests driving the installed binary exactly as a user would.

#include "gemt/prompt.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CmdResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("gemt_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

CmdResult run_cli(const std::string& args, const fs::path& scratch) {
    const fs::path out_file = scratch / "stdout.txt";
    const fs::path err_file = scratch / "stderr.txt";
    const std::string command = std::string(GEMT_CLI_PATH) + " " + args + " > " +
                                out_file.string() + " 2> " + err_file.string();
    const int status = std::system(command.c_str());
    CmdResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = slurp(out_file);
    result.err = slurp(err_file);
    return result;
}

fs::path write_config(const fs::path& dir, int population, int generations,
                      const std::string& extra = "") {
    const fs::path path = dir / "test.cfg";
    std::ofstream out(path);
    out << "tasks = car, airplane\n"
        << "population_size = " << population << "\n"
        << "max_generations = " << generations << "\n"
        << "seed = 42\n"
        << extra;
    return path;
}

std::size_t line_count(const fs::path& path) {
    std::ifstream in(path);
    std::string line;
    std::size_t lines = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++lines;
    return lines;
}

} // namespace

TEST_CASE("cli run produces the full run directory") {
    TempDir tmp;
    const fs::path config = write_config(tmp.path, 6, 2);
    const auto result =
        run_cli("run --config " + config.string() + " --out " + (tmp.path / "run").string(),
                tmp.path);
    REQUIRE(result.exit_code == 0);

    const fs::path run = tmp.path / "run";
    CHECK(fs::exists(run / "config.snapshot.cfg"));
    CHECK(line_count(run / "run.log.jsonl") == 6 + 6 * 2);
    CHECK(fs::exists(run / "generations" / "gen_0000.jsonl"));
    CHECK(fs::exists(run / "generations" / "gen_0002.jsonl"));
    CHECK(fs::exists(run / "checkpoint.json"));
    CHECK(fs::exists(run / "archive" / "archive.json"));
    CHECK(fs::exists(run / "archive" / "task_01_best.obj"));
    CHECK(fs::exists(run / "archive" / "task_02_best.obj"));

    // Every record parses and the prompts obey the template.
    std::ifstream log(run / "run.log.jsonl");
    std::string line;
    while (std::getline(log, line)) {
        const json j = json::parse(line);
        CHECK(gemt::parse_prompt(j.at("prompt").get<std::string>()).has_value());
    }
}

TEST_CASE("cli run refuses a missing config and an occupied directory") {
    TempDir tmp;
    const auto missing = run_cli(
        "run --config /nonexistent/gemt.cfg --out " + (tmp.path / "x").string(), tmp.path);
    CHECK(missing.exit_code != 0);
    CHECK(missing.err.find("/nonexistent/gemt.cfg") != std::string::npos);

    const fs::path config = write_config(tmp.path, 6, 1);
    const std::string run_args =
        "run --config " + config.string() + " --out " + (tmp.path / "run").string();
    CHECK(run_cli(run_args, tmp.path).exit_code == 0);
    const auto second = run_cli(run_args, tmp.path);
    CHECK(second.exit_code != 0);
    CHECK(second.err.find("resume") != std::string::npos);
}

TEST_CASE("identical invocations yield byte-identical log streams") {
    TempDir tmp;
    const fs::path config = write_config(tmp.path, 8, 3);
    REQUIRE(run_cli("run --config " + config.string() + " --out " + (tmp.path / "a").string() +
                        " --threads 1",
                    tmp.path)
                .exit_code == 0);
    REQUIRE(run_cli("run --config " + config.string() + " --out " + (tmp.path / "b").string() +
                        " --threads 2",
                    tmp.path)
                .exit_code == 0);
    CHECK(slurp(tmp.path / "a" / "run.log.jsonl") == slurp(tmp.path / "b" / "run.log.jsonl"));
}

TEST_CASE("interrupted runs resume to the uninterrupted result") {
    TempDir tmp;
    const fs::path config = write_config(tmp.path, 6, 4);

    REQUIRE(run_cli("run --config " + config.string() + " --out " +
                        (tmp.path / "full").string(),
                    tmp.path)
                .exit_code == 0);
    REQUIRE(run_cli("run --config " + config.string() + " --out " +
                        (tmp.path / "partial").string() + " --stop-after 2",
                    tmp.path)
                .exit_code == 0);
    CHECK(line_count(tmp.path / "partial" / "run.log.jsonl") == 6 + 6 * 2);

    const auto resumed =
        run_cli("resume --out " + (tmp.path / "partial").string(), tmp.path);
    REQUIRE(resumed.exit_code == 0);
    CHECK(slurp(tmp.path / "partial" / "run.log.jsonl") ==
          slurp(tmp.path / "full" / "run.log.jsonl"));
    CHECK(slurp(tmp.path / "partial" / "archive" / "archive.json") ==
          slurp(tmp.path / "full" / "archive" / "archive.json"));

    // Resuming a finished run is a no-op.
    const auto again = run_cli("resume --out " + (tmp.path / "partial").string(), tmp.path);
    CHECK(again.exit_code == 0);
    CHECK(again.out.find("nothing to do") != std::string::npos);

    // Resuming an empty directory reports a corrupt/missing checkpoint.
    const auto empty = run_cli("resume --out " + (tmp.path / "void").string(), tmp.path);
    CHECK(empty.exit_code != 0);
    CHECK(empty.err.find("resume") != std::string::npos);
}

TEST_CASE("baselines cache by key and rebuild on demand") {
    TempDir tmp;
    const fs::path config = write_config(tmp.path, 6, 1);
    const std::string base_args = "baseline --config " + config.string() + " --out " +
                                  (tmp.path / "run").string() + " --samples 10";
    const auto first = run_cli(base_args, tmp.path);
    REQUIRE(first.exit_code == 0);
    CHECK(first.out.find("wrote baseline") != std::string::npos);
    const fs::path expected = tmp.path / "run" / "baselines" /
                              "a_car__procedural__tag_overlap__B10__seed42.json";
    CHECK(fs::exists(expected));

    const auto second = run_cli(base_args, tmp.path);
    CHECK(second.exit_code == 0);
    CHECK(second.out.find("cache hit") != std::string::npos);

    // A different sample count is a different key, so it rebuilds.
    const auto other = run_cli(base_args + "0", tmp.path);  // --samples 100
    CHECK(other.exit_code == 0);
    CHECK(other.out.find("wrote baseline") != std::string::npos);

    const auto forced = run_cli(base_args + " --force", tmp.path);
    CHECK(forced.exit_code == 0);
    CHECK(forced.out.find("wrote baseline") != std::string::npos);
}

TEST_CASE("report emits the four CSVs and is pure") {
    TempDir tmp;
    const fs::path config = write_config(tmp.path, 6, 3, "oracle_selection.physical = drag_lift\n"
                                                         "objective_sense.airplane.lift_proxy = maximize\n");
    const std::string out = (tmp.path / "run").string();
    REQUIRE(run_cli("baseline --config " + config.string() + " --out " + out + " --samples 12",
                    tmp.path)
                .exit_code == 0);
    REQUIRE(run_cli("run --config " + config.string() + " --out " + out, tmp.path).exit_code ==
            0);
    REQUIRE(run_cli("report --out " + out, tmp.path).exit_code == 0);

    const fs::path reports = tmp.path / "run" / "reports";
    // (G+1) generations x 2 tasks data rows plus the header.
    CHECK(line_count(reports / "fitness_by_generation.csv") == 1 + 4 * 2);
    CHECK(fs::exists(reports / "hypervolume.csv"));
    CHECK(fs::exists(reports / "novelty.csv"));
    CHECK(fs::exists(reports / "vocabulary_overlap.csv"));

    const std::string hv = slurp(reports / "hypervolume.csv");
    CHECK(hv.find("warning") == std::string::npos);  // baseline present, M = 2

    // Novelty fractions equal a direct recount from the log stream.
    std::map<int, std::pair<int, int>> recount;  // task -> (evaluated, novel)
    std::ifstream log(tmp.path / "run" / "run.log.jsonl");
    std::string line;
    while (std::getline(log, line)) {
        const json j = json::parse(line);
        if (j.at("novelty_score").is_null()) continue;
        auto& [evaluated, novel] = recount[j.at("task_index").get<int>()];
        ++evaluated;
        if (j.at("novelty_score").get<double>() > 0.0) ++novel;
    }
    std::ifstream novelty(reports / "novelty.csv");
    std::getline(novelty, line);  // header
    int rows = 0;
    while (std::getline(novelty, line)) {
        int task = 0, evaluated = 0, novel = 0;
        char name[64];
        REQUIRE(std::sscanf(line.c_str(), "%d,%63[^,],%d,%d", &task, name, &evaluated, &novel) ==
                4);
        CHECK(evaluated == recount[task].first);
        CHECK(novel == recount[task].second);
        ++rows;
    }
    CHECK(rows == 2);

    // Running the report again produces identical bytes.
    const std::string before = slurp(reports / "fitness_by_generation.csv") +
                               slurp(reports / "hypervolume.csv") +
                               slurp(reports / "novelty.csv") +
                               slurp(reports / "vocabulary_overlap.csv");
    REQUIRE(run_cli("report --out " + out, tmp.path).exit_code == 0);
    const std::string after = slurp(reports / "fitness_by_generation.csv") +
                              slurp(reports / "hypervolume.csv") +
                              slurp(reports / "novelty.csv") +
                              slurp(reports / "vocabulary_overlap.csv");
    CHECK(before == after);
}

TEST_CASE("report refuses unfinished runs; hv warns without baselines") {
    TempDir tmp;
    const fs::path config = write_config(tmp.path, 6, 3);
    const std::string out = (tmp.path / "run").string();
    REQUIRE(run_cli("run --config " + config.string() + " --out " + out + " --stop-after 1",
                    tmp.path)
                .exit_code == 0);
    const auto incomplete = run_cli("report --out " + out, tmp.path);
    CHECK(incomplete.exit_code != 0);
    CHECK(incomplete.err.find("resume") != std::string::npos);

    REQUIRE(run_cli("resume --out " + out, tmp.path).exit_code == 0);
    REQUIRE(run_cli("report --out " + out, tmp.path).exit_code == 0);
    const std::string hv = slurp(tmp.path / "run" / "reports" / "hypervolume.csv");
    CHECK(hv.find("warning") != std::string::npos);  // M = 1, no baseline
}

TEST_CASE("hv subcommand computes ad-hoc hypervolume from CSV") {
    TempDir tmp;
    const fs::path points = tmp.path / "points.csv";
    std::ofstream(points) << "x,y\n0.2,0.4\n0.4,0.2\n0.9,0.9\n";
    const auto result = run_cli("hv --points " + points.string(), tmp.path);
    REQUIRE(result.exit_code == 0);
    CHECK(std::stod(result.out) == doctest::Approx(0.6).epsilon(1e-9));  // (0.9,0.9) dominated

    const auto custom_ref =
        run_cli("hv --points " + points.string() + " --ref 0.5,0.5", tmp.path);
    REQUIRE(custom_ref.exit_code == 0);
    // (0.4-0.2)*(0.5-0.4) + (0.5-0.4)*(0.5-0.2)
    CHECK(std::stod(custom_ref.out) == doctest::Approx(0.05).epsilon(1e-9));
    CHECK(custom_ref.err.find("warning") != std::string::npos);  // (0.9,0.9) discarded

    std::ofstream(tmp.path / "empty.csv") << "x,y\n";
    CHECK(run_cli("hv --points " + (tmp.path / "empty.csv").string(), tmp.path).exit_code != 0);
}
