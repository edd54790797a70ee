#include "gemt/config.hpp"

#include "gemt/errors.hpp"
#include "gemt/prompt.hpp"
#include "gemt/seeds.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace gemt {

namespace {

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad numeric value for " + key + ": '" + value + "'");
    }
}

long long parse_int(const std::string& key, const std::string& value) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size())
        throw ConfigError("bad integer value for " + key + ": '" + value + "'");
    return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError("bad boolean value for " + key + ": '" + value + "'");
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::string current;
    for (char c : value) {
        if (c == ',') {
            items.push_back(trim(current));
            current.clear();
        } else {
            current += c;
        }
    }
    items.push_back(trim(current));
    return items;
}

Sense parse_sense(const std::string& key, const std::string& value) {
    if (value == "minimize") return Sense::minimize;
    if (value == "maximize") return Sense::maximize;
    throw ConfigError("bad sense for " + key + ": '" + value + "' (minimize|maximize)");
}

std::vector<std::string> split_path(const std::string& key) {
    std::vector<std::string> parts;
    std::string current;
    for (char c : key) {
        if (c == '.') {
            parts.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    parts.push_back(current);
    return parts;
}

} // namespace

std::string_view to_string(ObjectiveMode mode) {
    return mode == ObjectiveMode::single_objective ? "single_objective" : "multi_objective";
}

std::string_view to_string(Sense sense) {
    return sense == Sense::minimize ? "minimize" : "maximize";
}

Sense RunConfig::sense_for(const Task& task, const std::string& objective) const {
    auto by_task = objective_sense.find(task.domain_phrase);
    if (by_task == objective_sense.end()) return Sense::minimize;
    auto by_obj = by_task->second.find(objective);
    if (by_obj == by_task->second.end()) return Sense::minimize;
    return by_obj->second;
}

void RunConfig::validate() const {
    if (tasks.empty()) throw ConfigError("at least one task is required");
    std::set<int> indices;
    std::set<std::string> phrases;
    for (const Task& t : tasks) {
        if (t.domain_phrase.empty()) throw ConfigError("task domain phrase must be non-empty");
        if (!indices.insert(t.index).second)
            throw ConfigError("duplicate task index " + std::to_string(t.index));
        if (!phrases.insert(t.domain_phrase).second)
            throw ConfigError("duplicate task domain phrase '" + t.domain_phrase + "'");
    }
    if (population_size < 2) throw ConfigError("population_size must be >= 2");
    if (max_generations < 1) throw ConfigError("max_generations must be >= 1");
    if (alpha < 0.0 || alpha > 1.0) throw ConfigError("alpha must lie in [0,1]");
    if (visual_lower < 0.0 || visual_upper > 1.0 || visual_lower > visual_upper)
        throw ConfigError("visual bounds must satisfy 0 <= lower <= upper <= 1");
    if (self_mating_probability < 0.0 || self_mating_probability > 1.0)
        throw ConfigError("self_mating_probability must lie in [0,1]");
    if (cross_domain_probability < 0.0 || cross_domain_probability > 1.0)
        throw ConfigError("cross_domain_probability must lie in [0,1]");
    if (self_mating_probability + cross_domain_probability > 1.0)
        throw ConfigError("self_mating_probability + cross_domain_probability must be <= 1");
    if (tournament_size < 2) throw ConfigError("tournament_size must be >= 2");
    if (novelty_baseline_samples < 1) throw ConfigError("novelty_baseline_samples must be >= 1");
    if (phenotype_samples < 1) throw ConfigError("phenotype_samples must be >= 1");
    if (threads < 0) throw ConfigError("threads must be >= 0");
    if (raster_resolution < 16) throw ConfigError("raster_resolution must be >= 16");

    const std::string& phys = oracle_selection.physical;
    if (phys != "frontal_area" && phys != "drag" && phys != "drag_lift")
        throw ConfigError("unknown physical adapter '" + phys + "'");
    for (const auto& [phrase, senses] : objective_sense) {
        if (!phrases.count(phrase))
            throw ConfigError("objective_sense refers to unknown task '" + phrase + "'");
        (void)senses;
    }
}

RunConfig parse_config(std::string_view text) {
    RunConfig config;
    std::map<std::string, std::string> labels;  // task_label overrides

    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    bool saw_tasks = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::string flat = trim(line);
        if (flat.empty() || flat[0] == '#') continue;
        if (auto pos = flat.find(" #"); pos != std::string::npos) flat = trim(flat.substr(0, pos));

        const std::size_t eq = flat.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key = trim(flat.substr(0, eq));
        const std::string value = trim(flat.substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");

        const auto path = split_path(key);
        const std::string& head = path[0];

        if (head == "tasks") {
            config.tasks.clear();
            int index = 1;
            for (const std::string& phrase : split_list(value)) {
                if (phrase.empty()) throw ConfigError("tasks list contains an empty phrase");
                config.tasks.push_back(make_task(index++, phrase));
            }
            saw_tasks = true;
        } else if (head == "task_label" && path.size() == 2) {
            labels[path[1]] = value;
        } else if (head == "population_size") {
            config.population_size = static_cast<int>(parse_int(key, value));
        } else if (head == "max_generations") {
            config.max_generations = static_cast<int>(parse_int(key, value));
        } else if (head == "alpha") {
            config.alpha = parse_double(key, value);
        } else if (head == "visual_lower") {
            config.visual_lower = parse_double(key, value);
        } else if (head == "visual_upper") {
            config.visual_upper = parse_double(key, value);
        } else if (head == "objective_mode") {
            if (value == "single_objective") config.objective_mode = ObjectiveMode::single_objective;
            else if (value == "multi_objective") config.objective_mode = ObjectiveMode::multi_objective;
            else throw ConfigError("bad objective_mode '" + value + "'");
        } else if (head == "self_mating_probability") {
            config.self_mating_probability = parse_double(key, value);
        } else if (head == "cross_domain_probability") {
            config.cross_domain_probability = parse_double(key, value);
        } else if (head == "tournament_size") {
            config.tournament_size = static_cast<int>(parse_int(key, value));
        } else if (head == "seed") {
            config.seed = static_cast<std::uint64_t>(parse_int(key, value));
        } else if (head == "oracle_selection" && path.size() == 2) {
            if (path[1] == "language") config.oracle_selection.language = value;
            else if (path[1] == "generator") config.oracle_selection.generator = value;
            else if (path[1] == "visual") config.oracle_selection.visual = value;
            else if (path[1] == "physical") config.oracle_selection.physical = value;
            else throw ConfigError("unknown oracle_selection role '" + path[1] + "'");
        } else if (head == "novelty_baseline_samples") {
            config.novelty_baseline_samples = static_cast<int>(parse_int(key, value));
        } else if (head == "phenotype_samples") {
            config.phenotype_samples = static_cast<int>(parse_int(key, value));
        } else if (head == "reevaluate_survivors") {
            config.reevaluate_survivors = parse_bool(key, value);
        } else if (head == "threads") {
            config.threads = static_cast<int>(parse_int(key, value));
        } else if (head == "raster_resolution") {
            config.raster_resolution = static_cast<int>(parse_int(key, value));
        } else if (head == "instruction_dir") {
            config.instruction_dir = value;
        } else if (head == "keyword_table") {
            config.keyword_table_path = value;
        } else if (head == "synonym_table") {
            config.synonym_table_path = value;
        } else if (head == "objective_sense" && path.size() == 3) {
            config.objective_sense[path[1]][path[2]] = parse_sense(key, value);
        } else {
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
    }

    if (!saw_tasks) throw ConfigError("config must define 'tasks'");
    for (Task& t : config.tasks) {
        auto it = labels.find(t.domain_phrase);
        if (it != labels.end()) t.label = it->second;
    }
    config.validate();
    return config;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string config_to_text(const RunConfig& config) {
    std::ostringstream os;
    os << "tasks = ";
    for (std::size_t i = 0; i < config.tasks.size(); ++i) {
        if (i) os << ", ";
        os << config.tasks[i].domain_phrase;
    }
    os << "\n";
    for (const Task& t : config.tasks) {
        if (t.label != "A " + t.domain_phrase)
            os << "task_label." << t.domain_phrase << " = " << t.label << "\n";
    }
    os << "population_size = " << config.population_size << "\n";
    os << "max_generations = " << config.max_generations << "\n";
    os << "alpha = " << format_double(config.alpha) << "\n";
    os << "visual_lower = " << format_double(config.visual_lower) << "\n";
    os << "visual_upper = " << format_double(config.visual_upper) << "\n";
    os << "objective_mode = " << to_string(config.objective_mode) << "\n";
    os << "self_mating_probability = " << format_double(config.self_mating_probability) << "\n";
    os << "cross_domain_probability = " << format_double(config.cross_domain_probability) << "\n";
    os << "tournament_size = " << config.tournament_size << "\n";
    os << "seed = " << config.seed << "\n";
    os << "oracle_selection.language = " << config.oracle_selection.language << "\n";
    os << "oracle_selection.generator = " << config.oracle_selection.generator << "\n";
    os << "oracle_selection.visual = " << config.oracle_selection.visual << "\n";
    os << "oracle_selection.physical = " << config.oracle_selection.physical << "\n";
    os << "novelty_baseline_samples = " << config.novelty_baseline_samples << "\n";
    os << "phenotype_samples = " << config.phenotype_samples << "\n";
    os << "reevaluate_survivors = " << (config.reevaluate_survivors ? "true" : "false") << "\n";
    // threads is an execution knob, not part of run identity: results are
    // bit-identical at any thread count, so the snapshot omits it.
    os << "raster_resolution = " << config.raster_resolution << "\n";
    if (!config.instruction_dir.empty())
        os << "instruction_dir = " << config.instruction_dir << "\n";
    if (!config.keyword_table_path.empty())
        os << "keyword_table = " << config.keyword_table_path << "\n";
    if (!config.synonym_table_path.empty())
        os << "synonym_table = " << config.synonym_table_path << "\n";
    for (const auto& [phrase, senses] : config.objective_sense)
        for (const auto& [objective, sense] : senses)
            os << "objective_sense." << phrase << "." << objective << " = " << to_string(sense)
               << "\n";
    return os.str();
}

std::string run_id_for(const RunConfig& config) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(hash64(config_to_text(config))));
    return std::string(buf);
}

} // namespace gemt
