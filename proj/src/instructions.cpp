#include "gemt/instructions.hpp"

#include "gemt/errors.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace gemt {

namespace {

constexpr std::string_view kInitialize = R"(You are the variation engine of an evolutionary design search.
{problem_description}
Target domains: {task_targets}.
Write {requested_count} fresh descriptor phrase(s) for the domain "{child_task}".
Each descriptor completes the sentence: A {child_task} in the shape of <descriptor>.
Favor concrete, shape-defining words. Reply with one descriptor per line and nothing else.
)";

constexpr std::string_view kReflect = R"(You are the variation engine of an evolutionary design search.
{problem_description}
Current population, one "prompt -> cost" pair per line (lower cost is better):
{population_context}
Reflect briefly: which prompts perform well, which perform poorly, and what
shape vocabulary looks promising for the next generation.
)";

constexpr std::string_view kSelfMate = R"(You are the variation engine of an evolutionary design search.
{problem_description}
Current population, one "prompt -> cost" pair per line (lower cost is better):
{population_context}
Reflection for this generation:
{reflection}
Parent prompt:
{parent_prompts}
Rewrite the parent into one improved variant for the domain "{child_task}" by
replacing a few descriptor words. Answer with exactly one sentence of the form:
A {child_task} in the shape of <descriptor>.
)";

constexpr std::string_view kSameDomainMate = R"(You are the variation engine of an evolutionary design search.
{problem_description}
Current population, one "prompt -> cost" pair per line (lower cost is better):
{population_context}
Reflection for this generation:
{reflection}
Parent prompts from the same domain:
{parent_prompts}
Combine words from the parents into one new descriptor; you may also mutate a
word or two. Answer with exactly one sentence of the form:
A {child_task} in the shape of <descriptor>.
)";

constexpr std::string_view kCrossDomainMate = R"(You are the variation engine of an evolutionary design search.
{problem_description}
Current population, one "prompt -> cost" pair per line (lower cost is better):
{population_context}
Reflection for this generation:
{reflection}
Parent prompts from different domains:
{parent_prompts}
Blend shape-defining words from every parent into one new hybrid descriptor
for the domain "{child_task}". Answer with exactly one sentence of the form:
A {child_task} in the shape of <descriptor>.
)";

void replace_all(std::string& text, std::string_view placeholder, std::string_view value) {
    std::size_t pos = 0;
    while ((pos = text.find(placeholder, pos)) != std::string::npos) {
        text.replace(pos, placeholder.size(), value);
        pos += value.size();
    }
}

std::string join_lines(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += '\n';
        out += items[i];
    }
    return out;
}

} // namespace

std::string default_problem_description() {
    return "We search for text prompts whose generated 3D designs score well on "
           "physical criteria while staying visually recognizable as their domain.";
}

InstructionTemplates default_instruction_templates() {
    InstructionTemplates t;
    t.by_kind[static_cast<std::size_t>(InstructionKind::initialize)] = std::string(kInitialize);
    t.by_kind[static_cast<std::size_t>(InstructionKind::reflect)] = std::string(kReflect);
    t.by_kind[static_cast<std::size_t>(InstructionKind::self_mate)] = std::string(kSelfMate);
    t.by_kind[static_cast<std::size_t>(InstructionKind::same_domain_mate)] =
        std::string(kSameDomainMate);
    t.by_kind[static_cast<std::size_t>(InstructionKind::cross_domain_mate)] =
        std::string(kCrossDomainMate);
    return t;
}

InstructionTemplates load_instruction_templates(const std::filesystem::path& dir) {
    InstructionTemplates t;
    const std::array<std::pair<InstructionKind, const char*>, 5> files = {{
        {InstructionKind::initialize, "initialize.txt"},
        {InstructionKind::reflect, "reflect.txt"},
        {InstructionKind::self_mate, "self_mate.txt"},
        {InstructionKind::same_domain_mate, "same_domain_mate.txt"},
        {InstructionKind::cross_domain_mate, "cross_domain_mate.txt"},
    }};
    for (const auto& [kind, name] : files) {
        const auto path = dir / name;
        std::ifstream in(path);
        if (!in) throw ConfigError("missing instruction template: " + path.string());
        std::ostringstream buffer;
        buffer << in.rdbuf();
        t.by_kind[static_cast<std::size_t>(kind)] = buffer.str();
    }
    return t;
}

std::string render_instruction(const InstructionTemplates& templates,
                               const InstructionBundle& bundle) {
    validate_bundle(bundle);
    std::string text = templates.for_kind(bundle.kind);

    std::vector<std::string> context_lines;
    context_lines.reserve(bundle.population_context.size());
    for (const PromptCost& pc : bundle.population_context) {
        char cost[32];
        std::snprintf(cost, sizeof cost, "%.6f", pc.combined_cost);
        context_lines.push_back(pc.prompt + " -> cost=" + cost);
    }

    std::string targets;
    for (std::size_t i = 0; i < bundle.task_targets.size(); ++i) {
        if (i) targets += ", ";
        targets += bundle.task_targets[i];
    }

    replace_all(text, "{problem_description}", bundle.problem_description);
    replace_all(text, "{task_targets}", targets);
    replace_all(text, "{requested_count}", std::to_string(bundle.requested_count));
    replace_all(text, "{population_context}", join_lines(context_lines));
    replace_all(text, "{reflection}", bundle.reflection);
    replace_all(text, "{parent_prompts}", join_lines(bundle.parent_prompts));
    replace_all(text, "{child_task}", bundle.child_task_phrase);
    return text;
}

} // namespace gemt
