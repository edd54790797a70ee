#pragma once

#include "gemt/oracles.hpp"

#include <array>
#include <filesystem>
#include <string>

namespace gemt {

// One plain-text template per instruction kind, with {name} placeholders:
// {problem_description} {task_targets} {requested_count} {population_context}
// {reflection} {parent_prompts} {child_task}
struct InstructionTemplates {
    std::array<std::string, 5> by_kind;

    const std::string& for_kind(InstructionKind kind) const {
        return by_kind[static_cast<std::size_t>(kind)];
    }
};

InstructionTemplates default_instruction_templates();

// Reads <dir>/{initialize,reflect,self_mate,same_domain_mate,cross_domain_mate}.txt
InstructionTemplates load_instruction_templates(const std::filesystem::path& dir);

std::string render_instruction(const InstructionTemplates& templates,
                               const InstructionBundle& bundle);

// Default problem statement embedded in every instruction.
std::string default_problem_description();

} // namespace gemt
