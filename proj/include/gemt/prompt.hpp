#pragma once

#include "gemt/types.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gemt {

// Token budget of the reference generator; mocks count whitespace-split words
// so the engine stays independent of any specific tokenizer.
inline constexpr int kDefaultTokenBudget = 77;

std::string trim(std::string_view text);
std::string lower(std::string_view text);
std::vector<std::string> split_words(std::string_view text);

// Whitespace-split word count; the mock stand-in for tokenizer metadata.
int count_tokens(std::string_view text);

// "A <domain> in the shape of <descriptor>." The article is always "A", even
// before vowel-initial domains; that matches the rendered prompts we target.
std::string render_prompt_text(const Task& task, std::string_view descriptor);

// Renders and validates a genotype. Throws EmptyDescriptor or
// TokenBudgetExceeded.
Genotype render_prompt(const Task& task, std::string_view descriptor,
                       int token_budget = kDefaultTokenBudget);

// Lowercased, single-space-collapsed prompt. Two genotypes are duplicates iff
// their keys compare equal.
std::string genotype_key(std::string_view prompt);
std::string genotype_key(const Genotype& genotype);

struct PromptParts {
    std::string domain_phrase;
    std::string descriptor;
};

// Inverse of render_prompt_text for well-formed prompts; nullopt otherwise.
// The first " in the shape of " splits domain from descriptor.
std::optional<PromptParts> parse_prompt(std::string_view prompt);

} // namespace gemt
