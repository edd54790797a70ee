#include "gemt/prompt.hpp"

#include "gemt/errors.hpp"

#include <cctype>

namespace gemt {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

constexpr std::string_view kConnector = " in the shape of ";

} // namespace

std::string trim(std::string_view text) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && is_space(text[begin])) ++begin;
    while (end > begin && is_space(text[end - 1])) --end;
    return std::string(text.substr(begin, end - begin));
}

std::string lower(std::string_view text) {
    std::string out(text);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::vector<std::string> split_words(std::string_view text) {
    std::vector<std::string> words;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && is_space(text[i])) ++i;
        std::size_t start = i;
        while (i < text.size() && !is_space(text[i])) ++i;
        if (i > start) words.emplace_back(text.substr(start, i - start));
    }
    return words;
}

int count_tokens(std::string_view text) {
    return static_cast<int>(split_words(text).size());
}

std::string render_prompt_text(const Task& task, std::string_view descriptor) {
    std::string prompt = "A ";
    prompt += task.domain_phrase;
    prompt += kConnector;
    prompt += descriptor;
    prompt += ".";
    return prompt;
}

Genotype render_prompt(const Task& task, std::string_view descriptor, int token_budget) {
    const std::string clean = trim(descriptor);
    if (clean.empty()) throw EmptyDescriptor("descriptor must be non-empty");

    Genotype g;
    g.task_index = task.index;
    g.descriptor = clean;
    g.prompt = render_prompt_text(task, clean);
    g.token_count = count_tokens(g.prompt);
    if (g.token_count > token_budget) {
        throw TokenBudgetExceeded("prompt has " + std::to_string(g.token_count) +
                                  " tokens, budget is " + std::to_string(token_budget));
    }
    return g;
}

std::string genotype_key(std::string_view prompt) {
    std::string key;
    key.reserve(prompt.size());
    bool pending_space = false;
    for (char c : prompt) {
        if (is_space(c)) {
            pending_space = !key.empty();
            continue;
        }
        if (pending_space) {
            key += ' ';
            pending_space = false;
        }
        key += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return key;
}

std::string genotype_key(const Genotype& genotype) { return genotype_key(genotype.prompt); }

std::optional<PromptParts> parse_prompt(std::string_view prompt) {
    const std::string flat = trim(prompt);
    if (flat.size() < 4 || flat.substr(0, 2) != "A " || flat.back() != '.') return std::nullopt;

    const std::size_t split = flat.find(kConnector);
    if (split == std::string::npos) return std::nullopt;

    PromptParts parts;
    parts.domain_phrase = trim(std::string_view(flat).substr(2, split - 2));
    const std::size_t desc_begin = split + kConnector.size();
    parts.descriptor =
        trim(std::string_view(flat).substr(desc_begin, flat.size() - 1 - desc_begin));
    if (parts.domain_phrase.empty() || parts.descriptor.empty()) return std::nullopt;
    return parts;
}

} // namespace gemt
