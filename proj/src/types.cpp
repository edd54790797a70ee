#include "gemt/types.hpp"

#include "gemt/errors.hpp"

#include <utility>

namespace gemt {

Task make_task(int index, std::string domain_phrase, std::string label) {
    Task task;
    task.index = index;
    task.domain_phrase = std::move(domain_phrase);
    task.label = label.empty() ? "A " + task.domain_phrase : std::move(label);
    return task;
}

std::string_view to_string(Origin origin) {
    switch (origin) {
    case Origin::initial: return "initial";
    case Origin::self_mate: return "self_mate";
    case Origin::same_domain: return "same_domain";
    case Origin::cross_domain: return "cross_domain";
    case Origin::survivor: return "survivor";
    }
    return "initial";
}

Origin origin_from_string(std::string_view text) {
    if (text == "initial") return Origin::initial;
    if (text == "self_mate") return Origin::self_mate;
    if (text == "same_domain") return Origin::same_domain;
    if (text == "cross_domain") return Origin::cross_domain;
    if (text == "survivor") return Origin::survivor;
    throw ParseError("unknown origin: " + std::string(text));
}

void FitnessRecord::set_factorial_ranks(const Eigen::VectorXi& ranks) {
    if (ranks.size() == 0) throw MissingFitness("empty factorial rank vector");
    factorial_ranks = ranks;
    scalar_fitness = ranks.minCoeff();
}

} // namespace gemt
