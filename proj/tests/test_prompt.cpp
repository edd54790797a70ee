#include "gemt/prompt.hpp"

#include "gemt/errors.hpp"
#include "gemt/seeds.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace gemt;

TEST_CASE("render_prompt follows the fixed template") {
    const Task car = make_task(1, "car");
    const Genotype g = render_prompt(car, "a sleek wedge");
    CHECK(g.prompt == "A car in the shape of a sleek wedge.");
    CHECK(g.task_index == 1);
    CHECK(g.descriptor == "a sleek wedge");
    CHECK(g.token_count == 9);
}

TEST_CASE("the article stays 'A' before vowel-initial domains") {
    const Task airplane = make_task(2, "airplane");
    const Genotype g = render_prompt(airplane, "a mysterious shadow");
    CHECK(g.prompt == "A airplane in the shape of a mysterious shadow.");
}

TEST_CASE("empty and whitespace descriptors are rejected") {
    const Task car = make_task(1, "car");
    CHECK_THROWS_AS(render_prompt(car, ""), EmptyDescriptor);
    CHECK_THROWS_AS(render_prompt(car, "   \t"), EmptyDescriptor);
}

TEST_CASE("token budget is enforced") {
    const Task car = make_task(1, "car");
    std::string descriptor = "a";
    for (int i = 0; i < 80; ++i) descriptor += " word";
    CHECK_THROWS_AS(render_prompt(car, descriptor), TokenBudgetExceeded);
    CHECK_THROWS_AS(render_prompt(car, "a big wedge", 8), TokenBudgetExceeded);
    CHECK_NOTHROW(render_prompt(car, "a big wedge", 9));
}

TEST_CASE("genotype_key folds case and whitespace") {
    CHECK(genotype_key("A car  in the shape of a Wedge.") == "a car in the shape of a wedge.");
    CHECK(genotype_key("A CAR in the shape of a wedge.") ==
          genotype_key("a car in the shape of a wedge."));
    CHECK(genotype_key("  padded   text  ") == "padded text");
}

TEST_CASE("genotype_key is idempotent") {
    const std::string prompts[] = {"A car in the shape of a Wedge.", "  A  X  in the shape of Y. ",
                                   "MIXED Case\tTabs"};
    for (const std::string& p : prompts) CHECK(genotype_key(genotype_key(p)) == genotype_key(p));
}

TEST_CASE("parse_prompt inverts render_prompt") {
    const Task task = make_task(1, "banana car");
    const Genotype g = render_prompt(task, "a long curved hull");
    const auto parts = parse_prompt(g.prompt);
    REQUIRE(parts.has_value());
    CHECK(parts->domain_phrase == "banana car");
    CHECK(parts->descriptor == "a long curved hull");
}

TEST_CASE("render/parse round-trip preserves the genotype key") {
    Rng rng(7);
    const std::vector<std::string> domains = {"car", "airplane", "banana car"};
    const std::vector<std::string> words = {"sleek", "wedge", "low", "wing", "swift", "dart"};
    for (int trial = 0; trial < 200; ++trial) {
        const Task task = make_task(1, domains[rng.uniform_index(domains.size())]);
        std::string descriptor = "a";
        const int n = 1 + static_cast<int>(rng.uniform_index(4));
        for (int i = 0; i < n; ++i) descriptor += " " + words[rng.uniform_index(words.size())];
        const Genotype g = render_prompt(task, descriptor);
        const auto parts = parse_prompt(g.prompt);
        REQUIRE(parts.has_value());
        const Genotype again = render_prompt(make_task(1, parts->domain_phrase), parts->descriptor);
        CHECK(genotype_key(again) == genotype_key(g));
    }
}

TEST_CASE("parse_prompt rejects non-template text") {
    CHECK_FALSE(parse_prompt("a car shaped like a wedge").has_value());
    CHECK_FALSE(parse_prompt("A car in the shape of .").has_value());
    CHECK_FALSE(parse_prompt("").has_value());
    CHECK_FALSE(parse_prompt("A car in the shape of a wedge").has_value());  // missing period
}
