#include "gemt/seeds.hpp"

#include <doctest.h>

#include <set>

using namespace gemt;

TEST_CASE("derived seeds are deterministic and stream-separated") {
    CHECK(derive_seed(42, "offspring", 3, 7) == derive_seed(42, "offspring", 3, 7));
    CHECK(derive_seed(42, "offspring", 3, 7) != derive_seed(42, "offspring", 3, 8));
    CHECK(derive_seed(42, "offspring", 3, 7) != derive_seed(42, "offspring", 4, 7));
    CHECK(derive_seed(42, "offspring", 3, 7) != derive_seed(42, "phenotype", 3, 7));
    CHECK(derive_seed(42, "offspring", 3, 7) != derive_seed(43, "offspring", 3, 7));
}

TEST_CASE("derived seeds rarely collide across a stream") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t g = 0; g < 50; ++g)
        for (std::uint64_t i = 0; i < 50; ++i) seen.insert(derive_seed(1, "x", g, i));
    CHECK(seen.size() == 2500);
}

TEST_CASE("rng draws stay in range and replay exactly") {
    Rng a(9), b(9);
    for (int i = 0; i < 1000; ++i) {
        const double u = a.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(b.uniform() == u);
    }
    Rng c(10);
    for (int i = 0; i < 1000; ++i) {
        const std::size_t k = c.uniform_index(7);
        CHECK(k < 7);
    }
}

TEST_CASE("uniform_index covers all buckets") {
    Rng rng(123);
    std::set<std::size_t> seen;
    for (int i = 0; i < 200; ++i) seen.insert(rng.uniform_index(5));
    CHECK(seen == std::set<std::size_t>{0, 1, 2, 3, 4});
}

TEST_CASE("hash64 is stable") {
    CHECK(hash64("wedge") == hash64("wedge"));
    CHECK(hash64("wedge") != hash64("Wedge"));
    CHECK(hash64("") != hash64("a"));
}
