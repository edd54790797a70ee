#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace gemt {

// All randomness in the engine flows from one run seed through named,
// hierarchical streams: derive_seed(run_seed, component, generation, index).
// Streams are independent of evaluation order, which is what makes parallel
// fan-out bit-identical to serial execution and makes resume exact.
std::uint64_t derive_seed(std::uint64_t base, std::string_view component,
                          std::uint64_t a = 0, std::uint64_t b = 0);

// Small self-contained generator (splitmix64). We own the bit stream so runs
// reproduce byte-identically regardless of the standard library in use.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();

    // Uniform in [0, 1).
    double uniform();

    // Uniform integer in [0, n). n must be > 0.
    std::size_t uniform_index(std::size_t n);

    // Bernoulli draw with probability p.
    bool chance(double p);

private:
    std::uint64_t state_;
};

// Stable 64-bit hash of a string (FNV-1a). Used for word-level perturbations
// and cache keys; never for adversarial input.
std::uint64_t hash64(std::string_view text);

} // namespace gemt
