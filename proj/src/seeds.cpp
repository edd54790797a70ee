#include "gemt/seeds.hpp"

namespace gemt {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t splitmix64(std::uint64_t& state) {
    state += kGolden;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace

std::uint64_t hash64(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t derive_seed(std::uint64_t base, std::string_view component,
                          std::uint64_t a, std::uint64_t b) {
    std::uint64_t state = base ^ hash64(component);
    std::uint64_t h = splitmix64(state);
    state = h ^ (a * kGolden);
    h = splitmix64(state);
    state = h ^ (b * kGolden);
    return splitmix64(state);
}

std::uint64_t Rng::next_u64() { return splitmix64(state_); }

double Rng::uniform() {
    // 53 significant bits, uniform in [0, 1).
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::size_t Rng::uniform_index(std::size_t n) {
    // Modulo bias is < 2^-50 for any population size we handle.
    return static_cast<std::size_t>(next_u64() % n);
}

bool Rng::chance(double p) { return uniform() < p; }

} // namespace gemt
