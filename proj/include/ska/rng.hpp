#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace ska {

// SplitMix64 finalizer. Used for counter-mode seed derivation so that a
// stream's seed never depends on how many sibling streams were drawn.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Seed for sub-stream `index` of a master seed.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master ^ splitmix64(index + 1));
}

// All randomness in the library flows through this wrapper around
// std::mt19937_64. The engine output is pinned by the C++ standard;
// the distributions are implemented here because the standard leaves
// theirs unspecified bit-for-bit.
class Prng {
public:
    explicit Prng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // Uniform in [0,1) with 53 random bits.
    double next_unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return next_unit() < p; }

    int bit() { return static_cast<int>(eng_() & 1u); }

    // Unbiased uniform draw in [0, n), n >= 1.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
        const std::uint64_t limit = max - max % n;
        std::uint64_t x;
        do {
            x = eng_();
        } while (x >= limit);
        return x % n;
    }

private:
    std::mt19937_64 eng_;
};

} // namespace ska
