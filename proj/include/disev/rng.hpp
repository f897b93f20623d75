#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace disev {

// All randomness in the library flows through mt19937_64 plus the hand
// mappings below. The engine's output sequence is fixed by the standard and
// the mappings avoid implementation-defined std::*_distribution behavior,
// so seeded runs are byte-identical across platforms.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Stable per-item sub-seed, so parallel generation order cannot change
// outputs: seed -> hash(item_id) -> mix.
inline std::uint64_t subseed(std::uint64_t seed, std::string_view key, std::uint64_t stream = 0) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (char c : key) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return splitmix64(splitmix64(seed ^ h) + stream);
}

inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Unbiased integer in [0, n).
inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {  // inclusive
    return lo + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

// Uniform draw from the probability simplex (Dirichlet(1,...,1)) via
// normalized exponentials.
inline std::vector<double> uniform_simplex(std::mt19937_64& rng, std::size_t bins) {
    std::vector<double> draws(bins);
    double total = 0.0;
    for (auto& d : draws) {
        d = -std::log(1.0 - uniform01(rng));
        total += d;
    }
    for (auto& d : draws) d /= total;
    return draws;
}

}  // namespace disev
