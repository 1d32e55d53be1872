#pragma once

#include <cmath>
#include <cstdint>
#include <iterator>
#include <random>
#include <utility>

// Draws built only on mt19937_64's specified output, so seeded streams match
// across standard libraries (std distributions and std::shuffle do not).
namespace govmine::rnd {

using Engine = std::mt19937_64;

/// Unbiased integer in [0, n).
inline std::uint64_t index(Engine& rng, std::uint64_t n) {
    const std::uint64_t limit = Engine::max() - Engine::max() % n;
    std::uint64_t v;
    do v = rng();
    while (v >= limit);
    return v % n;
}

/// Integer in [lo, hi].
inline int between(Engine& rng, int lo, int hi) {
    return lo + static_cast<int>(index(rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

/// Uniform double in [0, 1).
inline double uniform(Engine& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline bool bernoulli(Engine& rng, double p) { return uniform(rng) < p; }

/// Standard normal (Box-Muller).
inline double normal(Engine& rng) {
    double u1;
    do u1 = uniform(rng);
    while (u1 <= 0.0);
    const double u2 = uniform(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

/// Poisson by inversion (small means).
inline int poisson(Engine& rng, double mean) {
    const double limit = std::exp(-mean);
    int k = 0;
    double p = uniform(rng);
    while (p > limit) {
        ++k;
        p *= uniform(rng);
    }
    return k;
}

template <typename It>
void shuffle(It first, It last, Engine& rng) {
    const auto n = static_cast<std::uint64_t>(std::distance(first, last));
    for (std::uint64_t i = n; i > 1; --i) {
        const auto j = index(rng, i);
        using std::swap;
        swap(*(first + static_cast<std::ptrdiff_t>(i - 1)), *(first + static_cast<std::ptrdiff_t>(j)));
    }
}

}  // namespace govmine::rnd
