#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "tmfrac/profile.hpp"

namespace testutil {

// Portable uniform doubles from mt19937_64 (distribution-free, so sequences
// are identical across standard library implementations).
struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed) : eng(seed) {}
    double uniform() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }
};

// Random non-increasing nonnegative profile with zero tail on the given grid.
inline tmfrac::RadialProfile random_profile(const tmfrac::RadialGrid& grid, Rng& rng) {
    const std::size_t n = grid.size();
    std::vector<double> v(n, 0.0);
    const std::size_t support =
        1 + static_cast<std::size_t>(rng.uniform() * static_cast<double>(n - 2));
    double acc = 0.0;
    for (std::size_t i = support; i-- > 0;) {
        acc += rng.uniform() * rng.uniform();
        v[i] = acc;
    }
    v[n - 1] = 0.0;
    tmfrac::RadialProfile u;
    u.grid = grid;
    u.values = std::move(v);
    return u;
}

} // namespace testutil
