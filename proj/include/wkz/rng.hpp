#pragma once

// Deterministic random helpers.  mt19937_64 output is pinned by the
// standard; the uniform mapping here avoids std::uniform_real_distribution,
// whose stream is implementation-defined.

#include <cstdint>
#include <random>

#include "wkz/dyadic.hpp"

namespace wkz {

class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t next_u64() { return eng_(); }
    double unit() { return double(eng_() >> 11) * 0x1.0p-53; } // [0,1)
    double sym() { return 2.0 * unit() - 1.0; }                // [-1,1)
    uint64_t below(uint64_t m) { return eng_() % m; }
    int64_t int_range(int64_t lo, int64_t hi) { return lo + int64_t(below(uint64_t(hi - lo + 1))); }

private:
    std::mt19937_64 eng_;
};

GridFunction1D random_grid1d(uint32_t n_bits, uint64_t seed);
GridFunction2D random_grid2d(uint32_t n_bits, uint64_t seed);
// Values in [-1,1] rescaled so the sup norm is exactly 1.
GridFunction2D random_grid2d_unit(uint32_t n_bits, uint64_t seed);
// Integer-valued grids (entries in [-range, range]).
GridFunction1D random_int_grid1d(uint32_t n_bits, uint64_t seed, int64_t range);
GridFunction2D random_int_grid2d(uint32_t n_bits, uint64_t seed, int64_t range);

} // namespace wkz
