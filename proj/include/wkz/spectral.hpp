#pragma once

// Analysis/synthesis between grid functions and coefficient arrays in either
// ordering.  Both directions are butterfly transforms, O(2^N * N); the
// Kaczmarz ordering adds a per-block bit-reversal permutation of the
// coefficient indices (never a dense matrix apply).

#include <cstdint>
#include <functional>
#include <vector>

#include "wkz/dyadic.hpp"
#include "wkz/walsh.hpp"

namespace wkz {

inline constexpr uint32_t kDefaultMaxBits1D = 12;
inline constexpr uint32_t kDefaultMaxBits2D = 10;

struct Spectrum1D {
    Ordering ordering = Ordering::Paley;
    uint32_t n_bits = 0;
    std::vector<double> c; // c[n] multiplies system function n

    uint64_t size() const { return uint64_t(1) << n_bits; }
};

struct Spectrum2D {
    Ordering ordering = Ordering::Paley;
    uint32_t n_bits = 0;           // per axis
    std::vector<double> c;         // c[k*2^N + i] multiplies alpha_k(x) alpha_i(y)

    uint64_t side() const { return uint64_t(1) << n_bits; }
    double& at(uint64_t k, uint64_t i) { return c[(k << n_bits) | i]; }
    double at(uint64_t k, uint64_t i) const { return c[(k << n_bits) | i]; }
};

Spectrum1D analyze(const GridFunction1D& f, Ordering o, uint32_t max_bits = kDefaultMaxBits1D);
GridFunction1D synthesize(const Spectrum1D& s);
Spectrum2D analyze(const GridFunction2D& f, Ordering o, uint32_t max_bits = kDefaultMaxBits2D);
GridFunction2D synthesize(const Spectrum2D& s);

// Re-express the same function in the other ordering (permutes coefficients).
Spectrum1D reorder(const Spectrum1D& s, Ordering target);
Spectrum2D reorder(const Spectrum2D& s, Ordering target);

// S_{n,m}(f) = sum_{k<n, i<m} c(k,i) alpha_k(x) alpha_i(y); n, m <= 2^N.
GridFunction2D partial_sum_2d(const GridFunction2D& f, uint64_t n, uint64_t m, Ordering o,
                              uint32_t max_bits = kDefaultMaxBits2D);

// Streams S_{1,1}, S_{2,2}, ..., S_{n_max,n_max} with O(4^N) work per step
// plus an O(2^N * N) border synthesis, instead of a fresh transform per l.
class DiagonalSums {
public:
    DiagonalSums(const GridFunction2D& f, Ordering o, uint64_t n_max,
                 uint32_t max_bits = kDefaultMaxBits2D);

    bool next();               // advance; returns false past n_max
    uint64_t l() const { return cur_; }
    const std::vector<double>& grid() const { return S_; } // current S_{l,l}
    uint32_t n_bits() const { return N_; }

private:
    uint32_t N_ = 0;
    uint64_t n_max_ = 0;
    uint64_t cur_ = 0;
    Ordering ord_ = Ordering::Paley;
    std::vector<double> C_;    // spectrum in `ord_`
    std::vector<double> S_;
    std::vector<double> u_, v_, a_;
    std::vector<uint32_t> rev_;

    void border_row(uint64_t b);
};

// JSON: {"ordering": ..., "resolution": N, "coefficients": [...]}.
std::string to_json(const Spectrum1D& s);
std::string to_json(const Spectrum2D& s);
Spectrum1D spectrum1d_from_json(const std::string& text);
Spectrum2D spectrum2d_from_json(const std::string& text);

} // namespace wkz
