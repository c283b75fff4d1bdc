#pragma once

// Finite-resolution model of the dyadic group: the direct product of
// countably many copies of Z_2 with the product measure, truncated to the
// first `resolution` coordinates.  A point is the 0/1 sequence
// (x_0, x_1, ...); coordinates at or beyond the resolution are zero.
//
// Coordinate x_0 maps to the MOST significant bit of the cell index, so a
// depth-n dyadic interval is a contiguous range of 2^{N-n} cell indices.

#include <cstdint>
#include <string>
#include <vector>

#include "wkz/errors.hpp"

namespace wkz {

inline constexpr uint32_t kMaxResolution1D = 26; // 2^26 cells, hard cap
inline constexpr uint32_t kMaxResolution2D = 12; // per axis

class BitPoint {
public:
    BitPoint() = default;
    // coords packs x_k into bit k of the word.
    BitPoint(uint32_t resolution, uint64_t coords);
    static BitPoint from_cell(uint32_t resolution, uint64_t cell_index);

    uint32_t resolution() const { return res_; }
    uint64_t coords() const { return coords_; }
    int bit(uint32_t k) const { return k < 64 ? int((coords_ >> k) & 1u) : 0; }
    uint64_t cell() const; // MSB-first cell index

    bool operator==(const BitPoint&) const = default;

private:
    uint32_t res_ = 0;
    uint64_t coords_ = 0;
};

// Coordinatewise addition mod 2 (XOR).  Resolutions must match.
BitPoint group_add(const BitPoint& x, const BitPoint& y);

// r_k(x) = (-1)^{x_k}; requires k < resolution.
int rademacher(uint32_t k, const BitPoint& x);

// Reverses the first A coordinates (x_{A-1},...,x_0,x_A,...); A <= resolution.
BitPoint tau(uint32_t A, const BitPoint& x);

// tau as a map on cell indices at a fixed resolution (reverses the top A bits
// of the cell index).
uint64_t tau_cell(uint32_t A, uint64_t cell, uint32_t n_bits);

struct GridFunction1D {
    uint32_t n_bits = 0;
    std::vector<double> v; // size 2^n_bits, cell order

    GridFunction1D() = default;
    explicit GridFunction1D(uint32_t n_bits_, double fill = 0.0);

    uint64_t size() const { return uint64_t(1) << n_bits; }
    double operator()(const BitPoint& x) const { return v[BitPoint(n_bits, x.coords()).cell()]; }
    double& at_cell(uint64_t c) { return v[c]; }
    double at_cell(uint64_t c) const { return v[c]; }
};

struct GridFunction2D {
    uint32_t n_bits = 0;          // per axis
    std::vector<double> v;        // size 4^n_bits, row-major: v[ix*2^n + iy]

    GridFunction2D() = default;
    explicit GridFunction2D(uint32_t n_bits_, double fill = 0.0);

    uint64_t side() const { return uint64_t(1) << n_bits; }
    uint64_t size() const { return uint64_t(1) << (2 * n_bits); }
    double& at(uint64_t ix, uint64_t iy) { return v[(ix << n_bits) | iy]; }
    double at(uint64_t ix, uint64_t iy) const { return v[(ix << n_bits) | iy]; }
};

namespace detail {
// Fixed-chunk pairwise sum; result independent of the thread count.
double det_sum(const double* a, uint64_t n);
}

// Mean value = integral against the product measure (cells weigh 2^-N / 4^-N).
double integrate(const GridFunction1D& f);
double integrate(const GridFunction2D& f);

// L^p norm for p in (0, inf); p = inf -> sup norm.  Rejects p <= 0.
double norm(const GridFunction1D& f, double p);
double norm(const GridFunction2D& f, double p);

// ---- serialization ----
// CSV: one value per line in cell order (row-major for 2D), '#' comments.
// JSON: {"resolution": N, "values": [...]}.
std::string to_csv(const GridFunction1D& f);
std::string to_csv(const GridFunction2D& f);
std::string to_json(const GridFunction1D& f);
std::string to_json(const GridFunction2D& f);
GridFunction1D grid1d_from_csv(const std::string& text);
GridFunction2D grid2d_from_csv(const std::string& text);
GridFunction1D grid1d_from_json(const std::string& text);
GridFunction2D grid2d_from_json(const std::string& text);

} // namespace wkz
