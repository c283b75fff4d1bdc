#pragma once

// Best uniform approximation by step functions on dyadic rectangles.  At a
// dyadic degree 2^L the admissible approximants are exactly the functions
// constant on depth-L cells (per axis), so the optimum is the half
// oscillation over each cell/rectangle and is computed exactly.

#include <cstdint>
#include <string>
#include <vector>

#include "wkz/dyadic.hpp"

namespace wkz {

// E_{2^L,2^L}(f): max over depth-L x depth-L rectangles of (max-min)/2.
double best_dyadic_2d(const GridFunction2D& f, uint32_t L);

// One-sided best approximation: the approximant is a degree-2^L step
// function in the given axis whose "coefficients" vary freely in the other
// variable.  axis = 1 -> steps in x, axis = 2 -> steps in y.
double partial_best(const GridFunction2D& f, uint32_t L, int axis);

enum class SurrogateKind { Full, Axis1, Axis2 };

// Upper bound for the degree-l best approximation: the value at the dyadic
// floor level 2^{floor(log2 l)} (exact when l is a power of two); l >= 1.
double surrogate_E(const GridFunction2D& f, uint64_t l, SurrogateKind kind);

struct B4Check {
    double lhs = 0.0;   // ||f - S_{2^L,2^L} f||_inf
    double rhs = 0.0;   // 2 * E_{2^L,2^L}(f)
    bool holds = false;
};

B4Check check_b4(const GridFunction2D& f, uint32_t L);

struct ApproxProfile {
    std::vector<uint64_t> l;
    std::vector<double> e1, e2, e_dyadic;
};

// Rows l = 1..n_max of the three surrogate values.
ApproxProfile approx_profile(const GridFunction2D& f, uint64_t n_max);
std::string to_csv(const ApproxProfile& p);

} // namespace wkz
