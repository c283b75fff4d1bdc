#pragma once

// The two enumerations of the Walsh functions used throughout: the Paley
// (natural dyadic) order and the Kaczmarz order, which bit-reverses each
// dyadic block [2^A, 2^{A+1}).

#include <cstdint>

#include "wkz/dyadic.hpp"

namespace wkz {

enum class Ordering { Paley, Kaczmarz };

const char* ordering_name(Ordering o);
Ordering ordering_from_name(const std::string& s); // "paley" | "kaczmarz"

// |n| = position of the highest set bit; n = 0 is rejected (callers treat the
// constant function as a special case).
uint32_t dyadic_order(uint64_t n);

// w_n(x) = prod_k r_k(x)^{n_k}; requires n < 2^resolution.
int walsh_paley(uint64_t n, const BitPoint& x);

// kappa_n(x) = r_{|n|}(x) * w_{n - 2^{|n|}}(tau_{|n|}(x)) for n >= 1,
// kappa_0 = 1.
int walsh_kaczmarz(uint64_t n, const BitPoint& x);

// Index map m with kappa_n = w_m: within [2^A, 2^{A+1}) the offset is
// bit-reversed as an A-bit word.  Involution; bijection on each block.
uint64_t kaczmarz_to_paley(uint64_t n);

int walsh(Ordering o, uint64_t n, const BitPoint& x);

// Sign of system function n at a grid cell (cell-index addressing).
int walsh_at_cell(Ordering o, uint64_t n, uint64_t cell, uint32_t n_bits);

} // namespace wkz
