#pragma once

// In-place fast Walsh-Hadamard butterflies and the bit permutations that
// connect the natural (sign = parity of i & j) indexing to the cell layout
// used by the grid types.

#include <cstdint>
#include <vector>

namespace wkz {

// y[i] = sum_j (-1)^{popcount(i & j)} x[j], in place, O(2^n * n).
void fwht(double* a, uint32_t n_bits);
void fwht(int64_t* a, uint32_t n_bits);

// Reverse the low `bits` bits of v.
uint64_t reverse_bits(uint64_t v, uint32_t bits);

// In-place permutation a[i] <-> a[rev(i)].
void bitrev_permute(double* a, uint32_t n_bits);
void bitrev_permute(int64_t* a, uint32_t n_bits);

// Table of reverse_bits(i, n_bits) for i < 2^n_bits.
std::vector<uint32_t> bitrev_table(uint32_t n_bits);

} // namespace wkz
