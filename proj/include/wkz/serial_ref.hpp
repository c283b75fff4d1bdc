#pragma once

// Straight-line serial reference implementations of the hot kernels.  These
// favor the definition over speed; the tests pin the parallel versions
// against them and the bench target times the two side by side.

#include <cstdint>
#include <vector>

#include "wkz/dyadic.hpp"
#include "wkz/kernels.hpp"
#include "wkz/spectral.hpp"
#include "wkz/walsh.hpp"

namespace wkz::serial {

// kappa_n by the literal product formula r_{|n|} * prod r_{|n|-1-k}^{n_k}.
int walsh_kaczmarz_product(uint64_t n, const BitPoint& x);

// D_n = sum_{k<n} alpha_k, summed term by term.
std::vector<int64_t> dirichlet_direct(Ordering o, uint64_t n, uint32_t n_bits);

// Running table of dirichlet_direct for all n = 0..n_max (row n holds D_n).
std::vector<std::vector<int64_t>> dirichlet_direct_all(Ordering o, uint64_t n_max, uint32_t n_bits);

// Coefficient c_n = 2^-N sum_cells f * alpha_n, one inner product per n.
Spectrum1D analyze_direct(const GridFunction1D& f, Ordering o);

// Triple loop over cells and block indices; no FWHT shortcut for p = 1.
GlukhovResult glukhov_integral_direct(int p, uint32_t n, Ordering system);

// S_{l,l} via a fresh truncation + synthesis (no incremental border update).
GridFunction2D diagonal_sum_direct(const GridFunction2D& f, Ordering o, uint64_t l);

// Serial single-thread twin of the parallel 2D transform path.
Spectrum2D analyze2d_serial(const GridFunction2D& f, Ordering o);
GridFunction2D synthesize2d_serial(const Spectrum2D& s);

// Serial rectangle scan for the dyadic best approximation.
double best_dyadic_2d_serial(const GridFunction2D& f, uint32_t L);

} // namespace wkz::serial
