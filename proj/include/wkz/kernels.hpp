#pragma once

// Dirichlet and Fejer kernels for both orderings, plus the block-sum
// oscillation integrals.  Kernel values are integers and are computed with
// integer arithmetic; the closed forms used are
//   D_{2^n}      = 2^n on the depth-n interval at 0, else 0,
//   D_n (Paley)  = w_n * sum_j n_j w_{2^j} D_{2^j},
//   D_{2^A+j} (Kaczmarz) = D_{2^A} + r_A * (D_j Paley) o tau_A,  0 <= j < 2^A.

#include <cstdint>
#include <vector>

#include "wkz/dyadic.hpp"
#include "wkz/walsh.hpp"

namespace wkz {

inline constexpr uint64_t kDefaultBudgetCells = uint64_t(1) << 21;

// Integer kernel rows on the 2^n_bits grid (cell order).
std::vector<int64_t> dirichlet_cells(Ordering o, uint64_t n, uint32_t n_bits);
std::vector<int64_t> dirichlet_dyadic_cells(uint32_t n, uint32_t n_bits); // D_{2^n}

GridFunction1D dirichlet_dyadic(uint32_t n, uint32_t n_bits);
GridFunction1D dirichlet_paley(uint64_t n, uint32_t n_bits);
GridFunction1D dirichlet_kaczmarz(uint64_t n, uint32_t n_bits);

// K_n = (1/n) sum_{k<n} D_k; n >= 1.  n*K_n is integer-valued.
GridFunction1D fejer(Ordering o, uint64_t n, uint32_t n_bits);
std::vector<int64_t> fejer_scaled_cells(Ordering o, uint64_t n, uint32_t n_bits);

// Rows l = l_min..l_max of D_l on the 2^n_bits grid.
struct KernelTable {
    Ordering system = Ordering::Paley;
    uint32_t n_bits = 0;
    uint64_t l_min = 0;
    uint64_t l_max = 0;
    std::vector<int64_t> vals; // (l_max-l_min+1) x 2^n_bits, row-major

    const int64_t* row(uint64_t l) const { return vals.data() + (l - l_min) * (uint64_t(1) << n_bits); }
};

KernelTable kernel_table(Ordering o, uint32_t n_bits, uint64_t l_min, uint64_t l_max,
                         uint64_t budget_cells = kDefaultBudgetCells);

// (1/2^n) * Integral over G^p of | sum_{l=2^{n-1}}^{2^n-1} prod_k D_l(x_k) |.
// Exact: value = numerator / 2^{p*n + n}.
struct GlukhovResult {
    int p = 0;
    uint32_t n = 0;
    Ordering system = Ordering::Paley;
    int64_t numerator = 0;
    uint32_t log2_den = 0;
    double value = 0.0;
    double bound_shape = 0.0; // p! for Paley, p! * 2^p for Kaczmarz
    double ratio = 0.0;       // value / bound_shape
};

GlukhovResult glukhov_integral(int p, uint32_t n, Ordering system,
                               uint64_t budget_cells = kDefaultBudgetCells);

// (1/n) * Integral over G^p of | sum_{l=1}^n alpha_l prod_k D_l(x_k) |
// against the Holder-shape comparator n^{-1/q} * (sum |alpha|^q)^{1/q}.
struct GlukhovWeighted {
    double lhs = 0.0;
    double rhs_shape = 0.0;
    double ratio = 0.0;
};

GlukhovWeighted glukhov_weighted(const std::vector<double>& alpha, int p, double q,
                                 uint64_t budget_cells = kDefaultBudgetCells);

} // namespace wkz
