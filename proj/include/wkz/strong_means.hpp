#pragma once

// Strong (exponential / gauge / power-block) means of the diagonal partial
// sums, evaluated pointwise on the grid with the streaming diagonal-sum
// pipeline and reported as sup over the grid.

#include <cstdint>
#include <vector>

#include "wkz/dyadic.hpp"
#include "wkz/phi.hpp"
#include "wkz/walsh.hpp"

namespace wkz {

struct StrongMeanResult {
    double sup = 0.0;      // sup over the grid of the mean
    bool overflow = false; // exp overflowed; log_sup carries the log-space value
    double log_sup = 0.0;  // log of sup mean of e^{phi}, reported when overflow
};

// sup_cell (1/n) sum_{l=1}^{n} ( e^{A sqrt|S_{l,l}f - f|} - 1 ).
StrongMeanResult strong_exp_mean(const GridFunction2D& f, double A, uint64_t n,
                                 Ordering o = Ordering::Kaczmarz);

// Same at every checkpoint in `ns` (ascending), one pass over the stream.
std::vector<StrongMeanResult> strong_exp_mean_profile(const GridFunction2D& f, double A,
                                                      const std::vector<uint64_t>& ns,
                                                      Ordering o = Ordering::Kaczmarz);

// sup_cell (1/n) sum_{l=1}^{n} ( e^{phi(|S_{l,l}f - f|)} - 1 ).
StrongMeanResult strong_phi_mean(const GridFunction2D& f, const PhiSpec& phi, uint64_t n,
                                 Ordering o = Ordering::Kaczmarz);

// Diagnostic for the growth condition: samples phi(u)/sqrt(u) on a geometric
// grid; `bounded_tail` compares the tail max against the global max.
struct PhiGrowthDiag {
    double max_ratio = 0.0;
    double tail_ratio = 0.0;
    bool bounded_tail = false;
};
PhiGrowthDiag phi_growth_diagnostic(const PhiSpec& phi);

// sup_cell { 2^{-A} sum_{l=2^A}^{2^{A+1}-1} |S_{l,l}f|^p }^{1/p}, p >= 1.
double strong_p_mean_block(const GridFunction2D& f, double p, uint32_t A,
                           Ordering o = Ordering::Kaczmarz);
// One stream pass, several p at once.
std::vector<double> strong_p_mean_block_multi(const GridFunction2D& f,
                                              const std::vector<double>& ps, uint32_t A,
                                              Ordering o = Ordering::Kaczmarz);

// lhs  = sup_cell (1/n) sum_{l=1}^n |S_{l,l}f - f|^p
// rhs  = (1/n) sum_l E1(l)^p + (1/n) sum_l E2(l)^p   (one-sided surrogates)
struct BaestCheck {
    double lhs = 0.0;
    double rhs_shape = 0.0;
    double ratio = 0.0; // lhs / rhs_shape; 0 when both vanish, inf when only rhs does
};
BaestCheck lemma_baest_check(const GridFunction2D& f, double p, uint64_t n,
                             Ordering o = Ordering::Kaczmarz);

} // namespace wkz
