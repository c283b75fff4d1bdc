#pragma once

// The divergence construction: a continuous (finite-resolution) f assembled
// from sign-aligned indicator blocks so the diagonal partial sums at the
// special indices N_A = 1 + 4 + ... + 4^A are large at 0.  All integrals are
// exact rational cell sums.

#include <cstdint>
#include <string>
#include <vector>

#include "wkz/dyadic.hpp"
#include "wkz/phi.hpp"

namespace wkz {

enum class CexMode { Faithful, DeskScale };

struct CounterexampleSpec {
    PhiSpec psi;                   // gauge with psi(u)/u -> inf
    double c_prime = 1.0;          // coupling constant
    uint32_t k_max = 1;
    CexMode mode = CexMode::Faithful;
    std::vector<uint32_t> desk_A;  // DeskScale: strictly increasing A_1..A_{k_max}
    uint64_t b_search_cap = uint64_t(1) << 40; // give up if no B_k below this
    uint32_t max_resolution = 24;  // cap on 2*A_{k_max} + 2
};

struct CexSequences {
    std::vector<double> B;   // B_0 = 0, then B_1..B_{k_max} (integers in Faithful)
    std::vector<uint32_t> A; // A_0 = 0, then A_1..A_{k_max}, strictly increasing
    std::vector<uint64_t> N; // N_{A_k} = (4^{A_k+1} - 1) / 3
    uint32_t resolution = 0; // 2*A_{k_max} + 2
};

CexSequences build_sequences(const CounterexampleSpec& spec);

// One indicator block: the depth-(2A_j+2) interval whose leading bits are
// `pattern`, then a forced 1, then zeros; carries the aligned kernel sign.
struct CexInterval {
    uint32_t j = 0;       // component index
    uint32_t l = 0;       // level within the component
    uint64_t base_cell = 0; // smallest cell index of the interval at full resolution
    uint64_t cells = 0;     // number of full-resolution cells covered
    int sign = 0;           // sgn of the selecting kernel on the interval
};

struct CexFunction {
    uint32_t resolution = 0;
    GridFunction1D f;                       // sum of the components
    std::vector<GridFunction1D> fj;         // component j = 1..k_max (index 0 unused)
    std::vector<std::vector<CexInterval>> intervals; // per component
};

CexFunction build_f(const CexSequences& seq);

// Exact fraction (reduced, den > 0); arithmetic guards with 128-bit products.
struct Rational {
    long long num = 0;
    long long den = 1;

    static Rational of(long long n, long long d);
    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational abs() const;
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool operator<(const Rational& o) const;
    double to_double() const { return double(num) / double(den); }
    std::string str() const;
};

// S_{N_{A_k}}(f; 0) split by component: j = k -> J1, j > k -> J2, j < k -> J3.
struct KReport {
    uint32_t k = 0;
    uint32_t A = 0;
    uint64_t N = 0;
    Rational J1, J2, J3;      // J2, J3 sum absolute values per component
    Rational S;               // signed sum over all components
    bool tail_nonnegative = false; // every j > k term was >= 0
    bool sign_aligned = false;     // kernel sign matches the stored interval signs
    bool kernel_bound_exact = false; // |D| == 2^{2l} - (4^l-1)/3 on every interval
    double c0 = 0.0;          // J1 * k / A_k
};

KReport evaluate_at_zero(const CexSequences& seq, const CexFunction& F, uint32_t k);

// Tensor trace for F(x,y) = f(x) f(y): S_{N,N}(F;0,0) = S_N(f;0)^2, so the
// gauge of the 2D sum is phi(S^2) = psi(|S|).  Everything reported in logs.
struct TensorRow {
    uint32_t k = 0;
    double s_abs = 0.0;         // |S_{N_{A_k}}(f;0)|
    double log_main = 0.0;      // phi(S^2) - log N_{A_k}
    double log_comparator = 0.0; // psi(|S|) - 2 A_k log 2
};

struct TensorReport {
    std::vector<TensorRow> rows;
    bool main_increasing = false;
    bool comparator_increasing = false;
};

TensorReport tensor_divergence(const CounterexampleSpec& spec, const CexSequences& seq,
                               const CexFunction& F);

// Calibration helper: measures c0 on a k=1 probe run at `probe_c_prime` and
// suggests c' = c0 * (1 - J2/J1) (clamped to (0, c0]).  Records, not decides.
struct Calibration {
    double probe_c_prime = 0.0;
    double measured_c0 = 0.0;
    double j2_over_j1 = 0.0;
    double suggested_c_prime = 0.0;
};
Calibration calibrate_c_prime(const PhiSpec& psi, double probe_c_prime, uint32_t k_max,
                              uint32_t max_resolution = 24);

// Scans a geometric grid of c' values, returns those for which the Faithful
// sequences exist, are strictly increasing, and fit the resolution cap.
std::vector<double> feasible_c_prime_scan(const PhiSpec& psi, uint32_t k_max,
                                          uint32_t max_resolution = 24);

} // namespace wkz
