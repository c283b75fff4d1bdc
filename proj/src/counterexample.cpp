#include "wkz/counterexample.hpp"

#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "wkz/errors.hpp"
#include "wkz/fwht.hpp"
#include "wkz/walsh.hpp"

namespace wkz {

// ---- exact fractions ------------------------------------------------------

static __int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

static Rational make128(__int128 n, __int128 d) {
    if (d == 0) throw std::invalid_argument("rational: zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    __int128 g = gcd128(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    constexpr __int128 lim = __int128(INT64_MAX);
    if (n > lim || n < -lim || d > lim)
        throw std::overflow_error("rational: value out of 64-bit range");
    Rational r;
    r.num = (long long)(n);
    r.den = (long long)(d);
    return r;
}

Rational Rational::of(long long n, long long d) { return make128(n, d); }

Rational Rational::operator+(const Rational& o) const {
    return make128(__int128(num) * o.den + __int128(o.num) * den, __int128(den) * o.den);
}

Rational Rational::operator-(const Rational& o) const {
    return make128(__int128(num) * o.den - __int128(o.num) * den, __int128(den) * o.den);
}

Rational Rational::abs() const {
    Rational r = *this;
    if (r.num < 0) r.num = -r.num;
    return r;
}

bool Rational::operator<(const Rational& o) const {
    return __int128(num) * o.den < __int128(o.num) * den;
}

std::string Rational::str() const {
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

// ---- exact pointwise kernels ----------------------------------------------
// Points are coordinate words: bit i of `coords` is x_i.  All values are
// integers, evaluated in O(log^2 n) from the dyadic building blocks.

static uint64_t reverse_low(uint64_t coords, uint32_t a) {
    uint64_t low = coords & ((a < 64 ? (uint64_t(1) << a) : 0) - 1);
    return (coords ^ low) | reverse_bits(low, a);
}

// D_n in the plain ordering: w_n(t) * sum_{i : n_i = 1} r_i(t) 2^i [t in I_i(0)]
static int64_t dir_paley_point(uint64_t n, uint64_t coords) {
    if (n == 0) return 0;
    int64_t s = 0;
    for (uint64_t rest = n; rest;) {
        uint32_t i = uint32_t(std::countr_zero(rest));
        rest &= rest - 1;
        if ((coords & ((uint64_t(1) << i) - 1)) == 0) {
            int64_t term = int64_t(1) << i;
            s += ((coords >> i) & 1) ? -term : term;
        }
    }
    if (s == 0) return 0;
    return (std::popcount(n & coords) & 1) ? -s : s;
}

// D_{2^A + j} = D_{2^A} + r_A (D_j o tau_A)
static int64_t dir_kacz_point(uint64_t n, uint64_t coords) {
    if (n == 0) return 0;
    uint32_t A = uint32_t(std::bit_width(n) - 1);
    int64_t v = ((coords & ((uint64_t(1) << A) - 1)) == 0) ? (int64_t(1) << A) : 0;
    uint64_t j = n - (uint64_t(1) << A);
    if (j) {
        int64_t w = dir_paley_point(j, reverse_low(coords, A));
        v += ((coords >> A) & 1) ? -w : w;
    }
    return v;
}

// ---- sequences -------------------------------------------------------------

static uint64_t special_index(uint32_t A) {
    // 1 + 4 + ... + 4^A
    return ((uint64_t(1) << (2 * (A + 1))) - 1) / 3;
}

// minimal integer b > lo with psi(b)/b > threshold; exhaustive over the first
// 2^20 candidates, then geometric probing + bisection (the ratio is monotone
// out there for every admissible gauge)
static double find_b(const PhiSpec& psi, uint64_t lo, double threshold, uint64_t cap) {
    auto ok = [&](uint64_t b) { return psi(double(b)) / double(b) > threshold; };
    uint64_t first = lo + 1;
    uint64_t scan_hi = first + (uint64_t(1) << 20);
    for (uint64_t b = first; b <= scan_hi && b <= cap; ++b)
        if (ok(b)) return double(b);
    uint64_t prev = scan_hi;
    for (uint64_t b = scan_hi; b <= cap / 2;) {
        b *= 2;
        if (ok(b)) {
            uint64_t hi = b;
            while (prev + 1 < hi) {
                uint64_t mid = prev + (hi - prev) / 2;
                if (ok(mid)) hi = mid; else prev = mid;
            }
            return double(hi);
        }
        prev = b;
    }
    throw BudgetError("no admissible block size below the search cap", cap + 1, cap);
}

CexSequences build_sequences(const CounterexampleSpec& spec) {
    if (spec.k_max == 0)
        throw ConfigError("counterexample: k_max must be >= 1");
    if (!(spec.c_prime > 0.0))
        throw ConfigError("counterexample: c' must be > 0");

    CexSequences seq;
    seq.B.assign(spec.k_max + 1, 0.0);
    seq.A.assign(spec.k_max + 1, 0);

    if (spec.mode == CexMode::DeskScale) {
        if (spec.desk_A.size() != spec.k_max)
            throw ConfigError("counterexample: desk_A must list A_1..A_k_max");
        for (uint32_t k = 1; k <= spec.k_max; ++k) {
            uint32_t a = spec.desk_A[k - 1];
            if (a <= seq.A[k - 1])
                throw ConfigError("counterexample: desk_A must be strictly increasing, >= 1");
            seq.A[k] = a;
        }
    } else {
        for (uint32_t k = 1; k <= spec.k_max; ++k) {
            double b = find_b(spec.psi, uint64_t(2.0 * seq.B[k - 1]),
                              5.0 * double(k) / spec.c_prime, spec.b_search_cap);
            seq.B[k] = b;
            double a = std::floor(double(k) * b / spec.c_prime);
            if (a <= double(seq.A[k - 1]) || a > 1e9)
                throw ConfigError("counterexample: block exponents failed to increase");
            seq.A[k] = uint32_t(a);
        }
    }

    uint32_t res = 2 * seq.A[spec.k_max] + 2;
    uint32_t cap = std::min(spec.max_resolution, kMaxResolution1D);
    if (res > cap) {
        uint64_t need = res < 64 ? (uint64_t(1) << res) : ~uint64_t(0);
        throw BudgetError("counterexample resolution cap", need, uint64_t(1) << cap);
    }
    seq.resolution = res;

    seq.N.resize(spec.k_max + 1);
    for (uint32_t k = 0; k <= spec.k_max; ++k) seq.N[k] = special_index(seq.A[k]);
    return seq;
}

// ---- the function -----------------------------------------------------------

CexFunction build_f(const CexSequences& seq) {
    uint32_t R = seq.resolution;
    uint32_t k_max = uint32_t(seq.A.size()) - 1;
    CexFunction F;
    F.resolution = R;
    F.f = GridFunction1D(R);
    F.fj.resize(k_max + 1);
    F.intervals.resize(k_max + 1);

    for (uint32_t j = 1; j <= k_max; ++j) {
        F.fj[j] = GridFunction1D(R);
        uint32_t Aj = seq.A[j];
        uint32_t d = 2 * Aj + 2;
        for (uint32_t l = seq.A[j - 1]; l < Aj; ++l) {
            uint32_t free_bits = 2 * Aj - 2 * l - 1;
            for (uint64_t p = 0; p < (uint64_t(1) << free_bits); ++p) {
                uint64_t coords = p | (uint64_t(1) << free_bits);
                int64_t v = dir_kacz_point(seq.N[j], coords);
                int sgn = (v > 0) - (v < 0);
                CexInterval iv;
                iv.j = j;
                iv.l = l;
                iv.base_cell = reverse_bits(coords, R);
                iv.cells = uint64_t(1) << (R - d);
                iv.sign = sgn;
                F.intervals[j].push_back(iv);
                double amp = double(sgn) / double(j + 1);
                for (uint64_t c = iv.base_cell; c < iv.base_cell + iv.cells; ++c)
                    F.fj[j].v[c] += amp;
            }
        }
        for (uint64_t c = 0; c < F.f.v.size(); ++c) F.f.v[c] += F.fj[j].v[c];
    }
    return F;
}

// ---- the partial sum at zero -------------------------------------------------

KReport evaluate_at_zero(const CexSequences& seq, const CexFunction& F, uint32_t k) {
    uint32_t k_max = uint32_t(seq.A.size()) - 1;
    if (k < 1 || k > k_max)
        throw std::invalid_argument("evaluate_at_zero: k out of range");
    uint32_t R = seq.resolution;
    uint64_t n = seq.N[k];
    uint32_t d_k = 2 * seq.A[k] + 2;

    KReport rep;
    rep.k = k;
    rep.A = seq.A[k];
    rep.N = n;
    rep.tail_nonnegative = true;
    rep.sign_aligned = true;
    rep.kernel_bound_exact = true;
    Rational zero = Rational::of(0, 1);
    rep.J1 = rep.J2 = rep.J3 = rep.S = zero;

    for (uint32_t j = 1; j <= k_max; ++j) {
        uint32_t d_j = 2 * seq.A[j] + 2;
        long long num = 0;
        if (j >= k) {
            // the kernel is constant on each component interval
            for (const CexInterval& iv : F.intervals[j]) {
                uint64_t coords = reverse_bits(iv.base_cell, R);
                int64_t v = dir_kacz_point(n, coords);
                num += iv.sign * v;
                if (j == k) {
                    if (v == 0 || iv.sign == 0 || ((v > 0) != (iv.sign > 0)))
                        rep.sign_aligned = false;
                    int64_t expect = ((int64_t(1) << (2 * iv.l + 1)) + 1) / 3;
                    if ((v < 0 ? -v : v) != expect) rep.kernel_bound_exact = false;
                }
            }
            Rational contrib = Rational::of(num, (long long)(j + 1) << d_j);
            rep.S = rep.S + contrib;
            if (j == k)
                rep.J1 = contrib;
            else {
                if (contrib.num < 0) rep.tail_nonnegative = false;
                rep.J2 = rep.J2 + contrib.abs();
            }
        } else {
            // coarser component: resolve the kernel on depth-d_k subcells
            for (const CexInterval& iv : F.intervals[j]) {
                uint64_t coords = reverse_bits(iv.base_cell, R);
                uint64_t sub = uint64_t(1) << (d_k - d_j);
                int64_t tsum = 0;
#pragma omp parallel for reduction(+ : tsum) schedule(static)
                for (int64_t e = 0; e < int64_t(sub); ++e)
                    tsum += dir_kacz_point(n, coords | (uint64_t(e) << d_j));
                num += iv.sign * tsum;
            }
            Rational contrib = Rational::of(num, (long long)(j + 1) << d_k);
            rep.S = rep.S + contrib;
            rep.J3 = rep.J3 + contrib.abs();
        }
    }
    rep.c0 = rep.J1.to_double() * double(k) / double(seq.A[k]);
    return rep;
}

// ---- tensor trace -------------------------------------------------------------

TensorReport tensor_divergence(const CounterexampleSpec& spec, const CexSequences& seq,
                               const CexFunction& F) {
    uint32_t k_max = uint32_t(seq.A.size()) - 1;
    PhiSpec phi = spec.psi.compose(PhiSpec::power(0.5));
    TensorReport rep;
    for (uint32_t k = 1; k <= k_max; ++k) {
        KReport kr = evaluate_at_zero(seq, F, k);
        double s = kr.S.to_double();
        TensorRow row;
        row.k = k;
        row.s_abs = std::fabs(s);
        row.log_main = phi(s * s) - std::log(double(seq.N[k]));
        row.log_comparator = spec.psi(row.s_abs) - 2.0 * double(seq.A[k]) * std::log(2.0);
        rep.rows.push_back(row);
    }
    auto increasing = [&](double TensorRow::* field) {
        if (rep.rows.size() < 2) return false;
        for (size_t i = 1; i < rep.rows.size(); ++i)
            if (!(rep.rows[i].*field > rep.rows[i - 1].*field)) return false;
        return true;
    };
    rep.main_increasing = increasing(&TensorRow::log_main);
    rep.comparator_increasing = increasing(&TensorRow::log_comparator);
    return rep;
}

// ---- calibration ---------------------------------------------------------------

Calibration calibrate_c_prime(const PhiSpec& psi, double probe_c_prime, uint32_t k_max,
                              uint32_t max_resolution) {
    CounterexampleSpec spec;
    spec.psi = psi;
    spec.c_prime = probe_c_prime;
    spec.k_max = k_max;
    spec.mode = CexMode::Faithful;
    spec.max_resolution = max_resolution;
    CexSequences seq = build_sequences(spec);
    CexFunction F = build_f(seq);
    KReport rep = evaluate_at_zero(seq, F, 1);

    Calibration cal;
    cal.probe_c_prime = probe_c_prime;
    cal.measured_c0 = rep.c0;
    double j1 = rep.J1.to_double();
    cal.j2_over_j1 = j1 > 0.0 ? rep.J2.to_double() / j1 : 0.0;
    double s = cal.measured_c0 * (1.0 - cal.j2_over_j1);
    s = std::min(std::max(s, cal.measured_c0 * 1e-3), cal.measured_c0);
    cal.suggested_c_prime = s;
    return cal;
}

std::vector<double> feasible_c_prime_scan(const PhiSpec& psi, uint32_t k_max,
                                          uint32_t max_resolution) {
    std::vector<double> ok;
    for (int i = -64; i <= 64; ++i) {
        double c = std::pow(2.0, double(i) / 8.0);
        CounterexampleSpec spec;
        spec.psi = psi;
        spec.c_prime = c;
        spec.k_max = k_max;
        spec.mode = CexMode::Faithful;
        spec.max_resolution = max_resolution;
        try {
            build_sequences(spec);
            ok.push_back(c);
        } catch (const std::exception&) {
        }
    }
    return ok;
}

} // namespace wkz
