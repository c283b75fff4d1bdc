#include "wkz/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "wkz/approx.hpp"
#include "wkz/counterexample.hpp"
#include "wkz/errors.hpp"
#include "wkz/io.hpp"
#include "wkz/kernels.hpp"
#include "wkz/rng.hpp"
#include "wkz/serial_ref.hpp"
#include "wkz/spectral.hpp"
#include "wkz/strong_means.hpp"
#include "wkz/walsh.hpp"

namespace wkz {
namespace {

// pinned tolerances
constexpr double kFitSlack = 1e-9;      // fitted-bound checks: rel slack
constexpr double kParsevalTol = 0x1.0p-40;
constexpr double kExactSlack = 1e-12;   // "exact" double comparisons built from max/min
constexpr double kC0Floor = 0.5;        // required mass of the aligned term

uint64_t mix(uint64_t seed, uint64_t tag) {
    uint64_t x = seed + 0x9e3779b97f4a7c15ull * (tag + 1);
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdull;
    x ^= x >> 29;
    return x;
}

std::string num(double v) { return fmt_double(v, 6); }

// 1: digit-expansion Dirichlet kernels against literal partial sums
CriterionResult c_paley_identity(uint64_t) {
    const uint32_t N = 10;
    const uint64_t n_max = 1024;
    uint64_t cells = uint64_t(1) << N;
    std::vector<int64_t> direct(cells, 0);
    uint64_t bad = 0, first = 0;
    for (uint64_t n = 0; n <= n_max; ++n) {
        if (n)
            for (uint64_t c = 0; c < cells; ++c)
                direct[c] += walsh_at_cell(Ordering::Paley, n - 1, c, N);
        if (dirichlet_cells(Ordering::Paley, n, N) != direct) {
            if (!bad) first = n;
            ++bad;
        }
    }
    CriterionResult r;
    r.pass = bad == 0;
    r.detail = "digit-expansion kernel vs term-by-term sum, n <= 1024, resolution 10: " +
               std::to_string(bad) + " mismatches";
    if (bad) r.detail += " (first at n = " + std::to_string(first) + ")";
    return r;
}

// 2: split-form kernels in the rearranged ordering against literal sums
CriterionResult c_kaczmarz_identity(uint64_t) {
    const uint32_t N = 10;
    const uint64_t n_max = 1024;
    uint64_t cells = uint64_t(1) << N;
    std::vector<int64_t> direct(cells, 0);
    uint64_t bad = 0, first = 0;
    for (uint64_t n = 0; n <= n_max; ++n) {
        if (n)
            for (uint64_t c = 0; c < cells; ++c)
                direct[c] += walsh_at_cell(Ordering::Kaczmarz, n - 1, c, N);
        if (dirichlet_cells(Ordering::Kaczmarz, n, N) != direct) {
            if (!bad) first = n;
            ++bad;
        }
    }
    CriterionResult r;
    r.pass = bad == 0;
    r.detail = "split-form kernel vs term-by-term sum, n <= 1024, resolution 10: " +
               std::to_string(bad) + " mismatches";
    if (bad) r.detail += " (first at n = " + std::to_string(first) + ")";
    return r;
}

// 3: the index map carries one ordering onto the other pointwise
CriterionResult c_rearrangement(uint64_t) {
    const uint32_t N = 12;
    const uint64_t count = uint64_t(1) << N;
    uint64_t map_bad = 0;
    std::vector<char> seen(count, 0);
    for (uint64_t n = 0; n < count; ++n) {
        uint64_t m = kaczmarz_to_paley(n);
        if (m >= count || kaczmarz_to_paley(m) != n) ++map_bad;
        if (n >= 1 && m >= 1 && dyadic_order(m) != dyadic_order(n)) ++map_bad;
        if (m < count) seen[m] = 1;
    }
    for (uint64_t m = 0; m < count; ++m)
        if (!seen[m]) ++map_bad;

    int64_t point_bad = 0;
#pragma omp parallel for reduction(+ : point_bad) schedule(dynamic, 64)
    for (int64_t ni = 0; ni < int64_t(count); ++ni) {
        uint64_t n = uint64_t(ni);
        uint64_t m = kaczmarz_to_paley(n);
        for (uint64_t c = 0; c < count; ++c) {
            BitPoint x = BitPoint::from_cell(N, c);
            int a = walsh_kaczmarz(n, x);
            if (a != walsh_paley(m, x) || a != serial::walsh_kaczmarz_product(n, x))
                ++point_bad;
        }
    }
    CriterionResult r;
    r.pass = map_bad == 0 && point_bad == 0;
    r.detail = "index map involution/block bijection: " + std::to_string(map_bad) +
               " defects; pointwise agreement over n < 4096, resolution 12: " +
               std::to_string(point_bad) + " mismatches";
    return r;
}

// 4: transforms invert exactly on integer data; energy identity on random data
CriterionResult c_transforms(uint64_t seed) {
    CriterionResult r;
    bool exact = true;
    for (Ordering o : {Ordering::Paley, Ordering::Kaczmarz}) {
        GridFunction1D f = random_int_grid1d(10, mix(seed, 0x41), 8);
        exact &= synthesize(analyze(f, o)).v == f.v;
        GridFunction1D g = random_int_grid1d(7, mix(seed, 0x42), 8);
        exact &= synthesize(analyze(g, o)).v == g.v;
        GridFunction2D h = random_int_grid2d(5, mix(seed, 0x43), 8);
        exact &= synthesize(analyze(h, o)).v == h.v;
    }
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        GridFunction1D f = random_grid1d(10, mix(seed, 0x4400 + uint64_t(i)));
        Spectrum1D s = analyze(f, Ordering::Paley);
        double lhs = norm(f, 2.0);
        lhs *= lhs;
        double rhs = 0.0;
        for (double c : s.c) rhs += c * c;
        double rel = std::fabs(lhs - rhs) / std::max({lhs, rhs, 1e-300});
        worst = std::max(worst, rel);
    }
    r.pass = exact && worst <= kParsevalTol;
    r.detail = std::string("integer round trips exact: ") + (exact ? "yes" : "NO") +
               "; worst energy-identity error over 100 draws = " + num(worst) +
               " (allowed " + num(kParsevalTol) + ")";
    return r;
}

// 5: block oscillation integrals against the factorial bounds
CriterionResult c_block_integrals(uint64_t) {
    auto fact = [](int p) { double f = 1; for (int i = 2; i <= p; ++i) f *= i; return f; };
    double cw = 0.0, ck = 0.0;
    for (uint32_t n = 1; n <= 21; ++n) {
        cw = std::max(cw, glukhov_integral(1, n, Ordering::Paley).value);
        ck = std::max(ck, glukhov_integral(1, n, Ordering::Kaczmarz).value / 2.0);
    }
    int viol = 0;
    double worst = 0.0;
    for (int p = 2; p <= 3; ++p)
        for (uint32_t n = 1; uint64_t(p) * n <= 21; ++n) {
            double vp = glukhov_integral(p, n, Ordering::Paley).value;
            double bp = cw * fact(p);
            double vk = glukhov_integral(p, n, Ordering::Kaczmarz).value;
            double bk = ck * fact(p) * std::ldexp(1.0, p);
            worst = std::max({worst, vp / bp, vk / bk});
            if (vp > bp * (1.0 + kFitSlack)) ++viol;
            if (vk > bk * (1.0 + kFitSlack)) ++viol;
        }
    CriterionResult r;
    r.pass = viol == 0;
    r.detail = "constants fitted at p = 1 (plain " + num(cw) + ", rearranged " + num(ck) +
               "); worst bound ratio at p in {2,3} = " + num(worst) + "; violations: " +
               std::to_string(viol);
    return r;
}

// 6: block p-means against the (p+1)^2 growth shape with one fitted constant
CriterionResult c_block_mean_shape(uint64_t seed) {
    const std::vector<double> ps = {1, 2, 4, 8};
    const uint32_t as[] = {3, 4, 5};
    std::vector<std::vector<double>> vals; // per (f, A): the four means
    for (int i = 0; i < 20; ++i) {
        GridFunction2D f = random_grid2d_unit(8, mix(seed, 0x600 + uint64_t(i)));
        for (uint32_t a : as) vals.push_back(strong_p_mean_block_multi(f, ps, a));
    }
    double fitted = 0.0;
    for (const std::vector<double>& v : vals) fitted = std::max(fitted, v[0] / 4.0);
    int viol = 0;
    double worst = 0.0;
    for (const std::vector<double>& v : vals)
        for (size_t pi = 1; pi < ps.size(); ++pi) {
            double shaped = v[pi] / ((ps[pi] + 1.0) * (ps[pi] + 1.0));
            worst = std::max(worst, shaped / fitted);
            if (shaped > fitted * (1.0 + kFitSlack)) ++viol;
        }
    CriterionResult r;
    r.pass = viol == 0;
    r.detail = "20 sup-norm-one draws at resolution 8, blocks A in {3,4,5}: constant fitted on"
               " p = 1 is " + num(fitted) + "; worst shaped ratio at p in {2,4,8} = " +
               num(worst) + "; violations: " + std::to_string(viol);
    return r;
}

// 7: exponential means dominated by the averaged sqrt best-approximation sums
CriterionResult c_exp_mean_domination(uint64_t seed) {
    const std::vector<uint64_t> ns = {8, 16, 32, 64, 128, 256};
    int viol = 0;
    double worst = 0.0;
    bool fit_ok = true;
    for (int i = 0; i < 10; ++i) {
        GridFunction2D f = random_grid2d_unit(8, mix(seed, 0x700 + uint64_t(i)));
        ApproxProfile prof = approx_profile(f, 256);
        std::vector<double> rhs(ns.size());
        {
            double run = 0.0;
            size_t ci = 0;
            for (uint64_t l = 1; l <= 256; ++l) {
                run += std::sqrt(prof.e1[l - 1]) + std::sqrt(prof.e2[l - 1]);
                while (ci < ns.size() && ns[ci] == l) rhs[ci++] = run / double(l);
            }
        }
        for (double a : {0.5, 1.0}) {
            std::vector<StrongMeanResult> lhs = strong_exp_mean_profile(f, a, ns);
            if (rhs[0] <= 0.0 || lhs[0].overflow) {
                fit_ok = false;
                continue;
            }
            double c = lhs[0].sup / rhs[0];
            for (size_t k = 1; k < ns.size(); ++k) {
                double bound = c * rhs[k];
                worst = std::max(worst, bound > 0 ? lhs[k].sup / bound : 0.0);
                if (lhs[k].overflow || lhs[k].sup > bound * (1.0 + kFitSlack) + kExactSlack)
                    ++viol;
            }
        }
    }

    // once every frequency of f is inside the sum, each new term is exactly zero
    GridFunction2D cf(6, 0.75);
    bool const_zero = strong_exp_mean(cf, 1.0, 1).sup == 0.0 &&
                      strong_exp_mean(cf, 1.0, 8).sup == 0.0 &&
                      strong_exp_mean(cf, 1.0, 64).sup == 0.0;
    Spectrum2D sp;
    sp.ordering = Ordering::Kaczmarz;
    sp.n_bits = 6;
    sp.c.assign(4096, 0.0);
    {
        Rng rng(mix(seed, 0x74));
        for (uint64_t k = 0; k < 4; ++k)
            for (uint64_t i = 0; i < 4; ++i) sp.c[(k << 6) | i] = double(rng.int_range(-8, 8)) / 16.0;
    }
    GridFunction2D fp = synthesize(sp);
    double m4 = strong_exp_mean(fp, 1.0, 4).sup;
    double m16 = strong_exp_mean(fp, 1.0, 16).sup;
    double m64 = strong_exp_mean(fp, 1.0, 64).sup;
    bool stalled = (4.0 * m4 == 16.0 * m16) && (16.0 * m16 == 64.0 * m64);

    CriterionResult r;
    r.pass = fit_ok && viol == 0 && const_zero && stalled;
    r.detail = "constant fitted at n = 8 per draw and gauge; worst ratio at n in {16..256} = " +
               num(worst) + "; violations: " + std::to_string(viol) +
               "; constant function mean exactly zero: " + (const_zero ? "yes" : "NO") +
               "; low-degree tail exactly zero: " + (stalled ? "yes" : "NO");
    return r;
}

// 8: the two rectangle inequalities, exact at every depth
CriterionResult c_rect_inequalities(uint64_t seed) {
    int viol_split = 0, viol_sum = 0;
    for (int i = 0; i < 100; ++i) {
        GridFunction2D f = random_grid2d(6, mix(seed, 0x800 + uint64_t(i)));
        for (uint32_t L = 0; L <= 6; ++L) {
            double e = best_dyadic_2d(f, L);
            double e1 = partial_best(f, L, 1);
            double e2 = partial_best(f, L, 2);
            if (e > 2.0 * (e1 + e2) + kExactSlack) ++viol_split;
            if (!check_b4(f, L).holds) ++viol_sum;
        }
    }
    CriterionResult r;
    r.pass = viol_split == 0 && viol_sum == 0;
    r.detail = "100 draws at resolution 6, depths 0..6: two-sided split violations " +
               std::to_string(viol_split) + ", partial-sum-error violations " +
               std::to_string(viol_sum);
    return r;
}

// 9: exact structure of the divergence construction at desk scale
CriterionResult c_divergence_skeleton(uint64_t) {
    CounterexampleSpec cs;
    cs.k_max = 2;
    cs.mode = CexMode::DeskScale;
    cs.desk_A = {2, 5};
    cs.max_resolution = 24;
    CexSequences seq = build_sequences(cs);
    CexFunction F = build_f(seq);
    KReport r1 = evaluate_at_zero(seq, F, 1);
    KReport r2 = evaluate_at_zero(seq, F, 2);

    bool j3_zero = r1.J3.num == 0 && r2.J3.num == 0;
    bool aligned = r1.sign_aligned && r2.sign_aligned;
    bool bound_exact = r1.kernel_bound_exact && r2.kernel_bound_exact;
    bool c0_ok = r1.c0 >= kC0Floor && r2.c0 >= kC0Floor;
    double c_fit = r1.J2.to_double() * 1.0; // fitted on k = 1
    bool tail_ok = r2.J2.to_double() <= c_fit / 2.0 + kExactSlack;

    CriterionResult r;
    r.pass = j3_zero && aligned && bound_exact && c0_ok && tail_ok;
    r.detail = "aligned terms J1 = " + r1.J1.str() + ", " + r2.J1.str() +
               "; coarse terms exactly zero: " + (j3_zero ? "yes" : "NO") +
               "; signs aligned: " + (aligned ? "yes" : "NO") +
               "; kernel values exact on designated intervals: " + (bound_exact ? "yes" : "NO") +
               "; measured c0 = " + num(r1.c0) + ", " + num(r2.c0) + " (floor " + num(kC0Floor) +
               ": " + (c0_ok ? "met" : "NOT met") + ")" +
               "; tail decay J2 <= fit/k: " + (tail_ok ? "yes" : "NO");
    return r;
}

// 10: direction of the divergence trace under the calibrated coupling
CriterionResult c_divergence_trace(uint64_t) {
    PhiSpec psi = PhiSpec::parse("u*log1p(u)");
    Calibration cal = calibrate_c_prime(psi, 3.5, 2, 24);
    std::vector<double> feas = feasible_c_prime_scan(psi, 2, 24);

    CriterionResult r;
    if (feas.empty()) {
        r.pass = false;
        r.detail = "probe c0 = " + num(cal.measured_c0) + ", suggested coupling " +
                   num(cal.suggested_c_prime) + "; no feasible coupling under resolution 24";
        return r;
    }
    double used = feas.back();
    for (double v : feas)
        if (v >= cal.suggested_c_prime) {
            used = v;
            break;
        }
    CounterexampleSpec cs;
    cs.psi = psi;
    cs.c_prime = used;
    cs.k_max = 2;
    cs.mode = CexMode::Faithful;
    cs.max_resolution = 24;
    CexSequences seq = build_sequences(cs);
    CexFunction F = build_f(seq);
    TensorReport rep = tensor_divergence(cs, seq, F);

    std::string rows;
    for (const TensorRow& row : rep.rows) {
        if (!rows.empty()) rows += ", ";
        rows += "k=" + std::to_string(row.k) + ": |S| = " + num(row.s_abs) +
                ", log-ratio = " + num(row.log_comparator);
    }
    r.pass = rep.comparator_increasing;
    r.detail = "gauge u*log1p(u); probe c0 = " + num(cal.measured_c0) +
               ", suggested coupling " + num(cal.suggested_c_prime) + ", used " + num(used) +
               " (nearest feasible); " + rows + "; strictly increasing: " +
               (rep.comparator_increasing ? "yes" : "NO");
    return r;
}

struct Criterion {
    const char* name;
    CriterionResult (*fn)(uint64_t);
    double limit_s; // 0 = no budget
};

const Criterion kCriteria[10] = {
    {"paley-kernel-digit-identity", c_paley_identity, 10.0},
    {"kaczmarz-kernel-split-identity", c_kaczmarz_identity, 10.0},
    {"ordering-rearrangement-map", c_rearrangement, 30.0},
    {"transform-round-trip-parseval", c_transforms, 0.0},
    {"block-integral-bounds", c_block_integrals, 300.0},
    {"block-mean-growth-shape", c_block_mean_shape, 0.0},
    {"exp-mean-domination", c_exp_mean_domination, 0.0},
    {"rectangle-approx-inequalities", c_rect_inequalities, 0.0},
    {"divergence-skeleton-exact", c_divergence_skeleton, 60.0},
    {"divergence-trace-direction", c_divergence_trace, 0.0},
};

CriterionResult run_one(int id, uint64_t seed) {
    const Criterion& c = kCriteria[id - 1];
    auto t0 = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
        r = c.fn(seed);
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.id = id;
    r.name = c.name;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.limit_s > 0.0 && r.seconds > c.limit_s) {
        r.pass = false;
        r.detail += "; time budget of " + num(c.limit_s) + "s exceeded";
    }
    return r;
}

std::pair<std::vector<CriterionResult>, std::string> battery(uint64_t seed) {
    std::vector<CriterionResult> out;
    std::string canonical;
    for (int id = 1; id <= 10; ++id) {
        out.push_back(run_one(id, seed));
        canonical += format_acceptance_line(out.back());
    }
    return {std::move(out), std::move(canonical)};
}

CriterionResult replay_compare(uint64_t seed, const std::string& first_canonical) {
    auto t0 = std::chrono::steady_clock::now();
    std::string again = battery(seed).second;
    CriterionResult r;
    r.id = 11;
    r.name = "deterministic-replay";
    r.pass = again == first_canonical;
    if (r.pass) {
        r.detail = "two full replays agree (" + std::to_string(again.size()) + " bytes)";
    } else {
        size_t i = 0;
        while (i < again.size() && i < first_canonical.size() && again[i] == first_canonical[i])
            ++i;
        r.detail = "replays diverge at byte " + std::to_string(i);
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

} // namespace

std::string format_acceptance_line(const CriterionResult& r) {
    char head[96];
    std::snprintf(head, sizeof head, "c%02d %s %s: ", r.id, r.pass ? "PASS" : "FAIL",
                  r.name.c_str());
    return std::string(head) + r.detail + "\n";
}

std::vector<CriterionResult> run_acceptance(uint64_t seed, std::optional<int> only,
                                            std::string& report) {
    std::vector<CriterionResult> out;
    if (only && (*only < 1 || *only > 11))
        throw ConfigError("acceptance: criterion id must be in 1..11");

    if (only && *only <= 10) {
        out.push_back(run_one(*only, seed));
        report += format_acceptance_line(out.back());
    } else if (only) { // just the replay check
        std::string first = battery(seed).second;
        out.push_back(replay_compare(seed, first));
        report += format_acceptance_line(out.back());
    } else {
        auto [results, canonical] = battery(seed);
        out = std::move(results);
        report += canonical;
        out.push_back(replay_compare(seed, canonical));
        report += format_acceptance_line(out.back());
    }

    size_t npass = 0;
    for (const CriterionResult& r : out)
        if (r.pass) ++npass;
    report += "acceptance: " + std::to_string(npass) + "/" + std::to_string(out.size()) +
              " passed\n";
    return out;
}

} // namespace wkz
