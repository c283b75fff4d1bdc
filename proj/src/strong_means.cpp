#include "wkz/strong_means.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "wkz/approx.hpp"
#include "wkz/spectral.hpp"

namespace wkz {

// |u|^p, with repeated squaring when p is a small integer (the common case)
static double powp(double u, double p) {
    int ip = int(p);
    if (double(ip) == p && ip >= 1 && ip <= 64) {
        double r = 1.0, b = u;
        for (int e = ip; e; e >>= 1) {
            if (e & 1) r *= b;
            b *= b;
        }
        return r;
    }
    return std::pow(u, p);
}

static double grid_max(const std::vector<double>& v) {
    double mx = -std::numeric_limits<double>::infinity();
#pragma omp parallel for reduction(max : mx) schedule(static)
    for (int64_t i = 0; i < int64_t(v.size()); ++i) mx = std::max(mx, v[uint64_t(i)]);
    return mx;
}

static std::vector<StrongMeanResult> phi_mean_stream(const GridFunction2D& f,
                                                     const PhiSpec& phi,
                                                     const std::vector<uint64_t>& ns,
                                                     Ordering o) {
    if (ns.empty())
        throw std::invalid_argument("strong mean: no checkpoints");
    for (size_t i = 0; i < ns.size(); ++i)
        if (ns[i] == 0 || (i > 0 && ns[i] <= ns[i - 1]))
            throw std::invalid_argument("strong mean: checkpoints must be ascending, >= 1");

    uint64_t n_last = ns.back();
    DiagonalSums ds(f, o, n_last);
    size_t size = f.v.size();
    std::vector<double> acc(size, 0.0); // sum of expm1(phi(.))
    // Log-domain shadow of the same stream. Materialized only once a term grows
    // past exp-range concerns; until then the linear accumulator is the record
    // (sum of exp(e) over the first l steps is exactly acc + l).
    std::vector<double> m, s;
    bool tracking = false;
    bool saw_big = false;

    std::vector<StrongMeanResult> out;
    size_t ci = 0;
    for (uint64_t l = 1; l <= n_last; ++l) {
        ds.next();
        const std::vector<double>& S = ds.grid();
        double emax = 0.0;
        if (tracking) {
#pragma omp parallel for reduction(max : emax) schedule(static)
            for (int64_t i = 0; i < int64_t(size); ++i) {
                uint64_t c = uint64_t(i);
                double e = phi(std::fabs(S[c] - f.v[c]));
                emax = std::max(emax, e);
                acc[c] += std::expm1(e);
                if (s[c] == 0.0) {
                    m[c] = e;
                    s[c] = 1.0;
                } else if (e > m[c]) {
                    s[c] = s[c] * std::exp(m[c] - e) + 1.0;
                    m[c] = e;
                } else {
                    s[c] += std::exp(e - m[c]);
                }
            }
        } else {
#pragma omp parallel for reduction(max : emax) schedule(static)
            for (int64_t i = 0; i < int64_t(size); ++i) {
                uint64_t c = uint64_t(i);
                double e = phi(std::fabs(S[c] - f.v[c]));
                emax = std::max(emax, e);
                acc[c] += std::expm1(e);
            }
            if (emax > 300.0) {
                tracking = true;
                m.assign(size, 0.0);
                s.assign(size, 0.0);
#pragma omp parallel for schedule(static)
                for (int64_t i = 0; i < int64_t(size); ++i) {
                    uint64_t c = uint64_t(i);
                    double h = acc[c] + double(l);
                    if (h > 0.0) {
                        m[c] = std::log(h);
                        s[c] = 1.0;
                    }
                }
            }
        }
        if (emax > 700.0) saw_big = true;

        while (ci < ns.size() && ns[ci] == l) {
            StrongMeanResult r;
            double mx = grid_max(acc);
            r.sup = mx / double(l);
            r.overflow = saw_big || !std::isfinite(mx);
            if (r.overflow) {
                if (tracking) {
                    double lmx = -std::numeric_limits<double>::infinity();
#pragma omp parallel for reduction(max : lmx) schedule(static)
                    for (int64_t i = 0; i < int64_t(size); ++i) {
                        uint64_t c = uint64_t(i);
                        if (s[c] > 0.0) lmx = std::max(lmx, m[c] + std::log(s[c]));
                    }
                    r.log_sup = lmx - std::log(double(l));
                } else {
                    r.log_sup = std::log(mx + double(l)) - std::log(double(l));
                }
            }
            out.push_back(r);
            ++ci;
        }
    }
    return out;
}

StrongMeanResult strong_exp_mean(const GridFunction2D& f, double A, uint64_t n, Ordering o) {
    if (!(A > 0.0))
        throw std::invalid_argument("strong_exp_mean: A must be > 0");
    PhiSpec phi = PhiSpec::scale(A).compose(PhiSpec::power(0.5));
    return phi_mean_stream(f, phi, {n}, o).front();
}

std::vector<StrongMeanResult> strong_exp_mean_profile(const GridFunction2D& f, double A,
                                                      const std::vector<uint64_t>& ns,
                                                      Ordering o) {
    if (!(A > 0.0))
        throw std::invalid_argument("strong_exp_mean: A must be > 0");
    PhiSpec phi = PhiSpec::scale(A).compose(PhiSpec::power(0.5));
    return phi_mean_stream(f, phi, ns, o);
}

StrongMeanResult strong_phi_mean(const GridFunction2D& f, const PhiSpec& phi, uint64_t n,
                                 Ordering o) {
    return phi_mean_stream(f, phi, {n}, o).front();
}

PhiGrowthDiag phi_growth_diagnostic(const PhiSpec& phi) {
    PhiGrowthDiag d;
    double head = 0.0;
    bool finite = true;
    for (int k = -20; k <= 60; ++k) {
        double u = std::ldexp(1.0, k);
        double ratio = phi(u) / std::sqrt(u);
        if (!std::isfinite(ratio)) finite = false;
        d.max_ratio = std::max(d.max_ratio, ratio);
        if (k >= 50)
            d.tail_ratio = std::max(d.tail_ratio, ratio);
        else
            head = std::max(head, ratio);
    }
    d.bounded_tail = finite && d.tail_ratio <= head * (1.0 + 1e-9);
    return d;
}

std::vector<double> strong_p_mean_block_multi(const GridFunction2D& f,
                                              const std::vector<double>& ps, uint32_t A,
                                              Ordering o) {
    if (ps.empty())
        throw std::invalid_argument("strong_p_mean_block: no exponents");
    for (double p : ps)
        if (!(p >= 1.0))
            throw std::invalid_argument("strong_p_mean_block: p must be >= 1");

    uint64_t l_lo = uint64_t(1) << A;
    uint64_t l_hi = (uint64_t(1) << (A + 1)) - 1;
    DiagonalSums ds(f, o, l_hi);
    size_t size = f.v.size();
    std::vector<std::vector<double>> acc(ps.size(), std::vector<double>(size, 0.0));
    for (uint64_t l = 1; l <= l_hi; ++l) {
        ds.next();
        if (l < l_lo) continue;
        const std::vector<double>& S = ds.grid();
        for (size_t pi = 0; pi < ps.size(); ++pi) {
            double p = ps[pi];
            std::vector<double>& a = acc[pi];
#pragma omp parallel for schedule(static)
            for (int64_t i = 0; i < int64_t(size); ++i) {
                uint64_t c = uint64_t(i);
                a[c] += powp(std::fabs(S[c]), p);
            }
        }
    }
    std::vector<double> out(ps.size());
    for (size_t pi = 0; pi < ps.size(); ++pi) {
        double mx = grid_max(acc[pi]);
        out[pi] = std::pow(mx / double(l_lo), 1.0 / ps[pi]);
    }
    return out;
}

double strong_p_mean_block(const GridFunction2D& f, double p, uint32_t A, Ordering o) {
    return strong_p_mean_block_multi(f, {p}, A, o).front();
}

BaestCheck lemma_baest_check(const GridFunction2D& f, double p, uint64_t n, Ordering o) {
    if (!(p >= 1.0) || n == 0)
        throw std::invalid_argument("lemma_baest_check: need p >= 1, n >= 1");
    DiagonalSums ds(f, o, n);
    size_t size = f.v.size();
    std::vector<double> acc(size, 0.0);
    for (uint64_t l = 1; l <= n; ++l) {
        ds.next();
        const std::vector<double>& S = ds.grid();
#pragma omp parallel for schedule(static)
        for (int64_t i = 0; i < int64_t(size); ++i) {
            uint64_t c = uint64_t(i);
            acc[c] += powp(std::fabs(S[c] - f.v[c]), p);
        }
    }
    BaestCheck r;
    r.lhs = grid_max(acc) / double(n);

    ApproxProfile prof = approx_profile(f, n);
    double s1 = 0.0, s2 = 0.0;
    for (uint64_t l = 0; l < n; ++l) {
        s1 += std::pow(prof.e1[l], p);
        s2 += std::pow(prof.e2[l], p);
    }
    r.rhs_shape = s1 / double(n) + s2 / double(n);
    if (r.lhs == 0.0 && r.rhs_shape == 0.0)
        r.ratio = 0.0;
    else if (r.rhs_shape == 0.0)
        r.ratio = std::numeric_limits<double>::infinity();
    else
        r.ratio = r.lhs / r.rhs_shape;
    return r;
}

} // namespace wkz
