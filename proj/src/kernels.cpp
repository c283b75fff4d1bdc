#include "wkz/kernels.hpp"

#include <bit>
#include <cmath>

#include "wkz/fwht.hpp"

namespace wkz {

static void require_index(uint64_t n, uint32_t n_bits, const char* who) {
    if (n > (uint64_t(1) << n_bits))
        throw std::invalid_argument(std::string(who) + ": index beyond grid resolution");
}

std::vector<int64_t> dirichlet_dyadic_cells(uint32_t n, uint32_t n_bits) {
    if (n > n_bits)
        throw std::invalid_argument("dirichlet_dyadic: depth beyond resolution");
    std::vector<int64_t> out(uint64_t(1) << n_bits, 0);
    uint64_t span = uint64_t(1) << (n_bits - n);
    for (uint64_t c = 0; c < span; ++c) out[c] = int64_t(1) << n;
    return out;
}

// Paley Dirichlet kernel through the digit expansion
//   D_n = w_n * sum_{j : n_j = 1} w_{2^j} D_{2^j}.
static std::vector<int64_t> dirichlet_paley_cells(uint64_t n, uint32_t n_bits) {
    require_index(n, n_bits, "dirichlet_paley");
    uint64_t cells = uint64_t(1) << n_bits;
    std::vector<int64_t> out(cells, 0);
    if (n == 0) return out;
    if ((n & (n - 1)) == 0) return dirichlet_dyadic_cells(uint32_t(std::countr_zero(n)), n_bits);

#pragma omp parallel for schedule(static)
    for (int64_t ci = 0; ci < int64_t(cells); ++ci) {
        uint64_t c = uint64_t(ci);
        int64_t s = 0;
        for (uint64_t rest = n; rest;) {
            uint32_t j = uint32_t(std::countr_zero(rest));
            rest &= rest - 1;
            if (c < (uint64_t(1) << (n_bits - j))) {
                // r_j at this cell is the bit of x_j = cell bit n_bits-1-j
                int64_t term = int64_t(1) << j;
                s += ((c >> (n_bits - 1 - j)) & 1) ? -term : term;
            }
        }
        if (s != 0) {
            int w = (std::popcount(n & reverse_bits(c, n_bits)) & 1) ? -1 : 1;
            out[c] = w * s;
        }
    }
    return out;
}

// Kaczmarz Dirichlet kernel: D_{2^A + j} = D_{2^A} + r_A * (D_j o tau_A).
static std::vector<int64_t> dirichlet_kaczmarz_cells(uint64_t n, uint32_t n_bits) {
    require_index(n, n_bits, "dirichlet_kaczmarz");
    uint64_t cells = uint64_t(1) << n_bits;
    std::vector<int64_t> out(cells, 0);
    if (n == 0) return out;
    if ((n & (n - 1)) == 0) return dirichlet_dyadic_cells(uint32_t(std::countr_zero(n)), n_bits);

    uint32_t A = dyadic_order(n);
    uint64_t j = n - (uint64_t(1) << A);
    std::vector<int64_t> dj = dirichlet_paley_cells(j, n_bits);
    uint64_t span = uint64_t(1) << (n_bits - A);
#pragma omp parallel for schedule(static)
    for (int64_t ci = 0; ci < int64_t(cells); ++ci) {
        uint64_t c = uint64_t(ci);
        int64_t base = c < span ? (int64_t(1) << A) : 0;
        int rA = ((c >> (n_bits - 1 - A)) & 1) ? -1 : 1;
        out[c] = base + rA * dj[tau_cell(A, c, n_bits)];
    }
    return out;
}

std::vector<int64_t> dirichlet_cells(Ordering o, uint64_t n, uint32_t n_bits) {
    return o == Ordering::Paley ? dirichlet_paley_cells(n, n_bits)
                                : dirichlet_kaczmarz_cells(n, n_bits);
}

static GridFunction1D to_grid(std::vector<int64_t> cells, uint32_t n_bits) {
    GridFunction1D g(n_bits);
    for (uint64_t i = 0; i < cells.size(); ++i) g.v[i] = double(cells[i]);
    return g;
}

GridFunction1D dirichlet_dyadic(uint32_t n, uint32_t n_bits) {
    return to_grid(dirichlet_dyadic_cells(n, n_bits), n_bits);
}
GridFunction1D dirichlet_paley(uint64_t n, uint32_t n_bits) {
    return to_grid(dirichlet_paley_cells(n, n_bits), n_bits);
}
GridFunction1D dirichlet_kaczmarz(uint64_t n, uint32_t n_bits) {
    return to_grid(dirichlet_kaczmarz_cells(n, n_bits), n_bits);
}

// sum_{k<n} D_k = sum_{m<=n-2} (n-1-m) alpha_m, synthesized with one
// integer butterfly.
std::vector<int64_t> fejer_scaled_cells(Ordering o, uint64_t n, uint32_t n_bits) {
    if (n == 0)
        throw std::invalid_argument("fejer: n must be >= 1");
    require_index(n, n_bits, "fejer");
    uint64_t cells = uint64_t(1) << n_bits;
    std::vector<int64_t> pc(cells, 0);
    for (uint64_t m = 0; m + 1 < n; ++m) {
        uint64_t pidx = (o == Ordering::Paley) ? m : kaczmarz_to_paley(m);
        pc[pidx] = int64_t(n - 1 - m);
    }
    fwht(pc.data(), n_bits);
    std::vector<int64_t> out(cells);
    for (uint64_t c = 0; c < cells; ++c) out[c] = pc[reverse_bits(c, n_bits)];
    return out;
}

GridFunction1D fejer(Ordering o, uint64_t n, uint32_t n_bits) {
    std::vector<int64_t> s = fejer_scaled_cells(o, n, n_bits);
    GridFunction1D g(n_bits);
    for (uint64_t i = 0; i < s.size(); ++i) g.v[i] = double(s[i]) / double(n);
    return g;
}

KernelTable kernel_table(Ordering o, uint32_t n_bits, uint64_t l_min, uint64_t l_max,
                         uint64_t budget_cells) {
    if (l_min > l_max)
        throw std::invalid_argument("kernel_table: empty range");
    require_index(l_max, n_bits, "kernel_table");
    uint64_t cells = uint64_t(1) << n_bits;
    uint64_t rows = l_max - l_min + 1;
    if (rows * cells > budget_cells)
        throw BudgetError("kernel_table exceeds cell budget", rows * cells, budget_cells);

    KernelTable t;
    t.system = o;
    t.n_bits = n_bits;
    t.l_min = l_min;
    t.l_max = l_max;
    t.vals.resize(rows * cells);

    std::vector<int64_t> cur = dirichlet_cells(o, l_min, n_bits);
    std::copy(cur.begin(), cur.end(), t.vals.begin());
    for (uint64_t l = l_min + 1; l <= l_max; ++l) {
        uint64_t m = (o == Ordering::Paley) ? l - 1 : kaczmarz_to_paley(l - 1);
        int64_t* dst = t.vals.data() + (l - l_min) * cells;
#pragma omp parallel for schedule(static)
        for (int64_t ci = 0; ci < int64_t(cells); ++ci) {
            uint64_t c = uint64_t(ci);
            int sgn = (std::popcount(m & reverse_bits(c, n_bits)) & 1) ? -1 : 1;
            cur[c] += sgn;
            dst[c] = cur[c];
        }
    }
    return t;
}

static double factorial(int p) {
    double f = 1.0;
    for (int i = 2; i <= p; ++i) f *= i;
    return f;
}

GlukhovResult glukhov_integral(int p, uint32_t n, Ordering system, uint64_t budget_cells) {
    if (p < 1 || n < 1)
        throw std::invalid_argument("glukhov_integral: need p >= 1, n >= 1");
    uint64_t cells = uint64_t(1) << (uint64_t(p) * n);
    if (uint64_t(p) * n >= 63 || cells > budget_cells)
        throw BudgetError("glukhov_integral cell budget", cells, budget_cells);

    uint64_t side = uint64_t(1) << n;
    uint64_t block = side >> 1; // l in [2^{n-1}, 2^n)
    int64_t acc = 0;

    if (p == 1) {
        // sum over the block of D_l = sum_m c_m alpha_m with integer weights;
        // one butterfly instead of 2^{n-1} kernel rows.
        std::vector<int64_t> pc(side, 0);
        for (uint64_t m = 0; m < side; ++m) {
            int64_t w = (m < block) ? int64_t(block) : int64_t(side - 1 - m);
            uint64_t pidx = (system == Ordering::Paley) ? m : kaczmarz_to_paley(m);
            pc[pidx] = w;
        }
        fwht(pc.data(), n);
#pragma omp parallel for reduction(+ : acc) schedule(static)
        for (int64_t c = 0; c < int64_t(side); ++c) acc += std::abs(pc[uint64_t(c)]);
    } else {
        KernelTable t = kernel_table(system, n, block, side - 1, ~uint64_t(0));
        uint64_t mask = side - 1;
#pragma omp parallel for reduction(+ : acc) schedule(static)
        for (int64_t xi = 0; xi < int64_t(cells); ++xi) {
            uint64_t x = uint64_t(xi);
            int64_t inner = 0;
            for (uint64_t l = block; l < side; ++l) {
                const int64_t* row = t.row(l);
                int64_t prod = 1;
                uint64_t rest = x;
                for (int k = 0; k < p; ++k) {
                    prod *= row[rest & mask];
                    rest >>= n;
                }
                inner += prod;
            }
            acc += std::abs(inner);
        }
    }

    GlukhovResult r;
    r.p = p;
    r.n = n;
    r.system = system;
    r.numerator = acc;
    r.log2_den = uint32_t(p) * n + n;
    r.value = std::ldexp(double(acc), -int(r.log2_den));
    r.bound_shape = factorial(p) * (system == Ordering::Kaczmarz ? std::ldexp(1.0, p) : 1.0);
    r.ratio = r.value / r.bound_shape;
    return r;
}

GlukhovWeighted glukhov_weighted(const std::vector<double>& alpha, int p, double q,
                                 uint64_t budget_cells) {
    if (alpha.empty() || p < 1)
        throw std::invalid_argument("glukhov_weighted: need weights and p >= 1");
    if (!(q > 1.0) || !(q <= 2.0))
        throw std::invalid_argument("glukhov_weighted: q must lie in (1, 2]");
    uint64_t M = alpha.size();
    uint32_t m_bits = 0;
    while ((uint64_t(1) << m_bits) < M) ++m_bits;
    uint64_t cells = uint64_t(1) << (uint64_t(p) * m_bits);
    if (uint64_t(p) * m_bits >= 63 || cells > budget_cells)
        throw BudgetError("glukhov_weighted cell budget", cells, budget_cells);

    KernelTable t = kernel_table(Ordering::Paley, m_bits, 1, M, ~uint64_t(0));
    uint64_t mask = (uint64_t(1) << m_bits) - 1;

    constexpr uint64_t kChunk = 4096;
    uint64_t chunks = (cells + kChunk - 1) / kChunk;
    std::vector<double> partial(chunks, 0.0);
#pragma omp parallel for schedule(static)
    for (int64_t ch = 0; ch < int64_t(chunks); ++ch) {
        uint64_t lo = uint64_t(ch) * kChunk;
        uint64_t hi = lo + kChunk < cells ? lo + kChunk : cells;
        double s = 0.0;
        for (uint64_t x = lo; x < hi; ++x) {
            double inner = 0.0;
            for (uint64_t l = 1; l <= M; ++l) {
                const int64_t* row = t.row(l);
                double prod = alpha[l - 1];
                uint64_t rest = x;
                for (int k = 0; k < p; ++k) {
                    prod *= double(row[rest & mask]);
                    rest >>= m_bits;
                }
                inner += prod;
            }
            s += std::fabs(inner);
        }
        partial[uint64_t(ch)] = s;
    }
    double total = 0.0;
    for (double s : partial) total += s;

    GlukhovWeighted r;
    r.lhs = std::ldexp(total, -int(uint32_t(p) * m_bits)) / double(M);
    double sq = 0.0;
    for (double a : alpha) sq += std::pow(std::fabs(a), q);
    r.rhs_shape = std::pow(sq, 1.0 / q) / std::pow(double(M), 1.0 / q);
    r.ratio = r.rhs_shape > 0.0 ? r.lhs / r.rhs_shape : 0.0;
    return r;
}

} // namespace wkz
