#include "wkz/approx.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "wkz/io.hpp"

namespace wkz {

// Depth-L intervals are contiguous cell ranges (depth bits sit at the top of
// the cell index), so every rectangle scan below is a straight block scan.

static void require_depth(const GridFunction2D& f, uint32_t L, const char* who) {
    if (L > f.n_bits)
        throw std::invalid_argument(std::string(who) + ": depth beyond grid resolution");
}

double best_dyadic_2d(const GridFunction2D& f, uint32_t L) {
    require_depth(f, L, "best_dyadic_2d");
    uint32_t N = f.n_bits;
    uint64_t blocks = uint64_t(1) << L;
    uint64_t span = uint64_t(1) << (N - L);
    double worst = 0.0;
#pragma omp parallel for collapse(2) reduction(max : worst) schedule(static)
    for (int64_t qx = 0; qx < int64_t(blocks); ++qx)
        for (int64_t qy = 0; qy < int64_t(blocks); ++qy) {
            double lo = f.v[(uint64_t(qx) * span) << N | (uint64_t(qy) * span)];
            double hi = lo;
            for (uint64_t x = uint64_t(qx) * span; x < (uint64_t(qx) + 1) * span; ++x) {
                const double* row = f.v.data() + (x << N) + uint64_t(qy) * span;
                for (uint64_t y = 0; y < span; ++y) {
                    lo = std::min(lo, row[y]);
                    hi = std::max(hi, row[y]);
                }
            }
            worst = std::max(worst, hi - lo);
        }
    return worst / 2.0;
}

double partial_best(const GridFunction2D& f, uint32_t L, int axis) {
    require_depth(f, L, "partial_best");
    if (axis != 1 && axis != 2)
        throw std::invalid_argument("partial_best: axis must be 1 or 2");
    uint32_t N = f.n_bits;
    uint64_t side = uint64_t(1) << N;
    uint64_t blocks = uint64_t(1) << L;
    uint64_t span = side >> L;
    double worst = 0.0;

    if (axis == 1) {
        // steps in x: oscillation across each x block at every fixed y
#pragma omp parallel for reduction(max : worst) schedule(static)
        for (int64_t q = 0; q < int64_t(blocks); ++q) {
            std::vector<double> lo(side), hi(side);
            uint64_t x0 = uint64_t(q) * span;
            const double* first = f.v.data() + (x0 << N);
            std::copy(first, first + side, lo.begin());
            std::copy(first, first + side, hi.begin());
            for (uint64_t x = x0 + 1; x < x0 + span; ++x) {
                const double* row = f.v.data() + (x << N);
                for (uint64_t y = 0; y < side; ++y) {
                    lo[y] = std::min(lo[y], row[y]);
                    hi[y] = std::max(hi[y], row[y]);
                }
            }
            for (uint64_t y = 0; y < side; ++y) worst = std::max(worst, hi[y] - lo[y]);
        }
    } else {
        // steps in y: contiguous segments within each row
#pragma omp parallel for reduction(max : worst) schedule(static)
        for (int64_t x = 0; x < int64_t(side); ++x) {
            const double* row = f.v.data() + (uint64_t(x) << N);
            for (uint64_t q = 0; q < blocks; ++q) {
                double lo = row[q * span], hi = lo;
                for (uint64_t y = q * span; y < (q + 1) * span; ++y) {
                    lo = std::min(lo, row[y]);
                    hi = std::max(hi, row[y]);
                }
                worst = std::max(worst, hi - lo);
            }
        }
    }
    return worst / 2.0;
}

double surrogate_E(const GridFunction2D& f, uint64_t l, SurrogateKind kind) {
    if (l == 0)
        throw std::invalid_argument("surrogate_E: degree must be >= 1");
    uint32_t L = uint32_t(std::bit_width(l) - 1);
    L = std::min(L, f.n_bits);
    switch (kind) {
    case SurrogateKind::Full: return best_dyadic_2d(f, L);
    case SurrogateKind::Axis1: return partial_best(f, L, 1);
    default: return partial_best(f, L, 2);
    }
}

B4Check check_b4(const GridFunction2D& f, uint32_t L) {
    require_depth(f, L, "check_b4");
    uint32_t N = f.n_bits;
    uint64_t blocks = uint64_t(1) << L;
    uint64_t span = uint64_t(1) << (N - L);
    double lhs = 0.0;
    // the square partial sum at degree 2^L is averaging over depth-L rectangles
#pragma omp parallel for collapse(2) reduction(max : lhs) schedule(static)
    for (int64_t qx = 0; qx < int64_t(blocks); ++qx)
        for (int64_t qy = 0; qy < int64_t(blocks); ++qy) {
            double sum = 0.0;
            for (uint64_t x = uint64_t(qx) * span; x < (uint64_t(qx) + 1) * span; ++x) {
                const double* row = f.v.data() + (x << N) + uint64_t(qy) * span;
                for (uint64_t y = 0; y < span; ++y) sum += row[y];
            }
            double avg = sum / double(span * span);
            for (uint64_t x = uint64_t(qx) * span; x < (uint64_t(qx) + 1) * span; ++x) {
                const double* row = f.v.data() + (x << N) + uint64_t(qy) * span;
                for (uint64_t y = 0; y < span; ++y)
                    lhs = std::max(lhs, std::fabs(row[y] - avg));
            }
        }
    B4Check r;
    r.lhs = lhs;
    r.rhs = 2.0 * best_dyadic_2d(f, L);
    r.holds = r.lhs <= r.rhs + 1e-9 * (1.0 + std::fabs(r.rhs));
    return r;
}

ApproxProfile approx_profile(const GridFunction2D& f, uint64_t n_max) {
    if (n_max == 0)
        throw std::invalid_argument("approx_profile: need n_max >= 1");
    uint32_t levels = uint32_t(std::bit_width(n_max)); // floor(log2 n_max) + 1
    std::vector<double> e1(levels), e2(levels), ed(levels);
    for (uint32_t L = 0; L < levels; ++L) {
        uint32_t d = std::min(L, f.n_bits);
        e1[L] = partial_best(f, d, 1);
        e2[L] = partial_best(f, d, 2);
        ed[L] = best_dyadic_2d(f, d);
    }
    ApproxProfile p;
    p.l.reserve(n_max);
    for (uint64_t l = 1; l <= n_max; ++l) {
        uint32_t L = uint32_t(std::bit_width(l) - 1);
        p.l.push_back(l);
        p.e1.push_back(e1[L]);
        p.e2.push_back(e2[L]);
        p.e_dyadic.push_back(ed[L]);
    }
    return p;
}

std::string to_csv(const ApproxProfile& p) {
    std::string out = "l,e1,e2,e_dyadic\n";
    for (size_t i = 0; i < p.l.size(); ++i) {
        out += std::to_string(p.l[i]);
        out += ',';
        out += fmt_double(p.e1[i]);
        out += ',';
        out += fmt_double(p.e2[i]);
        out += ',';
        out += fmt_double(p.e_dyadic[i]);
        out += '\n';
    }
    return out;
}

} // namespace wkz
