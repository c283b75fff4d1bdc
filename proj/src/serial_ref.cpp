#include "wkz/serial_ref.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wkz/fwht.hpp"

namespace wkz::serial {

int walsh_kaczmarz_product(uint64_t n, const BitPoint& x) {
    if (n == 0) return 1;
    uint32_t A = dyadic_order(n);
    int v = rademacher(A, x);
    for (uint32_t k = 0; k < A; ++k)
        if ((n >> k) & 1) v *= rademacher(A - 1 - k, x);
    return v;
}

std::vector<int64_t> dirichlet_direct(Ordering o, uint64_t n, uint32_t n_bits) {
    uint64_t cells = uint64_t(1) << n_bits;
    std::vector<int64_t> out(cells, 0);
    for (uint64_t k = 0; k < n; ++k)
        for (uint64_t c = 0; c < cells; ++c) out[c] += walsh_at_cell(o, k, c, n_bits);
    return out;
}

std::vector<std::vector<int64_t>> dirichlet_direct_all(Ordering o, uint64_t n_max,
                                                       uint32_t n_bits) {
    uint64_t cells = uint64_t(1) << n_bits;
    std::vector<std::vector<int64_t>> table(n_max + 1, std::vector<int64_t>(cells, 0));
    for (uint64_t n = 1; n <= n_max; ++n)
        for (uint64_t c = 0; c < cells; ++c)
            table[n][c] = table[n - 1][c] + walsh_at_cell(o, n - 1, c, n_bits);
    return table;
}

Spectrum1D analyze_direct(const GridFunction1D& f, Ordering o) {
    uint64_t cells = uint64_t(1) << f.n_bits;
    Spectrum1D s;
    s.ordering = o;
    s.n_bits = f.n_bits;
    s.c.resize(cells);
    double sc = std::ldexp(1.0, -int(f.n_bits));
    for (uint64_t n = 0; n < cells; ++n) {
        double acc = 0.0;
        for (uint64_t c = 0; c < cells; ++c)
            acc += f.v[c] * double(walsh_at_cell(o, n, c, f.n_bits));
        s.c[n] = acc * sc;
    }
    return s;
}

GlukhovResult glukhov_integral_direct(int p, uint32_t n, Ordering system) {
    if (p < 1 || n < 1 || uint64_t(p) * n > 24)
        throw std::invalid_argument("glukhov_integral_direct: reference is for small p*n");
    uint64_t side = uint64_t(1) << n;
    uint64_t block = side >> 1;
    std::vector<std::vector<int64_t>> table = dirichlet_direct_all(system, side - 1, n);
    uint64_t cells = uint64_t(1) << (uint64_t(p) * n);
    uint64_t mask = side - 1;
    int64_t acc = 0;
    for (uint64_t x = 0; x < cells; ++x) {
        int64_t inner = 0;
        for (uint64_t l = block; l < side; ++l) {
            int64_t prod = 1;
            uint64_t rest = x;
            for (int k = 0; k < p; ++k) {
                prod *= table[l][rest & mask];
                rest >>= n;
            }
            inner += prod;
        }
        acc += inner < 0 ? -inner : inner;
    }
    GlukhovResult r;
    r.p = p;
    r.n = n;
    r.system = system;
    r.numerator = acc;
    r.log2_den = uint32_t(p) * n + n;
    r.value = std::ldexp(double(acc), -int(r.log2_den));
    double fact = 1.0;
    for (int i = 2; i <= p; ++i) fact *= i;
    r.bound_shape = fact * (system == Ordering::Kaczmarz ? std::ldexp(1.0, p) : 1.0);
    r.ratio = r.value / r.bound_shape;
    return r;
}

static void transform_axes_serial(std::vector<double>& buf, uint32_t N, bool analysis) {
    uint64_t side = uint64_t(1) << N;
    for (uint64_t x = 0; x < side; ++x) {
        double* row = buf.data() + (x << N);
        if (analysis) bitrev_permute(row, N);
        fwht(row, N);
        if (!analysis) bitrev_permute(row, N);
    }
    std::vector<double> col(side);
    for (uint64_t y = 0; y < side; ++y) {
        for (uint64_t x = 0; x < side; ++x) col[x] = buf[(x << N) | y];
        if (analysis) bitrev_permute(col.data(), N);
        fwht(col.data(), N);
        if (!analysis) bitrev_permute(col.data(), N);
        for (uint64_t x = 0; x < side; ++x) buf[(x << N) | y] = col[x];
    }
}

Spectrum2D analyze2d_serial(const GridFunction2D& f, Ordering o) {
    uint32_t N = f.n_bits;
    std::vector<double> buf = f.v;
    transform_axes_serial(buf, N, true);
    double sc = std::ldexp(1.0, -2 * int(N));
    for (double& x : buf) x *= sc;

    Spectrum2D s;
    s.ordering = o;
    s.n_bits = N;
    if (o == Ordering::Paley) {
        s.c = std::move(buf);
    } else {
        s.c.resize(buf.size());
        for (uint64_t k = 0; k < (uint64_t(1) << N); ++k)
            for (uint64_t i = 0; i < (uint64_t(1) << N); ++i)
                s.c[(k << N) | i] = buf[(kaczmarz_to_paley(k) << N) | kaczmarz_to_paley(i)];
    }
    return s;
}

GridFunction2D synthesize2d_serial(const Spectrum2D& s) {
    uint64_t side = uint64_t(1) << s.n_bits;
    std::vector<double> buf(side * side);
    if (s.ordering == Ordering::Paley) {
        buf = s.c;
    } else {
        for (uint64_t k = 0; k < side; ++k)
            for (uint64_t i = 0; i < side; ++i)
                buf[(kaczmarz_to_paley(k) << s.n_bits) | kaczmarz_to_paley(i)] =
                    s.c[(k << s.n_bits) | i];
    }
    transform_axes_serial(buf, s.n_bits, false);
    GridFunction2D g(s.n_bits);
    g.v = std::move(buf);
    return g;
}

GridFunction2D diagonal_sum_direct(const GridFunction2D& f, Ordering o, uint64_t l) {
    Spectrum2D s = analyze2d_serial(f, o);
    uint64_t side = s.side();
    uint64_t cut = std::min(l, side);
    for (uint64_t k = 0; k < side; ++k)
        for (uint64_t i = 0; i < side; ++i)
            if (k >= cut || i >= cut) s.c[(k << s.n_bits) | i] = 0.0;
    return synthesize2d_serial(s);
}

double best_dyadic_2d_serial(const GridFunction2D& f, uint32_t L) {
    if (L > f.n_bits)
        throw std::invalid_argument("best_dyadic_2d_serial: depth beyond grid resolution");
    uint32_t N = f.n_bits;
    uint64_t blocks = uint64_t(1) << L;
    uint64_t span = uint64_t(1) << (N - L);
    double worst = 0.0;
    for (uint64_t qx = 0; qx < blocks; ++qx)
        for (uint64_t qy = 0; qy < blocks; ++qy) {
            double lo = f.v[(qx * span) << N | (qy * span)];
            double hi = lo;
            for (uint64_t x = qx * span; x < (qx + 1) * span; ++x)
                for (uint64_t y = qy * span; y < (qy + 1) * span; ++y) {
                    double t = f.v[(x << N) | y];
                    lo = std::min(lo, t);
                    hi = std::max(hi, t);
                }
            worst = std::max(worst, hi - lo);
        }
    return worst / 2.0;
}

} // namespace wkz::serial
