#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "wkz/errors.hpp"
#include "wkz/kernels.hpp"
#include "wkz/serial_ref.hpp"

using namespace wkz;

TEST_CASE("tiny partial-sum kernel by hand") {
    // sum of the first three system functions on the 4-cell grid
    std::vector<int64_t> d3 = dirichlet_cells(Ordering::Paley, 3, 2);
    CHECK(d3 == std::vector<int64_t>{3, 1, 1, -1});
    // same for the reordered system: first three functions coincide
    CHECK(dirichlet_cells(Ordering::Kaczmarz, 3, 2) == d3);
}

TEST_CASE("kernel value at zero and total mass") {
    const uint32_t N = 6;
    for (Ordering o : {Ordering::Paley, Ordering::Kaczmarz}) {
        for (uint64_t n = 1; n <= 64; ++n) {
            std::vector<int64_t> d = dirichlet_cells(o, n, N);
            CHECK(d[0] == int64_t(n)); // all characters are +1 at zero
            int64_t sum = std::accumulate(d.begin(), d.end(), int64_t(0));
            CHECK(sum == int64_t(1) << N); // only the constant term survives
        }
    }
    CHECK(dirichlet_cells(Ordering::Paley, 0, N) == std::vector<int64_t>(uint64_t(1) << N, 0));
}

TEST_CASE("recursive kernels match the term-by-term sums") {
    const uint32_t N = 7;
    for (Ordering o : {Ordering::Paley, Ordering::Kaczmarz}) {
        auto all = serial::dirichlet_direct_all(o, 128, N);
        for (uint64_t n = 0; n <= 128; ++n) {
            CHECK(dirichlet_cells(o, n, N) == all[n]);
        }
    }
}

TEST_CASE("power-of-two kernel is a scaled interval indicator") {
    const uint32_t N = 8;
    for (uint32_t n = 0; n <= N; ++n) {
        std::vector<int64_t> d = dirichlet_dyadic_cells(n, N);
        for (uint64_t c = 0; c < (uint64_t(1) << N); ++c) {
            int64_t expect = c < (uint64_t(1) << (N - n)) ? (int64_t(1) << n) : 0;
            CHECK(d[c] == expect);
        }
        GridFunction1D g = dirichlet_dyadic(n, N);
        for (uint64_t c = 0; c < g.size(); ++c) CHECK(g.at_cell(c) == double(d[c]));
    }
    // convenience wrappers agree with the integer rows
    GridFunction1D p = dirichlet_paley(13, 6);
    GridFunction1D k = dirichlet_kaczmarz(13, 6);
    auto pc = dirichlet_cells(Ordering::Paley, 13, 6);
    auto kc = dirichlet_cells(Ordering::Kaczmarz, 13, 6);
    for (uint64_t c = 0; c < p.size(); ++c) {
        CHECK(p.at_cell(c) == double(pc[c]));
        CHECK(k.at_cell(c) == double(kc[c]));
    }
}

TEST_CASE("averaged kernel identities") {
    const uint32_t N = 7;
    for (Ordering o : {Ordering::Paley, Ordering::Kaczmarz}) {
        for (uint64_t n : {1, 2, 3, 7, 16, 31, 50}) {
            std::vector<int64_t> scaled = fejer_scaled_cells(o, n, N);
            // value at zero: sum_{k<n} k = n(n-1)/2
            CHECK(scaled[0] == int64_t(n) * int64_t(n - 1) / 2);
            // total mass: every D_k, k >= 1, contributes 2^N; D_0 contributes 0
            int64_t sum = std::accumulate(scaled.begin(), scaled.end(), int64_t(0));
            CHECK(sum == int64_t(n - 1) * (int64_t(1) << N));
            GridFunction1D g = fejer(o, n, N);
            for (uint64_t c = 0; c < g.size(); ++c)
                CHECK(g.at_cell(c) == doctest::Approx(double(scaled[c]) / double(n)).epsilon(1e-15));
        }
    }
    CHECK_THROWS_AS(fejer(Ordering::Paley, 0, 4), std::invalid_argument);
}

TEST_CASE("kernel table rows and budget") {
    const uint32_t N = 6;
    KernelTable t = kernel_table(Ordering::Kaczmarz, N, 3, 20);
    CHECK(t.l_min == 3);
    CHECK(t.l_max == 20);
    for (uint64_t l = 3; l <= 20; ++l) {
        std::vector<int64_t> d = dirichlet_cells(Ordering::Kaczmarz, l, N);
        const int64_t* row = t.row(l);
        for (uint64_t c = 0; c < d.size(); ++c) CHECK(row[c] == d[c]);
    }
    CHECK_THROWS_AS(kernel_table(Ordering::Paley, 4, 5, 4), std::invalid_argument);
    try {
        kernel_table(Ordering::Paley, 10, 1, 1024, 1024);
        FAIL("expected a budget rejection");
    } catch (const BudgetError& e) {
        CHECK(e.required() == 1024 * 1024);
        CHECK(e.allowed() == 1024);
    }
}

TEST_CASE("block oscillation integral against the direct triple loop") {
    for (Ordering o : {Ordering::Paley, Ordering::Kaczmarz}) {
        for (int p = 1; p <= 3; ++p) {
            uint32_t n_hi = p == 1 ? 4 : (p == 2 ? 3 : 2);
            for (uint32_t n = 1; n <= n_hi; ++n) {
                GlukhovResult fast = glukhov_integral(p, n, o);
                GlukhovResult slow = serial::glukhov_integral_direct(p, n, o);
                CHECK(fast.numerator == slow.numerator);
                CHECK(fast.log2_den == slow.log2_den);
                CHECK(fast.log2_den == uint32_t(p) * n + n);
            }
        }
    }
}

TEST_CASE("frozen small block integrals") {
    GlukhovResult a = glukhov_integral(1, 1, Ordering::Paley);
    CHECK(a.numerator == 2);
    CHECK(a.log2_den == 2);
    CHECK(a.value == 0.5);
    GlukhovResult b = glukhov_integral(1, 2, Ordering::Paley);
    CHECK(b.numerator == 10);
    CHECK(b.log2_den == 4);
    CHECK(b.value == 0.625);
    GlukhovResult c = glukhov_integral(2, 1, Ordering::Paley);
    CHECK(c.numerator == 4);
    CHECK(c.log2_den == 3);
    CHECK(c.value == 0.5);
    // the two orderings agree wherever the block is an initial segment
    CHECK(glukhov_integral(1, 1, Ordering::Kaczmarz).numerator == 2);
}

TEST_CASE("bound shapes and ratios") {
    GlukhovResult p3 = glukhov_integral(3, 2, Ordering::Paley);
    CHECK(p3.bound_shape == 6.0);
    GlukhovResult k3 = glukhov_integral(3, 2, Ordering::Kaczmarz);
    CHECK(k3.bound_shape == 48.0);
    CHECK(p3.ratio == doctest::Approx(p3.value / 6.0));
    CHECK(k3.ratio == doctest::Approx(k3.value / 48.0));
}

TEST_CASE("block integral budget guards") {
    CHECK_THROWS_AS(glukhov_integral(3, 8, Ordering::Paley), BudgetError); // 2^24 cells > default
    CHECK_THROWS_AS(glukhov_integral(9, 7, Ordering::Paley), BudgetError); // p*n >= 63
    CHECK_THROWS_AS(glukhov_integral(0, 1, Ordering::Paley), std::invalid_argument);
    CHECK_THROWS_AS(glukhov_integral(1, 0, Ordering::Paley), std::invalid_argument);
}

TEST_CASE("weighted form validates its exponent and matches the block case") {
    std::vector<double> alpha(7, 0.0);
    for (int i = 3; i <= 6; ++i) alpha[i] = 1.0; // weights select l in [4, 7]
    CHECK_THROWS_AS(glukhov_weighted(alpha, 1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(glukhov_weighted(alpha, 1, 2.5), std::invalid_argument);
    CHECK_THROWS_AS(glukhov_weighted({}, 1, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(glukhov_weighted(alpha, 0, 2.0), std::invalid_argument);

    GlukhovWeighted w = glukhov_weighted(alpha, 1, 2.0);
    GlukhovResult g = glukhov_integral(1, 3, Ordering::Paley);
    // same integral, different normalizations: M * lhs = 2^n * value
    CHECK(7.0 * w.lhs == doctest::Approx(8.0 * g.value).epsilon(1e-12));
    CHECK(w.rhs_shape == doctest::Approx(2.0 / std::sqrt(7.0)).epsilon(1e-12));
    CHECK(w.ratio == doctest::Approx(w.lhs / w.rhs_shape).epsilon(1e-12));
}
