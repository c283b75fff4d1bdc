#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "wkz/dyadic.hpp"
#include "wkz/fwht.hpp"
#include "wkz/rng.hpp"

using namespace wkz;

TEST_CASE("reverse_bits known values and involution") {
    CHECK(reverse_bits(0b001, 3) == 0b100);
    CHECK(reverse_bits(0b110, 3) == 0b011);
    CHECK(reverse_bits(1, 1) == 1);
    CHECK(reverse_bits(0, 5) == 0);
    CHECK(reverse_bits(0b10110, 5) == 0b01101);
    Rng rng(42);
    for (int i = 0; i < 200; ++i) {
        uint32_t bits = 1 + uint32_t(rng.below(20));
        uint64_t v = rng.below(uint64_t(1) << bits);
        CHECK(reverse_bits(reverse_bits(v, bits), bits) == v);
    }
}

TEST_CASE("fwht applied twice is 2^n times the identity") {
    const uint32_t N = 8;
    const uint64_t sz = uint64_t(1) << N;
    Rng rng(7);
    std::vector<int64_t> a(sz);
    for (auto& x : a) x = rng.int_range(-50, 50);
    std::vector<int64_t> orig = a;
    fwht(a.data(), N);
    fwht(a.data(), N);
    for (uint64_t i = 0; i < sz; ++i) CHECK(a[i] == orig[i] * int64_t(sz));
}

TEST_CASE("bitrev_permute is an involution and matches the table") {
    const uint32_t N = 7;
    const uint64_t sz = uint64_t(1) << N;
    std::vector<double> a(sz);
    for (uint64_t i = 0; i < sz; ++i) a[i] = double(i) * 0.5 - 3.0;
    std::vector<double> orig = a;
    bitrev_permute(a.data(), N);
    auto tab = bitrev_table(N);
    REQUIRE(tab.size() == sz);
    for (uint64_t i = 0; i < sz; ++i) CHECK(a[i] == orig[tab[i]]);
    bitrev_permute(a.data(), N);
    CHECK(a == orig);
}

TEST_CASE("BitPoint cell index round trip") {
    const uint32_t N = 6;
    for (uint64_t c = 0; c < (uint64_t(1) << N); ++c) {
        BitPoint x = BitPoint::from_cell(N, c);
        CHECK(x.cell() == c);
        CHECK(x.cell() == reverse_bits(x.coords(), N));
        // bit k of the coords word is coordinate x_k
        BitPoint y(N, x.coords());
        CHECK(y == x);
    }
    // coordinate 0 is the most significant bit of the cell
    BitPoint x0(N, 1); // x_0 = 1, rest 0
    CHECK(x0.cell() == (uint64_t(1) << (N - 1)));
    CHECK(x0.bit(0) == 1);
    CHECK(x0.bit(1) == 0);
    CHECK(x0.bit(63) == 0);
}

TEST_CASE("group_add is XOR with identity and self-inverse") {
    const uint32_t N = 8;
    Rng rng(11);
    BitPoint zero(N, 0);
    for (int i = 0; i < 100; ++i) {
        BitPoint x(N, rng.below(uint64_t(1) << N));
        BitPoint y(N, rng.below(uint64_t(1) << N));
        CHECK(group_add(x, y).coords() == (x.coords() ^ y.coords()));
        CHECK(group_add(x, zero) == x);
        CHECK(group_add(x, x) == zero);
        CHECK(group_add(x, y) == group_add(y, x));
    }
}

TEST_CASE("rademacher reads coordinate k as a sign") {
    const uint32_t N = 5;
    for (uint64_t c = 0; c < (uint64_t(1) << N); ++c) {
        BitPoint x = BitPoint::from_cell(N, c);
        for (uint32_t k = 0; k < N; ++k) {
            int expect = ((c >> (N - 1 - k)) & 1) ? -1 : 1;
            CHECK(rademacher(k, x) == expect);
        }
    }
}

TEST_CASE("tau reverses the leading coordinates") {
    const uint32_t N = 8;
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        uint32_t A = uint32_t(rng.below(N + 1));
        BitPoint x(N, rng.below(uint64_t(1) << N));
        BitPoint y = tau(A, x);
        for (uint32_t k = 0; k < A; ++k) CHECK(y.bit(k) == x.bit(A - 1 - k));
        for (uint32_t k = A; k < N; ++k) CHECK(y.bit(k) == x.bit(k));
        CHECK(tau(A, y) == x); // involution
        // cell-index version agrees
        CHECK(tau_cell(A, x.cell(), N) == y.cell());
    }
}

TEST_CASE("integrate and norm against naive sums") {
    const uint32_t N = 5;
    GridFunction1D f = random_grid1d(N, 99);
    double mean = 0.0;
    for (double v : f.v) mean += v;
    mean /= double(f.size());
    CHECK(integrate(f) == doctest::Approx(mean).epsilon(1e-12));

    double s2 = 0.0, s1 = 0.0, mx = 0.0;
    for (double v : f.v) {
        s2 += v * v;
        s1 += std::fabs(v);
        mx = std::max(mx, std::fabs(v));
    }
    CHECK(norm(f, 2.0) == doctest::Approx(std::sqrt(s2 / double(f.size()))).epsilon(1e-12));
    CHECK(norm(f, 1.0) == doctest::Approx(s1 / double(f.size())).epsilon(1e-12));
    CHECK(norm(f, std::numeric_limits<double>::infinity()) == doctest::Approx(mx));
    CHECK_THROWS_AS(norm(f, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(norm(f, -1.0), std::invalid_argument);

    GridFunction2D g = random_grid2d(3, 5);
    double mean2 = 0.0;
    for (double v : g.v) mean2 += v;
    mean2 /= double(g.size());
    CHECK(integrate(g) == doctest::Approx(mean2).epsilon(1e-12));
}

TEST_CASE("grid serialization round trips exactly") {
    GridFunction1D f = random_grid1d(4, 17);
    f.v[0] = 0.1 + 0.2; // not exactly representable as text unless printed shortest
    GridFunction1D f_csv = grid1d_from_csv(to_csv(f));
    REQUIRE(f_csv.n_bits == f.n_bits);
    CHECK(f_csv.v == f.v);
    GridFunction1D f_json = grid1d_from_json(to_json(f));
    REQUIRE(f_json.n_bits == f.n_bits);
    CHECK(f_json.v == f.v);

    GridFunction2D g = random_grid2d(3, 23);
    GridFunction2D g_csv = grid2d_from_csv(to_csv(g));
    REQUIRE(g_csv.n_bits == g.n_bits);
    CHECK(g_csv.v == g.v);
    GridFunction2D g_json = grid2d_from_json(to_json(g));
    REQUIRE(g_json.n_bits == g.n_bits);
    CHECK(g_json.v == g.v);
}

TEST_CASE("malformed grid input is rejected") {
    CHECK_THROWS_AS(grid1d_from_csv("not a number\n"), std::invalid_argument);
    CHECK_THROWS_AS(grid1d_from_csv("1.0\n2.0\n3.0\n"), ConfigError); // not a power of two
    CHECK_THROWS(grid1d_from_json("{\"resolution\": 2}"));            // missing values
    CHECK_THROWS(grid1d_from_json("[1,2]"));                          // not an object
    CHECK_THROWS_AS(grid2d_from_json("{\"resolution\": 1, \"values\": [1,2,3]}"), ConfigError);
}

TEST_CASE("deterministic chunked sum matches plain accumulation") {
    Rng rng(77);
    std::vector<double> a(10000);
    for (auto& x : a) x = rng.sym();
    double plain = 0.0;
    for (double v : a) plain += v;
    CHECK(detail::det_sum(a.data(), a.size()) == doctest::Approx(plain).epsilon(1e-12));
    CHECK(detail::det_sum(a.data(), 0) == 0.0);
    CHECK(detail::det_sum(a.data(), 1) == a[0]);
}
