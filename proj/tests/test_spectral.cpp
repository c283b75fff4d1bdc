#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "wkz/errors.hpp"
#include "wkz/rng.hpp"
#include "wkz/serial_ref.hpp"
#include "wkz/spectral.hpp"
#include "wkz/walsh.hpp"

using namespace wkz;

TEST_CASE("round trip is exact on integer data") {
    for (Ordering o : {Ordering::Paley, Ordering::Kaczmarz}) {
        GridFunction1D f = random_int_grid1d(10, 31, 1000);
        GridFunction1D back = synthesize(analyze(f, o));
        CHECK(back.v == f.v);

        GridFunction2D g = random_int_grid2d(5, 32, 1000);
        GridFunction2D back2 = synthesize(analyze(g, o));
        CHECK(back2.v == g.v);
    }
}

TEST_CASE("a point mass analyzes to scaled system values") {
    const uint32_t N = 4;
    const uint64_t sz = uint64_t(1) << N;
    for (Ordering o : {Ordering::Paley, Ordering::Kaczmarz}) {
        for (uint64_t c0 : {uint64_t(0), uint64_t(5), sz - 1}) {
            GridFunction1D f(N, 0.0);
            f.at_cell(c0) = 1.0;
            Spectrum1D s = analyze(f, o);
            REQUIRE(s.c.size() == sz);
            for (uint64_t n = 0; n < sz; ++n) {
                double expect = std::ldexp(double(walsh_at_cell(o, n, c0, N)), -int(N));
                CHECK(s.c[n] == expect);
            }
        }
    }
}

TEST_CASE("a unit coefficient synthesizes to a system row") {
    const uint32_t N = 5;
    const uint64_t sz = uint64_t(1) << N;
    for (Ordering o : {Ordering::Paley, Ordering::Kaczmarz}) {
        for (uint64_t n : {uint64_t(0), uint64_t(3), uint64_t(17), sz - 1}) {
            Spectrum1D s;
            s.ordering = o;
            s.n_bits = N;
            s.c.assign(sz, 0.0);
            s.c[n] = 1.0;
            GridFunction1D g = synthesize(s);
            for (uint64_t c = 0; c < sz; ++c)
                CHECK(g.at_cell(c) == double(walsh_at_cell(o, n, c, N)));
        }
    }
}

TEST_CASE("butterfly analysis matches the inner-product definition") {
    for (Ordering o : {Ordering::Paley, Ordering::Kaczmarz}) {
        GridFunction1D f = random_grid1d(8, 77);
        Spectrum1D fast = analyze(f, o);
        Spectrum1D slow = serial::analyze_direct(f, o);
        REQUIRE(fast.c.size() == slow.c.size());
        for (size_t i = 0; i < fast.c.size(); ++i)
            CHECK(fast.c[i] == doctest::Approx(slow.c[i]).epsilon(1e-12));
    }
}

TEST_CASE("parallel and serial 2D transforms agree exactly") {
    for (Ordering o : {Ordering::Paley, Ordering::Kaczmarz}) {
        GridFunction2D g = random_grid2d(5, 123);
        Spectrum2D a = analyze(g, o);
        Spectrum2D b = serial::analyze2d_serial(g, o);
        CHECK(a.c == b.c);
        GridFunction2D ga = synthesize(a);
        GridFunction2D gb = serial::synthesize2d_serial(b);
        CHECK(ga.v == gb.v);
    }
}

TEST_CASE("reorder expresses the same function") {
    GridFunction1D f = random_grid1d(7, 9);
    Spectrum1D sp = analyze(f, Ordering::Paley);
    Spectrum1D sk = reorder(sp, Ordering::Kaczmarz);
    CHECK(sk.ordering == Ordering::Kaczmarz);
    // same function, new labels
    GridFunction1D g = synthesize(sk);
    for (uint64_t c = 0; c < f.size(); ++c)
        CHECK(g.at_cell(c) == doctest::Approx(f.at_cell(c)).epsilon(1e-12));
    // round trip and identity reorder are exact
    Spectrum1D back = reorder(sk, Ordering::Paley);
    CHECK(back.c == sp.c);
    Spectrum1D same = reorder(sp, Ordering::Paley);
    CHECK(same.c == sp.c);

    GridFunction2D f2 = random_grid2d(4, 10);
    Spectrum2D sp2 = analyze(f2, Ordering::Kaczmarz);
    Spectrum2D sk2 = reorder(sp2, Ordering::Paley);
    GridFunction2D g2 = synthesize(sk2);
    for (uint64_t i = 0; i < f2.size(); ++i)
        CHECK(g2.v[i] == doctest::Approx(f2.v[i]).epsilon(1e-12));
    CHECK(reorder(sk2, Ordering::Kaczmarz).c == sp2.c);
}

TEST_CASE("full rectangular partial sum reproduces the function") {
    const uint32_t N = 4;
    GridFunction2D f = random_grid2d(N, 55);
    for (Ordering o : {Ordering::Paley, Ordering::Kaczmarz}) {
        GridFunction2D s = partial_sum_2d(f, uint64_t(1) << N, uint64_t(1) << N, o);
        for (uint64_t i = 0; i < f.size(); ++i)
            CHECK(s.v[i] == doctest::Approx(f.v[i]).epsilon(1e-12));
    }
    // degenerate truncation: n = m = 1 keeps only the mean
    GridFunction2D m = partial_sum_2d(f, 1, 1, Ordering::Paley);
    double mean = integrate(f);
    for (uint64_t i = 0; i < m.size(); ++i)
        CHECK(m.v[i] == doctest::Approx(mean).epsilon(1e-12));
}

TEST_CASE("streamed diagonal sums match fresh truncations") {
    const uint32_t N = 5;
    GridFunction2D f = random_grid2d(N, 202);
    for (Ordering o : {Ordering::Paley, Ordering::Kaczmarz}) {
        DiagonalSums ds(f, o, 32);
        for (uint64_t l = 1; l <= 32; ++l) {
            REQUIRE(ds.next());
            CHECK(ds.l() == l);
            GridFunction2D ref = serial::diagonal_sum_direct(f, o, l);
            const std::vector<double>& cur = ds.grid();
            REQUIRE(cur.size() == ref.v.size());
            for (uint64_t i = 0; i < cur.size(); ++i)
                CHECK(cur[i] == doctest::Approx(ref.v[i]).epsilon(1e-9));
        }
        CHECK(!ds.next()); // past n_max
    }
}

TEST_CASE("diagonal sums saturate at the grid side") {
    const uint32_t N = 3;
    GridFunction2D f = random_grid2d(N, 7);
    DiagonalSums ds(f, Ordering::Kaczmarz, 40); // n_max past the side length
    std::vector<double> at_side;
    uint64_t side = uint64_t(1) << N;
    for (uint64_t l = 1; l <= 40; ++l) {
        REQUIRE(ds.next());
        if (l == side) at_side = ds.grid();
        if (l > side) CHECK(ds.grid() == at_side); // nothing left to add
    }
    // and the saturated sum is the function itself
    for (uint64_t i = 0; i < f.size(); ++i)
        CHECK(at_side[i] == doctest::Approx(f.v[i]).epsilon(1e-12));
}

TEST_CASE("spectrum serialization round trips") {
    GridFunction1D f = random_grid1d(5, 44);
    Spectrum1D s = analyze(f, Ordering::Kaczmarz);
    Spectrum1D s2 = spectrum1d_from_json(to_json(s));
    CHECK(s2.ordering == s.ordering);
    CHECK(s2.n_bits == s.n_bits);
    CHECK(s2.c == s.c);

    GridFunction2D g = random_grid2d(3, 45);
    Spectrum2D t = analyze(g, Ordering::Paley);
    Spectrum2D t2 = spectrum2d_from_json(to_json(t));
    CHECK(t2.ordering == t.ordering);
    CHECK(t2.n_bits == t.n_bits);
    CHECK(t2.c == t.c);

    CHECK_THROWS(spectrum1d_from_json("{\"ordering\": \"nope\", \"resolution\": 1, \"coefficients\": [0, 0]}"));
    CHECK_THROWS(spectrum1d_from_json("{}"));
}

TEST_CASE("transform size caps") {
    CHECK_THROWS_AS(analyze(GridFunction1D(13), Ordering::Paley), BudgetError);
    CHECK_NOTHROW(analyze(GridFunction1D(13), Ordering::Paley, 13));
    CHECK_THROWS_AS(analyze(GridFunction2D(11), Ordering::Paley), BudgetError);
    CHECK_THROWS_AS(partial_sum_2d(GridFunction2D(11), 1, 1, Ordering::Paley), BudgetError);
    // an index past the side clamps: no frequencies beyond the resolution
    GridFunction2D small = random_grid2d(2, 3);
    GridFunction2D clamped = partial_sum_2d(small, 5, 4, Ordering::Paley);
    GridFunction2D full = partial_sum_2d(small, 4, 4, Ordering::Paley);
    CHECK(clamped.v == full.v);
}
