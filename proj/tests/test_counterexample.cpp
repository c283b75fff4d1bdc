#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "wkz/counterexample.hpp"
#include "wkz/errors.hpp"
#include "wkz/kernels.hpp"
#include "wkz/phi.hpp"
#include "wkz/walsh.hpp"

using namespace wkz;

namespace {

CounterexampleSpec desk25() {
    CounterexampleSpec spec;
    spec.psi = PhiSpec::parse("u*log1p(u)");
    spec.k_max = 2;
    spec.mode = CexMode::DeskScale;
    spec.desk_A = {2, 5};
    return spec;
}

} // namespace

TEST_CASE("exact fractions") {
    CHECK(Rational::of(2, 4) == Rational::of(1, 2));
    CHECK(Rational::of(1, -2).num == -1);
    CHECK(Rational::of(1, -2).den == 2);
    CHECK(Rational::of(3, 1).str() == "3");
    CHECK(Rational::of(7, 64).str() == "7/64");
    CHECK((Rational::of(1, 6) + Rational::of(1, 3)) == Rational::of(1, 2));
    CHECK((Rational::of(1, 2) - Rational::of(2, 3)) == Rational::of(-1, 6));
    CHECK(Rational::of(-5, 8).abs() == Rational::of(5, 8));
    CHECK(Rational::of(1, 3) < Rational::of(1, 2));
    CHECK(!(Rational::of(1, 2) < Rational::of(1, 2)));
    CHECK(Rational::of(-3, 4) < Rational::of(-1, 4));
    CHECK(Rational::of(1, 4).to_double() == 0.25);
    CHECK_THROWS_AS(Rational::of(1, 0), std::invalid_argument);
    CHECK_THROWS_AS(Rational::of(INT64_MAX, 1) + Rational::of(INT64_MAX, 1), std::overflow_error);
    CHECK_THROWS_AS(Rational::of(1, INT64_MAX) + Rational::of(1, INT64_MAX - 2), std::overflow_error);
}

TEST_CASE("pinned block exponents and special indices") {
    CexSequences seq = build_sequences(desk25());
    CHECK(seq.A == std::vector<uint32_t>{0, 2, 5});
    CHECK(seq.N == std::vector<uint64_t>{1, 21, 1365});
    CHECK(seq.resolution == 12);
}

TEST_CASE("sequence validation") {
    CounterexampleSpec spec = desk25();
    spec.k_max = 0;
    CHECK_THROWS_AS(build_sequences(spec), ConfigError);

    spec = desk25();
    spec.c_prime = 0.0;
    CHECK_THROWS_AS(build_sequences(spec), ConfigError);

    spec = desk25();
    spec.desk_A = {5, 2};
    CHECK_THROWS_AS(build_sequences(spec), ConfigError);

    spec = desk25();
    spec.desk_A = {2};
    CHECK_THROWS_AS(build_sequences(spec), ConfigError);

    spec = desk25();
    spec.desk_A = {0, 3};
    CHECK_THROWS_AS(build_sequences(spec), ConfigError);

    spec = desk25();
    spec.max_resolution = 8; // needs 2*5+2 = 12
    CHECK_THROWS_AS(build_sequences(spec), BudgetError);
}

TEST_CASE("derived block sizes for a growing gauge") {
    CounterexampleSpec spec;
    spec.psi = PhiSpec::parse("u*log1p(u)");
    spec.c_prime = 3.5;
    spec.k_max = 2;
    spec.mode = CexMode::Faithful;
    CexSequences seq = build_sequences(spec);
    CHECK(seq.B == std::vector<double>{0.0, 4.0, 17.0});
    CHECK(seq.A == std::vector<uint32_t>{0, 1, 9});
    CHECK(seq.resolution == 20);
    CHECK(seq.N == std::vector<uint64_t>{1, 5, 349525});

    // a small coupling inflates the block exponent past any usable grid
    spec.c_prime = 1.0;
    spec.k_max = 1;
    CHECK_THROWS_AS(build_sequences(spec), BudgetError);

    // a gauge with psi(u)/u bounded never reaches the ratio threshold
    CounterexampleSpec flat;
    flat.psi = PhiSpec::identity();
    flat.c_prime = 1.0;
    flat.k_max = 1;
    flat.b_search_cap = uint64_t(1) << 22;
    CHECK_THROWS_AS(build_sequences(flat), BudgetError);
}

TEST_CASE("assembled function splits into disjoint component blocks") {
    CexSequences seq = build_sequences(desk25());
    CexFunction F = build_f(seq);
    CHECK(F.resolution == 12);
    REQUIRE(F.fj.size() == 3);
    REQUIRE(F.intervals.size() == 3);

    // interval counts per level: 2^(2A_j - 2l - 1) patterns
    CHECK(F.intervals[1].size() == 8 + 2);        // l = 0, 1 at A = 2
    CHECK(F.intervals[2].size() == 32 + 8 + 2);   // l = 2, 3, 4 at A = 5

    // each component takes values 0 or +-1/(j+1); the sum splits exactly
    for (uint32_t j = 1; j <= 2; ++j) {
        double amp = 1.0 / double(j + 1);
        for (double v : F.fj[j].v) {
            bool ok = v == 0.0 || v == amp || v == -amp;
            CHECK(ok);
        }
    }
    for (uint64_t c = 0; c < F.f.size(); ++c)
        CHECK(F.f.v[c] == F.fj[1].v[c] + F.fj[2].v[c]);
    CHECK(F.f.at_cell(0) == 0.0);

    // rebuilding is deterministic
    CexFunction G = build_f(seq);
    CHECK(G.f.v == F.f.v);
    CHECK(G.fj[1].v == F.fj[1].v);
    CHECK(G.fj[2].v == F.fj[2].v);
}

TEST_CASE("stored interval signs and sizes match the selecting kernels") {
    CexSequences seq = build_sequences(desk25());
    CexFunction F = build_f(seq);
    const uint32_t R = seq.resolution;
    for (uint32_t j = 1; j <= 2; ++j) {
        // the kernel at the component's special index, on the full grid
        std::vector<int64_t> D = dirichlet_cells(Ordering::Kaczmarz, seq.N[j], R);
        uint32_t d = 2 * seq.A[j] + 2;
        for (const CexInterval& iv : F.intervals[j]) {
            CHECK(iv.j == j);
            CHECK(iv.cells == uint64_t(1) << (R - d));
            REQUIRE(iv.base_cell + iv.cells <= (uint64_t(1) << R));
            int64_t expect = ((int64_t(1) << (2 * iv.l + 1)) + 1) / 3;
            for (uint64_t c = iv.base_cell; c < iv.base_cell + iv.cells; ++c) {
                REQUIRE(D[c] != 0);
                CHECK(std::abs(D[c]) == expect);
                CHECK((D[c] > 0 ? 1 : -1) == iv.sign);
            }
        }
    }
}

TEST_CASE("pinned partial-sum split at zero") {
    CexSequences seq = build_sequences(desk25());
    CexFunction F = build_f(seq);

    KReport r1 = evaluate_at_zero(seq, F, 1);
    CHECK(r1.N == 21);
    CHECK(r1.J1 == Rational::of(7, 64));
    CHECK(r1.J2 == Rational::of(23, 6144));
    CHECK(r1.J3 == Rational::of(0, 1));
    CHECK(r1.S == Rational::of(695, 6144));
    CHECK(r1.c0 == 0.0546875); // J1 * 1 / A_1 = 7/128
    CHECK(r1.tail_nonnegative);
    CHECK(r1.sign_aligned);
    CHECK(r1.kernel_bound_exact);

    KReport r2 = evaluate_at_zero(seq, F, 2);
    CHECK(r2.N == 1365);
    CHECK(r2.J1 == Rational::of(173, 2048));
    CHECK(r2.J2 == Rational::of(0, 1));
    CHECK(r2.J3 == Rational::of(0, 1));
    CHECK(r2.S == Rational::of(173, 2048));
    CHECK(r2.c0 == 0.0337890625); // J1 * 2 / A_2 = 173/5120
    CHECK(r2.sign_aligned);
    CHECK(r2.kernel_bound_exact);

    CHECK_THROWS_AS(evaluate_at_zero(seq, F, 0), std::invalid_argument);
    CHECK_THROWS_AS(evaluate_at_zero(seq, F, 3), std::invalid_argument);
}

TEST_CASE("tensor trace rows carry the log-scale comparison") {
    CounterexampleSpec spec = desk25();
    CexSequences seq = build_sequences(spec);
    CexFunction F = build_f(seq);
    TensorReport rep = tensor_divergence(spec, seq, F);
    REQUIRE(rep.rows.size() == 2);
    for (uint32_t k = 1; k <= 2; ++k) {
        const TensorRow& row = rep.rows[k - 1];
        KReport kr = evaluate_at_zero(seq, F, k);
        double s = std::fabs(kr.S.to_double());
        CHECK(row.k == k);
        CHECK(row.s_abs == doctest::Approx(s).epsilon(1e-15));
        // for F(x,y) = f(x) f(y) the 2D gauge at zero collapses to psi(|S|)
        CHECK(row.log_main ==
              doctest::Approx(spec.psi(s) - std::log(double(seq.N[k]))).epsilon(1e-12));
        CHECK(row.log_comparator ==
              doctest::Approx(spec.psi(s) - 2.0 * double(seq.A[k]) * std::log(2.0)).epsilon(1e-12));
    }
    CHECK(rep.main_increasing == (rep.rows[1].log_main > rep.rows[0].log_main));
    CHECK(rep.comparator_increasing ==
          (rep.rows[1].log_comparator > rep.rows[0].log_comparator));

    // a single row has no direction
    CounterexampleSpec single = desk25();
    single.k_max = 1;
    single.desk_A = {2};
    CexSequences seq1 = build_sequences(single);
    CexFunction F1 = build_f(seq1);
    TensorReport rep1 = tensor_divergence(single, seq1, F1);
    REQUIRE(rep1.rows.size() == 1);
    CHECK(!rep1.main_increasing);
    CHECK(!rep1.comparator_increasing);
}

TEST_CASE("coupling calibration records the probe") {
    PhiSpec psi = PhiSpec::parse("u*log1p(u)");
    Calibration cal = calibrate_c_prime(psi, 3.5, 2, 24);
    CHECK(cal.probe_c_prime == 3.5);
    CHECK(cal.measured_c0 == doctest::Approx(0.0625).epsilon(1e-9));
    CHECK(cal.suggested_c_prime == doctest::Approx(0.0624968).epsilon(1e-4));
    CHECK(cal.suggested_c_prime <= cal.measured_c0);
    CHECK(cal.suggested_c_prime > 0.0);
    CHECK(cal.j2_over_j1 >= 0.0);
}

TEST_CASE("coupling scan returns buildable values") {
    PhiSpec psi = PhiSpec::parse("u*log1p(u)");
    std::vector<double> ok = feasible_c_prime_scan(psi, 2, 24);
    REQUIRE(!ok.empty());
    for (size_t i = 1; i < ok.size(); ++i) CHECK(ok[i] > ok[i - 1]);

    bool found = false;
    for (double c : ok)
        if (std::fabs(c - std::pow(2.0, 1.75)) < 1e-12) found = true;
    CHECK(found);

    for (double c : ok) {
        CounterexampleSpec spec;
        spec.psi = psi;
        spec.c_prime = c;
        spec.k_max = 2;
        spec.mode = CexMode::Faithful;
        CexSequences seq = build_sequences(spec);
        CHECK(seq.resolution <= 24);
        CHECK(seq.A[1] >= 1);
        CHECK(seq.A[2] > seq.A[1]);
    }
}
