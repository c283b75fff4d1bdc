#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <string>
#include <vector>

#include "wkz/dyadic.hpp"
#include "wkz/fwht.hpp"
#include "wkz/serial_ref.hpp"
#include "wkz/walsh.hpp"

using namespace wkz;

TEST_CASE("dyadic_order picks the top set bit") {
    CHECK(dyadic_order(1) == 0);
    CHECK(dyadic_order(2) == 1);
    CHECK(dyadic_order(3) == 1);
    CHECK(dyadic_order(4) == 2);
    CHECK(dyadic_order(7) == 2);
    CHECK(dyadic_order(8) == 3);
    CHECK(dyadic_order(uint64_t(1) << 40) == 40);
    CHECK_THROWS(dyadic_order(0));
}

TEST_CASE("index map between the two orderings") {
    // fixed points and first nontrivial block
    for (uint64_t n = 0; n <= 4; ++n) CHECK(kaczmarz_to_paley(n) == n);
    CHECK(kaczmarz_to_paley(5) == 6);
    CHECK(kaczmarz_to_paley(6) == 5);
    CHECK(kaczmarz_to_paley(7) == 7);
    CHECK(kaczmarz_to_paley(9) == 12);

    // involution, and a bijection on each dyadic block
    for (uint64_t n = 1; n < (uint64_t(1) << 14); ++n) {
        uint64_t m = kaczmarz_to_paley(n);
        CHECK(dyadic_order(m) == dyadic_order(n));
        CHECK(kaczmarz_to_paley(m) == n);
    }
    for (uint32_t A = 0; A <= 8; ++A) {
        std::vector<bool> seen(uint64_t(1) << A, false);
        for (uint64_t n = uint64_t(1) << A; n < (uint64_t(2) << A); ++n) {
            uint64_t off = kaczmarz_to_paley(n) - (uint64_t(1) << A);
            REQUIRE(off < seen.size());
            CHECK(!seen[off]);
            seen[off] = true;
        }
    }
}

TEST_CASE("orthonormal rows in both orderings") {
    const uint32_t N = 5;
    const uint64_t sz = uint64_t(1) << N;
    for (Ordering o : {Ordering::Paley, Ordering::Kaczmarz}) {
        for (uint64_t m = 0; m < sz; ++m) {
            for (uint64_t n = m; n < sz; ++n) {
                int64_t dot = 0;
                for (uint64_t c = 0; c < sz; ++c)
                    dot += walsh_at_cell(o, m, c, N) * walsh_at_cell(o, n, c, N);
                CHECK(dot == (m == n ? int64_t(sz) : 0));
            }
        }
    }
}

TEST_CASE("product and character rules in the natural order") {
    const uint32_t N = 6;
    const uint64_t sz = uint64_t(1) << N;
    for (uint64_t m = 0; m < 16; ++m) {
        for (uint64_t n = 0; n < 16; ++n) {
            for (uint64_t c = 0; c < sz; c += 3) {
                BitPoint x = BitPoint::from_cell(N, c);
                CHECK(walsh_paley(m, x) * walsh_paley(n, x) == walsh_paley(m ^ n, x));
            }
        }
    }
    for (uint64_t n = 0; n < sz; n += 5) {
        for (uint64_t a = 0; a < sz; a += 7) {
            for (uint64_t b = 0; b < sz; b += 11) {
                BitPoint x(N, a), y(N, b);
                CHECK(walsh_paley(n, group_add(x, y)) == walsh_paley(n, x) * walsh_paley(n, y));
            }
        }
    }
}

TEST_CASE("recursive and literal product forms agree") {
    const uint32_t N = 10;
    const uint64_t sz = uint64_t(1) << N;
    for (uint64_t n = 0; n < 1024; ++n) {
        for (uint64_t c = 0; c < sz; c += 17) {
            BitPoint x = BitPoint::from_cell(N, c);
            CHECK(walsh_kaczmarz(n, x) == serial::walsh_kaczmarz_product(n, x));
        }
    }
}

TEST_CASE("the index map realizes the reordering pointwise") {
    const uint32_t N = 8;
    const uint64_t sz = uint64_t(1) << N;
    for (uint64_t n = 0; n < sz; ++n) {
        uint64_t m = kaczmarz_to_paley(n);
        for (uint64_t c = 0; c < sz; ++c) {
            BitPoint x = BitPoint::from_cell(N, c);
            CHECK(walsh_kaczmarz(n, x) == walsh_paley(m, x));
        }
    }
}

TEST_CASE("coordinate reversal conjugates the low block") {
    // w_j(tau_A x) == w_{rev_A(j)}(x) for j < 2^A
    const uint32_t N = 8;
    for (uint32_t A = 1; A <= 6; ++A) {
        for (uint64_t j = 0; j < (uint64_t(1) << A); ++j) {
            uint64_t rj = reverse_bits(j, A);
            for (uint64_t c = 0; c < (uint64_t(1) << N); c += 5) {
                BitPoint x = BitPoint::from_cell(N, c);
                CHECK(walsh_paley(j, tau(A, x)) == walsh_paley(rj, x));
            }
        }
    }
}

TEST_CASE("cell addressing matches point addressing") {
    const uint32_t N = 7;
    for (Ordering o : {Ordering::Paley, Ordering::Kaczmarz}) {
        for (uint64_t n = 0; n < (uint64_t(1) << N); n += 3) {
            for (uint64_t c = 0; c < (uint64_t(1) << N); c += 5) {
                BitPoint x = BitPoint::from_cell(N, c);
                CHECK(walsh_at_cell(o, n, c, N) == walsh(o, n, x));
            }
        }
    }
}

TEST_CASE("ordering names round trip") {
    CHECK(std::string(ordering_name(Ordering::Paley)) == "paley");
    CHECK(std::string(ordering_name(Ordering::Kaczmarz)) == "kaczmarz");
    CHECK(ordering_from_name("paley") == Ordering::Paley);
    CHECK(ordering_from_name("kaczmarz") == Ordering::Kaczmarz);
    CHECK_THROWS(ordering_from_name("walsh"));
    CHECK_THROWS(ordering_from_name(""));
}

TEST_CASE("index beyond the grid resolution is rejected") {
    BitPoint x = BitPoint::from_cell(4, 9);
    CHECK_THROWS(walsh_paley(uint64_t(1) << 5, x));
    CHECK_NOTHROW(walsh_paley(15, x));
}
