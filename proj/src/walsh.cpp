#include "wkz/walsh.hpp"

#include <bit>

#include "wkz/fwht.hpp"

namespace wkz {

const char* ordering_name(Ordering o) { return o == Ordering::Paley ? "paley" : "kaczmarz"; }

Ordering ordering_from_name(const std::string& s) {
    if (s == "paley") return Ordering::Paley;
    if (s == "kaczmarz") return Ordering::Kaczmarz;
    throw ConfigError("unknown ordering: " + s);
}

uint32_t dyadic_order(uint64_t n) {
    if (n == 0)
        throw std::invalid_argument("dyadic_order: undefined for n = 0");
    return 63u - uint32_t(std::countl_zero(n));
}

int walsh_paley(uint64_t n, const BitPoint& x) {
    if (n != 0 && x.resolution() <= dyadic_order(n))
        throw std::invalid_argument("walsh_paley: index beyond resolution");
    return (std::popcount(n & x.coords()) & 1) ? -1 : 1;
}

int walsh_kaczmarz(uint64_t n, const BitPoint& x) {
    if (n == 0) return 1;
    uint32_t A = dyadic_order(n);
    int r = rademacher(A, x);
    return r * walsh_paley(n - (uint64_t(1) << A), tau(A, x));
}

uint64_t kaczmarz_to_paley(uint64_t n) {
    if (n == 0) return 0;
    uint32_t A = dyadic_order(n);
    uint64_t block = uint64_t(1) << A;
    return block | reverse_bits(n - block, A);
}

int walsh(Ordering o, uint64_t n, const BitPoint& x) {
    return o == Ordering::Paley ? walsh_paley(n, x) : walsh_kaczmarz(n, x);
}

int walsh_at_cell(Ordering o, uint64_t n, uint64_t cell, uint32_t n_bits) {
    uint64_t m = (o == Ordering::Paley) ? n : kaczmarz_to_paley(n);
    if (m >> n_bits)
        throw std::invalid_argument("walsh_at_cell: index beyond resolution");
    return (std::popcount(m & reverse_bits(cell, n_bits)) & 1) ? -1 : 1;
}

} // namespace wkz
