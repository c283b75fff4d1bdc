#include "wkz/fwht.hpp"

#include <utility>

namespace wkz {

template <typename T>
static void fwht_impl(T* a, uint32_t n_bits) {
    uint64_t n = uint64_t(1) << n_bits;
    for (uint64_t h = 1; h < n; h <<= 1) {
        for (uint64_t i = 0; i < n; i += h << 1) {
            for (uint64_t j = i; j < i + h; ++j) {
                T x = a[j], y = a[j + h];
                a[j] = x + y;
                a[j + h] = x - y;
            }
        }
    }
}

void fwht(double* a, uint32_t n_bits) { fwht_impl(a, n_bits); }
void fwht(int64_t* a, uint32_t n_bits) { fwht_impl(a, n_bits); }

uint64_t reverse_bits(uint64_t v, uint32_t bits) {
    uint64_t r = 0;
    for (uint32_t i = 0; i < bits; ++i) {
        r = (r << 1) | (v & 1);
        v >>= 1;
    }
    return r;
}

template <typename T>
static void bitrev_impl(T* a, uint32_t n_bits) {
    uint64_t n = uint64_t(1) << n_bits;
    for (uint64_t i = 0; i < n; ++i) {
        uint64_t r = reverse_bits(i, n_bits);
        if (r > i) std::swap(a[i], a[r]);
    }
}

void bitrev_permute(double* a, uint32_t n_bits) { bitrev_impl(a, n_bits); }
void bitrev_permute(int64_t* a, uint32_t n_bits) { bitrev_impl(a, n_bits); }

std::vector<uint32_t> bitrev_table(uint32_t n_bits) {
    std::vector<uint32_t> t(uint64_t(1) << n_bits);
    for (uint64_t i = 0; i < t.size(); ++i) t[i] = uint32_t(reverse_bits(i, n_bits));
    return t;
}

} // namespace wkz
