#include "wkz/spectral.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "wkz/errors.hpp"
#include "wkz/fwht.hpp"
#include "wkz/io.hpp"

namespace wkz {

static void check_bits(uint32_t n_bits, uint32_t max_bits, int axes) {
    if (n_bits > max_bits)
        throw BudgetError("transform resolution budget",
                          uint64_t(1) << (n_bits * axes), uint64_t(1) << (max_bits * axes));
}

static std::vector<uint64_t> sigma_table(uint32_t n_bits) {
    uint64_t size = uint64_t(1) << n_bits;
    std::vector<uint64_t> sig(size);
    for (uint64_t j = 0; j < size; ++j) sig[j] = kaczmarz_to_paley(j);
    return sig;
}

Spectrum1D analyze(const GridFunction1D& f, Ordering o, uint32_t max_bits) {
    check_bits(f.n_bits, max_bits, 1);
    uint32_t N = f.n_bits;
    std::vector<double> buf = f.v;
    bitrev_permute(buf.data(), N);
    fwht(buf.data(), N);
    double sc = std::ldexp(1.0, -int(N));
    for (double& x : buf) x *= sc;

    Spectrum1D s;
    s.ordering = o;
    s.n_bits = N;
    if (o == Ordering::Paley) {
        s.c = std::move(buf);
    } else {
        std::vector<uint64_t> sig = sigma_table(N);
        s.c.resize(buf.size());
        for (uint64_t n = 0; n < buf.size(); ++n) s.c[n] = buf[sig[n]];
    }
    return s;
}

GridFunction1D synthesize(const Spectrum1D& s) {
    uint64_t size = uint64_t(1) << s.n_bits;
    if (s.c.size() != size)
        throw std::invalid_argument("synthesize: coefficient count does not match resolution");
    std::vector<double> buf(size);
    if (s.ordering == Ordering::Paley) {
        buf = s.c;
    } else {
        std::vector<uint64_t> sig = sigma_table(s.n_bits);
        for (uint64_t n = 0; n < size; ++n) buf[sig[n]] = s.c[n];
    }
    fwht(buf.data(), s.n_bits);
    bitrev_permute(buf.data(), s.n_bits);
    GridFunction1D g(s.n_bits);
    g.v = std::move(buf);
    return g;
}

// Row/column passes of the same butterfly; coefficients come out in
// lexicographic (x frequency, y frequency) layout.
static void transform_axes(std::vector<double>& buf, uint32_t N, bool analysis) {
    uint64_t side = uint64_t(1) << N;
#pragma omp parallel for schedule(static)
    for (int64_t x = 0; x < int64_t(side); ++x) {
        double* row = buf.data() + (uint64_t(x) << N);
        if (analysis) bitrev_permute(row, N);
        fwht(row, N);
        if (!analysis) bitrev_permute(row, N);
    }
#pragma omp parallel for schedule(static)
    for (int64_t y = 0; y < int64_t(side); ++y) {
        std::vector<double> col(side);
        for (uint64_t x = 0; x < side; ++x) col[x] = buf[(x << N) | uint64_t(y)];
        if (analysis) bitrev_permute(col.data(), N);
        fwht(col.data(), N);
        if (!analysis) bitrev_permute(col.data(), N);
        for (uint64_t x = 0; x < side; ++x) buf[(x << N) | uint64_t(y)] = col[x];
    }
}

Spectrum2D analyze(const GridFunction2D& f, Ordering o, uint32_t max_bits) {
    check_bits(f.n_bits, max_bits, 2);
    uint32_t N = f.n_bits;
    std::vector<double> buf = f.v;
    transform_axes(buf, N, true);
    double sc = std::ldexp(1.0, -2 * int(N));
    for (double& x : buf) x *= sc;

    Spectrum2D s;
    s.ordering = o;
    s.n_bits = N;
    if (o == Ordering::Paley) {
        s.c = std::move(buf);
    } else {
        std::vector<uint64_t> sig = sigma_table(N);
        s.c.resize(buf.size());
        for (uint64_t k = 0; k < (uint64_t(1) << N); ++k)
            for (uint64_t i = 0; i < (uint64_t(1) << N); ++i)
                s.c[(k << N) | i] = buf[(sig[k] << N) | sig[i]];
    }
    return s;
}

GridFunction2D synthesize(const Spectrum2D& s) {
    uint64_t side = uint64_t(1) << s.n_bits;
    if (s.c.size() != side * side)
        throw std::invalid_argument("synthesize: coefficient count does not match resolution");
    std::vector<double> buf(side * side);
    if (s.ordering == Ordering::Paley) {
        buf = s.c;
    } else {
        std::vector<uint64_t> sig = sigma_table(s.n_bits);
        for (uint64_t k = 0; k < side; ++k)
            for (uint64_t i = 0; i < side; ++i)
                buf[(sig[k] << s.n_bits) | sig[i]] = s.c[(k << s.n_bits) | i];
    }
    transform_axes(buf, s.n_bits, false);
    GridFunction2D g(s.n_bits);
    g.v = std::move(buf);
    return g;
}

Spectrum1D reorder(const Spectrum1D& s, Ordering target) {
    if (target == s.ordering) return s;
    Spectrum1D out;
    out.ordering = target;
    out.n_bits = s.n_bits;
    std::vector<uint64_t> sig = sigma_table(s.n_bits);
    out.c.resize(s.c.size());
    for (uint64_t n = 0; n < s.c.size(); ++n) out.c[n] = s.c[sig[n]];
    return out;
}

Spectrum2D reorder(const Spectrum2D& s, Ordering target) {
    if (target == s.ordering) return s;
    Spectrum2D out;
    out.ordering = target;
    out.n_bits = s.n_bits;
    std::vector<uint64_t> sig = sigma_table(s.n_bits);
    uint64_t side = s.side();
    out.c.resize(s.c.size());
    for (uint64_t k = 0; k < side; ++k)
        for (uint64_t i = 0; i < side; ++i)
            out.c[(k << s.n_bits) | i] = s.c[(sig[k] << s.n_bits) | sig[i]];
    return out;
}

GridFunction2D partial_sum_2d(const GridFunction2D& f, uint64_t n, uint64_t m, Ordering o,
                              uint32_t max_bits) {
    Spectrum2D s = analyze(f, o, max_bits);
    uint64_t side = s.side();
    uint64_t nx = std::min(n, side), ny = std::min(m, side);
    for (uint64_t k = 0; k < side; ++k)
        for (uint64_t i = 0; i < side; ++i)
            if (k >= nx || i >= ny) s.c[(k << s.n_bits) | i] = 0.0;
    return synthesize(s);
}

DiagonalSums::DiagonalSums(const GridFunction2D& f, Ordering o, uint64_t n_max,
                           uint32_t max_bits)
    : N_(f.n_bits), n_max_(n_max), ord_(o) {
    check_bits(N_, max_bits, 2);
    C_ = analyze(f, o, max_bits).c;
    uint64_t side = uint64_t(1) << N_;
    S_.assign(side * side, C_[0]); // S_{1,1} is the constant c(0,0)
    u_.assign(side, 0.0);
    v_.assign(side, 0.0);
    a_.assign(side, 0.0);
    rev_ = bitrev_table(N_);
}

// Synthesize the two borders of the (b+1)x(b+1) coefficient square:
//   u(x) = sum_{k<=b} C(k,b) alpha_k(x),  v(y) = sum_{i<b} C(b,i) alpha_i(y),
// plus the sign row a = alpha_b on cells.
void DiagonalSums::border_row(uint64_t b) {
    uint64_t side = uint64_t(1) << N_;
    std::vector<double> pu(side, 0.0), pv(side, 0.0);
    for (uint64_t k = 0; k <= b; ++k) {
        uint64_t pk = (ord_ == Ordering::Paley) ? k : kaczmarz_to_paley(k);
        pu[pk] = C_[(k << N_) | b];
        if (k < b) pv[pk] = C_[(b << N_) | k];
    }
    fwht(pu.data(), N_);
    fwht(pv.data(), N_);
    for (uint64_t c = 0; c < side; ++c) {
        u_[c] = pu[rev_[c]];
        v_[c] = pv[rev_[c]];
        a_[c] = double(walsh_at_cell(ord_, b, c, N_));
    }
}

bool DiagonalSums::next() {
    if (cur_ >= n_max_) return false;
    if (cur_ == 0) {
        cur_ = 1;
        return true;
    }
    uint64_t b = cur_; // grow the square by border index b
    uint64_t side = uint64_t(1) << N_;
    if (b < side) {
        border_row(b);
#pragma omp parallel for schedule(static)
        for (int64_t x = 0; x < int64_t(side); ++x) {
            double ux = u_[uint64_t(x)], ax = a_[uint64_t(x)];
            double* row = S_.data() + (uint64_t(x) << N_);
            for (uint64_t y = 0; y < side; ++y) row[y] += ux * a_[y] + ax * v_[y];
        }
    }
    // b >= side: no frequencies left at this resolution, sum is unchanged
    ++cur_;
    return true;
}

template <typename S>
static std::string spectrum_json(const S& s) {
    nlohmann::json j;
    j["ordering"] = ordering_name(s.ordering);
    j["resolution"] = s.n_bits;
    j["coefficients"] = s.c;
    return j.dump();
}

std::string to_json(const Spectrum1D& s) { return spectrum_json(s); }
std::string to_json(const Spectrum2D& s) { return spectrum_json(s); }

static void parse_spectrum(const std::string& text, Ordering& o, uint32_t& n_bits,
                           std::vector<double>& c, int axes) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("ordering") ||
        !j.contains("resolution") || !j.contains("coefficients"))
        throw ConfigError("spectrum JSON: need ordering, resolution, coefficients");
    o = ordering_from_name(j["ordering"].get<std::string>());
    n_bits = j["resolution"].get<uint32_t>();
    c = j["coefficients"].get<std::vector<double>>();
    if (c.size() != (uint64_t(1) << (axes * n_bits)))
        throw ConfigError("spectrum JSON: coefficient count does not match resolution");
}

Spectrum1D spectrum1d_from_json(const std::string& text) {
    Spectrum1D s;
    parse_spectrum(text, s.ordering, s.n_bits, s.c, 1);
    return s;
}

Spectrum2D spectrum2d_from_json(const std::string& text) {
    Spectrum2D s;
    parse_spectrum(text, s.ordering, s.n_bits, s.c, 2);
    return s;
}

} // namespace wkz
