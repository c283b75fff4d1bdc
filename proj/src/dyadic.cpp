#include "wkz/dyadic.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "wkz/fwht.hpp"
#include "wkz/io.hpp"

namespace wkz {

static void check_resolution_1d(uint32_t n_bits) {
    if (n_bits > kMaxResolution1D)
        throw BudgetError("grid resolution " + std::to_string(n_bits) + " exceeds 1D cap",
                          uint64_t(1) << n_bits, uint64_t(1) << kMaxResolution1D);
}

static void check_resolution_2d(uint32_t n_bits) {
    if (n_bits > kMaxResolution2D)
        throw BudgetError("grid resolution " + std::to_string(n_bits) + " exceeds 2D cap",
                          uint64_t(1) << (2 * n_bits), uint64_t(1) << (2 * kMaxResolution2D));
}

BitPoint::BitPoint(uint32_t resolution, uint64_t coords) : res_(resolution), coords_(coords) {
    if (resolution > 64)
        throw std::invalid_argument("BitPoint resolution > 64");
    if (resolution < 64 && (coords >> resolution) != 0)
        throw std::invalid_argument("BitPoint coordinates set beyond resolution");
}

BitPoint BitPoint::from_cell(uint32_t resolution, uint64_t cell_index) {
    if (resolution > 64)
        throw std::invalid_argument("BitPoint resolution > 64");
    if (resolution < 64 && (cell_index >> resolution) != 0)
        throw std::invalid_argument("cell index out of range");
    return BitPoint(resolution, reverse_bits(cell_index, resolution));
}

uint64_t BitPoint::cell() const { return reverse_bits(coords_, res_); }

BitPoint group_add(const BitPoint& x, const BitPoint& y) {
    if (x.resolution() != y.resolution())
        throw std::invalid_argument("group_add: mixed resolutions");
    return BitPoint(x.resolution(), x.coords() ^ y.coords());
}

int rademacher(uint32_t k, const BitPoint& x) {
    if (k >= x.resolution())
        throw std::invalid_argument("rademacher: coordinate beyond resolution");
    return x.bit(k) ? -1 : 1;
}

BitPoint tau(uint32_t A, const BitPoint& x) {
    if (A > x.resolution())
        throw std::invalid_argument("tau: block beyond resolution");
    uint64_t low = A ? reverse_bits(x.coords(), A) : 0;
    uint64_t mask = (A == 64) ? ~uint64_t(0) : ((uint64_t(1) << A) - 1);
    return BitPoint(x.resolution(), (x.coords() & ~mask) | low);
}

uint64_t tau_cell(uint32_t A, uint64_t cell, uint32_t n_bits) {
    // x_0..x_{A-1} are the top A bits of the cell index; tau reverses them.
    if (A > n_bits)
        throw std::invalid_argument("tau_cell: block beyond resolution");
    if (A == 0) return cell;
    uint32_t shift = n_bits - A;
    uint64_t top = cell >> shift;
    uint64_t rest = cell & ((uint64_t(1) << shift) - 1);
    return (reverse_bits(top, A) << shift) | rest;
}

GridFunction1D::GridFunction1D(uint32_t n_bits_, double fill) : n_bits(n_bits_) {
    check_resolution_1d(n_bits_);
    v.assign(uint64_t(1) << n_bits_, fill);
}

GridFunction2D::GridFunction2D(uint32_t n_bits_, double fill) : n_bits(n_bits_) {
    check_resolution_2d(n_bits_);
    v.assign(uint64_t(1) << (2 * n_bits_), fill);
}

namespace detail {

// Fixed-chunk pairwise sum: result does not depend on thread count.
double det_sum(const double* a, uint64_t n) {
    constexpr uint64_t kChunk = 4096;
    if (n <= kChunk) {
        double s = 0.0;
        for (uint64_t i = 0; i < n; ++i) s += a[i];
        return s;
    }
    uint64_t chunks = (n + kChunk - 1) / kChunk;
    std::vector<double> partial(chunks, 0.0);
#pragma omp parallel for schedule(static)
    for (int64_t c = 0; c < int64_t(chunks); ++c) {
        uint64_t lo = uint64_t(c) * kChunk, hi = lo + kChunk < n ? lo + kChunk : n;
        double s = 0.0;
        for (uint64_t i = lo; i < hi; ++i) s += a[i];
        partial[uint64_t(c)] = s;
    }
    double s = 0.0;
    for (double p : partial) s += p;
    return s;
}

} // namespace detail

double integrate(const GridFunction1D& f) {
    return std::ldexp(detail::det_sum(f.v.data(), f.v.size()), -int(f.n_bits));
}

double integrate(const GridFunction2D& f) {
    return std::ldexp(detail::det_sum(f.v.data(), f.v.size()), -int(2 * f.n_bits));
}

static double norm_impl(const std::vector<double>& v, double p, int log2_cells) {
    if (!(p > 0.0))
        throw std::invalid_argument("norm: p must be positive (or inf)");
    if (std::isinf(p)) {
        double m = 0.0;
#pragma omp parallel for reduction(max : m) schedule(static)
        for (int64_t i = 0; i < int64_t(v.size()); ++i) m = std::max(m, std::fabs(v[uint64_t(i)]));
        return m;
    }
    std::vector<double> pw(v.size());
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < int64_t(v.size()); ++i) pw[uint64_t(i)] = std::pow(std::fabs(v[uint64_t(i)]), p);
    double mean = std::ldexp(detail::det_sum(pw.data(), pw.size()), -log2_cells);
    return std::pow(mean, 1.0 / p);
}

double norm(const GridFunction1D& f, double p) { return norm_impl(f.v, p, int(f.n_bits)); }
double norm(const GridFunction2D& f, double p) { return norm_impl(f.v, p, int(2 * f.n_bits)); }

// ---- serialization ----

static std::string values_csv(const std::vector<double>& v, uint32_t n_bits, const char* kind) {
    std::string out;
    out += "# " + std::string(kind) + " resolution=" + std::to_string(n_bits) + "\n";
    for (double x : v) {
        out += fmt_double(x);
        out += '\n';
    }
    return out;
}

std::string to_csv(const GridFunction1D& f) { return values_csv(f.v, f.n_bits, "grid1d"); }
std::string to_csv(const GridFunction2D& f) { return values_csv(f.v, f.n_bits, "grid2d"); }

static std::vector<double> parse_csv_values(const std::string& text) {
    std::vector<double> vals;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos || line[pos] == '#') continue;
        vals.push_back(std::stod(line.substr(pos)));
    }
    return vals;
}

GridFunction1D grid1d_from_csv(const std::string& text) {
    std::vector<double> vals = parse_csv_values(text);
    uint32_t n = 0;
    while ((uint64_t(1) << n) < vals.size()) ++n;
    if ((uint64_t(1) << n) != vals.size())
        throw ConfigError("grid1d csv: value count is not a power of two");
    GridFunction1D f(n);
    f.v = std::move(vals);
    return f;
}

GridFunction2D grid2d_from_csv(const std::string& text) {
    std::vector<double> vals = parse_csv_values(text);
    uint32_t n = 0;
    while ((uint64_t(1) << (2 * n)) < vals.size()) ++n;
    if ((uint64_t(1) << (2 * n)) != vals.size())
        throw ConfigError("grid2d csv: value count is not a power of four");
    GridFunction2D f(n);
    f.v = std::move(vals);
    return f;
}

static std::string values_json(const std::vector<double>& v, uint32_t n_bits) {
    std::string out = "{\"resolution\": " + std::to_string(n_bits) + ", \"values\": [";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += fmt_double(v[i]);
    }
    out += "]}";
    return out;
}

std::string to_json(const GridFunction1D& f) { return values_json(f.v, f.n_bits); }
std::string to_json(const GridFunction2D& f) { return values_json(f.v, f.n_bits); }

GridFunction1D grid1d_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    GridFunction1D f(j.at("resolution").get<uint32_t>());
    auto vals = j.at("values").get<std::vector<double>>();
    if (vals.size() != f.size())
        throw ConfigError("grid1d json: values length does not match resolution");
    f.v = std::move(vals);
    return f;
}

GridFunction2D grid2d_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    GridFunction2D f(j.at("resolution").get<uint32_t>());
    auto vals = j.at("values").get<std::vector<double>>();
    if (vals.size() != f.size())
        throw ConfigError("grid2d json: values length does not match resolution");
    f.v = std::move(vals);
    return f;
}

} // namespace wkz
