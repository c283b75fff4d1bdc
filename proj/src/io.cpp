#include "wkz/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "wkz/rng.hpp"

namespace wkz {

std::string fmt_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    // try shorter forms first; take the first that round-trips
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        double back = std::strtod(buf, nullptr);
        if (back == v) return buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_double(double v, int precision) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    return buf;
}

std::string fnv1a_hex(const std::string& data) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
    return buf;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out.write(content.data(), std::streamsize(content.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

GridFunction1D random_grid1d(uint32_t n_bits, uint64_t seed) {
    Rng rng(seed);
    GridFunction1D g(n_bits);
    for (double& x : g.v) x = rng.sym();
    return g;
}

GridFunction2D random_grid2d(uint32_t n_bits, uint64_t seed) {
    Rng rng(seed);
    GridFunction2D g(n_bits);
    for (double& x : g.v) x = rng.sym();
    return g;
}

GridFunction2D random_grid2d_unit(uint32_t n_bits, uint64_t seed) {
    GridFunction2D g = random_grid2d(n_bits, seed);
    double mx = 0.0;
    for (double x : g.v) mx = std::max(mx, std::fabs(x));
    if (mx > 0.0)
        for (double& x : g.v) x /= mx;
    return g;
}

GridFunction1D random_int_grid1d(uint32_t n_bits, uint64_t seed, int64_t range) {
    Rng rng(seed);
    GridFunction1D g(n_bits);
    for (double& x : g.v) x = double(rng.int_range(-range, range));
    return g;
}

GridFunction2D random_int_grid2d(uint32_t n_bits, uint64_t seed, int64_t range) {
    Rng rng(seed);
    GridFunction2D g(n_bits);
    for (double& x : g.v) x = double(rng.int_range(-range, range));
    return g;
}

} // namespace wkz
