// wkz_bench: times the OpenMP kernels against the serial references and
// checks that both sides agree.  --smoke shrinks every size so the whole
// run finishes in well under a second (used as a build check).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "wkz/approx.hpp"
#include "wkz/dyadic.hpp"
#include "wkz/kernels.hpp"
#include "wkz/rng.hpp"
#include "wkz/serial_ref.hpp"
#include "wkz/spectral.hpp"
#include "wkz/walsh.hpp"

namespace {

double now_s() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

template <class F> double time_it(F&& fn, int reps) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        double t0 = now_s();
        fn();
        best = std::min(best, now_s() - t0);
    }
    return best;
}

void report(const char* name, double serial_s, double parallel_s, bool agree) {
    std::printf("%-28s serial %9.4fs   parallel %9.4fs   speedup %6.2fx   %s\n", name, serial_s,
                parallel_s, parallel_s > 0 ? serial_s / parallel_s : 0.0,
                agree ? "agree" : "DISAGREE");
}

} // namespace

int main(int argc, char** argv) {
    bool smoke = false;
    int reps = 3;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--smoke") == 0) smoke = true;
        else if (std::strcmp(argv[i], "--reps") == 0 && i + 1 < argc) reps = std::atoi(argv[++i]);
        else {
            std::fprintf(stderr, "usage: wkz_bench [--smoke] [--reps N]\n");
            return 2;
        }
    }
    if (smoke) reps = 1;
    bool all_agree = true;

    { // Dirichlet kernel row, worst-case index (all digits set)
        uint32_t res = smoke ? 10 : 16;
        uint64_t n = (uint64_t(1) << res) - 1;
        std::vector<int64_t> a, b;
        double ts = time_it([&] { a = wkz::serial::dirichlet_direct(wkz::Ordering::Paley, n, res); }, reps);
        double tp = time_it([&] { b = wkz::dirichlet_cells(wkz::Ordering::Paley, n, res); }, reps);
        bool ok = a == b;
        all_agree &= ok;
        report("dirichlet row", ts, tp, ok);
    }

    { // 2D transform
        uint32_t res = smoke ? 6 : 10;
        wkz::GridFunction2D f = wkz::random_grid2d(res, 42);
        wkz::Spectrum2D sa, sb;
        double ts = time_it([&] { sa = wkz::serial::analyze2d_serial(f, wkz::Ordering::Kaczmarz); }, reps);
        double tp = time_it([&] { sb = wkz::analyze(f, wkz::Ordering::Kaczmarz, res); }, reps);
        bool ok = sa.c == sb.c;
        all_agree &= ok;
        report("2d transform", ts, tp, ok);
    }

    { // diagonal partial-sum stream vs fresh truncations
        uint32_t res = smoke ? 5 : 8;
        uint64_t n = smoke ? 8 : 64;
        wkz::GridFunction2D f = wkz::random_grid2d(res, 43);
        std::vector<double> last_stream, last_direct;
        double tp = time_it(
            [&] {
                wkz::DiagonalSums ds(f, wkz::Ordering::Kaczmarz, n, res);
                while (ds.next()) {}
                last_stream = ds.grid();
            },
            reps);
        double ts = time_it(
            [&] { last_direct = wkz::serial::diagonal_sum_direct(f, wkz::Ordering::Kaczmarz, n).v; },
            reps);
        double diff = 0.0;
        for (size_t i = 0; i < last_direct.size(); ++i)
            diff = std::max(diff, std::fabs(last_direct[i] - last_stream[i]));
        bool ok = diff <= 1e-9;
        all_agree &= ok;
        report("diagonal sums", ts, tp, ok);
    }

    { // block oscillation integral, p = 2
        uint32_t n = smoke ? 4 : 9;
        wkz::GlukhovResult ga, gb;
        double ts = time_it([&] { ga = wkz::serial::glukhov_integral_direct(2, n, wkz::Ordering::Paley); }, reps);
        double tp = time_it([&] { gb = wkz::glukhov_integral(2, n, wkz::Ordering::Paley); }, reps);
        bool ok = ga.numerator == gb.numerator && ga.log2_den == gb.log2_den;
        all_agree &= ok;
        report("block integral p=2", ts, tp, ok);
    }

    { // rectangle oscillation scan
        uint32_t res = smoke ? 6 : 10;
        wkz::GridFunction2D f = wkz::random_grid2d(res, 44);
        uint32_t L = res / 2;
        double ea = 0, eb = 0;
        double ts = time_it([&] { ea = wkz::serial::best_dyadic_2d_serial(f, L); }, reps);
        double tp = time_it([&] { eb = wkz::best_dyadic_2d(f, L); }, reps);
        bool ok = ea == eb;
        all_agree &= ok;
        report("rectangle oscillation", ts, tp, ok);
    }

    if (!all_agree) {
        std::fprintf(stderr, "serial and parallel paths disagree\n");
        return 1;
    }
    return 0;
}
