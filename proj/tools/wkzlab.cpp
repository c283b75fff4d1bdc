// wkzlab: one experiment per invocation, table (CSV) or JSON output on
// stdout or --out.  Exit codes: 0 ok, 2 config error, 3 budget error,
// 4 acceptance failure.  Outputs embed a digest of the resolved config and
// are byte-identical for identical (config, seed).

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "wkz/acceptance.hpp"
#include "wkz/approx.hpp"
#include "wkz/counterexample.hpp"
#include "wkz/dyadic.hpp"
#include "wkz/errors.hpp"
#include "wkz/io.hpp"
#include "wkz/kernels.hpp"
#include "wkz/rng.hpp"
#include "wkz/spectral.hpp"
#include "wkz/strong_means.hpp"
#include "wkz/walsh.hpp"

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace((unsigned char)s[a])) ++a;
    while (b > a && std::isspace((unsigned char)s[b - 1])) --b;
    return s.substr(a, b - a);
}

struct Config {
    std::string experiment;
    std::map<std::string, std::string> kv;

    bool has(const std::string& k) const { return kv.count(k) != 0; }

    std::string str(const std::string& k, const std::string& def) const {
        auto it = kv.find(k);
        return it == kv.end() ? def : it->second;
    }

    uint64_t u64(const std::string& k, uint64_t def) const {
        auto it = kv.find(k);
        if (it == kv.end()) return def;
        const std::string& s = it->second;
        errno = 0;
        char* end = nullptr;
        if (s.empty() || s[0] == '-')
            throw wkz::ConfigError(k + ": expected a nonnegative integer, got '" + s + "'");
        unsigned long long v = std::strtoull(s.c_str(), &end, 10);
        if (errno != 0 || end != s.c_str() + s.size())
            throw wkz::ConfigError(k + ": expected a nonnegative integer, got '" + s + "'");
        return v;
    }

    double f64(const std::string& k, double def) const {
        auto it = kv.find(k);
        if (it == kv.end()) return def;
        const std::string& s = it->second;
        errno = 0;
        char* end = nullptr;
        double v = std::strtod(s.c_str(), &end);
        if (errno != 0 || s.empty() || end != s.c_str() + s.size())
            throw wkz::ConfigError(k + ": expected a number, got '" + s + "'");
        return v;
    }

    bool flag(const std::string& k, bool def) const {
        auto it = kv.find(k);
        if (it == kv.end()) return def;
        const std::string& s = it->second;
        if (s == "1" || s == "true" || s == "yes" || s == "on") return true;
        if (s == "0" || s == "false" || s == "no" || s == "off") return false;
        throw wkz::ConfigError(k + ": expected a boolean, got '" + s + "'");
    }

    uint64_t seed() const { return u64("seed", 1); }
    uint64_t budget() const { return u64("budget_cells", wkz::kDefaultBudgetCells); }

    std::string canonical() const {
        std::string s = "experiment=" + experiment + "\n";
        for (const auto& [k, v] : kv) s += k + "=" + v + "\n";
        return s;
    }
    std::string digest() const { return wkz::fnv1a_hex(canonical()); }
};

std::vector<wkz::Ordering> systems(const Config& cfg) {
    std::string s = cfg.str("system", "both");
    if (s == "both") return {wkz::Ordering::Paley, wkz::Ordering::Kaczmarz};
    return {wkz::ordering_from_name(s)};
}

std::string csv_head(const Config& cfg, const std::string& columns_doc,
                     const std::string& header_row) {
    std::string s;
    s += "# wkzlab " + cfg.experiment + "\n";
    s += "# config digest: " + cfg.digest() + "\n";
    s += "# seed: " + std::to_string(cfg.seed()) + "\n";
    s += "# columns: " + columns_doc + "\n";
    s += header_row + "\n";
    return s;
}

json jbase(const Config& cfg) {
    json j;
    j["experiment"] = cfg.experiment;
    j["config_digest"] = cfg.digest();
    j["seed"] = cfg.seed();
    json p = json::object();
    for (const auto& [k, v] : cfg.kv) p[k] = v;
    j["params"] = p;
    return j;
}

struct Output {
    std::string content;
    int code = 0;
};

std::string fmt(double v) { return wkz::fmt_double(v); }

Output run_glukhov(const Config& cfg) {
    int p = int(cfg.u64("p", 2));
    uint32_t nmax = uint32_t(cfg.u64("nmax", 8));
    if (nmax < 1) throw wkz::ConfigError("glukhov: nmax must be >= 1");
    std::vector<wkz::GlukhovResult> rows;
    for (wkz::Ordering o : systems(cfg))
        for (uint32_t n = 1; n <= nmax; ++n)
            rows.push_back(wkz::glukhov_integral(p, n, o, cfg.budget()));
    Output out;
    if (cfg.str("format", "csv") == "json") {
        json j = jbase(cfg);
        j["rows"] = json::array();
        for (const auto& r : rows)
            j["rows"].push_back({{"p", r.p},
                                 {"n", r.n},
                                 {"system", wkz::ordering_name(r.system)},
                                 {"numerator", r.numerator},
                                 {"log2_den", r.log2_den},
                                 {"value", r.value},
                                 {"bound_shape", r.bound_shape},
                                 {"ratio", r.ratio}});
        out.content = j.dump(2) + "\n";
    } else {
        out.content = csv_head(cfg,
                               "p (exact int), n (exact int), system (text), value (float; the "
                               "exact value is an integer over 2^(p*n+n)), bound_shape (float), "
                               "ratio (float)",
                               "p,n,system,value,bound_shape,ratio");
        for (const auto& r : rows)
            out.content += std::to_string(r.p) + "," + std::to_string(r.n) + "," +
                           wkz::ordering_name(r.system) + "," + fmt(r.value) + "," +
                           fmt(r.bound_shape) + "," + fmt(r.ratio) + "\n";
    }
    return out;
}

Output run_kernels(const Config& cfg) {
    std::string op = cfg.str("op", "dirichlet");
    if (op == "glukhov") return run_glukhov(cfg);
    uint32_t res = uint32_t(cfg.u64("res", 8));
    uint64_t cells = uint64_t(1) << res;
    Output out;

    if (op == "dirichlet" || op == "fejer") {
        uint64_t lo, hi;
        if (cfg.has("nmax")) {
            lo = op == "fejer" ? 1 : 0;
            hi = cfg.u64("nmax", 8);
        } else {
            lo = hi = cfg.u64("n", 8);
        }
        if (op == "fejer" && lo < 1) throw wkz::ConfigError("kernels: fejer needs n >= 1");
        std::vector<wkz::Ordering> sys = systems(cfg);
        uint64_t need = (hi - lo + 1) * cells * sys.size();
        if (need > cfg.budget())
            throw wkz::BudgetError("kernels: rows * cells exceed the cell budget", need,
                                   cfg.budget());
        json jrows = json::array();
        std::string body;
        for (wkz::Ordering o : sys)
            for (uint64_t n = lo; n <= hi; ++n) {
                std::vector<int64_t> v = op == "dirichlet" ? wkz::dirichlet_cells(o, n, res)
                                                           : wkz::fejer_scaled_cells(o, n, res);
                if (cfg.str("format", "csv") == "json") {
                    jrows.push_back(
                        {{"system", wkz::ordering_name(o)}, {"n", n}, {"values", v}});
                } else {
                    for (uint64_t c = 0; c < cells; ++c)
                        body += std::string(wkz::ordering_name(o)) + "," + std::to_string(n) +
                                "," + std::to_string(c) + "," + std::to_string(v[c]) + "\n";
                }
            }
        if (cfg.str("format", "csv") == "json") {
            json j = jbase(cfg);
            j["op"] = op;
            j["resolution"] = res;
            j["rows"] = std::move(jrows);
            out.content = j.dump(2) + "\n";
        } else {
            out.content = csv_head(cfg,
                                   "system (text), n (exact int), cell (exact int), value "
                                   "(exact int; fejer rows hold n*K_n)",
                                   "system,n,cell,value") +
                          body;
        }
        return out;
    }

    if (op == "table") {
        uint64_t lmin = cfg.u64("lmin", 1), lmax = cfg.u64("lmax", 8);
        json jrows = json::array();
        std::string body;
        for (wkz::Ordering o : systems(cfg)) {
            wkz::KernelTable t = wkz::kernel_table(o, res, lmin, lmax, cfg.budget());
            for (uint64_t l = lmin; l <= lmax; ++l) {
                const int64_t* row = t.row(l);
                if (cfg.str("format", "csv") == "json") {
                    jrows.push_back({{"system", wkz::ordering_name(o)},
                                     {"l", l},
                                     {"values", std::vector<int64_t>(row, row + cells)}});
                } else {
                    for (uint64_t c = 0; c < cells; ++c)
                        body += std::string(wkz::ordering_name(o)) + "," + std::to_string(l) +
                                "," + std::to_string(c) + "," + std::to_string(row[c]) + "\n";
                }
            }
        }
        if (cfg.str("format", "csv") == "json") {
            json j = jbase(cfg);
            j["op"] = op;
            j["resolution"] = res;
            j["rows"] = std::move(jrows);
            out.content = j.dump(2) + "\n";
        } else {
            out.content = csv_head(cfg,
                                   "system (text), l (exact int), cell (exact int), value "
                                   "(exact int)",
                                   "system,l,cell,value") +
                          body;
        }
        return out;
    }

    throw wkz::ConfigError("kernels: unknown op '" + op + "' (dirichlet|fejer|table|glukhov)");
}

Output run_transforms(const Config& cfg) {
    std::string mode = cfg.str("mode", "1d");
    wkz::Ordering o = wkz::ordering_from_name(cfg.str("ordering", "paley"));
    Output out;
    if (mode == "1d") {
        wkz::GridFunction1D f =
            cfg.has("in") ? wkz::grid1d_from_csv(wkz::read_file(cfg.str("in", "")))
                          : wkz::random_grid1d(uint32_t(cfg.u64("res", 8)), cfg.seed());
        uint32_t max_bits = uint32_t(cfg.u64("max_bits", wkz::kDefaultMaxBits1D));
        wkz::Spectrum1D s = wkz::analyze(f, o, max_bits);
        wkz::GridFunction1D g = wkz::synthesize(s);
        double rt = 0.0, ef = 0.0, ec = 0.0;
        for (size_t i = 0; i < f.v.size(); ++i) {
            rt = std::max(rt, std::fabs(g.v[i] - f.v[i]));
            ef += f.v[i] * f.v[i];
        }
        ef /= double(f.v.size());
        for (double c : s.c) ec += c * c;
        double energy_err = std::fabs(ef - ec) / std::max({ef, ec, 1e-300});
        if (cfg.str("format", "csv") == "json") {
            json j = jbase(cfg);
            j["ordering"] = wkz::ordering_name(o);
            j["resolution"] = s.n_bits;
            j["coefficients"] = s.c;
            j["round_trip_error"] = rt;
            j["energy_error"] = energy_err;
            out.content = j.dump(2) + "\n";
        } else {
            out.content = csv_head(cfg,
                                   "index (exact int), coefficient (float)",
                                   "index,coefficient");
            out.content += "# ordering: " + std::string(wkz::ordering_name(o)) + "\n";
            out.content += "# round_trip_error: " + fmt(rt) + "\n";
            out.content += "# energy_error: " + fmt(energy_err) + "\n";
            for (size_t i = 0; i < s.c.size(); ++i)
                out.content += std::to_string(i) + "," + fmt(s.c[i]) + "\n";
        }
        return out;
    }
    if (mode == "2d") {
        wkz::GridFunction2D f =
            cfg.has("in") ? wkz::grid2d_from_csv(wkz::read_file(cfg.str("in", "")))
                          : wkz::random_grid2d(uint32_t(cfg.u64("res", 6)), cfg.seed());
        uint32_t max_bits = uint32_t(cfg.u64("max_bits", wkz::kDefaultMaxBits2D));
        wkz::Spectrum2D s = wkz::analyze(f, o, max_bits);
        wkz::GridFunction2D g = wkz::synthesize(s);
        double rt = 0.0;
        for (size_t i = 0; i < f.v.size(); ++i) rt = std::max(rt, std::fabs(g.v[i] - f.v[i]));
        if (cfg.str("format", "csv") == "json") {
            json j = jbase(cfg);
            j["ordering"] = wkz::ordering_name(o);
            j["resolution"] = s.n_bits;
            j["coefficients"] = s.c;
            j["round_trip_error"] = rt;
            out.content = j.dump(2) + "\n";
        } else {
            out.content = csv_head(cfg,
                                   "k (exact int), i (exact int), coefficient (float)",
                                   "k,i,coefficient");
            out.content += "# ordering: " + std::string(wkz::ordering_name(o)) + "\n";
            out.content += "# round_trip_error: " + fmt(rt) + "\n";
            uint64_t side = s.side();
            for (uint64_t k = 0; k < side; ++k)
                for (uint64_t i = 0; i < side; ++i)
                    out.content += std::to_string(k) + "," + std::to_string(i) + "," +
                                   fmt(s.at(k, i)) + "\n";
        }
        return out;
    }
    throw wkz::ConfigError("transforms: unknown mode '" + mode + "' (1d|2d)");
}

Output run_strong_means(const Config& cfg) {
    std::string mode = cfg.str("mode", "exp");
    uint32_t res = uint32_t(cfg.u64("res", 8));
    wkz::Ordering o = wkz::ordering_from_name(cfg.str("ordering", "kaczmarz"));
    wkz::GridFunction2D f = cfg.has("in")
                                ? wkz::grid2d_from_csv(wkz::read_file(cfg.str("in", "")))
                                : wkz::random_grid2d_unit(res, cfg.seed());

    std::vector<uint64_t> ns;
    std::vector<double> sup, rhs, ratio, log_sup;
    std::vector<int> overflow;

    if (mode == "exp" || mode == "phi") {
        uint64_t nmax = cfg.u64("n", 256);
        if (nmax < 1) throw wkz::ConfigError("strong-means: n must be >= 1");
        for (uint64_t n = 1; n <= nmax; n *= 2) ns.push_back(n);
        if (ns.back() != nmax) ns.push_back(nmax);

        std::vector<wkz::StrongMeanResult> lhs;
        if (mode == "exp") {
            lhs = wkz::strong_exp_mean_profile(f, cfg.f64("A", 1.0), ns, o);
        } else {
            if (!cfg.has("phi")) throw wkz::ConfigError("strong-means: mode=phi needs phi=<expr>");
            wkz::PhiSpec phi = wkz::PhiSpec::parse(cfg.str("phi", ""));
            if (!phi.verify_gauge())
                throw wkz::ConfigError("strong-means: phi is not a gauge (must be "
                                       "nondecreasing with phi(0) = 0)");
            for (uint64_t n : ns) lhs.push_back(wkz::strong_phi_mean(f, phi, n, o));
        }
        wkz::ApproxProfile prof = wkz::approx_profile(f, ns.back());
        double run = 0.0;
        size_t ci = 0;
        for (uint64_t l = 1; l <= ns.back(); ++l) {
            run += std::sqrt(prof.e1[l - 1]) + std::sqrt(prof.e2[l - 1]);
            while (ci < ns.size() && ns[ci] == l) {
                rhs.push_back(run / double(l));
                ++ci;
            }
        }
        for (size_t i = 0; i < ns.size(); ++i) {
            sup.push_back(lhs[i].sup);
            overflow.push_back(lhs[i].overflow ? 1 : 0);
            log_sup.push_back(lhs[i].overflow ? lhs[i].log_sup : 0.0);
            ratio.push_back(rhs[i] > 0.0 ? lhs[i].sup / rhs[i] : 0.0);
        }
    } else if (mode == "pblock") {
        double p = cfg.f64("p", 2.0);
        uint32_t amax = uint32_t(cfg.u64("amax", 5));
        for (uint32_t a = 0; a <= amax; ++a) {
            ns.push_back(uint64_t(1) << a);
            double v = wkz::strong_p_mean_block(f, p, a, o);
            sup.push_back(v);
            rhs.push_back((p + 1.0) * (p + 1.0));
            ratio.push_back(v / ((p + 1.0) * (p + 1.0)));
            overflow.push_back(0);
            log_sup.push_back(0.0);
        }
    } else {
        throw wkz::ConfigError("strong-means: unknown mode '" + mode + "' (exp|phi|pblock)");
    }

    Output out;
    if (cfg.str("format", "csv") == "json") {
        json j = jbase(cfg);
        j["mode"] = mode;
        j["ordering"] = wkz::ordering_name(o);
        j["n"] = ns;
        j["sup"] = sup;
        j["rhs"] = rhs;
        j["ratio"] = ratio;
        j["overflow"] = overflow;
        j["log_sup"] = log_sup;
        out.content = j.dump(2) + "\n";
    } else {
        out.content = csv_head(cfg,
                               "n (exact int), sup (float), rhs (float; comparator), ratio "
                               "(float), overflow (0/1), log_sup (float; only when overflow)",
                               "n,sup,rhs,ratio,overflow,log_sup");
        for (size_t i = 0; i < ns.size(); ++i)
            out.content += std::to_string(ns[i]) + "," + fmt(sup[i]) + "," + fmt(rhs[i]) + "," +
                           fmt(ratio[i]) + "," + std::to_string(overflow[i]) + "," +
                           fmt(log_sup[i]) + "\n";
    }
    return out;
}

Output run_approximation(const Config& cfg) {
    uint32_t res = uint32_t(cfg.u64("res", 8));
    wkz::GridFunction2D f = cfg.has("in")
                                ? wkz::grid2d_from_csv(wkz::read_file(cfg.str("in", "")))
                                : wkz::random_grid2d(res, cfg.seed());
    uint64_t side = uint64_t(1) << f.n_bits;
    uint64_t lmax = cfg.u64("lmax", std::min<uint64_t>(256, side));
    wkz::ApproxProfile prof = wkz::approx_profile(f, lmax);
    Output out;
    if (cfg.str("format", "csv") == "json") {
        json j = jbase(cfg);
        j["l"] = prof.l;
        j["e1"] = prof.e1;
        j["e2"] = prof.e2;
        j["e_dyadic"] = prof.e_dyadic;
        out.content = j.dump(2) + "\n";
    } else {
        out.content = "# wkzlab " + cfg.experiment + "\n";
        out.content += "# config digest: " + cfg.digest() + "\n";
        out.content += "# seed: " + std::to_string(cfg.seed()) + "\n";
        out.content += "# columns: l (exact int), e1 (float), e2 (float), e_dyadic (float)\n";
        out.content += wkz::to_csv(prof);
    }
    return out;
}

json rational_json(const wkz::Rational& r) {
    return {{"num", r.num}, {"den", r.den}, {"value", r.to_double()}};
}

Output run_counterexample(const Config& cfg) {
    wkz::CounterexampleSpec cs;
    cs.psi = wkz::PhiSpec::parse(cfg.str("psi", "u*log1p(u)"));
    cs.c_prime = cfg.f64("cprime", 3.5);
    cs.k_max = uint32_t(cfg.u64("kmax", 2));
    cs.max_resolution = uint32_t(cfg.u64("maxres", 24));
    std::string mode = cfg.str("mode", "deskscale");
    if (mode == "faithful") {
        cs.mode = wkz::CexMode::Faithful;
    } else if (mode == "deskscale") {
        cs.mode = wkz::CexMode::DeskScale;
        std::stringstream ss(cfg.str("A", "2,5"));
        std::string part;
        while (std::getline(ss, part, ',')) {
            part = trim(part);
            if (part.empty()) continue;
            cs.desk_A.push_back(uint32_t(std::strtoull(part.c_str(), nullptr, 10)));
        }
    } else {
        throw wkz::ConfigError("counterexample: unknown mode '" + mode +
                               "' (faithful|deskscale)");
    }

    Output out;
    if (cfg.flag("calibrate", false)) {
        wkz::Calibration cal =
            wkz::calibrate_c_prime(cs.psi, cs.c_prime, cs.k_max, cs.max_resolution);
        std::vector<double> feas = wkz::feasible_c_prime_scan(cs.psi, cs.k_max, cs.max_resolution);
        json j = jbase(cfg);
        j["calibration"] = {{"probe_c_prime", cal.probe_c_prime},
                            {"measured_c0", cal.measured_c0},
                            {"j2_over_j1", cal.j2_over_j1},
                            {"suggested_c_prime", cal.suggested_c_prime}};
        j["feasible_c_prime"] = feas;
        out.content = j.dump(2) + "\n";
        return out;
    }

    wkz::CexSequences seq = wkz::build_sequences(cs);
    wkz::CexFunction F = wkz::build_f(seq);
    std::vector<wkz::KReport> reps;
    for (uint32_t k = 1; k <= cs.k_max; ++k) reps.push_back(wkz::evaluate_at_zero(seq, F, k));
    wkz::TensorReport t = wkz::tensor_divergence(cs, seq, F);

    if (cfg.str("format", "csv") == "csv") {
        out.content = csv_head(cfg,
                               "k (exact int), A (exact int), N (exact int), J1/J2/J3/S "
                               "(exact fractions), c0 (float), sign_aligned (0/1), "
                               "kernel_exact (0/1), s_abs (float), log_main (float), "
                               "log_comparator (float)",
                               "k,A,N,J1,J2,J3,S,c0,sign_aligned,kernel_exact,s_abs,"
                               "log_main,log_comparator");
        for (size_t i = 0; i < reps.size(); ++i) {
            const wkz::KReport& r = reps[i];
            const wkz::TensorRow& row = t.rows[i];
            out.content += std::to_string(r.k) + "," + std::to_string(r.A) + "," +
                           std::to_string(r.N) + "," + r.J1.str() + "," + r.J2.str() + "," +
                           r.J3.str() + "," + r.S.str() + "," + fmt(r.c0) + "," +
                           (r.sign_aligned ? "1" : "0") + "," +
                           (r.kernel_bound_exact ? "1" : "0") + "," + fmt(row.s_abs) + "," +
                           fmt(row.log_main) + "," + fmt(row.log_comparator) + "\n";
        }
        return out;
    }

    json j = jbase(cfg);
    j["mode"] = mode;
    j["psi"] = cs.psi.str();
    j["c_prime"] = cs.c_prime;
    j["sequences"] = {{"B", seq.B}, {"A", seq.A}, {"N", seq.N}, {"resolution", seq.resolution}};
    j["at_zero"] = json::array();
    for (const wkz::KReport& r : reps)
        j["at_zero"].push_back({{"k", r.k},
                                {"A", r.A},
                                {"N", r.N},
                                {"J1", rational_json(r.J1)},
                                {"J2", rational_json(r.J2)},
                                {"J3", rational_json(r.J3)},
                                {"S", rational_json(r.S)},
                                {"tail_nonnegative", r.tail_nonnegative},
                                {"sign_aligned", r.sign_aligned},
                                {"kernel_bound_exact", r.kernel_bound_exact},
                                {"c0", r.c0}});
    j["tensor"] = {{"main_increasing", t.main_increasing},
                   {"comparator_increasing", t.comparator_increasing}};
    j["tensor"]["rows"] = json::array();
    for (const wkz::TensorRow& row : t.rows)
        j["tensor"]["rows"].push_back({{"k", row.k},
                                       {"s_abs", row.s_abs},
                                       {"log_main", row.log_main},
                                       {"log_comparator", row.log_comparator}});
    out.content = j.dump(2) + "\n";
    return out;
}

Output run_acceptance_cmd(const Config& cfg) {
    std::optional<int> only;
    if (cfg.has("only")) only = int(cfg.u64("only", 0));
    std::string report;
    report += "# wkzlab acceptance\n";
    report += "# config digest: " + cfg.digest() + "\n";
    report += "# seed: " + std::to_string(cfg.seed()) + "\n";
    std::vector<wkz::CriterionResult> results = wkz::run_acceptance(cfg.seed(), only, report);
    bool all = true;
    for (const wkz::CriterionResult& r : results) {
        std::fprintf(stderr, "c%02d %7.2fs %s\n", r.id, r.seconds, r.pass ? "PASS" : "FAIL");
        all = all && r.pass;
    }
    Output out;
    if (cfg.str("format", "csv") == "json") {
        json j = jbase(cfg);
        j["criteria"] = json::array();
        size_t npass = 0;
        for (const wkz::CriterionResult& r : results) {
            j["criteria"].push_back(
                {{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
            if (r.pass) ++npass;
        }
        j["passed"] = npass;
        j["total"] = results.size();
        out.content = j.dump(2) + "\n";
    } else {
        out.content = report;
    }
    out.code = all ? 0 : 4;
    return out;
}

Output dispatch(const Config& cfg) {
    const std::string& e = cfg.experiment;
    if (e == "kernels") return run_kernels(cfg);
    if (e == "transforms") return run_transforms(cfg);
    if (e == "glukhov") return run_glukhov(cfg);
    if (e == "strong-means") return run_strong_means(cfg);
    if (e == "approximation") return run_approximation(cfg);
    if (e == "counterexample") return run_counterexample(cfg);
    if (e == "acceptance") return run_acceptance_cmd(cfg);
    throw wkz::ConfigError(
        "unknown experiment '" + e +
        "' (kernels|transforms|glukhov|strong-means|approximation|counterexample|acceptance)");
}

std::map<std::string, std::string> parse_config_file(const std::string& text) {
    std::map<std::string, std::string> kv;
    size_t i = 0;
    while (i < text.size() && std::isspace((unsigned char)text[i])) ++i;
    if (i < text.size() && text[i] == '{') {
        json j;
        try {
            j = json::parse(text);
        } catch (const json::exception& e) {
            throw wkz::ConfigError(std::string("config JSON: ") + e.what());
        }
        if (!j.is_object()) throw wkz::ConfigError("config JSON: top level must be an object");
        for (auto& [k, v] : j.items()) {
            if (v.is_string())
                kv[k] = v.get<std::string>();
            else if (v.is_boolean())
                kv[k] = v.get<bool>() ? "1" : "0";
            else if (v.is_number())
                kv[k] = v.dump();
            else
                throw wkz::ConfigError("config JSON: value of '" + k + "' must be a scalar");
        }
        return kv;
    }
    std::istringstream in(text);
    std::string line;
    int ln = 0;
    while (std::getline(in, line)) {
        ++ln;
        size_t h = line.find('#');
        if (h != std::string::npos) line.erase(h);
        line = trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw wkz::ConfigError("config line " + std::to_string(ln) +
                                   ": expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw wkz::ConfigError("config line " + std::to_string(ln) + ": empty key");
        if (val.size() >= 2 && ((val.front() == '"' && val.back() == '"') ||
                                (val.front() == '\'' && val.back() == '\'')))
            val = val.substr(1, val.size() - 2);
        kv[key] = val;
    }
    return kv;
}

// Registers string-typed options on a subcommand and copies the ones the
// user actually passed into the config map (so flags beat config files).
struct OptBag {
    CLI::App* cmd = nullptr;
    std::deque<std::pair<std::string, std::string>> vals;
    std::vector<CLI::Option*> opts;

    void add(const char* flag, const char* key, const char* desc) {
        vals.emplace_back(key, std::string());
        opts.push_back(cmd->add_option(flag, vals.back().second, desc));
    }
    void add_flag(const char* flag, const char* key, const char* desc) {
        vals.emplace_back(key, "1");
        opts.push_back(cmd->add_flag(flag)->description(desc));
    }
    void apply(std::map<std::string, std::string>& kv) const {
        for (size_t i = 0; i < opts.size(); ++i)
            if (opts[i]->count()) kv[vals[i].first] = vals[i].second;
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dyadic function workbench: kernels, transforms, strong means, and the "
                 "divergence construction"};
    app.require_subcommand(0, 1);

    std::string g_out, g_format, g_config, g_experiment, g_seed, g_threads, g_budget;
    CLI::Option* o_out = app.add_option("--out", g_out,
                                        "output path (default stdout); the literal values "
                                        "'csv'/'json' select the format instead");
    CLI::Option* o_format =
        app.add_option("--format", g_format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    CLI::Option* o_seed = app.add_option("--seed", g_seed, "random seed (default 1)");
    CLI::Option* o_threads = app.add_option("--threads", g_threads, "cap OpenMP worker count");
    CLI::Option* o_budget =
        app.add_option("--budget-cells", g_budget, "cell budget for kernel tables/integrals");
    CLI::Option* o_config = app.add_option(
        "--config", g_config, "config file: 'key = value' lines or a flat JSON object");
    CLI::Option* o_experiment =
        app.add_option("--experiment", g_experiment, "experiment name (alternative to 'run')");

    std::deque<OptBag> bags;
    auto make_sub = [&](const char* name, const char* desc) -> OptBag& {
        bags.emplace_back();
        bags.back().cmd = app.add_subcommand(name, desc);
        bags.back().cmd->fallthrough();
        return bags.back();
    };

    OptBag& b_kernels = make_sub("kernels", "kernel rows and block oscillation integrals");
    b_kernels.add("--op", "op", "dirichlet|fejer|table|glukhov");
    b_kernels.add("--system", "system", "paley|kaczmarz|both");
    b_kernels.add("--n", "n", "single kernel index");
    b_kernels.add("--nmax", "nmax", "emit indices up to nmax");
    b_kernels.add("--res", "res", "grid resolution (bits)");
    b_kernels.add("--lmin", "lmin", "table: first row");
    b_kernels.add("--lmax", "lmax", "table: last row");
    b_kernels.add("--p", "p", "glukhov: tensor power");

    OptBag& b_transforms = make_sub("transforms", "analyze a grid and report its spectrum");
    b_transforms.add("--mode", "mode", "1d|2d");
    b_transforms.add("--ordering", "ordering", "paley|kaczmarz");
    b_transforms.add("--res", "res", "grid resolution for the seeded random input");
    b_transforms.add("--max-bits", "max_bits", "resolution cap for the transform");
    b_transforms.add("--in", "in", "read the input grid from a CSV file");

    OptBag& b_glukhov = make_sub("glukhov", "block oscillation integrals vs the factorial shape");
    b_glukhov.add("--p", "p", "tensor power");
    b_glukhov.add("--nmax", "nmax", "blocks n = 1..nmax");
    b_glukhov.add("--system", "system", "paley|kaczmarz|both");

    OptBag& b_strong = make_sub("strong-means", "strong means of diagonal partial sums");
    b_strong.add("--mode", "mode", "exp|phi|pblock");
    b_strong.add("--A", "A", "exp gauge scale");
    b_strong.add("--n", "n", "largest checkpoint");
    b_strong.add("--phi", "phi", "gauge expression, e.g. \"sqrt\" or \"u*log1p(u)\"");
    b_strong.add("--p", "p", "pblock: mean exponent");
    b_strong.add("--amax", "amax", "pblock: largest block exponent");
    b_strong.add("--res", "res", "grid resolution for the seeded random input");
    b_strong.add("--ordering", "ordering", "paley|kaczmarz");
    b_strong.add("--in", "in", "read the input grid from a CSV file");

    OptBag& b_approx = make_sub("approximation", "best step-function approximation profiles");
    b_approx.add("--res", "res", "grid resolution for the seeded random input");
    b_approx.add("--lmax", "lmax", "profile rows l = 1..lmax");
    b_approx.add("--in", "in", "read the input grid from a CSV file");

    OptBag& b_cex = make_sub("counterexample", "the divergence construction and its trace");
    b_cex.add("--psi", "psi", "gauge expression");
    b_cex.add("--cprime", "cprime", "coupling constant");
    b_cex.add("--kmax", "kmax", "number of components");
    b_cex.add("--mode", "mode", "faithful|deskscale");
    b_cex.add("--A", "A", "deskscale: comma-separated block indices, e.g. 2,5");
    b_cex.add("--maxres", "maxres", "resolution cap (bits)");
    b_cex.add_flag("--calibrate", "calibrate", "report coupling calibration and feasibility only");

    OptBag& b_accept = make_sub("acceptance", "run the acceptance battery");
    b_accept.add("--only", "only", "run a single criterion (1..11)");

    std::string run_exp;
    std::vector<std::string> run_kvs;
    CLI::App* sc_run = app.add_subcommand("run", "run an experiment from key=value arguments");
    sc_run->fallthrough();
    sc_run->add_option("experiment", run_exp,
                       "kernels|transforms|glukhov|strong-means|approximation|"
                       "counterexample|acceptance");
    sc_run->add_option("params", run_kvs, "key=value parameter overrides");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        Config cfg;

        if (o_config->count()) {
            std::map<std::string, std::string> file_kv = parse_config_file(wkz::read_file(g_config));
            auto it = file_kv.find("experiment");
            if (it != file_kv.end()) {
                cfg.experiment = it->second;
                file_kv.erase(it);
            }
            cfg.kv = std::move(file_kv);
        }

        CLI::App* chosen = nullptr;
        for (CLI::App* sc : app.get_subcommands()) chosen = sc;
        if (chosen != nullptr && chosen != sc_run) {
            cfg.experiment = chosen->get_name();
            for (const OptBag& b : bags)
                if (b.cmd == chosen) b.apply(cfg.kv);
        } else if (chosen == sc_run) {
            // the experiment may come from a config file, leaving only
            // key=value positionals: the first positional is a parameter,
            // not a name, whenever it carries an '='
            if (run_exp.find('=') != std::string::npos)
                run_kvs.insert(run_kvs.begin(), run_exp);
            else if (!run_exp.empty())
                cfg.experiment = run_exp;
            for (const std::string& kvs : run_kvs) {
                size_t eq = kvs.find('=');
                if (eq == std::string::npos || eq == 0)
                    throw wkz::ConfigError("run: expected key=value, got '" + kvs + "'");
                cfg.kv[trim(kvs.substr(0, eq))] = trim(kvs.substr(eq + 1));
            }
        }
        if (o_experiment->count()) cfg.experiment = g_experiment;
        if (cfg.experiment.empty())
            throw wkz::ConfigError("no experiment selected (use a subcommand, 'run <name>', "
                                   "--experiment, or an 'experiment' config key)");

        if (o_seed->count()) cfg.kv["seed"] = g_seed;
        if (o_budget->count()) cfg.kv["budget_cells"] = g_budget;
        if (o_threads->count()) cfg.kv["threads"] = g_threads;
        if (o_format->count()) cfg.kv["format"] = g_format;
        if (o_out->count()) cfg.kv["out"] = g_out;

        // plumbing keys: pull out of the config map (out/threads do not change
        // the result, so they stay out of the digest)
        std::string out_path = cfg.str("out", "");
        cfg.kv.erase("out");
        uint64_t threads = cfg.u64("threads", 0);
        cfg.kv.erase("threads");
        if (out_path == "csv" || out_path == "json") {
            cfg.kv["format"] = out_path;
            out_path.clear();
        }
        std::string format = cfg.str("format", "csv");
        if (format != "csv" && format != "json")
            throw wkz::ConfigError("format: expected csv or json, got '" + format + "'");

        // validate seed/budget values early so errors hit before any work
        cfg.seed();
        cfg.budget();

#ifdef _OPENMP
        if (threads > 0) omp_set_num_threads(int(threads));
#else
        (void)threads;
#endif

        Output out = dispatch(cfg);
        if (out_path.empty()) {
            std::fwrite(out.content.data(), 1, out.content.size(), stdout);
            std::fflush(stdout);
        } else {
            wkz::write_file(out_path, out.content);
        }
        return out.code;
    } catch (const wkz::BudgetError& e) {
        json j = {{"error", "budget"},
                  {"what", e.what()},
                  {"required", e.required()},
                  {"allowed", e.allowed()}};
        std::fprintf(stderr, "%s\n", j.dump().c_str());
        return 3;
    } catch (const std::bad_alloc&) {
        json j = {{"error", "budget"}, {"what", "out of memory"}};
        std::fprintf(stderr, "%s\n", j.dump().c_str());
        return 3;
    } catch (const std::invalid_argument& e) {
        json j = {{"error", "config"}, {"what", e.what()}};
        std::fprintf(stderr, "%s\n", j.dump().c_str());
        return 2;
    } catch (const std::exception& e) {
        json j = {{"error", "internal"}, {"what", e.what()}};
        std::fprintf(stderr, "%s\n", j.dump().c_str());
        return 2;
    }
}
