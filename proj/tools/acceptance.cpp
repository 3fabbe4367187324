// One PASS/FAIL line per acceptance criterion. `acceptance 3 5` runs a subset.
#include "zt/zt13.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace zt;

namespace {

using cd = std::complex<double>;

cd to_cd(const ExtComplex& z) { return {static_cast<double>(z.re), static_cast<double>(z.im)}; }

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

// ---- 1 ----
Outcome gauss_identity() {
    PrecisionScope ps(40);
    double worst = 0;
    for (int q = 1; q <= 300; ++q) {
        ExtComplex s = direct_sum<ExtReal>(q - 1, ExtReal(ExtReal(2) / q), ExtReal(0), true, DirectMode::full);
        cd iq = std::pow(cd(0, 1), -q);
        cd expect = std::sqrt(double(q)) * cd(1, 1) * (1.0 + iq) / 2.0;
        double scale = std::max(std::abs(expect), std::sqrt(double(q)));
        worst = std::max(worst, std::abs(to_cd(s) - expect) / scale);
    }
    return {worst <= 1e-12, "max rel err " + fmt("%.2e", worst)};
}

// ---- 2 ----
Outcome reciprocity() {
    PrecisionScope ps(40);
    std::mt19937_64 rng(20130101);
    std::uniform_int_distribution<int> pick(-50, 50);
    int done = 0;
    double worst = 0;
    while (done < 500) {
        int a = pick(rng), c = pick(rng), b = pick(rng);
        if (a == 0 || c == 0 || std::abs(a * c) > 50 || (a * c + b) % 2 != 0) continue;
        ++done;
        ExtReal A(a), B(b), C(c);
        ExtComplex lhs = direct_sum<ExtReal>(std::abs(c) - 1, ExtReal(A / C), ExtReal(B / (2 * C)), true, DirectMode::full);
        ExtComplex rhs0 = direct_sum<ExtReal>(std::abs(a) - 1, ExtReal(-C / A), ExtReal(-B / (2 * A)), true, DirectMode::full);
        ExtReal ph = ExtReal(std::abs(a * c) - b * b) / (4 * A * C);
        ExtComplex rhs = unit_phase(ph) * rhs0 * ExtReal(sqrt(ExtReal(abs(C / A))));
        double scale = std::max(1.0, std::sqrt(double(std::abs(c))));
        worst = std::max(worst, std::abs(to_cd(lhs) - to_cd(rhs)) / scale);
    }
    return {worst <= 1e-12, "500 triples, max rel err " + fmt("%.2e", worst)};
}

// ---- 3, 4 ----
struct TableCase {
    const char* x;
    const char* theta;
    cd exact;
    double basic_rel;
    int n_K;
    std::vector<std::int64_t> L;
};

const std::int64_t N0 = 129901233;

std::vector<TableCase> table_cases() {
    return {
        {"1/sqrt(45)", "1-sqrt(23/71)", {-4527.85134, -4577.13867}, 2.943e-3, 11,
         {129901233, 19364532, 5650494, 2413049, 824395, 60139, 17548, 7493, 2559, 186, 54, 22}},
        {"1-e/pi", "1/e", {-5301.47806, 11524.4924}, 1.259e-3, 11,
         {129901233, 17503414, 7377331, 2748749, 868918, 141994, 16948, 6409, 2279, 431, 122, 60}},
        {"sqrt(2)/10", "sqrt(10/71)", {12144.43440, -1943.66515}, 9.958e-7, 6,
         {129901233, 18370808, 1305572, 92784, 6593, 468, 33}},
        // x fixed by its nearest-integer expansion [0; 3, 154, -275596610848, 8, 3, -2, ...]
        {"1/(3+1/(154+1/(-275596610848+1/(8+1/(3+1/(-2))))))", "1/(2*e)", {-10.05611070, 2.724765960}, 2.389e-4, 3,
         {129901233, 43206889, 280564, -1}},
        {"1/2-sqrt(pi)/129901233^2", "1/(pi*129901233)", {4.85720022e7, 1.04582716e7}, 1.419e-9, 2,
         {129901233, 64950616, 0}},
    };
}

struct TableRun {
    std::vector<cd> direct, basic, refined;
    std::vector<QgsChain<ExtReal>> chains;
};

const TableRun& table_run() {
    static TableRun r;
    static bool done = false;
    if (done) return r;
    PrecisionScope ps(40);
    for (const auto& c : table_cases()) {
        GaussSumSpec s;
        s.N = N0;
        s.x = parse_extreal(c.x);
        s.theta = parse_extreal(c.theta);
        r.direct.push_back(to_cd(direct_sum(s)));
        QgsOptions o;
        o.K = 20;
        o.P = 3;
        auto b = qgs(s, o);
        r.basic.push_back(to_cd(b.value));
        r.chains.push_back(b.chain);
        o.refined = true;
        r.refined.push_back(to_cd(qgs(s, o).value));
    }
    done = true;
    return r;
}

Outcome goldens_ae() {
    const auto& r = table_run();
    auto cases = table_cases();
    bool ok = true;
    std::ostringstream d;
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const auto& c = cases[i];
        double exact_rel = std::abs(r.direct[i] - c.exact) / std::abs(c.exact);
        double rel = std::abs(r.basic[i] - r.direct[i]) / std::abs(r.direct[i]);
        double ratio = rel / c.basic_rel;
        std::vector<std::int64_t> L;
        for (const auto& s : r.chains[i].states) L.push_back(s.L);
        bool meta = r.chains[i].n_K == c.n_K && L == c.L;
        bool case_ok = exact_rel <= 1e-8 && ratio >= 1.0 / 3 && ratio <= 3 && meta;
        ok = ok && case_ok;
        d << char('A' + i) << "[exact " << fmt("%.1e", exact_rel) << " ratio " << fmt("%.2f", ratio)
          << (meta ? " chain ok" : " chain MISMATCH") << "] ";
    }
    return {ok, d.str()};
}

Outcome refined_gain() {
    const auto& r = table_run();
    bool ok = true;
    std::ostringstream d;
    for (std::size_t i = 0; i < r.direct.size(); ++i) {
        double eb = std::abs(r.basic[i] - r.direct[i]);
        double er = std::abs(r.refined[i] - r.direct[i]);
        double gain = eb / er;
        ok = ok && gain >= 3;
        d << char('A' + i) << " x" << fmt("%.1f", gain) << ' ';
    }
    return {ok, "abs-error reduction " + d.str()};
}

// ---- 5 ----
// The 1/(2 sqrt K) cap applies to both modes; the 1e-2 share is taken on the refined mode
// used by the zt13 pipeline. Basic-mode figures are reported alongside.
Outcome qgs_sweep() {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<std::int64_t> n(1000, 1000000);
    const int total = 1000;
    int basic_1e2 = 0, refined_1e2 = 0;
    double basic_worst = 0, refined_worst = 0;
    double cap = 1 / (2 * std::sqrt(30.0));
    for (int i = 0; i < total; ++i) {
        GaussSumSpec s;
        s.N = n(rng);
        PrecisionScope ps(gauss_digits(s.N));
        s.x = ExtReal(u(rng));
        s.theta = ExtReal(u(rng));
        cd ex = to_cd(direct_sum(s));
        QgsOptions o;
        o.K = 30;
        double rb = std::abs(to_cd(qgs(s, o).value) - ex) / std::abs(ex);
        o.refined = true;
        double rr = std::abs(to_cd(qgs(s, o).value) - ex) / std::abs(ex);
        basic_worst = std::max(basic_worst, rb);
        refined_worst = std::max(refined_worst, rr);
        if (rb <= 1e-2) ++basic_1e2;
        if (rr <= 1e-2) ++refined_1e2;
    }
    bool ok = basic_worst <= cap && refined_worst <= cap && refined_1e2 >= 990;
    return {ok, "refined: max rel " + fmt("%.3e", refined_worst) + ", <=1e-2 in " + std::to_string(refined_1e2) +
                    "/1000; basic: max rel " + fmt("%.3e", basic_worst) + ", <=1e-2 in " +
                    std::to_string(basic_1e2) + "/1000; cap " + fmt("%.4f", cap)};
}

// ---- 6 ----
Outcome window_check() {
    PrecisionScope ps(height_digits(1e24));
    ExtReal t("1e24");
    ExtReal s = main_sum_with_phase(t, theta_c(t), 398941625041LL, 398942280401LL);
    ExtReal p = principal_term(1595769121607LL, t);
    double sv = static_cast<double>(s), pv = static_cast<double>(p);
    bool ok = std::abs(sv - 4.727e-4) <= 2e-6 && std::abs(pv - 4.744e-4) <= 2e-7;
    return {ok, "window " + fmt("%.5e", sv) + ", principal " + fmt("%.5e", pv) + ", rel gap " +
                    fmt("%.2e", std::abs(pv - sv) / std::abs(pv))};
}

// ---- 7 ----
Outcome desk_scale() {
    Zt13Config c;
    c.t = ExtReal("1e16");
    c.eps_t = ExtReal("0.0482");
    Zt13Result r = zt13(c);
    auto ref = rsf_z(ExtReal("1e16"));
    double err = std::abs(static_cast<double>(ExtReal(r.z_estimate - ref.z)));
    double bound = 0.0482 * std::abs(static_cast<double>(r.zp));
    return {err <= bound, "zt13 " + to_string(r.z_estimate, 9) + " rsf " + to_string(ref.z, 9) + " abs err " +
                              fmt("%.3e", err) + " <= " + fmt("%.3e", bound) + ", rel " +
                              fmt("%.2e", err / std::abs(static_cast<double>(ref.z)))};
}

// ---- 8 ----
// tabulated relative errors of the 37 pivot blocks and their RS partial sums
const double tab_rel[37] = {1.06e-2, 1.80e-3, 1.27e-3, 1.99e-2, 9.90e-4, 7.46e-4, 1.09e-3, 2.06e-3, 2.98e-3, 9.31e-4,
                            2.24e-4, 2.27e-3, 3.53e-3, 2.35e-3, 1.19e-3, 5.89e-3, 5.40e-3, 3.70e-3, 2.72e-2, 1.50e-3,
                            2.07e-5, 2.62e-3, 2.86e-4, 8.04e-4, 8.33e-3, 8.50e-2, 1.41e-3, 1.52e-3, 1.92e-4, 2.05e-3,
                            1.59e-4, 1.80e-3, 1.05e-3, 3.42e-4, 5.78e-3, 8.46e-4, 5.03e-5};
const double tab_ref[37] = {0.226116,  0.227283,  -0.233831, -0.029194, 0.366501,  0.085828,  -0.058845, -0.132370,
                            0.195779,  0.075219,  -0.391807, -0.119802, 0.058231,  -0.138875, -0.642255, -0.117073,
                            -0.319356, -0.127376, -0.042267, 0.445641,  0.192441,  -0.098288, -0.255414, 0.245158,
                            0.144246,  -0.006166, 0.189422,  -0.059113, 0.421981,  -0.240133, -0.389131, 0.261562,
                            0.270616,  -0.523929, -0.051865, 0.367593,  -0.139114};

Outcome breakdown_1e18() {
    Zt13Config c;
    c.t = ExtReal("1e18");
    Zt13Result r = zt13(c);
    attach_references(c.t, r.blocks);
    auto ref = rsf_z(c.t);
    double zp = static_cast<double>(r.zp), z = static_cast<double>(r.z_estimate);
    double rs = static_cast<double>(ref.z);
    int good = 0, rows = 0;
    std::ostringstream miss;
    for (const auto& b : r.blocks) {
        if (b.p == 0 || b.p > 37) continue;
        ++rows;
        double part = static_cast<double>(b.partial_sum), exact = static_cast<double>(*b.reference);
        double abs_err = std::abs(part - exact);
        double rel = abs_err / std::abs(exact);
        double tab_abs = tab_rel[b.p - 1] * std::abs(tab_ref[b.p - 1]);
        bool near_zero = std::abs(exact) < 0.01;
        bool ok = near_zero ? abs_err <= 2 * std::max(tab_abs, 5.24e-4) : rel <= 2 * tab_rel[b.p - 1];
        if (ok) ++good;
        else miss << b.p << ' ';
    }
    bool ok = rows == 37 && std::abs(zp + 0.376110) <= 0.002 && std::abs(z - 0.1892) <= 0.002 &&
              std::abs(rs - 0.189704) <= 1e-5 && good >= 30;
    std::string d = "ZP " + fmt("%.6f", zp) + " Z " + fmt("%.6f", z) + " RSF " + fmt("%.6f", rs) + ", blocks " +
                    std::to_string(good) + "/" + std::to_string(rows);
    if (!miss.str().empty()) d += " (outside 2x: " + miss.str() + ")";
    return {ok, d};
}

// ---- 9 ----
Outcome scaling() {
    std::vector<double> ops;
    for (int n = 16; n <= 20; ++n) {
        Zt13Config c;
        c.t = pow(ExtReal(10), n);
        ops.push_back(zt13_ops(c).units());
    }
    bool ok = true;
    std::ostringstream d;
    double prev = 1e9;
    for (std::size_t i = 0; i + 1 < ops.size(); ++i) {
        double r = ops[i + 1] / ops[i];
        ok = ok && r >= 2.2 && r <= 3.0 && r < std::sqrt(10.0) && r < prev;
        prev = r;
        d << "1e" << 17 + i << "/1e" << 16 + i << '=' << fmt("%.3f", r) << ' ';
    }
    return {ok, d.str()};
}

// ---- 10 ----
Outcome cf_stats() {
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int trials = 10000;
    const std::int64_t N = 100000000;
    const int K = 100;
    double sum = 0;
    for (int i = 0; i < trials; ++i) {
        Quad x(u(rng)), th(u(rng));
        sum += descend(initial_reduce(x, th, N), K).n_K;
    }
    double mean = sum / trials;
    double expect = expected_chain_length(N, K);
    double dev = (mean - expect) / expect;
    return {std::abs(dev) <= 0.15, "mean n_K " + fmt("%.3f", mean) + " vs " + fmt("%.3f", expect) + " (" +
                                       fmt("%+.1f", 100 * dev) + "%)"};
}

// ---- 11 ----
Outcome nicf() {
    NicfExpansion a = positive_to_nearest_cf({0, 6}, {1, 2, 2, 2, 1, 12});
    bool ok_a = a.a0 == 0 && a.quotients == std::vector<std::int64_t>{7, -3, -2, -3, 14} && a.period_start == 1 &&
                a.period_length == 4;
    // printed positive prefix for -1/pi, then the true expansion after its final "14, 2"
    PrecisionScope ps(60);
    std::vector<std::int64_t> truth = positive_cf(ExtReal(-1 / pi_v<ExtReal>()), 40);
    std::vector<std::int64_t> in = {-1, 1, 2, 7, 15, 1, 292, 1, 1, 1, 3, 1, 14, 2};
    for (std::size_t i = 1; i + 1 < truth.size(); ++i) {
        if (truth[i] == 14 && truth[i + 1] == 2) {
            in.insert(in.end(), truth.begin() + static_cast<std::ptrdiff_t>(i + 2), truth.end());
            break;
        }
    }
    NicfExpansion b = positive_to_nearest_cf(in);
    std::vector<std::int64_t> want = {-3, -7, -16, 294, -3, 5, -15, -3};
    bool ok_b = b.a0 == 0 && b.quotients.size() >= want.size() &&
                std::equal(want.begin(), want.end(), b.quotients.begin());
    std::ostringstream d;
    d << "1/sqrt45 " << (ok_a ? "ok" : "MISMATCH") << ", -1/pi [" << b.a0 << ';';
    for (std::size_t i = 0; i < want.size() && i < b.quotients.size(); ++i) d << ' ' << b.quotients[i];
    d << " ...]";
    return {ok_a && ok_b, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
    struct Crit {
        int id;
        const char* name;
        std::function<Outcome()> run;
    };
    std::vector<Crit> all = {
        {1, "Gauss identity q=1..300", gauss_identity},
        {2, "reciprocity 500 random triples", reciprocity},
        {3, "Gauss sum goldens A-E", goldens_ae},
        {4, "refined QGS improvement", refined_gain},
        {5, "random QGS sweep", qgs_sweep},
        {6, "window check t=1e24", window_check},
        {7, "desk-scale zt13 t=1e16", desk_scale},
        {8, "block breakdown at t=1e18", breakdown_1e18},
        {9, "op-count scaling 1e16..1e20", scaling},
        {10, "CF chain-length statistics", cf_stats},
        {11, "NICF conversion goldens", nicf},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
    int failed = 0;
    for (const auto& c : all) {
        if (!only.empty() && !only.count(c.id)) continue;
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cout << (o.pass ? "PASS" : "FAIL") << "  " << c.id << ". " << c.name << ": " << o.detail << "  ["
                  << fmt("%.1f", secs) << " s]" << std::endl;
        if (!o.pass) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
