#include "zt/cli.hpp"

#include "zt/zt13.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace zt {

namespace {

using Json = nlohmann::ordered_json;

constexpr int out_digits = 20;

struct Params {
    std::string t = "1e18";
    std::string eps;
    int K = 30;
    int P = 3;
    std::string Y = "10/9";
    int digits = 0;
    bool refined = true;
    std::int64_t N = 0;
    std::string x;
    std::string theta = "0";
    std::int64_t n_lo = 1;
    std::int64_t n_hi = 0;
    std::uint64_t seed = 0;
    bool seed_given = false;
    bool csv = false;
    std::string out;
    bool starred = false;
    bool full = false;
    bool theta_c = false;
    bool references = false;
    bool table = false;
    int count = 1;
    std::string t_max = "1e20";
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

ExtReal parse_key(const std::string& key, const std::string& text) {
    if (text.empty()) throw UsageError("--" + key + ": value required");
    try {
        return parse_extreal(text);
    } catch (const std::exception& e) {
        throw UsageError("--" + key + ": " + e.what());
    }
}

std::string num(const ExtReal& v) { return to_string(v, out_digits); }

Json cx_json(const ExtComplex& z) { return Json{{"re", num(z.re)}, {"im", num(z.im)}}; }

// precision policy check; explicit digits below the requirement are refused
int resolve_digits(int requested, int required, const std::string& what) {
    if (requested == 0) return required;
    if (requested < required) {
        std::ostringstream os;
        os << "--digits: " << requested << " digits cannot support " << what << "; required digits: " << required;
        throw UsageError(os.str());
    }
    return requested;
}

ExtReal parse_t(const Params& p, double min_t) {
    PrecisionScope ps(60);
    ExtReal t = parse_key("t", p.t);
    if (t < ExtReal(min_t)) {
        std::ostringstream os;
        os << "--t: must be at least " << min_t;
        throw UsageError(os.str());
    }
    if (t > ExtReal(1e30)) throw UsageError("--t: above 1e30 the RS length overflows 64-bit counters; refused");
    return t;
}

QgsOptions qgs_opts(const Params& p) {
    QgsOptions o;
    o.K = p.K;
    o.P = p.P;
    o.refined = p.refined;
    try {
        o.validate();
    } catch (const std::exception& e) {
        throw UsageError(std::string("--K/--P: ") + e.what());
    }
    return o;
}

Zt13Config zt_config(const Params& p, const ExtReal& t) {
    Zt13Config c;
    c.t = t;
    c.eps_t = p.eps.empty() ? ExtReal(0) : parse_key("eps", p.eps);
    c.Y = parse_key("Y", p.Y);
    c.K = p.K;
    c.P = p.P;
    c.refined = p.refined;
    c.digits = resolve_digits(p.digits, height_digits(static_cast<double>(t)), "this height");
    try {
        c.normalise();
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("--") + e.what());
    }
    return c;
}

Json config_json(const Zt13Config& c) {
    return Json{{"t", num(c.t)}, {"eps", num(c.eps_t)}, {"K", c.K}, {"P", c.P},
                {"Y", num(c.Y)}, {"refined", c.refined}, {"digits", c.digits}};
}

Json block_json(const PivotBlock& b) {
    Json j{{"record", "block"},
           {"p", b.p},
           {"pivot_count", b.pivot_count},
           {"M_t", b.M_t},
           {"alpha_first", b.alpha_first},
           {"final_alpha", b.alpha_last},
           {"n_lo", b.n_lo},
           {"n_hi", b.n_hi},
           {"partial_sum", num(b.partial_sum)},
           {"ops", b.ops.units()}};
    if (b.reference) {
        j["reference_partial_sum"] = num(*b.reference);
        if (*b.reference != 0)
            j["rel_error"] = static_cast<double>(ExtReal(abs(ExtReal(b.partial_sum - *b.reference)) / abs(*b.reference)));
    }
    return j;
}

Json transition_json(const TransitionTerm& tr) {
    return Json{{"kind", to_string(tr.kind)}, {"epsilon", num(tr.epsilon)}, {"rho", num(tr.rho)},
                {"value", num(tr.value)}, {"degraded", tr.degraded}};
}

class Runner {
public:
    Runner(const Params& p, std::ostream& out) : p_(p), out_(out) {}

    void emit(const Json& j) { out_ << j.dump() << '\n'; }

    void gauss_direct() {
        GaussSumSpec s = gauss_spec();
        PrecisionScope ps(resolve_digits(p_.digits, gauss_digits(s.N), "this N"));
        s.x = parse_key("x", p_.x);
        s.theta = parse_key("theta", p_.theta);
        Ops ops;
        DirectMode mode = p_.full ? DirectMode::full : DirectMode::fast;
        ExtComplex v = direct_sum(s, mode, &ops);
        // fast mode: each term carries a double rounding
        double bound = p_.full ? (s.N + 1) * std::pow(10.0, -static_cast<double>(ExtReal::default_precision()) + 2)
                               : (s.N + 1) * 4.0 * std::ldexp(1.0, -52);
        emit(Json{{"record", "gauss-direct"},
                  {"N", s.N},
                  {"x", p_.x},
                  {"theta", p_.theta},
                  {"starred", s.starred},
                  {"mode", p_.full ? "full" : "fast"},
                  {"value", cx_json(v)},
                  {"abs_error_bound", bound},
                  {"ops", ops.units()}});
    }

    void gauss_qgs() {
        GaussSumSpec s = gauss_spec();
        PrecisionScope ps(resolve_digits(p_.digits, gauss_digits(s.N), "this N"));
        std::string xs = p_.x, ths = p_.theta;
        if (xs.empty() && p_.seed_given) {
            std::mt19937_64 rng(p_.seed);
            std::uniform_real_distribution<double> u(0.0, 1.0);
            std::ostringstream a, b;
            a.precision(17);
            b.precision(17);
            a << u(rng);
            b << u(rng);
            xs = a.str();
            ths = b.str();
        }
        s.x = parse_key("x", xs);
        s.theta = parse_key("theta", ths);
        QgsOptions o = qgs_opts(p_);
        auto r = qgs(s, o);
        Json ls = Json::array();
        for (const auto& st : r.chain.states) ls.push_back(st.L);
        emit(Json{{"record", "gauss-qgs"},
                  {"N", s.N},
                  {"x", xs},
                  {"theta", ths},
                  {"starred", s.starred},
                  {"K", o.K},
                  {"P", o.P},
                  {"refined", o.refined},
                  {"value", cx_json(r.value)},
                  {"rel_error_bound", static_cast<double>(r.rel_error_bound)},
                  {"n_K", r.chain.n_K},
                  {"termination", to_string(r.chain.termination)},
                  {"L", ls},
                  {"ops", r.ops.units()}});
    }

    void rsf() {
        ExtReal t = parse_t(p_, 200);
        PrecisionScope ps(resolve_digits(p_.digits, height_digits(static_cast<double>(t)), "this height"));
        auto r = rsf_z(t, p_.full ? SumMode::full : SumMode::fast);
        emit(Json{{"record", "rsf"},
                  {"t", num(t)},
                  {"z", num(r.z)},
                  {"main", num(r.main)},
                  {"correction", num(r.correction)},
                  {"N_t", r.N_t},
                  {"truncation_budget", r.truncation_budget},
                  {"ops", r.ops.units()}});
    }

    void partial_sum() {
        ExtReal t = parse_t(p_, 200);
        PrecisionScope ps(resolve_digits(p_.digits, height_digits(static_cast<double>(t)), "this height"));
        std::int64_t nt = rs_length(t);
        std::int64_t hi = p_.n_hi == 0 ? nt : p_.n_hi;
        if (p_.n_lo < 1) throw UsageError("--n-lo: must be at least 1");
        if (hi > nt) throw UsageError("--n-hi: exceeds N_t = " + std::to_string(nt));
        RsfRequest req{t, p_.n_lo, hi, p_.theta_c ? ThetaVariant::theta_c : ThetaVariant::theta};
        Ops ops;
        ExtReal v = main_sum(req, p_.full ? SumMode::full : SumMode::fast, &ops);
        double terms = static_cast<double>(std::max<std::int64_t>(0, hi - p_.n_lo + 1));
        emit(Json{{"record", "partial-sum"},
                  {"t", num(t)},
                  {"n_lo", p_.n_lo},
                  {"n_hi", hi},
                  {"theta", p_.theta_c ? "theta_c" : "theta"},
                  {"value", num(v)},
                  {"abs_error_bound", 4 * terms * std::ldexp(1.0, -52)},
                  {"ops", ops.units()}});
    }

    Zt13Result zt13_run(const Zt13Config& c) {
        Zt13Result r = zt13(c);
        if (p_.references) attach_references(c.t, r.blocks);
        return r;
    }

    Json zt13_json(const Zt13Config& c, const Zt13Result& r) {
        double bound = static_cast<double>(ExtReal(c.eps_t * abs(r.zp)));
        return Json{{"record", "zt13"},
                    {"config", config_json(c)},
                    {"zp", num(r.zp)},
                    {"head_sum", num(r.head_sum)},
                    {"z", num(r.z_estimate)},
                    {"abs_error_bound", bound},
                    {"alpha_E_cut", r.alpha_E_cut},
                    {"n_c", r.n_c},
                    {"blocks", r.blocks.size()},
                    {"step_up_block", r.step_up_block},
                    {"transition", transition_json(r.transition)},
                    {"ops", r.total_ops.units()}};
    }

    void zt13_cmd() {
        ExtReal t = parse_t(p_, 1e15);
        Zt13Config c = zt_config(p_, t);
        PrecisionScope ps(c.digits);
        Zt13Result r = zt13_run(c);
        if (p_.csv) write_block_csv(out_, r.blocks);
        else if (p_.table) write_block_table(out_, r.blocks);
        else
            for (const auto& b : r.blocks) emit(block_json(b));
        emit(zt13_json(c, r));
    }

    void hybrid() {
        ExtReal t = parse_t(p_, 1e6);
        PrecisionScope ps(resolve_digits(p_.digits, height_digits(static_cast<double>(t)), "this height"));
        auto h = hybrid17_run(t);
        emit(Json{{"record", "hybrid17"},
                  {"t", num(t)},
                  {"z", num(h.z)},
                  {"abs_error_bound", h.error_bound},
                  {"head_terms", h.head_terms},
                  {"principal_terms", h.principal_terms},
                  {"transition", transition_json(h.transition)},
                  {"ops", h.ops.units()}});
    }

    void compare() {
        ExtReal t = parse_t(p_, 1e15);
        Zt13Config c = zt_config(p_, t);
        PrecisionScope ps(c.digits);
        Zt13Result r = zt13_run(c);
        for (const auto& b : r.blocks) emit(block_json(b));
        emit(zt13_json(c, r));
        auto ref = rsf_z(t);
        ExtReal err = r.z_estimate - ref.z;
        emit(Json{{"record", "compare"},
                  {"t", num(t)},
                  {"rsf", num(ref.z)},
                  {"rsf_truncation_budget", ref.truncation_budget},
                  {"zt13", num(r.z_estimate)},
                  {"abs_error", num(err)},
                  {"rel_error", static_cast<double>(ExtReal(abs(err) / abs(ref.z)))},
                  {"abs_error_bound", static_cast<double>(ExtReal(c.eps_t * abs(r.zp)))},
                  {"rsf_ops", ref.ops.units()},
                  {"zt13_ops", r.total_ops.units()},
                  {"ops_ratio", r.total_ops.units() / ref.ops.units()}});
    }

    // op counts over decades of t; RSF counted analytically per term
    void sweep() {
        ExtReal t0 = parse_t(p_, 1e15);
        ExtReal t1 = parse_key("t-max", p_.t_max);
        if (t1 < t0) throw UsageError("--t-max: must not be below --t");
        if (p_.csv) out_ << "t,zt13_ops,rsf_ops,ratio,decade_ratio\n";
        double prev = 0;
        for (ExtReal t = t0; t <= t1 * ExtReal(1.000001); t *= 10) {
            Zt13Config c = zt_config(p_, t);
            PrecisionScope ps(c.digits);
            double zo = zt13_ops(c).units();
            double ro = static_cast<double>(rs_length(t)) * 2.2 + 3;
            double dr = prev > 0 ? zo / prev : 0;
            if (p_.csv) {
                out_ << to_string(t, 6) << ',' << zo << ',' << ro << ',' << zo / ro << ',';
                if (prev > 0) out_ << dr;
                out_ << '\n';
            } else {
                Json j{{"record", "sweep"}, {"t", num(t)}, {"zt13_ops", zo}, {"rsf_ops", ro}, {"ratio", zo / ro}};
                if (prev > 0) j["decade_ratio"] = dr;
                emit(j);
            }
            prev = zo;
        }
    }

private:
    GaussSumSpec gauss_spec() {
        if (p_.N < 0) throw UsageError("--N: must be non-negative");
        GaussSumSpec s;
        s.N = p_.N;
        s.starred = p_.starred;
        return s;
    }

    const Params& p_;
    std::ostream& out_;
};

void add_height(CLI::App* c, Params& p) {
    c->add_option("--t", p.t, "height t (expression)")->envname("ZT_T");
    c->add_option("--digits", p.digits, "working digits (0 = policy)")->envname("ZT_DIGITS");
}

void add_zt(CLI::App* c, Params& p) {
    c->add_option("--eps", p.eps, "relative error target eps_t")->envname("ZT_EPS");
    c->add_option("--K", p.K, "QGS termination constant")->envname("ZT_K");
    c->add_option("--P", p.P, "correction-term order")->envname("ZT_P");
    c->add_option("--Y", p.Y, "step-up parameter")->envname("ZT_Y");
    c->add_flag("--refined,!--no-refined", p.refined, "refined remainder terms")->envname("ZT_REFINED");
}

void add_gauss(CLI::App* c, Params& p) {
    c->add_option("--N", p.N, "sum length")->envname("ZT_N");
    c->add_option("--x", p.x, "quadratic parameter (expression)")->envname("ZT_X");
    c->add_option("--theta", p.theta, "linear parameter (expression)")->envname("ZT_THETA");
    c->add_option("--digits", p.digits, "working digits (0 = policy)")->envname("ZT_DIGITS");
    c->add_flag("--starred", p.starred, "unit endpoint weights");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Params p;
    CLI::App app{"Hardy Z(t) via quadratic Gauss sums"};
    app.require_subcommand(1);
    app.add_option("--out", p.out, "write records to this file")->envname("ZT_OUT");
    app.add_option("--seed", p.seed, "seed for randomised inputs")->envname("ZT_SEED");

    auto* gd = app.add_subcommand("gauss-direct", "direct Gauss sum");
    add_gauss(gd, p);
    gd->add_flag("--full", p.full, "trig at working precision");
    auto* gq = app.add_subcommand("gauss-qgs", "Gauss sum via algorithm QGS");
    add_gauss(gq, p);
    gq->add_option("--K", p.K, "termination constant")->envname("ZT_K");
    gq->add_option("--P", p.P, "correction-term order")->envname("ZT_P");
    gq->add_flag("--refined,!--no-refined", p.refined, "refined remainder terms")->envname("ZT_REFINED");
    gq->add_option("--seed", p.seed, "random x, theta when --x is absent")->envname("ZT_SEED");
    auto* rs = app.add_subcommand("rsf", "Riemann-Siegel Z(t)");
    add_height(rs, p);
    rs->add_flag("--full", p.full, "cosines at working precision");
    auto* ps = app.add_subcommand("partial-sum", "RS main-sum window");
    add_height(ps, p);
    ps->add_option("--n-lo", p.n_lo, "first term")->envname("ZT_N_LO");
    ps->add_option("--n-hi", p.n_hi, "last term (0 = N_t)")->envname("ZT_N_HI");
    ps->add_flag("--theta-c", p.theta_c, "use the truncated theta");
    ps->add_flag("--full", p.full, "cosines at working precision");
    auto* zc = app.add_subcommand("zt13", "Z(t) via algorithm ZT13");
    add_height(zc, p);
    add_zt(zc, p);
    zc->add_flag("--csv", p.csv, "block report as CSV");
    zc->add_flag("--table", p.table, "block report as a text table");
    zc->add_flag("--references", p.references, "attach RS reference partial sums per block");
    auto* hy = app.add_subcommand("hybrid17", "RS head plus principal-term tail");
    add_height(hy, p);
    auto* cmp = app.add_subcommand("compare", "zt13 against rsf at one t");
    add_height(cmp, p);
    add_zt(cmp, p);
    cmp->add_flag("--references", p.references, "attach RS reference partial sums per block");
    auto* sw = app.add_subcommand("sweep", "op-count scaling over decades of t");
    add_height(sw, p);
    add_zt(sw, p);
    sw->add_option("--t-max", p.t_max, "last height")->envname("ZT_T_MAX");
    sw->add_flag("--csv", p.csv, "CSV rows");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, e2;
        int code = app.exit(e, o, e2);
        out << o.str();
        err << e2.str();
        return code;
    }
    p.seed_given = app.count("--seed") > 0 || gq->count("--seed") > 0;

    std::ofstream file;
    std::ostream* dst = &out;
    if (!p.out.empty()) {
        file.open(p.out);
        if (!file) {
            err << "--out: cannot open " << p.out << '\n';
            return 2;
        }
        dst = &file;
    }
    Runner run(p, *dst);
    auto start = std::chrono::steady_clock::now();
    try {
        if (*gd) run.gauss_direct();
        else if (*gq) run.gauss_qgs();
        else if (*rs) run.rsf();
        else if (*ps) run.partial_sum();
        else if (*zc) run.zt13_cmd();
        else if (*hy) run.hybrid();
        else if (*cmp) run.compare();
        else if (*sw) run.sweep();
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    err << "wall_time_s " << secs << '\n';
    return 0;
}

}  // namespace zt
