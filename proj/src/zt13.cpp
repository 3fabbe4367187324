#include "zt/zt13.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <stdexcept>

namespace zt {

namespace {

ExtReal two_pi() { return 2 * pi_v<ExtReal>(); }

ExtReal mod_two_pi(const ExtReal& v) {
    ExtReal tp = two_pi();
    return v - tp * floor(v / tp);
}

// geometry, transcendental and amplitude work of one pivot or principal term
constexpr std::int64_t pivot_geom_count = 8 * 50 + 30;
constexpr std::int64_t principal_count = 4 * 50 + 12;
constexpr std::int64_t main_term_count = 2 * 50 + 10;

// Gauss-sum arguments of a pivot, reduced in quad and rounded to double;
// shared by evaluation and dry runs
struct QuadPivot {
    double x;
    double theta_plus;
    double theta_minus;
};

QuadPivot quad_pivot(std::int64_t alpha, const Quad& a) {
    using std::floor;
    using std::sqrt;
    Quad al(alpha);
    Quad q = al / a;
    Quad r = a / al;
    Quad pc = 2 * q * q * (1 + sqrt(1 - r * r)) - 1;
    Quad x = 1 / (pc - 1);
    Quad half = x / 2;
    Quad w = a / (4 * sqrt(pc));
    QuadPivot out;
    out.x = static_cast<double>(Quad(x - 2 * floor(x / 2)));
    Quad tp = half + w, tm = half - w;
    out.theta_plus = static_cast<double>(Quad(tp - floor(tp)));
    out.theta_minus = static_cast<double>(Quad(tm - floor(tm)));
    return out;
}

QgsOptions qgs_options(const Zt13Config& cfg) {
    QgsOptions o;
    o.K = cfg.K;
    o.P = cfg.P;
    o.refined = cfg.refined;
    return o;
}

// Gauss-sum part of one pivot: only the count when values are not wanted
std::int64_t pivot_sum_count(const QuadPivot& g, std::int64_t Mm, const Zt13Config& cfg) {
    if (Mm < cfg.K) return 2 * direct_sum_count(Mm);
    return qgs_paired_ops<double>(Mm, g.x, g.theta_plus, g.theta_minus, qgs_options(cfg)).fiftieths;
}

Quad pivot_value(std::int64_t alpha, const ExtReal& t, const ExtReal& a, const QuadPivot& g, std::int64_t Mm,
                 const Zt13Config& cfg, Ops* ops) {
    Cx<double> sp, sm;
    if (Mm < cfg.K) {
        sp = direct_sum<double>(Mm, g.x, g.theta_plus, true, DirectMode::fast, ops);
        sm = direct_sum<double>(Mm, g.x, g.theta_minus, true, DirectMode::fast, ops);
    } else {
        auto pr = qgs_paired<double>(Mm, g.x, g.theta_plus, g.theta_minus, qgs_options(cfg));
        sp = pr.first.value;
        sm = pr.second.value;
        *ops += pr.first.ops;
        *ops += pr.second.ops;
    }
    // phases at height precision
    ExtReal al(alpha);
    ExtReal r = a / al;
    ExtReal q = al / a;
    ExtReal pc = 2 * q * q * (1 + sqrt(1 - r * r)) - 1;
    ExtReal x = 1 / (pc - 1);
    ExtReal w = a / (4 * sqrt(pc));
    ExtReal common = -t * (log(pc) + 1 / pc + 1) / 2 - pi_v<ExtReal>() / 8;
    ExtReal wp = mod_two_pi(ExtReal(pi_v<ExtReal>() * (x / 4 + w) + common));
    ExtReal wm = mod_two_pi(ExtReal(pi_v<ExtReal>() * (x / 4 - w) + common));
    double amp = static_cast<double>(ExtReal(1 / sqrt(sqrt(ExtReal(al * al - a * a)))));
    double wpd = static_cast<double>(wp), wmd = static_cast<double>(wm);
    double re = std::cos(wpd) * sp.re - std::sin(wpd) * sp.im + std::cos(wmd) * sm.re - std::sin(wmd) * sm.im;
    ops->fiftieths += pivot_geom_count;
    return Quad(2 * std::sqrt(2.0) * amp * re);
}

int policy_digits(const ExtReal& t, int requested) {
    int d = height_digits(static_cast<double>(t));
    return std::max(d, requested);
}

}  // namespace

ExtReal default_eps() { return 2 / log(ExtReal(1e18)); }

void Zt13Config::normalise() {
    if (!(t > ExtReal(1e15))) throw std::invalid_argument("t: must exceed 1e15");
    if (eps_t == 0) eps_t = default_eps();
    if (Y == 0) Y = ExtReal(10) / 9;
    if (!(eps_t > 0 && eps_t < 1)) throw std::invalid_argument("eps: must lie in (0, 1)");
    if (K < 10 || K > 200) throw std::invalid_argument("K: must lie in [10, 200]");
    if (P < 2 || P > 4) throw std::invalid_argument("P: must lie in [2, 4]");
    if (!(Y >= ExtReal(1.05) && Y <= ExtReal(1.15))) throw std::invalid_argument("Y: must lie in [1.05, 1.15]");
    digits = policy_digits(t, digits);
    PrecisionScope ps(digits);
    t = working(t);
    eps_t = working(eps_t);
    Y = working(Y);
}

ExtReal a_of_t(const ExtReal& t) { return sqrt(8 * working(t) / pi_v<ExtReal>()); }

ExtReal pc_of_alpha(const ExtReal& alpha, const ExtReal& a) {
    if (alpha < a) throw std::domain_error("pc_of_alpha: alpha below a");
    ExtReal r = a / alpha;
    ExtReal q = alpha / a;
    return 2 * q * q * (1 + sqrt(1 - r * r)) - 1;
}

ExtReal n_of_alpha(const ExtReal& alpha, const ExtReal& a) {
    if (alpha < a) throw std::domain_error("n_of_alpha: alpha below a");
    ExtReal r = a / alpha;
    return alpha / 4 * r * r / (1 + sqrt(1 - r * r));
}

ExtReal alpha_of_n(const ExtReal& N_in, const ExtReal& t_in) {
    const ExtReal N = working(N_in), t = working(t_in);
    if (N > sqrt(t / two_pi())) throw std::domain_error("alpha_of_n: N above sqrt(t/2pi)");
    return 2 * N * (t / (two_pi() * N * N) + 1);
}

PivotGeometry pivot_geometry(const ExtReal& alpha, const ExtReal& t_in) {
    PrecisionScope ps(policy_digits(t_in, 0));
    const ExtReal t = working(t_in);
    PivotGeometry g;
    g.a = a_of_t(t);
    g.pc = pc_of_alpha(alpha, g.a);
    g.x = g.pc > 1 ? ExtReal(1 / (g.pc - 1)) : ExtReal(0);
    ExtReal w = g.a / (4 * sqrt(g.pc));
    g.theta_plus = g.x / 2 + w;
    g.theta_minus = g.x / 2 - w;
    ExtReal common = -t * (log(g.pc) + 1 / g.pc + 1) / 2 - pi_v<ExtReal>() / 8;
    g.omega_plus = pi_v<ExtReal>() * (g.theta_plus - g.x / 4) + common;
    g.omega_minus = pi_v<ExtReal>() * (g.theta_minus - g.x / 4) + common;
    g.amplitude = alpha > g.a ? ExtReal(1 / sqrt(sqrt(ExtReal(alpha * alpha - g.a * g.a)))) : ExtReal(0);
    return g;
}

namespace {

ExtReal principal_at(std::int64_t alpha, const ExtReal& t, const ExtReal& a) {
    ExtReal al(alpha);
    ExtReal pc = pc_of_alpha(al, a);
    ExtReal ph = mod_two_pi(ExtReal(t / 2 * (log(pc) + 1 / pc) + t / 2 + pi_v<ExtReal>() / 8));
    return 2 * sqrt(ExtReal(2)) * cos(ph) / sqrt(sqrt(ExtReal(al * al - a * a)));
}

}  // namespace

ExtReal principal_term(std::int64_t alpha, const ExtReal& t_in) {
    PrecisionScope ps(policy_digits(t_in, 0));
    const ExtReal t = working(t_in);
    ExtReal a = a_of_t(t);
    if (!(ExtReal(alpha) > a)) throw std::domain_error("principal_term: alpha must exceed a");
    return principal_at(alpha, t, a);
}

const char* to_string(TransitionKind k) {
    switch (k) {
    case TransitionKind::none: return "none";
    case TransitionKind::formula: return "formula";
    case TransitionKind::fallback: return "fallback";
    }
    return "?";
}

TransitionTerm transition_term(const ExtReal& t_in) {
    PrecisionScope ps(policy_digits(t_in, 0));
    const ExtReal t = working(t_in);
    TransitionTerm tr;
    ExtReal a = a_of_t(t);
    ExtReal s6 = pow(t, ExtReal(1) / 6);
    tr.epsilon = ExtReal(nint_odd(a)) - a;
    tr.rho = tr.epsilon * s6;
    if (abs(tr.epsilon) > 1 / s6) return tr;
    if (tr.epsilon > 0 && tr.rho < ExtReal(0.25)) {
        tr.kind = TransitionKind::formula;
        ExtReal pi = pi_v<ExtReal>();
        ExtReal g13 = boost::math::tgamma(ExtReal(ExtReal(1) / 3));
        ExtReal amp = pow(ExtReal(2), ExtReal(0.75)) * g13 *
                      exp(ExtReal(-pow(ExtReal(32 * pi * pi * pi), ExtReal(0.25)) * pow(tr.rho, ExtReal(1.5)) / 3)) /
                      (pow(ExtReal(3), ExtReal(2) / 3) * pow(pi, ExtReal(0.25)) * pow(t, ExtReal(1) / 12));
        ExtReal arg = t + sqrt(pi / 2) * pow(t, ExtReal(1) / 3) * tr.rho + pi / 24;
        tr.value = amp * cos(mod_two_pi(arg));
    } else {
        tr.kind = TransitionKind::fallback;
        tr.degraded = true;
        tr.value = principal_at(int_odd(a) + 2, t, a);
    }
    return tr;
}

std::int64_t collection_size(std::int64_t alpha_E, const Zt13Config& cfg, Regime regime) {
    PrecisionScope ps(policy_digits(cfg.t, cfg.digits));
    ExtReal a = a_of_t(cfg.t);
    ExtReal al(alpha_E);
    if (!(al > a)) throw std::domain_error("collection_size: alpha_E must exceed a");
    std::int64_t m;
    if (regime == Regime::below_Ya) {
        m = int_odd(ExtReal(cbrt(ExtReal(cfg.eps_t * a / pi_v<ExtReal>() * (al / a - 1)))));
    } else {
        ExtReal c = pow(ExtReal(cfg.eps_t * cfg.eps_t * cfg.t), ExtReal(1) / 6) / sqrt(two_pi());
        m = int_odd(ExtReal(c * (2 * al / a - a / (2 * al))));
    }
    return std::max<std::int64_t>(m, 1);
}

ExtReal collection_upper_bound(const ExtReal& alpha, const Zt13Config& cfg) {
    PrecisionScope ps(policy_digits(cfg.t, cfg.digits));
    ExtReal pc = pc_of_alpha(alpha, a_of_t(cfg.t));
    ExtReal pi = pi_v<ExtReal>();
    return cbrt(cfg.eps_t) * pow(ExtReal(pc * pc - 1), ExtReal(2) / 3) * pow(cfg.t, ExtReal(1) / 6) /
           pow(ExtReal(2 * pi * pi * pi * pow(pc, 5)), ExtReal(1) / 6);
}

Schedule block_schedule(const Zt13Config& cfg_in) {
    Zt13Config cfg = cfg_in;
    cfg.normalise();
    PrecisionScope ps(cfg.digits);
    const ExtReal& t = cfg.t;
    ExtReal a = a_of_t(t);
    Schedule s;
    s.ib = 2 * to_int64(ExtReal(floor(pow(t, ExtReal(0.25)))));
    s.alpha_cut_formula =
        int_even(ExtReal(cbrt(ExtReal(cfg.eps_t * t * t)) / (sqrt(pi_v<ExtReal>()) * log(t))));
    ExtReal ht = log(cfg.eps_t) / log(t);
    ExtReal X = exp(ExtReal(1) / 12 - ht / 3);
    ExtReal Ya = cfg.Y * a;

    BlockPlan b0;
    b0.p = 0;
    b0.alpha_lo = int_odd(a) + 2;
    b0.alpha_hi = b0.alpha_lo + s.ib;
    b0.pivot_count = s.ib;  // block size in alpha units, as tabulated
    s.blocks.push_back(b0);

    std::int64_t alpha_E = b0.alpha_hi + 1;  // even boundary
    std::int64_t nqgs = 0;
    ExtReal Xp = 1;
    for (int p = 1; alpha_E < s.alpha_cut_formula; ++p) {
        Xp *= X;
        BlockPlan b;
        b.p = p;
        if (ExtReal(alpha_E) < Ya) {
            b.regime = Regime::below_Ya;
            nqgs = to_int64(ExtReal(floor(ExtReal(Xp * s.ib / 2))));
        } else {
            b.regime = Regime::above_Ya;
            if (s.step_up_block == 0) s.step_up_block = p;
            if (nqgs == 0) nqgs = to_int64(ExtReal(floor(ExtReal(Xp * s.ib / 2))));
        }
        b.M_t = collection_size(alpha_E, cfg, b.regime);
        b.alpha_lo = alpha_E + 1;
        b.first_pivot = alpha_E + b.M_t + 1;
        std::int64_t pivot = b.first_pivot;
        bool done = false;
        for (std::int64_t j = 0; j < nqgs; ++j) {
            ++b.pivot_count;
            if (pivot + b.M_t + 1 > s.alpha_cut_formula) {
                done = true;
                break;
            }
            if (j + 1 < nqgs) pivot += 2 * (b.M_t + 1);
        }
        b.alpha_hi = pivot + b.M_t;
        alpha_E = b.alpha_hi + 1;
        s.blocks.push_back(b);
        if (done) break;
    }
    s.alpha_final = s.blocks.back().alpha_hi;
    return s;
}

namespace {

void fill_windows(std::vector<PivotBlock>& blocks, const ExtReal& t, const ExtReal& a) {
    std::int64_t upper = rs_length(t);
    for (auto& b : blocks) {
        b.n_hi = upper;
        b.n_lo = to_int64(ExtReal(floor(n_of_alpha(ExtReal(b.alpha_last), a)))) + 1;
        upper = b.n_lo - 1;
    }
}

ZpResult run_blocks(Zt13Config cfg, bool evaluate) {
    cfg.normalise();
    PrecisionScope ps(cfg.digits);
    ZpResult out;
    out.schedule = block_schedule(cfg);
    const ExtReal& t = cfg.t;
    ExtReal a = a_of_t(t);
    Quad aq = static_cast<Quad>(a);
    out.transition = transition_term(t);

    for (const auto& plan : out.schedule.blocks) {
        PivotBlock blk;
        blk.p = plan.p;
        blk.pivot_count = plan.pivot_count;
        blk.M_t = plan.M_t;
        blk.M_t_minus = plan.p == 0 ? 0 : (plan.M_t - 1) / 2;
        blk.alpha_first = plan.alpha_lo;
        blk.alpha_last = plan.alpha_hi;
        if (plan.p == 0) {
            ExtReal acc = 0;
            for (std::int64_t al = plan.alpha_lo; al <= plan.alpha_hi; al += 2) {
                if (al == plan.alpha_lo && out.transition.kind == TransitionKind::formula) {
                    if (evaluate) acc += out.transition.value;
                    blk.ops.trig(6);
                    continue;
                }
                if (evaluate) acc += principal_at(al, t, a);
                blk.ops.fiftieths += principal_count;
            }
            blk.partial_sum = acc;
        } else {
            Quad acc = 0;
            std::int64_t pivot = plan.first_pivot;
            for (std::int64_t j = 0; j < plan.pivot_count; ++j, pivot += 2 * (plan.M_t + 1)) {
                QuadPivot g = quad_pivot(pivot, aq);
                if (evaluate) {
                    acc += pivot_value(pivot, t, a, g, blk.M_t_minus, cfg, &blk.ops);
                } else {
                    blk.ops.fiftieths += pivot_geom_count + pivot_sum_count(g, blk.M_t_minus, cfg);
                }
            }
            blk.partial_sum = ExtReal(acc);
        }
        out.zp += blk.partial_sum;
        out.ops += blk.ops;
        out.blocks.push_back(std::move(blk));
    }
    fill_windows(out.blocks, t, a);
    return out;
}

// first N above n(alpha_final); the head sum stops one below
std::int64_t n_cut(std::int64_t alpha_final, const ExtReal& a) {
    return to_int64(ExtReal(floor(n_of_alpha(ExtReal(alpha_final), a)))) + 1;
}

}  // namespace

ZpResult zp_sum(Zt13Config cfg) { return run_blocks(cfg, !cfg.ops_only); }

Zt13Result zt13(Zt13Config cfg) {
    cfg.normalise();
    PrecisionScope ps(cfg.digits);
    ZpResult zr = run_blocks(cfg, !cfg.ops_only);
    Zt13Result r;
    r.zp = zr.zp;
    r.blocks = std::move(zr.blocks);
    r.transition = zr.transition;
    r.step_up_block = zr.schedule.step_up_block;
    r.alpha_E_cut = zr.schedule.alpha_final;
    ExtReal a = a_of_t(cfg.t);
    r.n_c = n_cut(r.alpha_E_cut, a);
    Ops head;
    if (cfg.ops_only) {
        head.fiftieths += main_term_count * std::max<std::int64_t>(0, r.n_c - 1);
    } else {
        r.head_sum = main_sum_with_phase(cfg.t, theta_c(cfg.t), 1, r.n_c - 1, SumMode::fast, &head);
    }
    r.head_sum += cfg.ops_only ? ExtReal(0) : rs_correction(cfg.t, rs_length(cfg.t));
    head.trig(3);
    r.total_ops = zr.ops;
    r.total_ops += head;
    r.z_estimate = r.head_sum + r.zp;
    return r;
}

Ops zt13_ops(Zt13Config cfg) {
    cfg.ops_only = true;
    return zt13(cfg).total_ops;
}

HybridResult hybrid17_run(const ExtReal& t_in) {
    if (t_in < ExtReal(1e6)) throw std::domain_error("hybrid17: t must be at least 1e6");
    PrecisionScope ps(policy_digits(t_in, 0));
    const ExtReal t = working(t_in);
    HybridResult h;
    ExtReal a = a_of_t(t);
    std::int64_t n_split = to_int64(ExtReal(floor(sqrt(t / (4 * pi_v<ExtReal>())))));
    h.head_terms = n_split - 1;
    ExtReal head = main_sum_with_phase(t, theta(t), 1, n_split - 1, SumMode::fast, &h.ops);
    h.transition = transition_term(t);
    std::int64_t lo = int_odd(a) + 2;
    std::int64_t hi = int_odd(ExtReal(3 * sqrt(t / pi_v<ExtReal>())));
    ExtReal acc = 0;
    for (std::int64_t al = lo; al <= hi; al += 2) {
        ++h.principal_terms;
        if (al == lo && h.transition.kind == TransitionKind::formula) {
            acc += h.transition.value;
            h.ops.trig(6);
            continue;
        }
        acc += principal_at(al, t, a);
        h.ops.fiftieths += principal_count;
    }
    h.z = head + acc + rs_correction(t, rs_length(t));
    h.ops.trig(3);
    h.error_bound = 1.01 * std::pow(64 * M_PI / static_cast<double>(t), 0.25);
    return h;
}

ExtReal hybrid17(const ExtReal& t) { return hybrid17_run(t).z; }

void attach_references(const ExtReal& t_in, std::vector<PivotBlock>& blocks) {
    PrecisionScope ps(policy_digits(t_in, 0));
    const ExtReal t = working(t_in);
    ExtReal th = theta_c(t);
    for (auto& b : blocks) {
        if (b.n_hi < b.n_lo) {
            b.reference = ExtReal(0);
            continue;
        }
        b.reference = main_sum_with_phase(t, th, b.n_lo, b.n_hi);
    }
}

namespace {

std::string rel_err_text(const PivotBlock& b) {
    if (!b.reference || *b.reference == 0) return "";
    return to_string(ExtReal(abs(ExtReal(b.partial_sum - *b.reference)) / abs(*b.reference)), 3);
}

}  // namespace

void write_block_table(std::ostream& os, const std::vector<PivotBlock>& blocks) {
    os << std::setw(4) << "p" << std::setw(9) << "pivots" << std::setw(6) << "M_t" << std::setw(14)
       << "final alpha" << std::setw(14) << "partial" << std::setw(14) << "reference" << std::setw(12)
       << "rel err" << std::setw(16) << "ops" << '\n';
    for (const auto& b : blocks) {
        os << std::setw(4) << b.p << std::setw(9) << b.pivot_count << std::setw(6) << b.M_t << std::setw(14)
           << b.alpha_last << std::setw(14) << to_string(b.partial_sum, 6) << std::setw(14)
           << (b.reference ? to_string(*b.reference, 6) : std::string("-")) << std::setw(12) << rel_err_text(b)
           << std::setw(16) << std::fixed << std::setprecision(0) << b.ops.units() << '\n';
        os.unsetf(std::ios::floatfield);
    }
}

void write_block_csv(std::ostream& os, const std::vector<PivotBlock>& blocks) {
    os << "p,pivot_count,M_t,alpha_first,final_alpha,n_lo,n_hi,partial_sum,reference_partial_sum,rel_error,ops\n";
    for (const auto& b : blocks) {
        os << b.p << ',' << b.pivot_count << ',' << b.M_t << ',' << b.alpha_first << ',' << b.alpha_last << ','
           << b.n_lo << ',' << b.n_hi << ',' << to_string(b.partial_sum, 12) << ','
           << (b.reference ? to_string(*b.reference, 12) : std::string()) << ',' << rel_err_text(b) << ','
           << std::fixed << std::setprecision(2) << b.ops.units() << '\n';
        os.unsetf(std::ios::floatfield);
    }
}

}  // namespace zt
