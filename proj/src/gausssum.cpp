#include "zt/gausssum.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace zt {

void QgsOptions::validate() const {
    if (K < 10) throw std::invalid_argument("K must be at least 10");
    if (P < 1 || P > max_P) throw std::invalid_argument("P must lie in [1, 8]");
}

namespace {

constexpr std::int64_t inner_block = 32;
constexpr std::int64_t anchor_span = 1 << 14;
constexpr double pi_d = 3.14159265358979323846;

Quad mod2q(const Quad& a) { return mod2(a); }

// sum_{k=lo}^{hi} e^{i pi k (k x + 2 theta)}; anchors exact in T, runs of 32 in double
template <class T>
Cx<Quad> fast_range(std::int64_t lo, std::int64_t hi, const T& x, const T& theta) {
    Quad are = 0, aim = 0;
    const Quad xq = static_cast<Quad>(mod2(x));
    const Quad x2q = mod2q(2 * xq);
    const Quad step_sq = mod2q(Quad(inner_block * (inner_block - 1)) * xq);
    const Quad step_lin = mod2q(Quad(2 * inner_block) * xq);
    const double x2d = static_cast<double>(x2q);
    for (std::int64_t k0 = lo; k0 <= hi; k0 += anchor_span) {
        std::int64_t kend = std::min(hi, k0 + anchor_span - 1);
        T kk(k0);
        Quad ph = static_cast<Quad>(mod2(T(kk * (kk * x + 2 * theta))));
        Quad dd = static_cast<Quad>(mod2(T((2 * kk + 1) * x + 2 * theta)));
        for (std::int64_t k = k0; k <= kend; k += inner_block) {
            std::int64_t cnt = std::min<std::int64_t>(inner_block, kend - k + 1);
            double p = static_cast<double>(ph);
            double d = static_cast<double>(dd);
            double sr = 0, si = 0;
            for (std::int64_t j = 0; j < cnt; ++j) {
                double a = p > 1 ? p - 2 : p;
                sr += std::cos(pi_d * a);
                si += std::sin(pi_d * a);
                p += d;
                if (p >= 2) p -= 2;
                d += x2d;
                if (d >= 2) d -= 2;
            }
            are += sr;
            aim += si;
            ph = mod2q(ph + Quad(inner_block) * dd + step_sq);
            dd = mod2q(dd + step_lin);
        }
    }
    return Cx<Quad>(are, aim);
}

template <class T>
Cx<T> full_range(std::int64_t lo, std::int64_t hi, const T& x, const T& theta) {
    T kk(lo);
    T ph = mod2(T(kk * (kk * x + 2 * theta)));
    T dd = mod2(T((2 * kk + 1) * x + 2 * theta));
    T x2 = mod2(T(2 * x));
    Cx<T> acc;
    for (std::int64_t k = lo; k <= hi; ++k) {
        acc += unit_phase(ph);
        ph = mod2(T(ph + dd));
        dd = mod2(T(dd + x2));
    }
    return acc;
}

template <class T> DirectMode natural_mode();
template <> DirectMode natural_mode<double>() { return DirectMode::fast; }
template <> DirectMode natural_mode<Quad>() { return DirectMode::fast; }
template <> DirectMode natural_mode<ExtReal>() { return DirectMode::full; }

template <class T>
Cx<T> omega_inv() {
    using std::sqrt;
    T h = 1 / sqrt(T(2));
    return Cx<T>(h, h);  // 1/omega = e^{i pi/4}
}

// x-only quantities of one descent level, shared by the two chains of a paired call
template <class T>
struct LevelGeom {
    T ax;
    T sq;  // sqrt(|x|)
    T s;   // sqrt(pi/|x|)
};

constexpr std::int64_t geom_count = 2 * 50 + 2;
constexpr std::int64_t prefactor_count = 2 * 50 + 6;
constexpr std::int64_t descent_count = 6;  // per state
constexpr std::int64_t xstep_count = 4;    // per x-sequence extension

template <class T>
LevelGeom<T> level_geom(const T& ax) {
    using std::sqrt;
    return {ax, sqrt(ax), sqrt(pi_v<T>() / ax)};
}

std::int64_t direct_count(std::int64_t N) { return N < 1 ? 0 : 104 * (N + 1); }

template <class T>
Cx<T> erf_on_ray(const T& y, const T& s) {
    using std::abs;
    if (y == 0) return Cx<T>();
    Cx<T> v = erf_diag<T>(T(abs(y) * s), Ray::minus);
    return y < 0 ? -v : v;
}

// c_coeff_list makes one cotangent call unless the series branch applies
template <class T>
int c_list_trig(const T& y) {
    using std::abs;
    if (y == 0) return 0;
    return abs(pi_v<T>() * y) < T(0.2) ? 0 : 2;
}

// op count of one correction term, in fiftieths; shared by evaluation and dry runs
template <class T>
std::int64_t correction_count(std::int64_t L, const T& x, const T& theta, int P, bool refined) {
    using std::floor;
    T xi = T(L) * x + theta;
    std::int64_t Lf = to_int64(T(floor(xi)));
    T Mt = nint(xi);
    T eps = xi - Mt;
    std::int64_t trig = 4;  // f(N) and the Gaussian prefactor
    std::int64_t erf = (xi != 0 ? 1 : 0) + (theta != 0 ? 1 : 0);
    if (Lf >= 1) trig += 2;
    if (Mt != 0 && eps != 0) {
        erf += 1;
        trig += 2;
    }
    trig += c_list_trig(theta) + (Mt == 0 ? c_list_trig(xi) : c_list_trig(T(reduce_half(xi))));
    std::int64_t arith = 40 + 30 * P;
    if (refined) {
        trig += 8;
        arith += 160;
    }
    return 50 * trig + 450 * erf + arith;
}

template <class T>
Cx<T> correction_impl(std::int64_t L, const LevelGeom<T>& g, const T& theta, int P, bool refined) {
    using std::abs;
    using std::floor;
    using std::sqrt;
    const T& x = g.ax;
    T xi = T(L) * x + theta;
    T fl = floor(xi);
    std::int64_t Lf = to_int64(fl);
    T Mt = nint(xi);
    std::int64_t M = to_int64(Mt);
    T eps = xi - Mt;
    Cx<T> f = endpoint_phase<T>(L, x, theta);
    Cx<T> half_pref = omega_inv<T>() / T(2 * g.sq);
    Cx<T> pre = unit_phase(T(-theta * theta / x)) * half_pref;
    Cx<T> br = Cx<T>(T(-1)) + erf_on_ray(xi, g.s) - erf_on_ray(theta, g.s);
    if (Lf >= 1) {
        T lf(Lf);
        br += unit_phase(T(lf * (2 * theta - lf) / x));
    }
    Cx<T> val = pre * br;
    if (M != 0 && eps != 0) {
        Cx<T> e = unit_phase(T(-eps * eps / x)) * half_pref *
                  erfc_diag<T>(T(abs(eps) * g.s), Ray::minus);
        Cx<T> term = f * e;
        if (eps > 0) val -= term;
        else val += term;
    }
    T cth[max_P], cxi[max_P];
    c_coeff_list<T>(P, theta, cth);
    if (M == 0) c_coeff_list<T>(P, xi, cxi);
    else c_coeff_regularised_list<T>(P, xi, cxi);
    // -(i/(2 sqrt pi)) sum Gamma(r+1/2) (-i pi x)^r (f c'_r - c_r(theta))
    T gam = sqrt(pi_v<T>());
    Cx<T> pw(T(1));
    Cx<T> mix(T(0), T(-pi_v<T>() * x));
    Cx<T> sum;
    for (int r = 0; r < P; ++r) {
        if (r > 0) {
            gam *= T(2 * r - 1) / 2;
            pw = pw * mix;
        }
        sum += pw * gam * (f * cxi[r] - Cx<T>(cth[r]));
    }
    val += times_i(sum) * T(-1 / (2 * sqrt(pi_v<T>())));
    if (refined) val += refined_correction_block<T>(x, xi, theta, M, f, P);
    return val;
}

template <class T>
Cx<T> prefactor_impl(const LevelGeom<T>& g, const T& theta) {
    return unit_phase(T(-theta * theta / g.ax)) * omega_inv<T>() / g.sq;
}

template <class T>
Cx<T> start_value(const QgsChain<T>& ch, Ops* ops) {
    using std::abs;
    const auto& st = ch.states.back();
    if (st.L < 1) return Cx<T>(T(0.5));
    if (ch.termination == Termination::x_zero && st.x == 0) {
        ops->trig(6);
        return geometric_sum<T>(st.L, st.theta);
    }
    ops->fiftieths += direct_count(st.L);
    return direct_sum<T>(st.L, T(abs(st.x)), st.theta, false, natural_mode<T>());
}

// ascent over a finished chain; geometry cached per level index.
// With evaluate = false only the op counts are produced.
template <class T>
void ascend(QgsOutcome<T>& out, const QgsOptions& opts, std::vector<LevelGeom<T>>& geom, Ops* shared,
            bool evaluate) {
    using std::abs;
    const auto& st = out.chain.states;
    std::size_t last = st.size() - 1;
    if (!evaluate) {
        const auto& s0 = st.back();
        if (s0.L >= 1) {
            if (out.chain.termination == Termination::x_zero && s0.x == 0) out.ops.trig(6);
            else out.ops.fiftieths += direct_count(s0.L);
        }
        if (last > geom.size()) {
            shared->fiftieths += geom_count * static_cast<std::int64_t>(last - geom.size());
            geom.resize(last, LevelGeom<T>{});
        }
        for (std::size_t n = last; n-- > 0;) {
            out.ops.fiftieths += prefactor_count +
                                 correction_count(st[n].L, T(abs(st[n].x)), st[n].theta, opts.P, opts.refined);
        }
        return;
    }
    out.levels.assign(st.size(), Cx<T>());
    Cx<T> V = start_value(out.chain, &out.ops);
    out.levels[last] = V;
    for (std::size_t n = last; n-- > 0;) {
        while (geom.size() <= n) {
            std::size_t k = geom.size();
            geom.push_back(level_geom<T>(T(abs(st[k].x))));
            shared->fiftieths += geom_count;
        }
        const LevelGeom<T>& g = geom[n];
        Cx<T> prev = st[n + 1].s == 1 ? V : conj(V);
        V = prefactor_impl(g, st[n].theta) * prev +
            correction_impl(st[n].L, g, st[n].theta, opts.P, opts.refined);
        out.ops.fiftieths += prefactor_count + correction_count(st[n].L, g.ax, st[n].theta, opts.P, opts.refined);
        out.levels[n] = V;
    }
    out.value = st[0].s == 1 ? V : conj(V);
}

template <class T>
void finish(QgsOutcome<T>& out, std::int64_t N, const T& x, const T& theta, int s, bool starred,
            const QgsOptions& opts, bool evaluate) {
    if (starred) {
        if (evaluate) out.value += (Cx<T>(T(1)) + endpoint_phase<T>(N, x, theta)) * T(0.5);
        out.ops.trig(2);
    }
    if (s < 0) out.value = conj(out.value);
    out.rel_error_bound = error_bound(out.chain, opts);
}

template <class T>
QgsOutcome<T> run_chain(std::int64_t N, const T& x, const T& theta, int s, bool starred,
                        const QgsOptions& opts, XSequence<T>& xs, std::vector<LevelGeom<T>>& geom,
                        Ops* shared, bool evaluate = true) {
    QgsOutcome<T> out;
    DescentState<T> first = initial_reduce(x, theta, N);
    int before = xs.known();
    out.chain = descend(first, opts.K, xs);
    shared->fiftieths += xstep_count * (xs.known() - before);
    out.ops.fiftieths += descent_count * static_cast<std::int64_t>(out.chain.states.size());
    ascend(out, opts, geom, shared, evaluate);
    finish(out, N, x, theta, s, starred, opts, evaluate);
    return out;
}

}  // namespace

template <class T>
Cx<T> endpoint_phase(std::int64_t N, const T& x, const T& theta) {
    T n(N);
    return unit_phase(T(n * (n * x + 2 * theta)));
}

template <class T>
Cx<T> geometric_sum(std::int64_t N, const T& theta) {
    if (N < 1) return Cx<T>(T(0.5));
    Cx<T> half_ends = (Cx<T>(T(1)) + unit_phase(T(2 * T(N) * theta))) * T(0.5);
    if (reduce_half(theta) == 0) return Cx<T>(T(N + 1)) - half_ends;
    Cx<T> num = Cx<T>(T(1)) - unit_phase(T(2 * T(N + 1) * theta));
    Cx<T> den = Cx<T>(T(1)) - unit_phase(T(2 * theta));
    return num / den - half_ends;
}

template <class T>
Cx<T> direct_sum(std::int64_t N, const T& x_in, const T& theta_in, bool starred, DirectMode mode, Ops* ops) {
    const T x = working(x_in), theta = working(theta_in);
    if (N < 0) return starred ? Cx<T>() : Cx<T>(T(0.5));
    if (N == 0) return starred ? Cx<T>(T(1)) : Cx<T>(T(0.5));
    Cx<T> total;
    if (mode == DirectMode::fast) total = cx_cast<T>(fast_range<T>(0, N, x, theta));
    else total = full_range<T>(0, N, x, theta);
    if (ops) ops->fiftieths += direct_count(N);
    if (!starred) total -= (Cx<T>(T(1)) + endpoint_phase<T>(N, x, theta)) * T(0.5);
    return total;
}

ExtComplex direct_sum(const GaussSumSpec& spec, DirectMode mode, Ops* ops) {
    int digits = std::max<int>(gauss_digits(spec.N), static_cast<int>(ExtReal::default_precision()));
    PrecisionScope ps(digits);
    ExtComplex v = direct_sum<ExtReal>(spec.N, working(spec.x), working(spec.theta), spec.starred, mode, ops);
    return spec.s < 0 ? conj(v) : v;
}

template <class T>
Cx<T> correction_term(std::int64_t L, const T& x, const T& theta, int P, bool refined, Ops* ops) {
    if (!(x > 0)) throw std::domain_error("correction_term: x must be positive");
    LevelGeom<T> g = level_geom<T>(x);
    if (ops) ops->fiftieths += geom_count + correction_count(L, x, theta, P, refined);
    return correction_impl(L, g, theta, P, refined);
}

template <class T>
Cx<T> reciprocity_prefactor(const T& x, const T& theta, Ops* ops) {
    LevelGeom<T> g = level_geom<T>(x);
    if (ops) ops->fiftieths += geom_count + prefactor_count;
    return prefactor_impl(g, theta);
}

template <class T>
QgsOutcome<T> qgs(std::int64_t N, const T& x, const T& theta, int s, bool starred, const QgsOptions& opts) {
    opts.validate();
    DescentState<T> first = initial_reduce(x, theta, N);
    XSequence<T> xs(first.x);
    std::vector<LevelGeom<T>> geom;
    Ops shared;
    QgsOutcome<T> out = run_chain(N, x, theta, s, starred, opts, xs, geom, &shared);
    out.ops += shared;
    return out;
}

QgsOutcome<ExtReal> qgs(const GaussSumSpec& spec, const QgsOptions& opts) {
    int digits = std::max<int>(gauss_digits(spec.N), static_cast<int>(ExtReal::default_precision()));
    PrecisionScope ps(digits);
    return qgs<ExtReal>(spec.N, working(spec.x), working(spec.theta), spec.s, spec.starred, opts);
}

template <class T>
std::pair<QgsOutcome<T>, QgsOutcome<T>> qgs_paired(std::int64_t N, const T& x, const T& theta_plus,
                                                   const T& theta_minus, const QgsOptions& opts,
                                                   bool starred) {
    opts.validate();
    DescentState<T> first = initial_reduce(x, theta_plus, N);
    XSequence<T> xs(first.x);
    std::vector<LevelGeom<T>> geom;
    Ops shared;
    QgsOutcome<T> a = run_chain(N, x, theta_plus, 1, starred, opts, xs, geom, &shared);
    QgsOutcome<T> b = run_chain(N, x, theta_minus, 1, starred, opts, xs, geom, &shared);
    // shared work is booked once, on the first outcome
    a.ops += shared;
    return {std::move(a), std::move(b)};
}

template <class T>
Ops qgs_paired_ops(std::int64_t N, const T& x, const T& theta_plus, const T& theta_minus,
                   const QgsOptions& opts, bool starred) {
    opts.validate();
    DescentState<T> first = initial_reduce(x, theta_plus, N);
    XSequence<T> xs(first.x);
    std::vector<LevelGeom<T>> geom;
    Ops shared;
    QgsOutcome<T> a = run_chain(N, x, theta_plus, 1, starred, opts, xs, geom, &shared, false);
    QgsOutcome<T> b = run_chain(N, x, theta_minus, 1, starred, opts, xs, geom, &shared, false);
    Ops total = shared;
    total += a.ops;
    total += b.ops;
    return total;
}

std::int64_t direct_sum_count(std::int64_t N) { return direct_count(N); }

template <class T>
T error_bound(const QgsChain<T>& chain, const QgsOptions& opts) {
    using std::abs;
    using std::exp;
    using std::pow;
    using std::sqrt;
    const auto& st = chain.states;
    T rk = sqrt(T(opts.K));
    T b;
    if (opts.refined) {
        int P = opts.P;
        b = 2 * sqrt(T(3)) / (3 * rk) * pow(T(2 * P) / (9 * pi_v<T>()), P) * exp(T(-P));
    } else {
        T mx = 0;
        for (std::size_t n = 0; n + 1 < st.size(); ++n) {
            if (st[n].x == 0) continue;
            mx = std::max(mx, remainder_bound<T>(opts.P, T(abs(st[n].x))));
        }
        b = std::min(T(T(3.41) * mx / rk), T(1 / (2 * rk)));
    }
    // early large partial quotient
    std::size_t lo = st.size() >= 2 ? st.size() - 2 : 0;
    for (std::size_t j = st.size(); j-- > std::max<std::size_t>(1, lo);) {
        if (st[j].L < 1) continue;
        if (abs(st[j].x) * T(st[j].L) < 1) {
            b /= sqrt(T(st[j - 1].L) / T(st[j].L));
            break;
        }
    }
    return b;
}

template <class T>
std::string qgs_trace(const QgsOutcome<T>& out, const std::function<std::optional<Cx<T>>(std::size_t)>& exact) {
    std::ostringstream os;
    const auto& st = out.chain.states;
    os << "descent\n";
    os << std::setw(3) << "n" << std::setw(14) << "L_n" << std::setw(26) << "x_n" << std::setw(26)
       << "theta_n" << std::setw(4) << "s_n" << '\n';
    for (const auto& s : st) {
        os << std::setw(3) << s.n << std::setw(14) << s.L << std::setw(26) << to_string(s.x, 18)
           << std::setw(26) << to_string(s.theta, 18) << std::setw(4) << s.s << '\n';
    }
    os << "termination " << to_string(out.chain.termination) << ", n_K = " << out.chain.n_K << '\n';
    os << "ascent\n";
    for (std::size_t i = st.size(); i-- > 0;) {
        const Cx<T>& v = out.levels[i];
        os << std::setw(3) << st[i].n << "  " << to_string(v.re, 12) << (v.im < 0 ? " - " : " + ")
           << to_string(T(v.im < 0 ? T(-v.im) : v.im), 12) << "i";
        if (exact) {
            if (auto e = exact(i)) {
                T err = abs(Cx<T>(v - *e));
                T rel = err / abs(*e);
                os << "  exact " << to_string(e->re, 12) << (e->im < 0 ? " - " : " + ")
                   << to_string(T(e->im < 0 ? T(-e->im) : e->im), 12) << "i  abs " << to_string(err, 5)
                   << "  rel " << to_string(rel, 4);
            }
        }
        os << '\n';
    }
    os << "value " << to_string(out.value.re, 15) << ' ' << to_string(out.value.im, 15)
       << "  bound " << to_string(out.rel_error_bound, 4) << "  ops " << out.ops.units() << '\n';
    return os.str();
}

#define ZT_GAUSS_INST(T)                                                                              \
    template Cx<T> endpoint_phase<T>(std::int64_t, const T&, const T&);                               \
    template Cx<T> geometric_sum<T>(std::int64_t, const T&);                                          \
    template Cx<T> direct_sum<T>(std::int64_t, const T&, const T&, bool, DirectMode, Ops*);           \
    template Cx<T> correction_term<T>(std::int64_t, const T&, const T&, int, bool, Ops*);             \
    template Cx<T> reciprocity_prefactor<T>(const T&, const T&, Ops*);                                \
    template QgsOutcome<T> qgs<T>(std::int64_t, const T&, const T&, int, bool, const QgsOptions&);    \
    template std::pair<QgsOutcome<T>, QgsOutcome<T>> qgs_paired<T>(std::int64_t, const T&, const T&,  \
                                                                   const T&, const QgsOptions&, bool); \
    template T error_bound<T>(const QgsChain<T>&, const QgsOptions&);                                 \
    template Ops qgs_paired_ops<T>(std::int64_t, const T&, const T&, const T&, const QgsOptions&, bool); \
    template std::string qgs_trace<T>(const QgsOutcome<T>&,                                           \
                                      const std::function<std::optional<Cx<T>>(std::size_t)>&);

ZT_GAUSS_INST(double)
ZT_GAUSS_INST(Quad)
ZT_GAUSS_INST(ExtReal)

}  // namespace zt
