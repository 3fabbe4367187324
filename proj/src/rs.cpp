#include "zt/rs.hpp"

#include <boost/math/special_functions/bernoulli.hpp>

#include <algorithm>
#include <cmath>
#include <mpfr.h>

namespace zt {

namespace {

ExtReal two_pi() { return 2 * pi_v<ExtReal>(); }

int required_digits(const ExtReal& t) {
    double td = static_cast<double>(t);
    return std::max<int>(height_digits(td), static_cast<int>(ExtReal::default_precision()));
}

// thin RAII over mpfr_t for the hot loop
struct Mp {
    mpfr_t v;
    explicit Mp(mpfr_prec_t bits) { mpfr_init2(v, bits); }
    ~Mp() { mpfr_clear(v); }
    Mp(const Mp&) = delete;
    Mp& operator=(const Mp&) = delete;
};

constexpr std::int64_t reanchor_span = 1 << 16;
constexpr std::int64_t series_from = 4096;  // below this every phase uses a fresh log
constexpr double two_pi_d = 6.283185307179586477;

struct Kahan {
    double s = 0, c = 0;
    void add(double v) {
        double y = v - c;
        double t = s + y;
        c = (t - s) - y;
        s = t;
    }
};

}  // namespace

ExtReal theta_c(const ExtReal& t) {
    PrecisionScope ps(required_digits(t));
    ExtReal tt = working(t);
    return tt / 2 * (log(tt / two_pi()) - 1) - pi_v<ExtReal>() / 8;
}

ExtReal theta(const ExtReal& t) {
    if (t < 100) throw std::domain_error("theta: t must be at least 100");
    int digits = required_digits(t);
    PrecisionScope ps(digits);
    ExtReal tt = working(t);
    ExtReal out = theta_c(tt);
    ExtReal eps = pow(ExtReal(10), -(digits + 2));
    ExtReal it2 = 1 / (tt * tt);
    ExtReal tp = 1 / tt;  // t^{-(2n-1)}
    ExtReal prev_mag = -1;
    for (int n = 1; n < 200; ++n) {
        ExtReal b = abs(boost::math::bernoulli_b2n<ExtReal>(n));
        ExtReal term = (1 - pow(ExtReal(2), 1 - 2 * n)) * b / (4 * n * (2 * n - 1)) * tp;
        if (prev_mag >= 0 && term > prev_mag) break;  // asymptotic: stop at the smallest term
        out += term;
        if (term < eps) break;
        prev_mag = term;
        tp *= it2;
    }
    return out;
}

ExtReal theta_of(const ExtReal& t, ThetaVariant v) {
    return v == ThetaVariant::theta ? theta(t) : theta_c(t);
}

std::int64_t rs_length(const ExtReal& t) {
    PrecisionScope ps(required_digits(t));
    ExtReal r = sqrt(ExtReal(t) / two_pi());
    return to_int64(ExtReal(floor(r)));
}

ExtReal main_sum_with_phase(const ExtReal& t, const ExtReal& th, std::int64_t n_lo, std::int64_t n_hi,
                            SumMode mode, Ops* ops) {
    if (n_lo < 1) throw std::invalid_argument("main_sum: n_lo must be at least 1");
    if (n_hi < n_lo) return ExtReal(0);
    int digits = required_digits(t);
    PrecisionScope ps(digits);
    count_trig(ops, 2 * (n_hi - n_lo + 1));
    count_arith(ops, 10 * (n_hi - n_lo + 1));

    ExtReal tt = working(t);
    ExtReal tau = tt / two_pi();               // phase of N^{-it} in turns is -tau log N
    ExtReal th_turns = working(th) / two_pi();  // theta in turns
    th_turns -= floor(th_turns);

    if (mode == SumMode::full) {
        ExtReal acc = 0;
        for (std::int64_t n = n_lo; n <= n_hi; ++n) {
            ExtReal ph = th_turns - tau * log(ExtReal(n));
            ph -= floor(ph);
            acc += cos(two_pi() * ph) / sqrt(ExtReal(n));
        }
        return 2 * acc;
    }

    const mpfr_prec_t bits = static_cast<mpfr_prec_t>(std::ceil(digits * 3.3219280948873623)) + 16;
    Mp mtau_(bits), mth_(bits), psi_(bits), tmp_(bits), u_(bits), u2_(bits), term_(bits), s_(bits),
        inc_(bits), cpi_(bits), ph_(bits);
    mpfr_ptr mtau = mtau_.v, mth = mth_.v, psi = psi_.v, tmp = tmp_.v, u = u_.v, u2 = u2_.v,
             term = term_.v, s = s_.v, inc = inc_.v, cpi = cpi_.v, ph = ph_.v;
    mpfr_set(mtau, tau.backend().data(), MPFR_RNDN);
    mpfr_set(mth, th_turns.backend().data(), MPFR_RNDN);
    mpfr_mul_ui(cpi, mtau, 2, MPFR_RNDN);  // t/pi: turns per unit of atanh
    // increments below 2^-110 of a turn are dropped
    const mpfr_exp_t floor_exp = -110;

    Kahan acc;
    std::int64_t n = n_lo;
    while (n <= n_hi) {
        // anchor: psi = tau log n mod 1
        mpfr_set_ui(tmp, static_cast<unsigned long>(n), MPFR_RNDN);
        mpfr_log(tmp, tmp, MPFR_RNDN);
        mpfr_mul(psi, mtau, tmp, MPFR_RNDN);
        mpfr_frac(psi, psi, MPFR_RNDN);
        std::int64_t span_end = n < series_from ? n : std::min(n_hi, n + reanchor_span - 1);
        for (;;) {
            mpfr_sub(ph, mth, psi, MPFR_RNDN);
            mpfr_frac(ph, ph, MPFR_RNDN);
            double r = mpfr_get_d(ph, MPFR_RNDN);
            if (r > 0.5) r -= 1;
            if (r < -0.5) r += 1;
            acc.add(std::cos(two_pi_d * r) / std::sqrt(static_cast<double>(n)));
            if (n == span_end) break;
            // psi(n+1) - psi(n) = (t/pi) atanh(1/(2n+1))
            mpfr_set_ui(tmp, static_cast<unsigned long>(2 * n + 1), MPFR_RNDN);
            mpfr_ui_div(u, 1, tmp, MPFR_RNDN);
            mpfr_sqr(u2, u, MPFR_RNDN);
            mpfr_set(s, u, MPFR_RNDN);
            mpfr_set(term, u, MPFR_RNDN);
            mpfr_exp_t lead = mpfr_get_exp(cpi);
            for (unsigned k = 3;; k += 2) {
                mpfr_mul(term, term, u2, MPFR_RNDN);
                mpfr_div_ui(tmp, term, k, MPFR_RNDN);
                if (mpfr_get_exp(tmp) + lead < floor_exp) break;
                mpfr_add(s, s, tmp, MPFR_RNDN);
            }
            mpfr_mul(inc, cpi, s, MPFR_RNDN);
            mpfr_add(psi, psi, inc, MPFR_RNDN);
            mpfr_frac(psi, psi, MPFR_RNDN);
            ++n;
        }
        ++n;
    }
    return ExtReal(2 * acc.s);
}

ExtReal main_sum(const RsfRequest& req, SumMode mode, Ops* ops) {
    if (req.n_hi > rs_length(req.t)) throw std::invalid_argument("main_sum: n_hi exceeds N_t");
    ExtReal th = theta_of(req.t, req.variant);
    return main_sum_with_phase(req.t, th, req.n_lo, req.n_hi, mode, ops);
}

ExtReal psi0(const ExtReal& p) {
    using std::abs;
    ExtReal pi2 = two_pi();
    for (int q : {1, 3}) {
        ExtReal p0 = ExtReal(q) / 4;
        ExtReal h = p - p0;
        if (abs(h) < ExtReal(psi0_window)) {
            // both cosines vanish at p0; sin(2pi(phi1 h + h^2)) / (sigma sin(2pi h))
            ExtReal phi1 = 2 * p0 - 1;
            ExtReal a = pi2 * (phi1 * h + h * h);
            ExtReal b = pi2 * h;
            auto sinc = [](const ExtReal& z) { return z == 0 ? ExtReal(1) : ExtReal(sin(z) / z); };
            ExtReal v = (phi1 + h) * sinc(a) / sinc(b);
            return q == 1 ? ExtReal(-v) : v;
        }
    }
    return cos(pi2 * (p * p - p - ExtReal(1) / 16)) / cos(pi2 * p);
}

ExtReal rs_correction(const ExtReal& t, std::int64_t N_t) {
    PrecisionScope ps(required_digits(t));
    ExtReal tt = working(t);
    ExtReal r = sqrt(tt / two_pi());
    ExtReal p = r - floor(r);
    ExtReal amp = pow(two_pi() / tt, ExtReal(0.25));
    ExtReal v = amp * psi0(p);
    // (-1)^{N_t - 1}
    return N_t % 2 == 0 ? ExtReal(-v) : v;
}

RsfResult rsf_z(const ExtReal& t, SumMode mode) {
    if (t < 200) throw std::domain_error("rsf_z: t must be at least 200");
    PrecisionScope ps(required_digits(t));
    RsfResult r;
    ExtReal tt = working(t);
    r.N_t = rs_length(tt);
    ExtReal root = sqrt(tt / two_pi());
    r.p = root - floor(root);
    r.main = main_sum_with_phase(tt, theta(tt), 1, r.N_t, mode, &r.ops);
    r.correction = rs_correction(tt, r.N_t);
    count_trig(&r.ops, 3);
    r.z = r.main + r.correction;
    r.truncation_budget = 0.127 * std::pow(static_cast<double>(tt), -0.75);
    return r;
}

}  // namespace zt
