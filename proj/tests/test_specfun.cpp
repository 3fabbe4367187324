#include "doctest.h"

#include "zt/specfun.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/polygamma.hpp>

#include <cmath>
#include <complex>

using namespace zt;

namespace {

// erf(m e^{i pi/4}) by its Maclaurin series at the current precision
ExtComplex erf_maclaurin(const ExtReal& m) {
    ExtReal h = sqrt(ExtReal(2)) / 2;
    ExtComplex z(m * h, m * h);
    ExtComplex z2 = z * z;
    ExtComplex term = z;  // (-1)^n z^{2n+1} / n!
    ExtComplex sum;
    ExtReal tol("1e-70");
    for (int n = 0; n < 2000; ++n) {
        ExtComplex add = term / ExtReal(2 * n + 1);
        sum += add;
        if (n > 5 && abs(add) < tol) break;
        term = term * z2 * ExtReal(-1) / ExtReal(n + 1);
    }
    return sum * ExtReal(2 / sqrt(pi_v<ExtReal>()));
}

double rel(const ExtComplex& a, const ExtComplex& b) { return static_cast<double>(abs(a - b) / abs(b)); }

// c_r through Hurwitz zeta written as polygamma values
double c_polygamma(int r, double y) {
    double pi = M_PI;
    if (r == 0) return (boost::math::digamma(1 - y) - boost::math::digamma(1 + y)) / pi;
    double f = std::tgamma(2 * r + 1.0);
    double z1 = -boost::math::polygamma(2 * r, 1 + y) / f;
    double z2 = -boost::math::polygamma(2 * r, 1 - y) / f;
    return (z1 - z2) / std::pow(pi, 2 * r + 1);
}

}  // namespace

TEST_CASE("erf_diag trivial values and reflection") {
    PrecisionScope ps(40);
    auto z = erf_diag(ExtReal(0), Ray::plus);
    CHECK(abs(z) < ExtReal(1e-38));
    for (double m : {0.1, 0.7, 1.3, 2.5, 4.0, 9.0}) {
        auto p = erf_diag(ExtReal(m), Ray::plus);
        auto q = erf_diag(ExtReal(m), Ray::minus);
        CHECK(rel(q, conj(p)) < 1e-35);
    }
}

TEST_CASE("erf_diag against Maclaurin oracle across regimes") {
    for (double m : {0.2, 0.74, 0.76, 1.0, 1.5, 2.2, 2.3, 3.0, 4.5, 6.0}) {
        ExtComplex oracle;
        {
            PrecisionScope hi(80);
            oracle = erf_maclaurin(ExtReal(m));
        }
        PrecisionScope ps(40);
        CAPTURE(m);
        CHECK(rel(erf_diag(ExtReal(m), Ray::plus), oracle) < 1e-30);
        auto q = erf_diag(Quad(m), Ray::plus);
        CHECK(rel(ExtComplex(ExtReal(q.re), ExtReal(q.im)), oracle) < 1e-28);
        auto d = erf_diag(m, Ray::plus);
        CHECK(rel(ExtComplex(ExtReal(d.re), ExtReal(d.im)), oracle) < 1e-13);
    }
}

TEST_CASE("erf plus erfc is one") {
    PrecisionScope ps(40);
    for (double m : {0.3, 1.1, 2.0, 5.0, 20.0}) {
        auto s = erf_diag(ExtReal(m), Ray::minus) + erfc_diag(ExtReal(m), Ray::minus);
        CHECK(abs(s - ExtComplex(ExtReal(1))) < ExtReal(1e-35));
    }
}

TEST_CASE("erf_diag counts one erf call") {
    Ops o;
    erf_diag(1.0, Ray::plus, &o);
    CHECK(o.units() == doctest::Approx(9.0));
}

TEST_CASE("c_r closed forms and limits") {
    PrecisionScope ps(40);
    CHECK(static_cast<double>(c_coeff(0, ExtReal(0.5))) == doctest::Approx(-2 / M_PI).epsilon(1e-14));
    double c0 = static_cast<double>(c_coeff(0, ExtReal(0.01)));
    CHECK(c0 == doctest::Approx(-M_PI * 0.01 / 3).epsilon(1e-3));
    ExtReal y(0.3);
    ExtReal py = pi_v<ExtReal>() * y;
    ExtReal s = sin(py);
    ExtReal want = cos(py) / (s * s * s) - 1 / (py * py * py);
    CHECK(abs(c_coeff(1, y) - want) < ExtReal(1e-35));
}

TEST_CASE("c_1 against the bilateral series") {
    long double y = 0.3L, sum = 0;
    for (long n = 1000000; n >= 1; --n) sum += 1 / std::pow(n + y, 3.0L) - 1 / std::pow(n - y, 3.0L);
    sum /= std::pow(3.14159265358979323846L, 3.0L);
    PrecisionScope ps(30);
    CHECK(static_cast<double>(c_coeff(1, ExtReal(0.3))) == doctest::Approx(static_cast<double>(sum)).epsilon(1e-12));
}

TEST_CASE("c_r against polygamma for all orders") {
    PrecisionScope ps(40);
    for (int r = 0; r < max_P; ++r) {
        for (double y : {-0.49, -0.3, -0.12, -0.05, 0.001, 0.04, 0.0636, 0.0637, 0.2, 0.45}) {
            CAPTURE(r);
            CAPTURE(y);
            double want = c_polygamma(r, y);
            double got = static_cast<double>(c_coeff(r, ExtReal(y)));
            CHECK(got == doctest::Approx(want).epsilon(1e-11).scale(1e-300));
        }
    }
}

TEST_CASE("c_r closed and series forms agree near the switch") {
    PrecisionScope ps(50);
    ExtReal y = ExtReal(0.2) / pi_v<ExtReal>();
    for (int r = 0; r < max_P; ++r) {
        ExtReal a = c_coeff_closed(r, y), b = c_coeff_series(r, y);
        CAPTURE(r);
        CHECK(abs(a - b) / abs(b) < ExtReal(1e-30));
    }
}

TEST_CASE("c_r list matches single evaluations") {
    PrecisionScope ps(40);
    ExtReal out[max_P];
    int trig = c_coeff_list(4, ExtReal(0.37), out);
    CHECK(trig == 2);
    for (int r = 0; r < 4; ++r) CHECK(abs(out[r] - c_coeff(r, ExtReal(0.37))) < ExtReal(1e-35));
    CHECK(c_coeff_list(4, ExtReal(0.01), out) == 0);
}

TEST_CASE("regularised c'_r") {
    PrecisionScope ps(40);
    ExtReal xi("3.27");
    ExtReal eps = xi - 3;
    for (int r = 0; r < 4; ++r) {
        ExtReal want = c_coeff(r, eps) - 1 / pow(pi_v<ExtReal>() * xi, 2 * r + 1);
        CHECK(abs(c_coeff_regularised(r, xi) - want) < ExtReal(1e-35));
        CrCoefficientRequest q{r, eps, xi};
        CHECK(abs(c_coeff(q) - want) < ExtReal(1e-35));
    }
}

TEST_CASE("A_P maxima") {
    PrecisionScope ps(30);
    CHECK(static_cast<double>(ap_max<ExtReal>(2)) == doctest::Approx(32.2895).epsilon(2e-6));
    CHECK(static_cast<double>(ap_max<ExtReal>(3)) == doctest::Approx(128.1207).epsilon(1e-6));
    long double s = 0;
    for (long k = -2000000; k <= 2000000; ++k) {
        if (k == 0) continue;
        s += 1 / std::pow(std::fabs(k + 0.5L), 3.0L);
    }
    CHECK(static_cast<double>(ap_max<ExtReal>(1)) == doctest::Approx(static_cast<double>(s)).epsilon(1e-10));
    CHECK(static_cast<double>(s) == doctest::Approx(8.8288).epsilon(1e-4));
}

TEST_CASE("remainder bound") {
    PrecisionScope ps(30);
    double want = std::tgamma(2.5) / (M_PI * M_PI * std::sqrt(2.0)) * std::pow(0.25 / M_PI, 2) *
                  std::sqrt(M_PI / 2) * 32.2895;
    CHECK(static_cast<double>(remainder_bound(2, ExtReal(0.25))) == doctest::Approx(want).epsilon(1e-5));
    CHECK(static_cast<double>(remainder_bound(3, ExtReal(0.5))) == doctest::Approx(15 / std::pow(M_PI, 4)).epsilon(0.02));
    ExtReal prev = remainder_bound(3, ExtReal(0.5));
    for (double x : {0.25, 0.1, 0.01, 1e-4}) {
        ExtReal b = remainder_bound(3, ExtReal(x));
        CHECK(b < prev);
        prev = b;
    }
}

TEST_CASE("refined remainder against quadrature of the defining integral") {
    using cdl = std::complex<double>;
    boost::math::quadrature::exp_sinh<double> integrator;
    auto oracle = [&](int P, double x, double d) {
        double tau = M_PI * d * d / x;
        auto w = [&](double u) {
            double e = tau * u * u;
            return e > 700 ? 0.0 : std::exp(2 * P * std::log(u) - e) / (1 + std::pow(u, 4));
        };
        auto re = [&](double u) { return u == 0 ? 0.0 : w(u); };
        auto im = [&](double u) { return u == 0 ? 0.0 : -u * u * w(u); };
        cdl I(integrator.integrate(re, 1e-13), integrator.integrate(im, 1e-13));
        cdl pre = 2.0 * std::pow(cdl(0, -1), P) / (M_PI * std::exp(cdl(0, -M_PI / 4)));
        return (d < 0 ? -1.0 : 1.0) * pre * I;
    };
    PrecisionScope ps(30);
    RemainderQuery q{3, ExtReal(0.4), 1, ExtReal(0.43), -1};
    auto est = refined_remainder(q);
    cdl e(static_cast<double>(est.re), static_cast<double>(est.im));
    cdl o = oracle(3, 0.4, 0.57);
    CHECK(std::abs(e - o) / std::abs(o) < 0.05);
    for (int P : {2, 3, 4}) {
        // P = 2 at the smallest tau reaches 5.9%
        double tol = P == 2 ? 0.06 : 0.05;
        for (double x : {0.05, 0.2, 0.5}) {
            for (double d : {-2.5, -0.75, 0.6, 1.5, 3.0}) {
                if (M_PI * d * d / x < M_PI / 2) continue;
                auto r = refined_remainder<double>(P, x, d);
                cdl got(r.re, r.im), want = oracle(P, x, d);
                CAPTURE(P);
                CAPTURE(x);
                CAPTURE(d);
                CHECK(std::abs(got - want) / std::abs(want) < tol);
            }
        }
    }
}

TEST_CASE("refined remainder scaling") {
    for (int P : {2, 3}) {
        double a = std::abs(std::complex<double>(refined_remainder<double>(P, 1e-4, 2.0).re, refined_remainder<double>(P, 1e-4, 2.0).im));
        double b = std::abs(std::complex<double>(refined_remainder<double>(P, 1e-4, 4.0).re, refined_remainder<double>(P, 1e-4, 4.0).im));
        CHECK(b / a == doctest::Approx(std::pow(2.0, -(2 * P + 1))).epsilon(1e-3));
        double c = std::abs(std::complex<double>(refined_remainder<double>(P, 1e-6, 2.0).re, refined_remainder<double>(P, 1e-6, 2.0).im));
        CHECK(c / a == doctest::Approx(std::pow(1e-2, P + 0.5)).epsilon(1e-3));
    }
}

TEST_CASE("refined remainder stays within the termwise crude bound") {
    // crude term: Gamma(P+1/2)/(pi^2 sqrt2) (x/pi)^P sqrt(pi/2) |d|^{-(2P+1)}, against R_P/sqrt(2 pi x)
    PrecisionScope ps(30);
    for (int P : {2, 3, 4}) {
        for (double x : {0.01, 0.05, 0.2, 0.5}) {
            for (double d : {-1.7, 0.55, 1.0, 2.0, 6.0}) {
                if (M_PI * d * d / x < M_PI / 2) continue;
                auto r = refined_remainder<ExtReal>(P, ExtReal(x), ExtReal(d));
                double term = static_cast<double>(abs(r)) / std::sqrt(2 * M_PI * x);
                double crude = std::tgamma(P + 0.5) / (M_PI * M_PI * std::sqrt(2.0)) * std::pow(x / M_PI, P) *
                               std::sqrt(M_PI / 2) * std::pow(std::fabs(d), -(2 * P + 1));
                CAPTURE(P);
                CAPTURE(x);
                CAPTURE(d);
                CHECK(term <= 1.05 * crude);
            }
        }
    }
}

TEST_CASE("refined correction block vanishes as x goes to zero") {
    PrecisionScope ps(30);
    ExtComplex f(ExtReal(1));
    auto small = refined_correction_block(ExtReal("1e-30"), ExtReal(0.3), ExtReal(0.2), 0, f, 3);
    CHECK(abs(small) < ExtReal(1e-80));
}
