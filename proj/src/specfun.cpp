#include "zt/specfun.hpp"

#include <boost/math/special_functions/zeta.hpp>

#include <array>
#include <map>
#include <mutex>
#include <vector>

namespace zt {

namespace {

template <class T> T tiny() {
    using std::pow;
    return pow(T(10), -(working_digits<T>() + 2));
}

// 2/sqrt(pi) * z * sum (-i w)^n / (n! (2n+1)),  z = m e^{i pi/4}, w = m^2
template <class T>
Cx<T> erf_series_plus(const T& m, const T& eps) {
    using std::sqrt;
    T w = m * m;
    T p = 1;  // w^n / n!
    T sr = 0, si = 0;
    for (int n = 0; n < 100000; ++n) {
        T term = p / (2 * n + 1);
        switch (n & 3) {
        case 0: sr += term; break;
        case 1: si -= term; break;
        case 2: sr -= term; break;
        default: si += term; break;
        }
        if (n > 2 && p < eps) break;
        p = p * w / (n + 1);
    }
    T s2 = sqrt(T(2));
    Cx<T> z(m / s2, m / s2);
    return z * Cx<T>(sr, si) * T(2 / sqrt(pi_v<T>()));
}

struct Centre {
    Cx<ExtReal> erf;
    Cx<ExtReal> gauss;  // e^{-i c^2}
};

inline constexpr int centre_den = 8;

// centre values from a guarded series: the terms peak near e^{c^2}
Centre centre_value(int j, int digits) {
    double c = static_cast<double>(j) / centre_den;
    int guard = static_cast<int>(c * c / std::log(10.0)) + 15;
    PrecisionScope ps(digits + guard);
    ExtReal cm = ExtReal(j) / centre_den;
    ExtReal eps = pow(ExtReal(10), -(digits + guard));
    Cx<ExtReal> e = erf_series_plus<ExtReal>(cm, eps);
    Cx<ExtReal> g = unit_phase<ExtReal>(ExtReal(-cm * cm / pi_v<ExtReal>()));
    PrecisionScope back(digits);
    Centre out;
    out.erf = Cx<ExtReal>(ExtReal(e.re), ExtReal(e.im));
    out.gauss = Cx<ExtReal>(ExtReal(g.re), ExtReal(g.im));
    return out;
}

double asym_threshold(int digits) {
    return std::max(2.25, std::sqrt(digits * std::log(10.0) + 2.0));
}

template <class T>
struct CentreTable {
    std::vector<Cx<T>> erf, gauss;
};

template <class T>
const CentreTable<T>& centre_table() {
    static std::mutex mu;
    static std::map<int, CentreTable<T>> cache;
    int digits = working_digits<T>();
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(digits);
    if (it != cache.end()) return it->second;
    CentreTable<T> tab;
    int jmax = static_cast<int>(std::ceil(asym_threshold(digits) * centre_den)) + 1;
    tab.erf.resize(jmax + 1);
    tab.gauss.resize(jmax + 1);
    int build_digits = digits + 5;
    for (int j = 0; j <= jmax; ++j) {
        Centre c = centre_value(j, build_digits);
        tab.erf[j] = Cx<T>(static_cast<T>(c.erf.re), static_cast<T>(c.erf.im));
        tab.gauss[j] = Cx<T>(static_cast<T>(c.gauss.re), static_cast<T>(c.gauss.im));
    }
    return cache.emplace(digits, std::move(tab)).first->second;
}

// Taylor expansion about the nearest centre c = j/8 on the ray.
// g_n = H_n(z0) h^n / n!, h = delta e^{i pi/4}, z0 h = i c delta, h^2 = i delta^2
template <class T>
Cx<T> erf_taylor_plus(const T& m, const T& eps) {
    using std::floor;
    using std::sqrt;
    const auto& tab = centre_table<T>();
    int j = static_cast<int>(floor(m * centre_den + T(0.5)));
    T c = T(j) / centre_den;
    T d = m - c;
    Cx<T> gm1;  // g_{n-1}
    Cx<T> g(T(1), T(0));
    Cx<T> sum = g;
    for (int n = 0; n < 2000; ++n) {
        // g_{n+1} = 2 i d (c g_n - d g_{n-1}) / (n+1)
        Cx<T> in = g * c - gm1 * d;
        Cx<T> nx = times_i(in) * T(2 * d / (n + 1));
        gm1 = g;
        g = nx;
        Cx<T> term = g / T(n + 2);
        if ((n & 1) == 0) sum -= term;
        else sum += term;
        if (n > 3 && norm2(term) < eps * eps) break;
    }
    T s2 = sqrt(T(2));
    Cx<T> h(d / s2, d / s2);
    return tab.erf[j] + tab.gauss[j] * h * sum * T(2 / sqrt(pi_v<T>()));
}

// erfc(m e^{i pi/4}) ~ e^{-i m^2}/(z sqrt(pi)) sum a_n, a_n/a_{n-1} = i(2n-1)/(2m^2)
template <class T>
Cx<T> erfc_asym_plus(const T& m, const T& eps) {
    using std::sqrt;
    T inv = 1 / (2 * m * m);
    Cx<T> a(T(1), T(0));
    Cx<T> sum = a;
    T prev = 1;
    for (int n = 1; n < 100000; ++n) {
        a = times_i(a) * T((2 * n - 1) * inv);
        T mag = norm2(a);
        if (mag > prev) break;
        sum += a;
        prev = mag;
        if (mag < eps * eps) break;
    }
    T s2 = sqrt(T(2));
    Cx<T> ph = unit_phase<T>(T(-m * m / pi_v<T>()));
    Cx<T> invz(1 / (m * s2), -1 / (m * s2));  // 1/z
    return ph * invz * sum / sqrt(pi_v<T>());
}

template <class T>
Cx<T> erf_plus(const T& m) {
    T eps = tiny<T>();
    if (m == 0) return Cx<T>();
    if (m <= T(erf_series_limit)) return erf_series_plus(m, eps);
    if (m >= erf_asymptotic_threshold<T>()) return Cx<T>(T(1)) - erfc_asym_plus(m, eps);
    return erf_taylor_plus(m, eps);
}

}  // namespace

template <class T>
T erf_asymptotic_threshold() {
    return T(asym_threshold(working_digits<T>()));
}

template <class T>
Cx<T> erf_diag(const T& m, Ray ray, Ops* ops) {
    if (m < 0) throw std::domain_error("erf_diag: negative modulus");
    count_erf(ops);
    Cx<T> v = erf_plus(m);
    return ray == Ray::plus ? v : conj(v);
}

template <class T>
Cx<T> erfc_diag(const T& m, Ray ray, Ops* ops) {
    if (m < 0) throw std::domain_error("erfc_diag: negative modulus");
    count_erf(ops);
    Cx<T> v = m >= erf_asymptotic_threshold<T>() ? erfc_asym_plus(m, tiny<T>())
                                                 : Cx<T>(T(1)) - erf_plus(m);
    return ray == Ray::plus ? v : conj(v);
}

// ---- c_r coefficients ----

namespace {

constexpr int max_deriv = 2 * (max_P - 1);

// d^n cot(u)/du^n = p_n(cot u), p_{n+1} = -(1 + C^2) p_n'
const std::vector<std::vector<long double>>& cot_deriv_polys() {
    static const std::vector<std::vector<long double>> polys = [] {
        std::vector<std::vector<long double>> p(max_deriv + 1);
        p[0] = {0, 1};
        for (int n = 0; n < max_deriv; ++n) {
            const auto& a = p[n];
            std::vector<long double> d(a.size() > 1 ? a.size() - 1 : 1, 0);
            for (std::size_t k = 1; k < a.size(); ++k) d[k - 1] = a[k] * static_cast<long double>(k);
            std::vector<long double> r(d.size() + 2, 0);
            for (std::size_t k = 0; k < d.size(); ++k) {
                r[k] -= d[k];
                r[k + 2] -= d[k];
            }
            p[n + 1] = r;
        }
        return p;
    }();
    return polys;
}

// cot u - 1/u = sum_{n>=1} t_n u^{2n-1}, from cot(u) sin(u) = cos(u)
template <class T>
const std::vector<T>& cot_series() {
    static std::mutex mu;
    static std::map<int, std::vector<T>> cache;
    int digits = working_digits<T>();
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(digits);
    if (it != cache.end()) return it->second;
    const int nmax = 64;
    std::vector<T> out(nmax + 1);
    {
        PrecisionScope ps(digits + 30);
        std::vector<ExtReal> t(nmax + 1), s(nmax + 1), c(nmax + 1);
        ExtReal f = 1;  // factorial
        for (int k = 0; k <= 2 * nmax + 1; ++k) {
            if (k > 0) f *= k;
            if (k % 2 == 0 && k / 2 <= nmax) c[k / 2] = ((k / 2) % 2 ? -1 : 1) / f;
            if (k % 2 == 1 && k / 2 <= nmax) s[k / 2] = ((k / 2) % 2 ? -1 : 1) / f;
        }
        t[0] = 1;
        for (int m = 1; m <= nmax; ++m) {
            ExtReal acc = c[m];
            for (int n = 0; n < m; ++n) acc -= t[n] * s[m - n];
            t[m] = acc;
        }
        for (int n = 0; n <= nmax; ++n) out[n] = static_cast<T>(t[n]);
    }
    return cache.emplace(digits, std::move(out)).first->second;
}

template <class T>
T binom(int n, int k) {
    T r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace

template <class T>
T c_coeff_closed(int r, const T& y) {
    using std::cos;
    using std::pow;
    using std::sin;
    if (r < 0 || r > max_P - 1) throw std::out_of_range("c_coeff: r out of range");
    T u = pi_v<T>() * y;
    T C = cos(u) / sin(u);
    const auto& p = cot_deriv_polys()[2 * r];
    T acc = 0;
    for (std::size_t k = p.size(); k-- > 0;) acc = acc * C + T(p[k]);
    T fact = 1;
    for (int i = 2; i <= 2 * r; ++i) fact *= i;
    return acc / fact - 1 / pow(u, 2 * r + 1);
}

template <class T>
T c_coeff_series(int r, const T& y) {
    using std::abs;
    using std::pow;
    if (r < 0 || r > max_P - 1) throw std::out_of_range("c_coeff: r out of range");
    const auto& t = cot_series<T>();
    T u = pi_v<T>() * y;
    T u2 = u * u;
    T eps = tiny<T>();
    T up = u;  // u^{2n-1-2r}
    T sum = 0;
    for (int n = r + 1; n < static_cast<int>(t.size()); ++n) {
        T term = t[n] * binom<T>(2 * n - 1, 2 * r) * up;
        sum += term;
        if (n > r + 2 && abs(term) <= eps * abs(sum)) break;
        up *= u2;
    }
    return sum;
}

template <class T>
T c_coeff(int r, const T& y) {
    using std::abs;
    if (y == 0) return T(0);
    if (abs(pi_v<T>() * y) < T(0.2)) return c_coeff_series(r, y);
    return c_coeff_closed(r, y);
}

template <class T>
T c_coeff_regularised(int r, const T& xi) {
    using std::pow;
    T eps = reduce_half(xi);
    return c_coeff(r, eps) - 1 / pow(pi_v<T>() * xi, 2 * r + 1);
}

template <class T>
int c_coeff_list(int P, const T& y, T* out) {
    using std::abs;
    using std::cos;
    using std::sin;
    if (P < 1 || P > max_P) throw std::out_of_range("c_coeff_list: P out of range");
    if (y == 0) {
        for (int r = 0; r < P; ++r) out[r] = 0;
        return 0;
    }
    T u = pi_v<T>() * y;
    if (abs(u) < T(0.2)) {
        for (int r = 0; r < P; ++r) out[r] = c_coeff_series(r, y);
        return 0;
    }
    T C = cos(u) / sin(u);
    T iu = 1 / u;
    T iu2 = iu * iu;
    T up = iu;  // u^{-(2r+1)}
    T fact = 1;
    for (int r = 0; r < P; ++r) {
        if (r > 0) fact *= T((2 * r - 1) * (2 * r));
        const auto& p = cot_deriv_polys()[2 * r];
        T acc = 0;
        for (std::size_t k = p.size(); k-- > 0;) acc = acc * C + T(p[k]);
        out[r] = acc / fact - up;
        up *= iu2;
    }
    return 2;
}

template <class T>
int c_coeff_regularised_list(int P, const T& xi, T* out) {
    using std::pow;
    int n = c_coeff_list(P, T(reduce_half(xi)), out);
    T ipx = 1 / (pi_v<T>() * xi);
    T ip2 = ipx * ipx;
    T up = ipx;
    for (int r = 0; r < P; ++r) {
        out[r] -= up;
        up *= ip2;
    }
    return n;
}

ExtReal c_coeff(const CrCoefficientRequest& req) {
    if (req.regularize_at) return c_coeff_regularised<ExtReal>(req.r, *req.regularize_at);
    return c_coeff<ExtReal>(req.r, req.y);
}

// ---- remainder magnitudes ----

template <class T>
T ap_max(int P) {
    using std::pow;
    if (P < 1 || P > max_P) throw std::out_of_range("ap_max: P out of range");
    int s = 2 * P + 1;
    T z = boost::math::zeta(T(s));
    T lam = (1 - pow(T(2), -s)) * z;  // sum over odd k of k^-s
    return pow(T(2), s) + pow(T(2), s + 1) * (lam - 1);
}

template <class T>
T remainder_bound(int P, const T& x) {
    using std::pow;
    using std::sqrt;
    T pi = pi_v<T>();
    T g = sqrt(pi);  // Gamma(P + 1/2)
    for (int k = 1; k <= P; ++k) g *= T(2 * k - 1) / 2;
    return g / (pi * pi * sqrt(T(2))) * pow(x / pi, P) * sqrt(pi / 2) * ap_max<T>(P);
}

template <class T>
Cx<T> refined_remainder(int P, const T& x, const T& d) {
    using std::abs;
    using std::exp;
    using std::pow;
    using std::sqrt;
    T pi = pi_v<T>();
    T a = abs(d);
    T a2 = a * a;
    T tau = pi * a2 / x;
    T rho = P * x / (pi * a2);
    T mag = sqrt(T(2)) * pow(T(P), P) * exp(T(-P)) * pow(x, P) * sqrt(x) / (pow(pi, P + 1) * pow(a, 2 * P + 1));
    if (d < 0) mag = -mag;
    // e^{i pi/4} (-i)^P
    T h = 1 / sqrt(T(2));
    Cx<T> ph(h, h);
    for (int k = 0; k < P; ++k) ph = Cx<T>(ph.im, -ph.re);
    T r2 = rho * rho;
    T den = 2 * tau * (1 + r2) * (1 + r2);
    Cx<T> inner(1 - (r2 - 3) * rho / den, -(3 * r2 - 1) / den);
    Cx<T> fac = Cx<T>(T(1)) / csqrt(inner);
    return ph * fac * mag / Cx<T>(T(1), rho);
}

ExtComplex refined_remainder(const RemainderQuery& q) {
    ExtReal d = ExtReal(q.k) + (q.sign >= 0 ? q.offset : ExtReal(-q.offset));
    if (d == 0) throw std::domain_error("refined_remainder: excluded index");
    return refined_remainder<ExtReal>(q.P, q.x, d);
}

template <class T>
Cx<T> refined_correction_block(const T& x, const T& xi, const T& theta, std::int64_t M,
                               const Cx<T>& f_N, int P, Ops* ops) {
    using std::sqrt;
    T Mt = T(M);
    Cx<T> a = refined_remainder<T>(P, x, T(Mt + 1 - xi)) + refined_remainder<T>(P, x, T(Mt - 1 - xi));
    Cx<T> b = refined_remainder<T>(P, x, T(1 - theta)) - refined_remainder<T>(P, x, T(1 + theta));
    count_trig(ops, 8);
    count_arith(ops, 160);
    T h = 1 / sqrt(T(2));
    Cx<T> pre = Cx<T>(h, h) / sqrt(2 * pi_v<T>() * x);
    return pre * (f_N * a - b);
}

#define ZT_SPECFUN_INST(T)                                                                       \
    template T erf_asymptotic_threshold<T>();                                                    \
    template Cx<T> erf_diag<T>(const T&, Ray, Ops*);                                             \
    template Cx<T> erfc_diag<T>(const T&, Ray, Ops*);                                            \
    template T c_coeff<T>(int, const T&);                                                        \
    template T c_coeff_closed<T>(int, const T&);                                                 \
    template T c_coeff_series<T>(int, const T&);                                                 \
    template T c_coeff_regularised<T>(int, const T&);                                            \
    template int c_coeff_list<T>(int, const T&, T*);                                             \
    template int c_coeff_regularised_list<T>(int, const T&, T*);                                 \
    template T ap_max<T>(int);                                                                   \
    template T remainder_bound<T>(int, const T&);                                                \
    template Cx<T> refined_remainder<T>(int, const T&, const T&);                                \
    template Cx<T> refined_correction_block<T>(const T&, const T&, const T&, std::int64_t,      \
                                               const Cx<T>&, int, Ops*);

ZT_SPECFUN_INST(double)
ZT_SPECFUN_INST(Quad)
ZT_SPECFUN_INST(ExtReal)

}  // namespace zt
