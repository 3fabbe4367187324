#pragma once

#include "zt/mpnum.hpp"

#include <optional>

namespace zt {

enum class Ray { plus, minus };  // arg = +pi/4 or -pi/4

// erf(m e^{+-i pi/4}), m >= 0
template <class T> Cx<T> erf_diag(const T& m, Ray ray, Ops* ops = nullptr);
// erfc on the same rays
template <class T> Cx<T> erfc_diag(const T& m, Ray ray, Ops* ops = nullptr);

// regime switch points for the current working precision
template <class T> T erf_asymptotic_threshold();
inline constexpr double erf_series_limit = 0.75;

struct CrCoefficientRequest {
    int r = 0;
    ExtReal y;
    std::optional<ExtReal> regularize_at;
};

// c_r(y) = (zeta(2r+1, 1+y) - zeta(2r+1, 1-y)) / pi^(2r+1), |y| <= 1/2
template <class T> T c_coeff(int r, const T& y);
template <class T> T c_coeff_closed(int r, const T& y);
template <class T> T c_coeff_series(int r, const T& y);
// c_r(eps) - 1/(pi xi)^(2r+1), eps = xi - NINT(xi)
template <class T> T c_coeff_regularised(int r, const T& xi);
ExtReal c_coeff(const CrCoefficientRequest& req);
// c_0 .. c_{P-1} sharing one cotangent; returns the number of trig calls made
template <class T> int c_coeff_list(int P, const T& y, T* out);
template <class T> int c_coeff_regularised_list(int P, const T& xi, T* out);

inline constexpr int max_P = 8;

// max_y A_P(y) = 2^(2P+1) + 2 sum_{m>=1} (2/(2m+1))^(2P+1)
template <class T> T ap_max(int P);
template <class T> T remainder_bound(int P, const T& x);

struct RemainderQuery {
    int P = 3;
    ExtReal x;
    std::int64_t k = 1;
    ExtReal offset;
    int sign = 1;
};

// R_P(z) for z ~ sqrt(2 pi/x) d e^{-i pi/4}, d signed; saddle estimate with C = 1
template <class T> Cx<T> refined_remainder(int P, const T& x, const T& d);
ExtComplex refined_remainder(const RemainderQuery& q);

// dominant remainder terms: k = M+1, M-1 (with the f(N) phase) and k = 1 for theta
template <class T>
Cx<T> refined_correction_block(const T& x, const T& xi, const T& theta, std::int64_t M,
                               const Cx<T>& f_N, int P, Ops* ops = nullptr);

}  // namespace zt
