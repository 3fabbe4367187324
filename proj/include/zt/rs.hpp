#pragma once

#include "zt/mpnum.hpp"

namespace zt {

enum class ThetaVariant { theta, theta_c };

struct RsfRequest {
    ExtReal t;
    std::int64_t n_lo = 1;
    std::int64_t n_hi = 1;
    ThetaVariant variant = ThetaVariant::theta;
};

// fast: phases exact in MPFR, cosines in double; full: cosines at working precision
enum class SumMode { fast, full };

ExtReal theta(const ExtReal& t);
ExtReal theta_c(const ExtReal& t);
ExtReal theta_of(const ExtReal& t, ThetaVariant v);

std::int64_t rs_length(const ExtReal& t);  // N_t = floor(sqrt(t/2pi))

ExtReal main_sum(const RsfRequest& req, SumMode mode = SumMode::fast, Ops* ops = nullptr);
// 2 sum cos(th - t log N)/sqrt(N) with the phase th supplied
ExtReal main_sum_with_phase(const ExtReal& t, const ExtReal& th, std::int64_t n_lo, std::int64_t n_hi,
                            SumMode mode = SumMode::fast, Ops* ops = nullptr);

// cos(2 pi (p^2 - p - 1/16)) / cos(2 pi p)
ExtReal psi0(const ExtReal& p);
inline constexpr double psi0_window = 1e-4;

struct RsfResult {
    ExtReal z;
    ExtReal main;
    ExtReal correction;
    std::int64_t N_t = 0;
    ExtReal p;
    double truncation_budget = 0;  // omitted Psi_1 terms, O(t^{-3/4})
    Ops ops;
};

// -(-1)^{N_t} (2 pi/t)^{1/4} Psi_0(p)
ExtReal rs_correction(const ExtReal& t, std::int64_t N_t);

RsfResult rsf_z(const ExtReal& t, SumMode mode = SumMode::fast);

}  // namespace zt
