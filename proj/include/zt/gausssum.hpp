#pragma once

#include "zt/cfrac.hpp"
#include "zt/specfun.hpp"

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace zt {

// S_N(x,theta) with halved endpoints, S*_N with unit weights
struct GaussSumSpec {
    std::int64_t N = 0;
    ExtReal x;
    ExtReal theta;
    int s = 1;
    bool starred = false;
};

struct QgsOptions {
    int K = 30;
    int P = 3;
    bool refined = false;
    void validate() const;
};

// fast: exact phase reduction, trig in double; full: everything at T precision
enum class DirectMode { fast, full };

template <class T>
struct QgsOutcome {
    Cx<T> value;
    QgsChain<T> chain;
    T rel_error_bound{0};
    Ops ops;
    // S_{L_n}(|x_n|, theta_n) estimates, index = state index
    std::vector<Cx<T>> levels;
};

template <class T>
Cx<T> direct_sum(std::int64_t N, const T& x, const T& theta, bool starred,
                 DirectMode mode = DirectMode::fast, Ops* ops = nullptr);

// precision raised to the Gauss-sum policy for spec.N
ExtComplex direct_sum(const GaussSumSpec& spec, DirectMode mode = DirectMode::fast, Ops* ops = nullptr);

// primed sum at x = 0
template <class T> Cx<T> geometric_sum(std::int64_t N, const T& theta);

// f(N) = e^{i pi N (N x + 2 theta)}
template <class T> Cx<T> endpoint_phase(std::int64_t N, const T& x, const T& theta);

template <class T>
Cx<T> correction_term(std::int64_t L, const T& x, const T& theta, int P, bool refined,
                      Ops* ops = nullptr);

// one reciprocity step: S_L(x,theta) ~ e^{-i pi theta^2/x}/(omega sqrt x) S'_{floor(xi)} + C
template <class T> Cx<T> reciprocity_prefactor(const T& x, const T& theta, Ops* ops = nullptr);

template <class T>
QgsOutcome<T> qgs(std::int64_t N, const T& x, const T& theta, int s, bool starred, const QgsOptions& opts);

QgsOutcome<ExtReal> qgs(const GaussSumSpec& spec, const QgsOptions& opts);

template <class T>
std::pair<QgsOutcome<T>, QgsOutcome<T>> qgs_paired(std::int64_t N, const T& x, const T& theta_plus,
                                                   const T& theta_minus, const QgsOptions& opts,
                                                   bool starred = true);

// op count of qgs_paired without evaluating any sum
template <class T>
Ops qgs_paired_ops(std::int64_t N, const T& x, const T& theta_plus, const T& theta_minus,
                   const QgsOptions& opts, bool starred = true);
// fiftieths booked by direct_sum for length N
std::int64_t direct_sum_count(std::int64_t N);

template <class T> T error_bound(const QgsChain<T>& chain, const QgsOptions& opts);

// descent table plus ascent table; exact(n) supplies the reference for level n when given
template <class T>
std::string qgs_trace(const QgsOutcome<T>& out,
                      const std::function<std::optional<Cx<T>>(std::size_t)>& exact = {});

}  // namespace zt
