#pragma once

#include "zt/mpnum.hpp"

#include <optional>
#include <string>
#include <vector>

namespace zt {

template <class T>
struct DescentState {
    int n = 1;
    std::int64_t L = 0;
    T x{0};      // signed, in (-1/2, 1/2]
    T theta{0};  // sgn(x) times the reduced shift, |theta| <= 1/2
    int s = 1;
};

enum class Termination { case_i, case_ii, case_iii, x_zero, immediate_small };

const char* to_string(Termination t);

template <class T>
struct QgsChain {
    std::vector<DescentState<T>> states;
    Termination termination = Termination::immediate_small;
    int n_K = 0;  // ascent steps = states.size() - 1
};

// x - NINT(x), then a half shift when the removed integer is odd
template <class T> T reduce_theta(const T& v, bool odd_shift);

template <class T> DescentState<T> initial_reduce(const T& x, const T& theta, std::int64_t N);

// The theta-independent part of the descent: x_{n+1} = -(1/|x_n| - NINT(1/|x_n|)).
template <class T>
class XSequence {
public:
    explicit XSequence(const T& x1);
    const T& x(int n);       // n >= 1
    bool odd_quotient(int n);  // parity of NINT(1/|x_n|)
    int known() const { return static_cast<int>(xs_.size()); }

private:
    void extend();
    std::vector<T> xs_;
    std::vector<bool> odd_;
};

template <class T> QgsChain<T> descend(const DescentState<T>& first, int K);
template <class T> QgsChain<T> descend(const DescentState<T>& first, int K, XSequence<T>& xs);

template <class T> std::string dump_chain(const QgsChain<T>& chain);

// nearest-integer continued fractions

struct NicfExpansion {
    std::int64_t a0 = 0;
    std::vector<std::int64_t> quotients;
    std::optional<std::size_t> period_start;
    std::size_t period_length = 0;
};

// positive continued fraction [a0; a1, a2, ...] with a_n >= 1
std::vector<std::int64_t> positive_cf(const ExtReal& x, int terms);
NicfExpansion nearest_cf(const ExtReal& x, int terms);

// rewrite of a finite positive expansion; the last entries depend on the truncation
NicfExpansion positive_to_nearest_cf(const std::vector<std::int64_t>& expansion);
// purely periodic tail after a pre-period
NicfExpansion positive_to_nearest_cf(const std::vector<std::int64_t>& pre,
                                     const std::vector<std::int64_t>& period);

double expected_chain_length(std::int64_t N, int K);

}  // namespace zt
