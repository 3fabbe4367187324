#include "zt/cfrac.hpp"

#include <sstream>

namespace zt {

const char* to_string(Termination t) {
    switch (t) {
    case Termination::case_i: return "case_i";
    case Termination::case_ii: return "case_ii";
    case Termination::case_iii: return "case_iii";
    case Termination::x_zero: return "x_zero";
    case Termination::immediate_small: return "immediate_small";
    }
    return "?";
}

template <class T>
T reduce_theta(const T& v, bool odd_shift) {
    T t = reduce_half(v);
    if (odd_shift) t = t <= 0 ? T(t + T(0.5)) : T(t - T(0.5));
    return t;
}

template <class T>
DescentState<T> initial_reduce(const T& x_in, const T& theta_in, std::int64_t N) {
    const T x = working(x_in), theta = working(theta_in);
    if (N < -1) throw std::invalid_argument("initial_reduce: N < -1");
    T n0 = nint(x);
    DescentState<T> st;
    st.n = 1;
    st.L = N;
    st.x = x - n0;
    st.s = st.x < 0 ? -1 : 1;
    T th = reduce_theta(T(theta - nint(theta)), is_odd_integer(n0));
    st.theta = st.s < 0 ? T(-th) : th;
    return st;
}

template <class T>
XSequence<T>::XSequence(const T& x1) {
    xs_.push_back(x1);
}

template <class T>
void XSequence<T>::extend() {
    using std::abs;
    const T& last = xs_.back();
    if (last == 0) throw std::logic_error("XSequence: cannot continue past x = 0");
    T inv = 1 / abs(last);
    T n1 = nint(inv);
    odd_.push_back(is_odd_integer(n1));
    xs_.push_back(T(n1 - inv));
}

template <class T>
const T& XSequence<T>::x(int n) {
    while (static_cast<int>(xs_.size()) < n) extend();
    return xs_[n - 1];
}

template <class T>
bool XSequence<T>::odd_quotient(int n) {
    while (static_cast<int>(odd_.size()) < n) extend();
    return odd_[n - 1];
}

template <class T>
QgsChain<T> descend(const DescentState<T>& first, int K, XSequence<T>& xs) {
    using std::abs;
    using std::floor;
    if (K < 10) throw std::invalid_argument("descend: K must be at least 10");
    QgsChain<T> ch;
    ch.states.push_back(first);
    if (first.x == 0) {
        ch.termination = Termination::x_zero;
        return ch;
    }
    if (first.L <= K) {
        ch.termination = Termination::immediate_small;
        return ch;
    }
    bool hit_zero = false;
    while (ch.states.back().L > K) {
        const DescentState<T> cur = ch.states.back();
        T ax = abs(cur.x);
        DescentState<T> nx;
        nx.n = cur.n + 1;
        nx.L = to_int64(T(floor(cur.L * ax + cur.theta)));
        nx.x = xs.x(nx.n);
        nx.s = nx.x < 0 ? -1 : 1;
        T th = reduce_theta(T(cur.theta / ax), xs.odd_quotient(cur.n));
        nx.theta = nx.s < 0 ? T(-th) : th;
        ch.states.push_back(nx);
        if (nx.x == 0) {
            hit_zero = true;
            break;
        }
    }
    const auto& last = ch.states.back();
    const auto& prev = ch.states[ch.states.size() - 2];
    if (hit_zero) {
        ch.termination = Termination::x_zero;
    } else if (last.L < 10 && prev.L <= 3 * static_cast<std::int64_t>(K)) {
        ch.states.pop_back();
        ch.termination = Termination::case_iii;
    } else if (last.L < 10) {
        ch.termination = Termination::case_ii;
    } else {
        ch.termination = Termination::case_i;
    }
    ch.n_K = static_cast<int>(ch.states.size()) - 1;
    return ch;
}

template <class T>
QgsChain<T> descend(const DescentState<T>& first, int K) {
    XSequence<T> xs(first.x);
    return descend(first, K, xs);
}

template <class T>
std::string dump_chain(const QgsChain<T>& chain) {
    std::ostringstream os;
    os.precision(std::min(30, working_digits<T>()));
    for (const auto& s : chain.states)
        os << s.n << '\t' << s.L << '\t' << s.x << '\t' << s.s << '\t' << s.theta << '\n';
    os << "termination\t" << to_string(chain.termination) << "\tn_K\t" << chain.n_K << '\n';
    return os.str();
}

// ---- continued fractions ----

std::vector<std::int64_t> positive_cf(const ExtReal& x, int terms) {
    std::vector<std::int64_t> out;
    ExtReal v = x;
    ExtReal a = floor(v);
    out.push_back(to_int64(a));
    v -= a;
    for (int i = 0; i < terms && v != 0; ++i) {
        v = 1 / v;
        a = floor(v);
        out.push_back(to_int64(a));
        v -= a;
    }
    return out;
}

NicfExpansion nearest_cf(const ExtReal& x, int terms) {
    NicfExpansion e;
    ExtReal v = x;
    ExtReal a = nint(v);
    e.a0 = to_int64(a);
    v -= a;
    for (int i = 0; i < terms && v != 0; ++i) {
        v = 1 / v;
        a = nint(v);
        e.quotients.push_back(to_int64(a));
        v -= a;
    }
    return e;
}

NicfExpansion positive_to_nearest_cf(const std::vector<std::int64_t>& expansion) {
    if (expansion.empty()) throw std::invalid_argument("empty expansion");
    std::vector<std::int64_t> d = expansion;
    for (std::size_t i = 1; i < d.size(); ++i) {
        if (d[i] < 1) throw std::invalid_argument("positive expansion needs quotients >= 1");
    }
    // step 1: each 1 becomes 0, its neighbours gain one
    for (std::size_t i = 1; i < d.size(); ++i) {
        if (d[i] != 1) continue;
        d[i] = 0;
        d[i - 1] += 1;
        if (i + 1 < d.size()) d[i + 1] += 1;
    }
    // step 2: position 0 plays the first zero; digits after an even-numbered zero flip
    NicfExpansion e;
    e.a0 = d[0];
    int zeros = 1;
    for (std::size_t i = 1; i < d.size(); ++i) {
        if (d[i] == 0) {
            ++zeros;
            continue;
        }
        e.quotients.push_back(zeros % 2 == 0 ? -d[i] : d[i]);
    }
    return e;
}

NicfExpansion positive_to_nearest_cf(const std::vector<std::int64_t>& pre,
                                     const std::vector<std::int64_t>& period) {
    if (period.empty()) return positive_to_nearest_cf(pre);
    std::vector<std::int64_t> full = pre;
    const int reps = 12;
    for (int r = 0; r < reps; ++r) full.insert(full.end(), period.begin(), period.end());
    NicfExpansion e = positive_to_nearest_cf(full);
    // drop the truncation-affected tail, then find the shortest eventual period
    std::vector<std::int64_t> q = e.quotients;
    std::size_t trim = 2 * period.size() + 2;
    if (q.size() > trim) q.resize(q.size() - trim);
    for (std::size_t p = 1; p <= 2 * period.size(); ++p) {
        for (std::size_t s = 0; s + 2 * p <= q.size(); ++s) {
            bool ok = true;
            for (std::size_t i = s; i + p < q.size() && ok; ++i) ok = q[i] == q[i + p];
            if (ok) {
                NicfExpansion out;
                out.a0 = e.a0;
                out.quotients.assign(q.begin(), q.begin() + static_cast<std::ptrdiff_t>(s + p));
                out.period_start = s;
                out.period_length = p;
                return out;
            }
        }
    }
    e.quotients = q;
    return e;
}

double expected_chain_length(std::int64_t N, int K) {
    if (N <= K) return 0.0;
    return 0.592 * std::log(static_cast<double>(N) / K);
}

#define ZT_CFRAC_INST(T)                                                                 \
    template T reduce_theta<T>(const T&, bool);                                          \
    template DescentState<T> initial_reduce<T>(const T&, const T&, std::int64_t);        \
    template class XSequence<T>;                                                         \
    template QgsChain<T> descend<T>(const DescentState<T>&, int);                        \
    template QgsChain<T> descend<T>(const DescentState<T>&, int, XSequence<T>&);         \
    template std::string dump_chain<T>(const QgsChain<T>&);

ZT_CFRAC_INST(double)
ZT_CFRAC_INST(Quad)
ZT_CFRAC_INST(ExtReal)

}  // namespace zt
