#pragma once

#include <boost/multiprecision/float128.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace zt {

namespace bmp = boost::multiprecision;

// Variable precision MPFR real; results take the widest operand precision.
using ExtReal = bmp::number<bmp::mpfr_float_backend<0>, bmp::et_off>;
using Quad = bmp::float128;

class PrecisionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

template <class T>
struct Cx {
    T re{0}, im{0};

    Cx() = default;
    Cx(const T& r) : re(r), im(0) {}
    Cx(const T& r, const T& i) : re(r), im(i) {}

    Cx& operator+=(const Cx& o) { re += o.re; im += o.im; return *this; }
    Cx& operator-=(const Cx& o) { re -= o.re; im -= o.im; return *this; }
    Cx& operator*=(const T& s) { re *= s; im *= s; return *this; }

    friend Cx operator+(Cx a, const Cx& b) { return a += b; }
    friend Cx operator-(Cx a, const Cx& b) { return a -= b; }
    friend Cx operator-(const Cx& a) { return Cx(-a.re, -a.im); }
    friend Cx operator*(const Cx& a, const Cx& b) {
        return Cx(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
    }
    friend Cx operator*(Cx a, const T& s) { return a *= s; }
    friend Cx operator*(const T& s, Cx a) { return a *= s; }
    friend Cx operator/(const Cx& a, const T& s) { return Cx(a.re / s, a.im / s); }
    friend Cx operator/(const Cx& a, const Cx& b) {
        T d = b.re * b.re + b.im * b.im;
        return Cx((a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d);
    }
};

template <class T> Cx<T> conj(const Cx<T>& z) { return Cx<T>(z.re, -z.im); }
template <class T> T norm2(const Cx<T>& z) { return z.re * z.re + z.im * z.im; }
template <class T> T abs(const Cx<T>& z) {
    using std::sqrt;
    return sqrt(norm2(z));
}
// multiply by i
template <class T> Cx<T> times_i(const Cx<T>& z) { return Cx<T>(-z.im, z.re); }

template <class T>
Cx<T> csqrt(const Cx<T>& z) {
    using std::sqrt;
    using std::abs;
    T r = sqrt(norm2(z));
    if (r == 0) return Cx<T>();
    T u = sqrt((r + abs(z.re)) / 2);
    if (z.re >= 0) return Cx<T>(u, z.im / (2 * u));
    T v = z.im >= 0 ? u : T(-u);
    return Cx<T>(abs(z.im) / (2 * u), v);
}

template <class U, class T>
Cx<U> cx_cast(const Cx<T>& z) {
    return Cx<U>(static_cast<U>(z.re), static_cast<U>(z.im));
}

using ExtComplex = Cx<ExtReal>;

// ---- precision policy ----

struct Precision {
    int digits = 30;
};

inline constexpr int min_digits = 30;

int gauss_digits(std::int64_t N);
int height_digits(double t);

// Sets the default ExtReal precision for the lifetime of the object.
class PrecisionScope {
public:
    explicit PrecisionScope(int digits);
    ~PrecisionScope();
    PrecisionScope(const PrecisionScope&) = delete;
    PrecisionScope& operator=(const PrecisionScope&) = delete;

private:
    unsigned old_;
};

template <class T> int digits_of(const T&);
template <> inline int digits_of(const Quad&) { return 33; }
template <> inline int digits_of(const double&) { return 15; }
template <> inline int digits_of(const ExtReal& x) { return static_cast<int>(x.precision()); }

template <class T> int working_digits();
template <> inline int working_digits<Quad>() { return 33; }
template <> inline int working_digits<double>() { return 15; }
template <> inline int working_digits<ExtReal>() { return static_cast<int>(ExtReal::default_precision()); }

template <class T> T pi_v() { return boost::math::constants::pi<T>(); }

// copies keep the source precision; lifts a value to at least the current default
template <class T> T working(const T& v) { return v; }
template <> inline ExtReal working(const ExtReal& v) {
    ExtReal r;
    r.precision(std::max<unsigned>(v.precision(), ExtReal::default_precision()));
    mpfr_set(r.backend().data(), v.backend().data(), MPFR_RNDN);
    return r;
}

// ---- rounding ----

// nearest integer, ties to even
template <class T>
T nint(const T& v) {
    using std::floor;
    T f = floor(v);
    T d = v - f;
    if (d > T(0.5)) return f + 1;
    if (d < T(0.5)) return f;
    T h = f / 2;
    return floor(h) == h ? f : T(f + 1);
}

template <class T>
bool is_odd_integer(const T& n) {
    using std::floor;
    T h = n / 2;
    return floor(h) != h;
}

// x - NINT(x), in (-1/2, 1/2]
template <class T>
T reduce_half(const T& x) {
    return x - nint(x);
}

// a mod 2, in [0, 2)
template <class T>
T mod2(const T& a) {
    using std::floor;
    T r = a - 2 * floor(a / 2);
    if (r >= 2) r -= 2;
    if (r < 0) r += 2;
    return r;
}

// exp(i*pi*a); reduced modulo 2 before the trig call
template <class T>
Cx<T> unit_phase(const T& a) {
    using std::cos;
    using std::sin;
    T r = mod2(a);
    if (r > 1) r -= 2;
    T ang = pi_v<T>() * r;
    return Cx<T>(cos(ang), sin(ang));
}

template <class T>
std::int64_t to_int64(const T& v) {
    using std::abs;
    if (!(abs(v) < T(4.0e18))) throw PrecisionError("integer out of int64 range");
    return static_cast<std::int64_t>(v);
}

enum class Parity { odd, even, nearest_odd };

// integer part must be exactly representable at the value's precision
template <class T>
void check_integer_part(const T& x) {
    using std::abs;
    using std::log10;
    if (x == 0) return;
    double mag = static_cast<double>(log10(abs(x)));
    if (mag + 1 > digits_of(x)) throw PrecisionError("integer part exceeds working precision");
}

// INT_O, INT_E (floor to odd/even) and NINT_O (nearest odd, ties downward)
template <class T>
std::int64_t int_floor_variant(const T& x, Parity parity) {
    using std::floor;
    check_integer_part(x);
    std::int64_t f = to_int64(T(floor(x)));
    switch (parity) {
    case Parity::odd:
        return (f % 2 != 0) ? f : f - 1;
    case Parity::even:
        return (f % 2 == 0) ? f : f - 1;
    case Parity::nearest_odd: {
        std::int64_t lo = (f % 2 != 0) ? f : f - 1;
        T dlo = x - T(lo);
        T dhi = T(lo + 2) - x;
        return (dhi < dlo) ? lo + 2 : lo;
    }
    }
    return f;
}

template <class T> std::int64_t int_odd(const T& x) { return int_floor_variant(x, Parity::odd); }
template <class T> std::int64_t int_even(const T& x) { return int_floor_variant(x, Parity::even); }
template <class T> std::int64_t nint_odd(const T& x) { return int_floor_variant(x, Parity::nearest_odd); }

// ---- operation counting ----
// Units of 1/50 of one sine/cosine evaluation.
struct Ops {
    std::int64_t fiftieths = 0;

    void trig(std::int64_t n = 1) { fiftieths += 50 * n; }
    void erf(std::int64_t n = 1) { fiftieths += 450 * n; }
    void arith(std::int64_t n = 1) { fiftieths += n; }
    double units() const { return static_cast<double>(fiftieths) / 50.0; }
    Ops& operator+=(const Ops& o) { fiftieths += o.fiftieths; return *this; }
};

inline void count_trig(Ops* ops, std::int64_t n = 1) { if (ops) ops->trig(n); }
inline void count_erf(Ops* ops, std::int64_t n = 1) { if (ops) ops->erf(n); }
inline void count_arith(Ops* ops, std::int64_t n = 1) { if (ops) ops->arith(n); }

// ---- expression parsing ----
// +, -, *, /, ^ (integer powers), sqrt(), pi, e, decimal literals
ExtReal parse_extreal(const std::string& expr);

std::string to_string(const ExtReal& x, int digits = 0);
std::string to_string(const Quad& x, int digits = 0);
std::string to_string(double x, int digits = 0);

}  // namespace zt
