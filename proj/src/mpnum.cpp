#include "zt/mpnum.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace zt {

int gauss_digits(std::int64_t N) {
    if (N < 2) return min_digits;
    int d = static_cast<int>(std::ceil(3.0 * std::log10(static_cast<double>(N)))) + 10;
    return std::max(min_digits, d);
}

int height_digits(double t) {
    if (!(t > 1)) return min_digits;
    int d = static_cast<int>(std::ceil(std::log10(t))) + 25;
    return std::max(min_digits, d);
}

PrecisionScope::PrecisionScope(int digits) : old_(ExtReal::default_precision()) {
    if (digits < 1) throw PrecisionError("non-positive digit count");
    ExtReal::default_precision(static_cast<unsigned>(digits));
}

PrecisionScope::~PrecisionScope() { ExtReal::default_precision(old_); }

namespace {

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    ExtReal run() {
        ExtReal v = expr();
        skip();
        if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
        return v;
    }

private:
    const std::string& s_;
    std::size_t i_ = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw std::invalid_argument("expression \"" + s_ + "\": " + msg);
    }

    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }

    bool eat(char c) {
        skip();
        if (i_ < s_.size() && s_[i_] == c) {
            ++i_;
            return true;
        }
        return false;
    }

    ExtReal expr() {
        ExtReal v = term();
        for (;;) {
            if (eat('+')) v += term();
            else if (eat('-')) v -= term();
            else return v;
        }
    }

    ExtReal term() {
        ExtReal v = unary();
        for (;;) {
            if (eat('*')) v *= unary();
            else if (eat('/')) {
                ExtReal d = unary();
                if (d == 0) fail("division by zero");
                v /= d;
            } else return v;
        }
    }

    ExtReal unary() {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return power();
    }

    ExtReal power() {
        ExtReal b = primary();
        if (!eat('^')) return b;
        bool neg = eat('-');
        skip();
        std::size_t st = i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
        if (st == i_) fail("exponent must be an integer");
        long n = std::stol(s_.substr(st, i_ - st));
        ExtReal r = 1;
        ExtReal p = b;
        while (n > 0) {
            if (n & 1) r *= p;
            p *= p;
            n >>= 1;
        }
        return neg ? ExtReal(1 / r) : r;
    }

    ExtReal primary() {
        skip();
        if (i_ >= s_.size()) fail("unexpected end");
        if (eat('(')) {
            ExtReal v = expr();
            if (!eat(')')) fail("missing ')'");
            return v;
        }
        char c = s_[i_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::size_t st = i_;
            while (i_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[i_]))) ++i_;
            std::string id = s_.substr(st, i_ - st);
            if (id == "pi") return pi_v<ExtReal>();
            if (id == "e") return exp(ExtReal(1));
            if (id == "sqrt") {
                if (!eat('(')) fail("sqrt needs '('");
                ExtReal v = expr();
                if (!eat(')')) fail("missing ')'");
                if (v < 0) fail("sqrt of negative value");
                return sqrt(v);
            }
            fail("unknown identifier '" + id + "'");
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    ExtReal number() {
        std::size_t st = i_;
        while (i_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[i_])) || s_[i_] == '.')) ++i_;
        if (i_ < s_.size() && (s_[i_] == 'e' || s_[i_] == 'E')) {
            std::size_t j = i_ + 1;
            if (j < s_.size() && (s_[j] == '+' || s_[j] == '-')) ++j;
            if (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) {
                i_ = j;
                while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
            }
        }
        std::string lit = s_.substr(st, i_ - st);
        if (std::count(lit.begin(), lit.end(), '.') > 1) fail("bad literal '" + lit + "'");
        return ExtReal(lit);
    }
};

}  // namespace

ExtReal parse_extreal(const std::string& expr) {
    Parser p(expr);
    return p.run();
}

std::string to_string(const ExtReal& x, int digits) {
    std::ostringstream os;
    os.precision(digits > 0 ? digits : static_cast<int>(x.precision()));
    os << x;
    return os.str();
}

std::string to_string(const Quad& x, int digits) {
    std::ostringstream os;
    os.precision(digits > 0 ? digits : 33);
    os << x;
    return os.str();
}

std::string to_string(double x, int digits) {
    std::ostringstream os;
    os.precision(digits > 0 ? digits : 17);
    os << x;
    return os.str();
}

}  // namespace zt
