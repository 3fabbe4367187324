#include "doctest.h"

#include "zt/mpnum.hpp"

#include <random>

using namespace zt;

TEST_CASE("reduce_half range and ties") {
    PrecisionScope ps(40);
    CHECK(reduce_half(ExtReal(0.75)) == ExtReal(-0.25));
    CHECK(reduce_half(ExtReal(0.5)) == ExtReal(0.5));
    ExtReal x2 = 7 - sqrt(ExtReal(45));
    CHECK(reduce_half(x2) == x2);
    CHECK(static_cast<double>(x2) == doctest::Approx(0.29179).epsilon(1e-5));
}

TEST_CASE("reduce_half is 2-periodic") {
    PrecisionScope ps(40);
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int i = 0; i < 200; ++i) {
        ExtReal x(u(rng));
        int k = static_cast<int>(rng() % 2001) - 1000;
        ExtReal r = reduce_half(x);
        CHECK(r > ExtReal(-0.5));
        CHECK(r <= ExtReal(0.5));
        CHECK(abs(reduce_half(ExtReal(x + 2 * k)) - r) < ExtReal(1e-30));
    }
}

TEST_CASE("unit_phase values") {
    PrecisionScope ps(40);
    auto one = unit_phase(ExtReal(0));
    CHECK(abs(one.re - 1) < ExtReal(1e-35));
    CHECK(abs(one.im) < ExtReal(1e-35));
    auto i = unit_phase(ExtReal(0.5));
    CHECK(abs(i.re) < ExtReal(1e-35));
    CHECK(abs(i.im - 1) < ExtReal(1e-35));
    ExtReal big = ExtReal(2000000000) + ExtReal(1) / 3;
    auto z = unit_phase(big);
    CHECK(abs(z.re - ExtReal(0.5)) < ExtReal(1e-30));
    CHECK(abs(z.im - sqrt(ExtReal(3)) / 2) < ExtReal(1e-30));
}

TEST_CASE("unit_phase is a character of modulus one") {
    PrecisionScope ps(40);
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 100; ++i) {
        ExtReal a(u(rng)), b(u(rng));
        auto lhs = unit_phase(a) * unit_phase(b);
        auto rhs = unit_phase(ExtReal(a + b));
        CHECK(abs(lhs - rhs) < ExtReal(1e-33));
        CHECK(abs(abs(unit_phase(a)) - 1) < ExtReal(1e-35));
    }
}

TEST_CASE("integer floor variants") {
    PrecisionScope ps(40);
    CHECK(int_odd(ExtReal(10.2)) == 9);
    CHECK(int_even(ExtReal(10.2)) == 10);
    CHECK(nint_odd(ExtReal(8.0)) == 7);
    CHECK(int_odd(ExtReal(9)) == 9);
    CHECK(int_even(ExtReal(-0.5)) == -2);
    CHECK(nint_odd(ExtReal(8.2)) == 9);
    CHECK(nint_odd(ExtReal(7.9)) == 7);
}

TEST_CASE("integer part beyond precision is refused") {
    PrecisionScope ps(30);
    CHECK_THROWS_AS(int_odd(ExtReal("1e40")), PrecisionError);
}

TEST_CASE("precision policy") {
    CHECK(gauss_digits(129901233) == 35);
    CHECK(gauss_digits(10) == 30);
    CHECK(height_digits(1e18) == 43);
    CHECK(height_digits(1e24) == 49);
    CHECK(height_digits(100) == 30);
    unsigned before = ExtReal::default_precision();
    {
        PrecisionScope ps(77);
        CHECK(ExtReal::default_precision() == 77u);
    }
    CHECK(ExtReal::default_precision() == before);
}

TEST_CASE("expression parser") {
    PrecisionScope ps(40);
    CHECK(to_string(parse_extreal("1/sqrt(45)"), 9) == "0.149071198");
    CHECK(static_cast<double>(parse_extreal("1-e/pi")) == doctest::Approx(0.13474402).epsilon(1e-8));
    CHECK(parse_extreal("0") == 0);
    CHECK(parse_extreal("2^10") == 1024);
    CHECK(parse_extreal("-(3+4)*2") == -14);
    CHECK(parse_extreal("1e18") == ExtReal("1e18"));
    CHECK(abs(parse_extreal("sqrt(2)^2") - 2) < ExtReal(1e-38));
    CHECK_THROWS(parse_extreal("1/"));
    CHECK_THROWS(parse_extreal("foo(2)"));
}

TEST_CASE("ops counter units") {
    Ops o;
    o.trig(2);
    o.erf();
    o.arith(50);
    CHECK(o.units() == doctest::Approx(12.0));
    Ops p;
    CHECK(p.units() == 0);
}
