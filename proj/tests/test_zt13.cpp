#include "doctest.h"

#include "zt/zt13.hpp"

#include <cmath>
#include <string>

using namespace zt;

namespace {

Zt13Config config(const char* t) {
    Zt13Config c;
    c.t = ExtReal(t);
    c.normalise();
    return c;
}

// 1e18 breakdown: pivots per block, collection size, last alpha, first RS index replaced
struct Row {
    std::int64_t pivots, M, alpha_last, n_first;
};
const Row rows_1e18[38] = {
    {63244, 0, 1595832367, 395406152},   {35218, 9, 1596536727, 386758725},
    {39223, 21, 1598262539, 377255248},  {43684, 33, 1601233051, 367266439},
    {48652, 43, 1605514427, 357221582},  {54185, 53, 1611366407, 346927266},
    {60347, 61, 1618849435, 336615735},  {67211, 69, 1628258975, 326152678},
    {74854, 79, 1640235615, 315225569},  {83367, 87, 1654908207, 304113503},
    {92849, 95, 1672735215, 292793411},  {103408, 105, 1694657711, 281057961},
    {115168, 113, 1720916015, 269163637}, {128266, 123, 1752725983, 256941103},
    {142854, 133, 1791010855, 244460930}, {142854, 261, 1865866351, 224730918},
    {142854, 277, 1945293175, 208194901}, {142854, 293, 2029291327, 193919717},
    {142854, 311, 2118432223, 181283854}, {142854, 329, 2212715863, 169966199},
    {142854, 349, 2312713663, 159686675}, {142854, 369, 2418425623, 150300383},
    {142854, 391, 2530423159, 141652491}, {142854, 413, 2648706271, 133666527},
    {142854, 437, 2773846375, 126245552}, {142854, 463, 2906414887, 119316290},
    {142854, 489, 3046411807, 112847133}, {142854, 515, 3193837135, 106807432},
    {142854, 545, 3349833703, 101128560}, {142854, 575, 3514401511, 95795370},
    {142854, 605, 3687540559, 90791122},  {142854, 639, 3870393679, 86070339},
    {142854, 673, 4062960871, 81623926},  {142854, 711, 4266384967, 77418503},
    {142854, 749, 4480665967, 73448753},  {142854, 789, 4706375287, 69698128},
    {142854, 831, 4944084343, 66152213},  {6712, 875, 4955843767, 65986402},
};

std::string message_of(Zt13Config c) {
    try {
        c.normalise();
    } catch (const std::invalid_argument& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("pivot geometry") {
    PrecisionScope ps(45);
    ExtReal t("1e18");
    ExtReal a = a_of_t(t);
    CHECK(abs(pc_of_alpha(a, a) - 1) < ExtReal(1e-35));
    CHECK(abs(pc_of_alpha(ExtReal(3 * sqrt(t / pi_v<ExtReal>())), a) - 2) < ExtReal(1e-35));
    CHECK(to_int64(ExtReal(floor(a))) == 1595769121);
    CHECK(rs_length(t) == 398942280);
    CHECK(static_cast<double>(n_of_alpha(a, a)) == doctest::Approx(398942280.4).epsilon(1e-9));
    for (std::int64_t N : {1000000, 65986402, 398942280}) {
        ExtReal al = alpha_of_n(ExtReal(N), t);
        CHECK(abs(n_of_alpha(al, a) - N) < ExtReal(1e-20));
    }
    for (std::int64_t al : {std::int64_t{1595769123}, std::int64_t{2000000001}, std::int64_t{4955843767}}) {
        ExtReal n = n_of_alpha(ExtReal(al), a);
        CHECK(abs(alpha_of_n(n, t) - al) < ExtReal(1e-15));
    }
    CHECK_THROWS(pc_of_alpha(a - 1, a));

    auto g = pivot_geometry(ExtReal(1600000001), t);
    CHECK(abs(g.x - 1 / (g.pc - 1)) < ExtReal(1e-35));
    CHECK(abs(g.theta_plus - g.theta_minus - g.a / (2 * sqrt(g.pc))) < ExtReal(1e-30));
}

TEST_CASE("principal term amplitude") {
    PrecisionScope ps(45);
    ExtReal t("1e18");
    ExtReal a = a_of_t(t);
    for (std::int64_t al : {std::int64_t{1595769123}, std::int64_t{1600000001}, std::int64_t{3000000001}}) {
        ExtReal amp = 2 * sqrt(ExtReal(2)) / sqrt(sqrt(ExtReal(ExtReal(al) * al - a * a)));
        CHECK(abs(principal_term(al, t)) <= amp * (1 + ExtReal(1e-30)));
    }
}

TEST_CASE("schedule reproduces the 1e18 breakdown") {
    auto cfg = config("1e18");
    PrecisionScope ps(cfg.digits);
    auto s = block_schedule(cfg);
    REQUIRE(s.blocks.size() == 38);
    CHECK(s.ib == 63244);
    CHECK(s.step_up_block == 15);
    CHECK(s.alpha_final == 4955843767);
    ExtReal a = a_of_t(cfg.t);
    for (std::size_t p = 0; p < 38; ++p) {
        const auto& b = s.blocks[p];
        CAPTURE(p);
        CHECK(b.p == static_cast<int>(p));
        CHECK(b.pivot_count == rows_1e18[p].pivots);
        CHECK(b.M_t == rows_1e18[p].M);
        CHECK(b.alpha_hi == rows_1e18[p].alpha_last);
        std::int64_t n_first = to_int64(ExtReal(floor(n_of_alpha(ExtReal(b.alpha_hi), a)))) + 1;
        if (p == 0) {
            // printed value is n at the first alpha of block 1
            CHECK(n_first == rows_1e18[p].n_first + 56);
            CHECK(to_int64(ExtReal(ceil(n_of_alpha(ExtReal(b.alpha_hi + 2), a)))) == rows_1e18[p].n_first);
        } else if (p == 11) {
            // printed one below the ceiling used by every other row
            CHECK(n_first == rows_1e18[p].n_first + 1);
        } else {
            CHECK(n_first == rows_1e18[p].n_first);
        }
        CHECK(b.alpha_lo % 2 != 0);
        CHECK(b.alpha_hi % 2 != 0);
        if (p > 0) {
            CHECK(b.alpha_lo == s.blocks[p - 1].alpha_hi + 2);
            CHECK(b.M_t % 2 == 1);
            // each pivot covers M_t + 1 consecutive odd alphas
            if (p + 1 < 38) CHECK(b.alpha_hi - b.alpha_lo + 2 == 2 * b.pivot_count * (b.M_t + 1));
        }
    }
    CHECK(s.blocks[0].alpha_lo == 1595769123);
}

TEST_CASE("collection sizes") {
    auto cfg = config("1e18");
    PrecisionScope ps(cfg.digits);
    ExtReal a = a_of_t(cfg.t);
    auto s = block_schedule(cfg);
    for (const auto& b : s.blocks) {
        if (b.p == 0) continue;
        ExtReal al(b.alpha_hi);
        if (pc_of_alpha(al, a) > ExtReal(2.463)) CHECK(ExtReal(b.M_t) <= collection_upper_bound(al, cfg));
    }
    // larger error tolerance never shrinks a collection
    Zt13Config loose = cfg;
    loose.eps_t = cfg.eps_t * 2;
    for (std::int64_t al : {std::int64_t{1600000000}, std::int64_t{1800000000}, std::int64_t{3000000000}}) {
        for (Regime r : {Regime::below_Ya, Regime::above_Ya}) {
            CHECK(collection_size(al, loose, r) >= collection_size(al, cfg, r));
            CHECK(collection_size(al, cfg, r) % 2 == 1);
        }
        CHECK(collection_size(al + 100000000, cfg, Regime::below_Ya) >= collection_size(al, cfg, Regime::below_Ya));
    }
}

TEST_CASE("configuration errors name the field") {
    Zt13Config c;
    c.t = ExtReal("1e12");
    CHECK(message_of(c).rfind("t:", 0) == 0);
    c.t = ExtReal("1e18");
    c.K = 5;
    CHECK(message_of(c).rfind("K:", 0) == 0);
    c.K = 30;
    c.P = 7;
    CHECK(message_of(c).rfind("P:", 0) == 0);
    c.P = 3;
    c.Y = ExtReal(2);
    CHECK(message_of(c).rfind("Y:", 0) == 0);
    c.Y = 0;
    c.eps_t = ExtReal(-1);
    CHECK(message_of(c).rfind("eps:", 0) == 0);
    c.eps_t = 0;
    CHECK(message_of(c).empty());
    c.normalise();
    CHECK(static_cast<double>(c.eps_t) == doctest::Approx(2 / std::log(1e18)));
}

TEST_CASE("transition term gate") {
    PrecisionScope ps(50);
    ExtReal pi = pi_v<ExtReal>();
    // t with a = sqrt(8t/pi) = 2000001 - e
    auto t_for = [&](double e) { return ExtReal(pi * pow(ExtReal(2000001) - ExtReal(e), 2) / 8); };
    auto f = transition_term(t_for(1e-3));
    CHECK(f.kind == TransitionKind::formula);
    CHECK(static_cast<double>(f.epsilon) == doctest::Approx(1e-3).epsilon(1e-9));
    CHECK(abs(f.value) < ExtReal(1));
    CHECK(transition_term(t_for(-1e-3)).kind == TransitionKind::fallback);
    CHECK(transition_term(t_for(0.4)).kind == TransitionKind::none);
    CHECK(transition_term(t_for(-0.4)).kind == TransitionKind::none);
}

TEST_CASE("hybrid estimate within its bound") {
    for (const char* ts : {"1e8", "1e10", "1e12"}) {
        PrecisionScope ps(height_digits(std::stod(ts)));
        ExtReal t(ts);
        auto h = hybrid17_run(t);
        auto r = rsf_z(t);
        CAPTURE(ts);
        CHECK(static_cast<double>(abs(h.z - r.z)) <= h.error_bound);
        CHECK(h.head_terms + h.principal_terms > 0);
    }
    CHECK_THROWS(hybrid17_run(ExtReal(1000)));
}

TEST_CASE("zt13 at 1e16 - slow") {
    auto cfg = config("1e16");
    auto r = zt13(cfg);
    Ops dry = zt13_ops(cfg);
    CHECK(dry.fiftieths == r.total_ops.fiftieths);
    REQUIRE(!r.blocks.empty());
    CHECK(r.blocks[0].n_hi == rs_length(cfg.t));
    for (std::size_t i = 1; i < r.blocks.size(); ++i) {
        CHECK(r.blocks[i].n_hi == r.blocks[i - 1].n_lo - 1);
        CHECK(r.blocks[i].alpha_first == r.blocks[i - 1].alpha_last + 2);
    }
    CHECK(r.blocks.back().n_lo == r.n_c);
    CHECK(abs(r.z_estimate - r.zp - r.head_sum) < ExtReal(1e-25));
    PrecisionScope ps(cfg.digits);
    auto ref = rsf_z(cfg.t);
    CHECK(abs(r.z_estimate - ref.z) <= cfg.eps_t * abs(r.zp));
}
