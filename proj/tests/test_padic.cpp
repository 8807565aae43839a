#include "nlab/padic.hpp"

#include <random>

#include "doctest.h"

using namespace nlab;

namespace {

PAdicNumber random_element(const PadicContext& ctx, std::mt19937_64& rng,
                           int relprec = 60) {
    std::uniform_int_distribution<long> val(-3, 5);
    std::uniform_int_distribution<long> digit(0, ctx.p - 1);
    mpz_class u = 1 + digit(rng);  // keep coprime to p
    if (u >= ctx.p) u = ctx.p - 1;
    for (int i = 1; i < 10; ++i) u += digit(rng) * ctx.ppow(i);
    return PAdicNumber::make(ctx, val(rng), u, relprec);
}

}  // namespace

TEST_CASE("context rejects p = 2 and composites") {
    CHECK_THROWS_AS(padic_context(2), std::invalid_argument);
    CHECK_THROWS_AS(padic_context(9), std::invalid_argument);
    CHECK_THROWS_AS(padic_context(1), std::invalid_argument);
    CHECK_NOTHROW(padic_context(3));
    CHECK_NOTHROW(padic_context(5));
}

TEST_CASE("1 + 2 = 3 with valuation 1 at p = 3") {
    const auto& ctx = padic_context(3);
    auto a = PAdicNumber::from_long(ctx, 1, 60);
    auto b = PAdicNumber::from_long(ctx, 2, 60);
    auto s = a + b;
    CHECK(s.valuation() == 1);
    CHECK(s.unit() == 1);
    // smallest correct precision: min absolute precision of the inputs
    CHECK(s.abs_precision() == 60);
    CHECK(s.relprec() == 59);
}

TEST_CASE("multiplicative identity and division round trip") {
    const auto& ctx = padic_context(3);
    std::mt19937_64 rng(12345);
    auto one = PAdicNumber::from_long(ctx, 1);
    for (int i = 0; i < 50; ++i) {
        auto x = random_element(ctx, rng);
        CHECK((x * one).identical_to(x));
        auto q = (x * x) / x;
        CHECK(q.valuation() == x.valuation());
        CHECK(congruent_mod(q, x, q.abs_precision()));
    }
}

TEST_CASE("(1+3)/(1+3) = 1 with relative precision preserved") {
    const auto& ctx = padic_context(3);
    auto x = PAdicNumber::from_long(ctx, 4, 40);
    auto q = x / x;
    CHECK(q.valuation() == 0);
    CHECK(q.unit() == 1);
    CHECK(q.relprec() == 40);
}

TEST_CASE("valuation laws on random pairs") {
    std::mt19937_64 rng(777);
    for (long p : {3L, 5L}) {
        const auto& ctx = padic_context(p);
        for (int i = 0; i < 100; ++i) {
            auto x = random_element(ctx, rng);
            auto y = random_element(ctx, rng);
            CHECK((x * y).valuation() == x.valuation() + y.valuation());
            auto s = x + y;
            if (!s.is_zero_at_precision()) {
                CHECK(s.valuation() >= std::min(x.valuation(), y.valuation()));
                if (x.valuation() != y.valuation())
                    CHECK(s.valuation() == std::min(x.valuation(), y.valuation()));
            }
        }
    }
}

TEST_CASE("x - x is an apparent zero, and dividing by it throws") {
    const auto& ctx = padic_context(3);
    auto x = PAdicNumber::from_long(ctx, 7, 30);
    auto d = x - x;
    CHECK(d.is_zero_at_precision());
    CHECK(!d.is_exact_zero());
    CHECK(d.valuation_lower_bound() == 30);
    CHECK_THROWS_AS(d.valuation(), PrecisionExhausted);
    CHECK_THROWS_AS(x / d, DivisionByApparentZero);
}

TEST_CASE("teichmuller at p = 3") {
    const auto& ctx = padic_context(3);
    auto t1 = teichmuller(ctx, 1, 60);
    CHECK(t1.identical_to(PAdicNumber::from_long(ctx, 1, 60)));
    auto t2 = teichmuller(ctx, 2, 60);
    // the only square root of 1 congruent to 2 mod 3 is -1
    CHECK(congruent_mod(t2, PAdicNumber::from_long(ctx, -1, 60), 60));
}

TEST_CASE("teichmuller of 2 at p = 5 matches brute force mod 5^3") {
    // Oracle: exhaustive search over x in [0,125) with x = 2 mod 5 and
    // x^4 = 1 mod 125 finds x = 57 (frozen here after enumeration).
    long expected = -1;
    for (long x = 0; x < 125; ++x) {
        if (x % 5 != 2) continue;
        long x2 = (x * x) % 125;
        long x4 = (x2 * x2) % 125;
        if (x4 == 1) {
            expected = x;
            break;
        }
    }
    REQUIRE(expected == 57);
    const auto& ctx = padic_context(5);
    auto t = teichmuller(ctx, 2, 60);
    CHECK(congruent_mod(t, PAdicNumber::from_long(ctx, expected, 60), 3));
    // defining property at full precision
    CHECK(congruent_mod(t.pow(4), PAdicNumber::from_long(ctx, 1), t.abs_precision()));
}

TEST_CASE("teichmuller is multiplicative") {
    for (long p : {3L, 5L}) {
        const auto& ctx = padic_context(p);
        for (long r = 1; r < p; ++r)
            for (long s = 1; s < p; ++s) {
                auto lhs = teichmuller(ctx, r, 60) * teichmuller(ctx, s, 60);
                auto rhs = teichmuller(ctx, (r * s) % p, 60);
                CHECK(congruent_mod(lhs, rhs, 60));
            }
    }
}

TEST_CASE("hensel_lift: x^2 - 1 from x0 = 2 at p = 3 gives -1") {
    const auto& ctx = padic_context(3);
    PadicPoly f;
    f.coeffs = {PAdicNumber::from_long(ctx, -1), PAdicNumber::zero(ctx),
                PAdicNumber::from_long(ctx, 1)};
    auto root = hensel_lift(f, PAdicNumber::from_long(ctx, 2, 50));
    CHECK(congruent_mod(root, PAdicNumber::from_long(ctx, -1, 50), 50));
}

TEST_CASE("hensel_lift rejects x^3 - 4 from x0 = 1 at p = 3") {
    const auto& ctx = padic_context(3);
    PadicPoly f;  // x^3 - (1+3): f'(x) = 3x^2 has nu = 1, nu(f(1)) = 1
    f.coeffs = {PAdicNumber::from_long(ctx, -4), PAdicNumber::zero(ctx),
                PAdicNumber::zero(ctx), PAdicNumber::from_long(ctx, 1)};
    CHECK_THROWS_AS(hensel_lift(f, PAdicNumber::from_long(ctx, 1, 50)),
                    HenselHypothesisFailed);
}

TEST_CASE("hensel_lift: square root of 1+3 checked by squaring") {
    const auto& ctx = padic_context(3);
    PadicPoly f;  // x^2 - (1+3)
    f.coeffs = {PAdicNumber::from_long(ctx, -4), PAdicNumber::zero(ctx),
                PAdicNumber::from_long(ctx, 1)};
    auto root = hensel_lift(f, PAdicNumber::from_long(ctx, 1, 50));
    auto sq = root * root;
    CHECK(congruent_mod(sq, PAdicNumber::from_long(ctx, 4), sq.abs_precision()));
}

TEST_CASE("render/parse round trip is bit exact") {
    std::mt19937_64 rng(424242);
    for (long p : {3L, 5L}) {
        const auto& ctx = padic_context(p);
        for (int i = 0; i < 200; ++i) {
            auto x = random_element(ctx, rng);
            auto y = padic_parse(x.render());
            CHECK(y.identical_to(x));
            CHECK(y.render() == x.render());
        }
        CHECK(padic_parse(PAdicNumber::zero(ctx).render()).is_exact_zero());
        auto az = PAdicNumber::apparent_zero(ctx, 17);
        CHECK(padic_parse(az.render()).identical_to(az));
    }
}

TEST_CASE("negative valuation renders and parses") {
    const auto& ctx = padic_context(3);
    auto x = PAdicNumber::make(ctx, -2, 7, 20);
    auto y = padic_parse(x.render());
    CHECK(y.identical_to(x));
    CHECK(y.valuation() == -2);
}

TEST_CASE("precision clamping") {
    const auto& ctx = padic_context(3);
    auto x = PAdicNumber::from_long(ctx, 10, 60);  // 10 = 3^0 * 10, nu = 0
    auto y = x.with_abs_precision(5);
    CHECK(y.valuation() == 0);
    CHECK(y.abs_precision() == 5);
    CHECK(congruent_mod(x, y, 5));
    auto z = x.with_abs_precision(-1);  // below the valuation: apparent zero
    CHECK(z.is_zero_at_precision());
}
