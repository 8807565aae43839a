#include "nlab/io.hpp"

#include <random>

#include "doctest.h"

using namespace nlab;

namespace {

PAdicNumber random_padic(const PadicContext& ctx, std::mt19937_64& rng) {
    std::uniform_int_distribution<long> val(-4, 6);
    std::uniform_int_distribution<long> digit(0, ctx.p - 1);
    mpz_class u = 1 + digit(rng) % (ctx.p - 1);
    for (int i = 1; i < 12; ++i) u += digit(rng) * ctx.ppow(i);
    return PAdicNumber::make(ctx, val(rng), u, 40);
}

}  // namespace

TEST_CASE("padic JSON round trip is bit exact") {
    std::mt19937_64 rng(7);
    for (long p : {3L, 5L}) {
        const auto& ctx = padic_context(p);
        for (int i = 0; i < 100; ++i) {
            auto x = random_padic(ctx, rng);
            auto y = padic_from_json(to_json(x));
            CHECK(y.identical_to(x));
            CHECK(canonical_dump(to_json(y)) == canonical_dump(to_json(x)));
        }
        CHECK(padic_from_json(to_json(PAdicNumber::zero(ctx))).is_exact_zero());
        auto az = PAdicNumber::apparent_zero(ctx, 9);
        CHECK(padic_from_json(to_json(az)).identical_to(az));
    }
}

TEST_CASE("cyclotomic element JSON round trip") {
    std::mt19937_64 rng(21);
    auto lv = tower_level(3, 2);
    for (int t = 0; t < 20; ++t) {
        Coords c;
        for (long i = 0; i < lv->e(); ++i) c.push_back(random_padic(lv->context(), rng));
        auto x = CycloElement::from_coords(lv, std::move(c));
        auto y = cyclo_from_json(to_json(x));
        CHECK(y.identical_to(x));
        CHECK(y.level() == x.level());
    }
}

TEST_CASE("series JSON round trip keeps ring tag, truncation and tail") {
    const auto& ctx = padic_context(3);
    ZpSeriesRing ring(ctx);
    auto s = make_series(ring, {PAdicNumber::from_long(ctx, 1, 30),
                                PAdicNumber::from_long(ctx, 6, 30)}, 12,
                         /*exact=*/false);
    auto j = to_json(s);
    CHECK(j["ring"] == "Zp");
    CHECK(j["M"] == 12);
    CHECK(j["tail"] == 13);
    auto s2 = zp_series_from_json(j);
    CHECK(s2.M == s.M);
    CHECK(s2.tail == s.tail);
    for (long i = 0; i <= 1; ++i) CHECK(s2.coeff(i).identical_to(s.coeff(i)));

    CycloSeriesRing r1(tower_level(3, 1));
    auto t = make_series(r1, {CycloElement::one(r1.level, 30),
                              CycloElement::lambda(r1.level, 30)}, 6);
    auto jt = to_json(t);
    CHECK(jt["ring"] == "R1");
    CHECK(jt["tail"].is_null());
    auto t2 = cyclo_series_from_json(jt);
    CHECK(t2.exact());
    for (long i = 0; i <= 1; ++i) CHECK(t2.coeff(i).identical_to(t.coeff(i)));
}

TEST_CASE("norm sequence JSON round trip") {
    Tower tw(3, 40);
    auto seq = uniformizer_sequence(tw, 1, 3);
    auto j = to_json(seq);
    auto back = sequence_from_json(j);
    CHECK(back.p == seq.p);
    CHECK(back.lo == seq.lo);
    CHECK(back.hi == seq.hi);
    for (int m = 1; m <= 3; ++m)
        CHECK(back.component(m).identical_to(seq.component(m)));
    CHECK(back.witnesses == seq.witnesses);
    CHECK(canonical_dump(to_json(back)) == canonical_dump(j));
}

TEST_CASE("oort report serialization is deterministic") {
    Tower tw(3, 60);
    auto spec = make_kummer_spec(tw, 1, std::vector<long>{1});
    auto a = canonical_dump(to_json(verify(tw, spec, 1, false)));
    auto b = canonical_dump(to_json(verify(tw, spec, 1, false)));
    CHECK(a == b);
    CHECK(a.find("\"verdict\": \"pass\"") != std::string::npos);
}

TEST_CASE("W polynomial parser") {
    CHECK(parse_w_polynomial("1") == std::vector<long>{1});
    CHECK(parse_w_polynomial("1 + Z^4") == std::vector<long>{1, 0, 0, 0, 1});
    CHECK(parse_w_polynomial("1+2*Z^3") == std::vector<long>{1, 0, 0, 2});
    CHECK(parse_w_polynomial("1 + Z") == std::vector<long>{1, 1});
    CHECK_THROWS_AS(parse_w_polynomial(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_w_polynomial("1 - Z"), std::invalid_argument);
    CHECK_THROWS_AS(parse_w_polynomial("Z^"), std::invalid_argument);
}
