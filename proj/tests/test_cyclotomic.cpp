#include "nlab/cyclotomic.hpp"

#include <atomic>
#include <random>
#include <thread>

#include "doctest.h"

using namespace nlab;

namespace {

CycloElement random_element(const LevelPtr& lv, std::mt19937_64& rng,
                            int relprec = 60) {
    std::uniform_int_distribution<long> val(0, 3);
    std::uniform_int_distribution<long> digit(0, lv->p() - 1);
    std::uniform_int_distribution<int> drop(0, 3);
    Coords c;
    bool any = false;
    for (long i = 0; i < lv->e(); ++i) {
        if (drop(rng) == 0 && i + 1 < lv->e()) {
            c.push_back(PAdicNumber::zero(lv->context()));
            continue;
        }
        mpz_class u = 1 + digit(rng) % (lv->p() - 1);
        for (int k = 1; k < 6; ++k) u += digit(rng) * lv->context().ppow(k);
        c.push_back(PAdicNumber::make(lv->context(), val(rng), u, relprec));
        any = true;
    }
    if (!any) c[0] = PAdicNumber::from_long(lv->context(), 1, relprec);
    return CycloElement::from_coords(lv, std::move(c));
}

}  // namespace

TEST_CASE("tower level basics at p = 3") {
    auto l1 = tower_level(3, 1);
    auto l2 = tower_level(3, 2);
    CHECK(l1->e() == 2);
    CHECK(l2->e() == 6);
    CHECK(l2->lower() == l1);
    // Phi_3(1+X) = X^2 + 3X + 3
    CHECK(l1->minpoly() == std::vector<mpz_class>{3, 3, 1});
    // interning
    CHECK(tower_level(3, 2) == l2);
}

TEST_CASE("lambda * lambda^{-1} = 1 at p = 3, m = 1") {
    auto lv = tower_level(3, 1);
    auto lam = CycloElement::lambda(lv, 60);
    auto prod = lam * lam.inverse();
    CHECK(congruent_mod_m(prod, CycloElement::one(lv), 100));
}

TEST_CASE("lambda^2 equals the minpoly reduction of X^2 at p = 3, m = 1") {
    auto lv = tower_level(3, 1);
    auto lam = CycloElement::lambda(lv);
    auto sq = lam * lam;  // reduction path
    // X^2 = -3X - 3 mod (X^2 + 3X + 3), assembled by hand
    Coords c{PAdicNumber::from_long(lv->context(), -3),
             PAdicNumber::from_long(lv->context(), -3)};
    auto direct = CycloElement::from_coords(lv, std::move(c));
    CHECK(congruent_mod_m(sq, direct, 200));
}

TEST_CASE("valuations of p and uniformizers") {
    auto l1 = tower_level(3, 1);
    auto l2 = tower_level(3, 2);
    auto three1 = CycloElement::from_padic(l1, PAdicNumber::from_long(l1->context(), 3));
    CHECK(three1.valuation() == 2);  // e_1 = p - 1 = 2
    CHECK(CycloElement::lambda(l2).valuation() == 1);
    auto three2 = CycloElement::from_padic(l2, PAdicNumber::from_long(l2->context(), 3));
    CHECK(three2.valuation() == 6);  // e_2
}

TEST_CASE("embed_up multiplies valuations by p^(m'-m)") {
    auto l1 = tower_level(3, 1);
    auto l2 = tower_level(3, 2);
    auto lam1 = CycloElement::lambda(l1, 60);
    auto up = embed_up(lam1, l2);
    CHECK(up.valuation() == 3);  // nu_2(lambda_1) = e(L^2|L^1) = 3
    CHECK(congruent_mod_m(embed_up(CycloElement::one(l1), l2), CycloElement::one(l2), 60));
    auto three = CycloElement::from_padic(l1, PAdicNumber::from_long(l1->context(), 3));
    CHECK(embed_up(three, l2).valuation() == 6);
    CHECK_THROWS_AS(embed_up(CycloElement::lambda(l2), l1), LevelMismatch);
}

TEST_CASE("galois action: sigma_a(lambda) + 1 = (1+lambda)^a") {
    auto l2 = tower_level(3, 2);
    auto lam = CycloElement::lambda(l2);
    auto one = CycloElement::one(l2);
    for (long a : {2L, 4L, 5L, 7L, 8L}) {
        GaloisElement s(l2, a);
        auto lhs = galois_apply(s, lam) + one;
        auto rhs = (lam + one).pow(a);
        CHECK(congruent_mod_m(lhs, rhs, 200));
    }
}

TEST_CASE("sigma_2 at p = 3, m = 1: sigma(lambda) = lambda^2 + 2 lambda") {
    auto l1 = tower_level(3, 1);
    auto lam = CycloElement::lambda(l1);
    GaloisElement s(l1, 2);
    auto img = galois_apply(s, lam);
    auto two = CycloElement::from_padic(l1, PAdicNumber::from_long(l1->context(), 2));
    CHECK(congruent_mod_m(img, lam * lam + lam * two, 200));
    CHECK((img - lam).valuation() == 1);
}

TEST_CASE("sigma_1 is the identity and the action composes") {
    std::mt19937_64 rng(99);
    auto l2 = tower_level(3, 2);
    for (int i = 0; i < 10; ++i) {
        auto x = random_element(l2, rng);
        CHECK(galois_apply(GaloisElement(l2, 1), x).identical_to(x));
        auto ab = galois_apply(GaloisElement(l2, 2), galois_apply(GaloisElement(l2, 4), x));
        auto once = galois_apply(GaloisElement(l2, 8), x);
        CHECK(congruent_mod_m(ab, once, std::min(ab.abs_precision(), once.abs_precision())));
    }
    CHECK_THROWS_AS(GaloisElement(l2, 3), std::invalid_argument);
}

TEST_CASE("galois action preserves valuation and fixes rationals") {
    std::mt19937_64 rng(1234);
    auto l2 = tower_level(3, 2);
    GaloisElement s(l2, 4);
    for (int i = 0; i < 10; ++i) {
        auto x = random_element(l2, rng);
        CHECK(galois_apply(s, x).valuation() == x.valuation());
    }
    auto c = CycloElement::from_padic(l2, PAdicNumber::from_long(l2->context(), 17, 60));
    CHECK(galois_apply(s, c).identical_to(c));
}

TEST_CASE("norm_down(lambda_2) = lambda_1: the norm-compatible net at p = 3") {
    auto l2 = tower_level(3, 2);
    auto n = norm_down(CycloElement::lambda(l2, 60));
    CHECK(congruent_mod_m(n, CycloElement::lambda(tower_level(3, 1), 60), 100));
}

TEST_CASE("norm_down of a rational scalar is its p-th power") {
    auto l2 = tower_level(3, 2);
    auto c = CycloElement::from_padic(l2, PAdicNumber::from_long(l2->context(), 5, 60));
    auto n = norm_down(c);
    auto expect = CycloElement::from_padic(tower_level(3, 1),
                                           PAdicNumber::from_long(l2->context(), 125, 60));
    CHECK(congruent_mod_m(n, expect, 100));
}

TEST_CASE("norm valuation law and norm(embed) = power on random elements") {
    std::mt19937_64 rng(555);
    for (long p : {3L, 5L}) {
        auto l1 = tower_level(p, 1);
        auto l2 = tower_level(p, 2);
        for (int i = 0; i < 5; ++i) {
            auto x = random_element(l2, rng);
            CHECK(norm_down(x).valuation() == x.valuation());
            auto y = random_element(l1, rng);
            auto lhs = norm_down(embed_up(y, l2));
            auto rhs = y.pow(p);
            CHECK(congruent_mod_m(lhs, rhs,
                                  std::min(lhs.abs_precision(), rhs.abs_precision()) - 2));
        }
    }
}

TEST_CASE("norm is multiplicative") {
    std::mt19937_64 rng(808);
    auto l2 = tower_level(3, 2);
    for (int i = 0; i < 8; ++i) {
        auto x = random_element(l2, rng);
        auto y = random_element(l2, rng);
        auto lhs = norm_down(x * y);
        auto rhs = norm_down(x) * norm_down(y);
        CHECK(congruent_mod_m(lhs, rhs,
                              std::min(lhs.abs_precision(), rhs.abs_precision()) - 2));
    }
}

TEST_CASE("coerce_down flags elements outside the subfield") {
    auto l2 = tower_level(3, 2);
    CHECK_THROWS_AS(coerce_down(CycloElement::lambda(l2, 60)), CoercionFailure);
}

TEST_CASE("minimal polynomial of pi_2 over L^1 at p = 3") {
    auto l1 = tower_level(3, 1);
    auto mp = minimal_polynomial_step(l1);
    REQUIRE(mp.size() == 4);
    // X^3 + 3X^2 + 3X - lambda_1
    CHECK(congruent_mod_m(mp[0], -CycloElement::lambda(l1), 200));
    CHECK(congruent_mod_m(mp[1], CycloElement::from_padic(
                                     l1, PAdicNumber::from_long(l1->context(), 3)), 200));
    CHECK(congruent_mod_m(mp[2], CycloElement::from_padic(
                                     l1, PAdicNumber::from_long(l1->context(), 3)), 200));
    CHECK(congruent_mod_m(mp[3], CycloElement::one(l1), 200));
}

TEST_CASE("minimal polynomial vanishes at pi_{m+1} and has growing middle valuations") {
    for (long p : {3L}) {
        long expected_em = p - 1;
        for (int m = 1; m <= 3; ++m) {
            auto lv = tower_level(p, m);
            auto up = tower_level(p, m + 1);
            auto mp = minimal_polynomial_step(lv);
            // evaluate at lambda_{m+1} by Horner after embedding coefficients
            auto x = CycloElement::lambda(up, 60);
            auto acc = embed_up(mp.back(), up);
            for (size_t i = mp.size() - 1; i-- > 0;)
                acc = acc * x + embed_up(mp[i], up);
            CHECK(acc.is_zero_at_precision());
            // middle coefficients are multiples of p: nu_m(a_i) >= e_m
            for (size_t i = 1; i + 1 < mp.size(); ++i)
                CHECK(mp[i].valuation() >= lv->e());
            CHECK(mp[1].valuation() == expected_em);  // nu_m(p) = e_m exactly
            expected_em *= p;
        }
    }
}

TEST_CASE("valuation laws on random cyclotomic elements") {
    std::mt19937_64 rng(31337);
    for (long p : {3L, 5L}) {
        auto lv = tower_level(p, 2);
        for (int i = 0; i < 12; ++i) {
            auto x = random_element(lv, rng);
            auto y = random_element(lv, rng);
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

TEST_CASE("division and inverse on random elements") {
    std::mt19937_64 rng(246);
    auto lv = tower_level(3, 2);
    for (int i = 0; i < 10; ++i) {
        auto x = random_element(lv, rng);
        auto q = x / x;
        CHECK(congruent_mod_m(q, CycloElement::one(lv), q.abs_precision()));
    }
    CHECK_THROWS_AS(CycloElement::zero(lv).inverse(), DivisionByApparentZero);
    auto az = CycloElement::lambda(lv, 30) - CycloElement::lambda(lv, 30);
    CHECK(az.is_zero_at_precision());
    CHECK_FALSE(az.is_exact_zero());
    CHECK_THROWS_AS(az.valuation(), PrecisionExhausted);
}

TEST_CASE("levels and caches are safe to share across threads") {
    std::vector<std::thread> workers;
    std::atomic<int> failures{0};
    for (int t = 0; t < 4; ++t) {
        workers.emplace_back([t, &failures] {
            try {
                auto l3 = tower_level(3, 3);
                auto l1 = tower_level(3, 1);
                auto x = CycloElement::lambda(l3, 60) +
                         CycloElement::one(l3, 60) * PAdicNumber::from_long(l3->context(),
                                                                            t + 1, 60);
                auto n = norm_down(norm_down(x));
                if (n.level() != l1) ++failures;
                GaloisElement s(l3, 1 + 9);
                if (galois_apply(s, x).valuation() != x.valuation()) ++failures;
                if (embed_up(CycloElement::lambda(l1, 60), l3).valuation() != 9) ++failures;
            } catch (...) {
                ++failures;
            }
        });
    }
    for (auto& w : workers) w.join();
    CHECK(failures == 0);
}

TEST_CASE("level mismatch is rejected") {
    auto l1 = tower_level(3, 1);
    auto l2 = tower_level(3, 2);
    CHECK_THROWS_AS(CycloElement::lambda(l1) + CycloElement::lambda(l2), LevelMismatch);
    CHECK_THROWS_AS(CycloElement::lambda(l1) * CycloElement::lambda(l2), LevelMismatch);
    CHECK_THROWS_AS(galois_apply(GaloisElement(l2, 2), CycloElement::lambda(l1)),
                    LevelMismatch);
}
