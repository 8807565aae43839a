#include "nlab/ramification.hpp"

#include "doctest.h"

using namespace nlab;

TEST_CASE("i values at p = 3") {
    // L^1 | Q_p, sigma_2: nu_1(zeta^2 - zeta) = 1, so i_L = 0
    CHECK(i_value(Extension{3, 0, 1}, 2) == 0);
    // L^2 | L^1, sigma_4: sigma(lambda_2) - lambda_2 = zeta_9 (zeta_3 - 1), nu_2 = 3
    CHECK(i_value(Extension{3, 1, 2}, 4) == 2);
    CHECK_THROWS_AS(i_value(Extension{3, 1, 2}, 1), TrivialElement);
    CHECK_THROWS_AS(i_value(Extension{3, 0, 2}, 3), std::invalid_argument);
}

TEST_CASE("profile of L^1 | Q_3") {
    auto prof = filtration(Extension{3, 0, 1});
    CHECK(prof.group_order == 2);
    CHECK(prof.lower_jumps == std::vector<long>{0});
    REQUIRE(prof.upper_jumps.size() == 1);
    CHECK(prof.upper_jumps[0] == Rat(0));
    CHECK(prof.different_degree == 1);  // = p - 2
    CHECK(prof.conductor == 1);
    CHECK(different_via_derivative(Extension{3, 0, 1}) == 1);
}

TEST_CASE("profile of L^2 | Q_3: jumps {0,2} / {0,1}") {
    auto prof = filtration(Extension{3, 0, 2});
    CHECK(prof.group_order == 6);
    CHECK(prof.lower_jumps == std::vector<long>{0, 2});
    REQUIRE(prof.upper_jumps.size() == 2);
    CHECK(prof.upper_jumps[0] == Rat(0));
    CHECK(prof.upper_jumps[1] == Rat(1));
    CHECK(prof.conductor == 2);
    // i_table: {2,5,8} -> 0, {4,7} -> 2
    CHECK(prof.i_table.at(2) == 0);
    CHECK(prof.i_table.at(5) == 0);
    CHECK(prof.i_table.at(8) == 0);
    CHECK(prof.i_table.at(4) == 2);
    CHECK(prof.i_table.at(7) == 2);
    CHECK(prof.different_degree == 9);
    CHECK(different_via_derivative(Extension{3, 0, 2}) == 9);
}

TEST_CASE("profile of L^2 | L^1 at p = 3") {
    auto prof = filtration(Extension{3, 1, 2});
    CHECK(prof.group_order == 3);
    CHECK(prof.lower_jumps == std::vector<long>{2});
    CHECK(prof.upper_jumps == std::vector<Rat>{Rat(2)});
    CHECK(prof.different_degree == 6);
    CHECK(different_via_derivative(Extension{3, 1, 2}) == 6);
    CHECK(prof.conductor == 3);
}

TEST_CASE("two-way different on every tested extension") {
    std::vector<Extension> exts{{3, 0, 1}, {3, 0, 2}, {3, 1, 2}, {3, 1, 3},
                                {3, 2, 3}, {5, 1, 2}};
    for (const auto& ext : exts) {
        auto prof = filtration(ext);
        CHECK(prof.different_degree == different_via_derivative(ext));
    }
}

TEST_CASE("tower multiplicativity of the different") {
    // d(L^m'|Q_p) = d(L^m'|L^m) + e(L^m'|L^m) d(L^m|Q_p) and likewise in
    // relative towers, p in {3, 5}, 1 <= m < m' <= 3.
    struct Case {
        long p;
        int base, mid, top;
    };
    std::vector<Case> cases{{3, 0, 1, 2}, {3, 0, 1, 3}, {3, 0, 2, 3}, {3, 1, 2, 3},
                            {5, 0, 1, 2}, {5, 1, 2, 3}};
    for (const auto& c : cases) {
        auto whole = filtration(Extension{c.p, c.base, c.top});
        auto upper = filtration(Extension{c.p, c.mid, c.top});
        auto lower = filtration(Extension{c.p, c.base, c.mid});
        long e_rel = upper.group_order;  // totally ramified
        CHECK(whole.different_degree ==
              upper.different_degree + e_rel * lower.different_degree);
    }
}

TEST_CASE("phi and psi are mutually inverse on a dense grid") {
    for (const auto& ext : {Extension{3, 0, 2}, Extension{3, 1, 3}, Extension{5, 0, 2}}) {
        auto prof = filtration(ext);
        for (int k = 0; k <= 100; ++k) {
            Rat t = Rat(-1) + Rat(k, 10);  // [-1, 9]
            CHECK(prof.psi(prof.phi(t)) == t);
            CHECK(prof.phi(prof.psi(t)) == t);
        }
    }
}

TEST_CASE("upper jumps are integers on every computed abelian profile") {
    for (long p : {3L, 5L}) {
        for (int base = 0; base <= 2; ++base)
            for (int top = base + 1; top <= 3; ++top) {
                if (p == 5 && top > 2) continue;
                auto prof = filtration(Extension{p, base, top});
                for (const Rat& u : prof.upper_jumps) CHECK(u.denominator() == 1);
            }
    }
}

TEST_CASE("quotient compatibility (G/H)^s = G^s H / H") {
    CHECK(quotient_compatible(3, 0, 1, 2));
    CHECK(quotient_compatible(3, 0, 1, 3));
    CHECK(quotient_compatible(3, 0, 2, 3));
    CHECK(quotient_compatible(3, 1, 2, 3));
    CHECK(quotient_compatible(5, 0, 1, 2));
}

TEST_CASE("apf_first_jump and its growth at p = 3") {
    CHECK(apf_first_jump(3, 1) == Rat(2));
    CHECK(apf_first_jump(3, 2) == Rat(8));
    CHECK(apf_first_jump(3, 3) == Rat(26));
    CHECK(apf_first_jump(3, 1) < apf_first_jump(3, 2));
    CHECK(apf_first_jump(3, 2) < apf_first_jump(3, 3));
}

TEST_CASE("r_of_level values and monotonicity") {
    CHECK(r_of_level(3, 1) == 2);  // ceil(2/3 * 2)
    CHECK(r_of_level(3, 2) == 6);  // ceil(2/3 * 8)
    CHECK(r_of_level(3, 3) == 18);
    CHECK(r_of_level(5, 1) == 4);  // ceil(4/5 * 4)
    for (int m = 1; m <= 2; ++m) {
        CHECK(r_of_level(3, m) <= r_of_level(3, m + 1));
        CHECK(r_of_level(3, m) >= 1);
    }
}

TEST_CASE("piecewise linear plumbing") {
    PiecewiseLinearFn f({{Rat(-1), Rat(-1)}, {Rat(2), Rat(2)}},
                        {Rat(1), Rat(1, 3)});
    CHECK(f(Rat(2)) == Rat(2));
    CHECK(f(Rat(5)) == Rat(3));
    auto g = f.inverse();
    CHECK(g(Rat(3)) == Rat(5));
    CHECK_THROWS_AS(f(Rat(-2)), std::domain_error);
    CHECK_THROWS_AS(PiecewiseLinearFn({{Rat(0), Rat(0)}}, {Rat(-1)}),
                    std::invalid_argument);
}
