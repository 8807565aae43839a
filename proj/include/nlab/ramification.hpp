#pragma once

#include <boost/rational.hpp>

#include <map>
#include <vector>

#include "nlab/cyclotomic.hpp"

namespace nlab {

// Ramification theory of steps L^m' | L^m in the cyclotomic tower: i_L
// tables, lower/upper filtrations, the Herbrand pair phi/psi in exact
// rational arithmetic, conductor, different degree, and the APF
// quantities i(L|L^m), r(L^m).
//
// Conventions follow i_L = i_G - 1, G_i = { sigma : i_L(sigma) >= i },
// G_t = G_ceil(t) for real t, phi(t) = int_0^t #G_s / #G_0 ds.

using Rat = boost::rational<long long>;

inline long rat_ceil(const Rat& x) {
    long long n = x.numerator(), d = x.denominator();  // d > 0
    long long q = n / d;
    if (n % d != 0 && n > 0) ++q;
    return static_cast<long>(q);
}

// Continuous, strictly increasing, piecewise linear on [-1, inf); the
// last slope extends beyond the final breakpoint.
class PiecewiseLinearFn {
  public:
    PiecewiseLinearFn() = default;
    PiecewiseLinearFn(std::vector<std::pair<Rat, Rat>> breakpoints,
                      std::vector<Rat> slopes);

    const std::vector<std::pair<Rat, Rat>>& breakpoints() const { return bp_; }
    const std::vector<Rat>& slopes() const { return slopes_; }

    Rat operator()(const Rat& x) const;
    PiecewiseLinearFn inverse() const;

  private:
    std::vector<std::pair<Rat, Rat>> bp_;  // includes the left endpoint
    std::vector<Rat> slopes_;              // slopes_[k] right of bp_[k]
};

struct Extension {
    long p;
    int base_m;  // 0 means Q_p
    int top_m;
};

struct RamificationProfile {
    Extension ext;
    long group_order;
    std::map<long, long> i_table;  // nontrivial a mod p^top -> i_L value
    std::vector<long> lower_jumps;
    std::vector<Rat> upper_jumps;
    PiecewiseLinearFn phi, psi;
    long conductor;         // largest upper jump + 1
    long different_degree;  // sum over nontrivial sigma of (i_L + 1)

    // G_t for integer t (lower numbering), as the set of exponents a
    // including the identity.
    std::vector<long> lower_group(long t) const;
    // G^s (upper numbering) via psi.
    std::vector<long> upper_group(const Rat& s) const;
};

// i_L(sigma_a) for the step L^top | L^base, evaluated on the uniformizer
// generator. TrivialElement if a acts trivially on L^top.
long i_value(const Extension& ext, long a);

// Full profile of Gal(L^top | L^base).
RamificationProfile filtration(const Extension& ext);

// Independent route to the different degree: nu_top(f'(lambda_top)) for f
// the minimal polynomial of lambda_top over the base.
long different_via_derivative(const Extension& ext);

// First upper jump of Gal(L^(m+1) | L^m), realizing i(L | L^m) for the
// cyclotomic tower.
Rat apf_first_jump(long p, int m);

// r(L^m) = ceil((p-1)/p * i(L|L^m)).
long r_of_level(long p, int m);

// Prop. (G/H)^s = G^s H / H checked on a grid: the upper filtration of
// Gal(L^mid | L^base) computed directly must match the image of the upper
// filtration of Gal(L^top | L^base).
bool quotient_compatible(long p, int base_m, int mid_m, int top_m, int grid_points = 100);

}  // namespace nlab
