#pragma once

#include <string>
#include <vector>

#include "nlab/cyclotomic.hpp"
#include "nlab/powerseries.hpp"

namespace nlab {

// Construction and mechanical verification of the p-cyclic lifting: the
// Kummer cover T^p = 1 + lambda^p W(Z) / Z^c of the open disc over
// R_1 = Z_p[zeta_p], its generic different, the specialized units u_m
// along the uniformizer net, their Artin conductors and differents, the
// Eisenstein shape of the specialized integral equation, and the p-th
// power congruence tying consecutive levels together.

struct KummerCoverSpec {
    long p;
    long c;                      // positive, prime to p
    PowerSeries<ZpSeriesRing> W;  // constant term 1, Teichmuller coefficients
    std::string w_text;          // canonical rendering of W for reports
};

// Validates gcd(c, p) = 1, c >= 1, W(0) = 1 and that every W coefficient
// is a Teichmuller representative at its precision.
KummerCoverSpec make_kummer_spec(const Tower& tower, long c,
                                 const PowerSeries<ZpSeriesRing>& W);
// Convenience: W = sum tau(w_i) Z^i from residues; w[0] must be 1.
KummerCoverSpec make_kummer_spec(const Tower& tower, long c,
                                 const std::vector<long>& w_residues);

struct GenericDifferent {
    long branch_count;  // c + 1
    long d_eta;         // (c + 1)(p - 1)
};

// Weierstrass degree of Z^c + W(Z) lambda^p over R_1 (must equal c), plus
// the branch point at Z = 0 contributed by the Z^{(p-1)c} factor.
GenericDifferent generic_different(const Tower& tower, const KummerCoverSpec& spec);

// u_m = 1 + lambda^p pi_m^{-c} W(pi_m), with nu_m(u_m - 1) = p^m - c
// verified; LevelTooSmall unless p^m > c.
CycloElement specialize_unit(const Tower& tower, const KummerCoverSpec& spec, int m);

// Artin conductor of L^m(u^(1/p)) | L^m for a principal unit u: reduces u
// to the standard form 1 + lambda^p pi^(-c') v by multiplying by p-th
// powers whenever p divides the index, then returns c' + 1. IsPthPower
// when the reduction drives the index past D = nu_m(lambda^p).
long kummer_conductor(const Tower& tower, const CycloElement& u);

// d_m = conductor(u_m) * (p - 1): a degree-p cyclic extension with Artin
// conductor f has its single break at f - 1 and different degree f(p-1).
long special_different(const Tower& tower, const KummerCoverSpec& spec, int m);

// Integral equation at Z = pi_m after T~ = T Z^c: checks
// nu_m(pi_m^((p-1)c)(pi_m^c + W(pi_m) lambda^p)) = p c with the depressed
// unit class wildly ramified (conductor c + 1), certifying a totally
// ramified degree-p special fiber.
bool eisenstein_specialization_check(const Tower& tower, const KummerCoverSpec& spec,
                                     int m);
// Internal seam for fault injection: w_at_pi replaces W(pi_m).
bool eisenstein_check_with_value(const Tower& tower, long c, int m,
                                 const CycloElement& w_at_pi);

struct PthPowerCheck {
    bool ok;
    long D;          // nu_{m+1}(lambda^p) = p^(m+1)
    long certified;  // certified lower bound on nu_{m+1}(Q - 1)
    bool resolved;   // true when nu(Q-1) was resolved exactly (failure path)
};

// Q = (1 + W(pi_m) lambda^p / pi_m^c)(1 + W(pi_{m+1}) lambda^p / pi_{m+1}^c)^(-1)
//     (1 - lambda / pi_{m+1}^c)^p computed in L^(m+1); true iff
// nu_{m+1}(Q - 1) > D, which makes Q a p-th power there.
PthPowerCheck pth_power_lemma_check(const Tower& tower, const KummerCoverSpec& spec,
                                    int m);

// Least m with min{ r(m), e_m/(p-1) } > 2c.
int compute_m0(const Tower& tower, const KummerCoverSpec& spec);

// Slow independent route for small cases: adjoin an explicit p-th root of
// u, find a uniformizer of the extension, and read the conductor and
// different off the i-values of the Galois action on it.
struct CrossCheck {
    long conductor;
    long different_degree;
};
CrossCheck explicit_kummer_crosscheck(const Tower& tower, const CycloElement& u);

struct LevelRecord {
    int m;
    long nu_u_minus_1;
    long conductor;
    long d_m;
    bool eisenstein_ok;
    bool cross_checked;
    long cross_different;  // -1 when not run
};

struct PairRecord {
    int m_low, m_high;
    long D;
    long certified;
    bool ok;
};

struct OortReport {
    long p, c;
    std::string w_text;
    int precision;
    long branch_count, d_eta;
    int m0;
    std::vector<LevelRecord> levels;
    std::vector<PairRecord> pairs;
    bool pass;
    std::string first_fail;  // empty when pass
};

// Runs the full pipeline on levels m0..m0+extra_levels (m0 auto-computed),
// assembling the verdict: pass iff every d_m equals d_eta and every
// congruence check succeeds.
OortReport verify(const Tower& tower, const KummerCoverSpec& spec, int extra_levels = 2,
                  bool cross_check = false);

}  // namespace nlab
