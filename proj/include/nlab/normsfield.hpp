#pragma once

#include <optional>
#include <vector>

#include "nlab/cyclotomic.hpp"

namespace nlab {

// Finite-depth field-of-norms arithmetic over the cyclotomic tower:
// norm-compatible sequences, componentwise multiplication, norm-limit
// addition at an explicit probe depth with a mandatory stability report,
// the Teichmuller embedding of F_p, and the series-to-sequence map with
// its congruence window r(m).

struct NormSequence {
    long p = 0;
    int lo = 0, hi = 0;                // depth range [lo, hi]
    std::vector<CycloElement> comps;   // component at level m is comps[m - lo]
    std::vector<long> witnesses;       // per adjacent pair: certified exponent of
                                       // nu_m(norm_down(c_{m+1}) - c_m)

    const CycloElement& component(int m) const;
    bool in_range(int m) const { return m >= lo && m <= hi; }
    // Shared valuation of the components; kInfVal for the zero sequence.
    long common_valuation() const;

    // No validation: for parsed documents and fault-injection tests.
    static NormSequence unchecked(long p, int lo, int hi,
                                  std::vector<CycloElement> comps);
};

struct CompatPair {
    int m;            // lower level of the pair (m, m+1)
    long certified;   // certified exponent: nu_m(difference) >= certified
    bool clean;       // no resolved discrepancy at the tracked precision
};

struct CompatReport {
    bool pass = false;
    bool common_valuation_ok = false;
    std::vector<CompatPair> pairs;
    int first_failing_level = -1;  // -1 when pass
};

// Verifies norm compatibility pair by pair. With min_exponent the pair
// passes when the certified exponent reaches it; without, any resolved
// discrepancy fails.
CompatReport check_compatibility(const NormSequence& s,
                                 std::optional<long> min_exponent = std::nullopt);

// The net pi_m = zeta_{p^m} - 1; CompatibilityFailure if the defining
// congruences do not hold at precision.
NormSequence uniformizer_sequence(const Tower& tower, int lo, int hi);

// Componentwise product on the overlapping range.
NormSequence fon_mul(const NormSequence& a, const NormSequence& b);

struct StabilityEntry {
    int m;
    long observed;   // certified agreement exponent between probes M and M-1
    long required;   // r(m), the Prop-3.9 congruence window
    bool ok;
};

struct AddResult {
    NormSequence sequence;
    int probe_depth;
    std::vector<StabilityEntry> stability;  // empty when M-1 leaves no room
    std::vector<long> approx_congruence;    // certified exponent of
                                            // nu_m(gamma_m - (a_m + b_m)) per level
};

// gamma_m = N_{L^M | L^m}(a_M + b_M); verifies the ApproxAPF congruence
// gamma_m = a_m + b_m mod m^r(m) and reports the observed stability
// between probe depths M and M-1. The default result depth stops at
// M-1 so the stability comparison always exists; passing result_hi = M
// explicitly trades the report away for the extra level.
AddResult fon_add(const Tower& tower, const NormSequence& a, const NormSequence& b,
                  int probe_depth, std::optional<int> result_hi = std::nullopt);

// Constant sequence tau(r); r = 0 gives the zero sequence.
NormSequence teichmuller_embed(const Tower& tower, long r, int lo, int hi);

// The field-of-norms element of g(z) = sum a_i z^i (residues mod p) under
// z -> pi: evaluated at the probe level and cascaded down; the Lemma-3.10
// congruence against the direct evaluation g_m(pi_m) is verified per level.
NormSequence series_to_sequence(const Tower& tower, const std::vector<long>& g_coeffs,
                                int lo, int hi, int probe_depth);

}  // namespace nlab
