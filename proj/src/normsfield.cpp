#include "nlab/normsfield.hpp"

#include <algorithm>

#include "nlab/ramification.hpp"

namespace nlab {

namespace {

// Certified vanishing data of a difference element.
struct Vanishing {
    bool clean;      // zero at the tracked precision
    long certified;  // nu >= certified holds either way
};

Vanishing vanishing_of(const CycloElement& d) {
    bool clean = d.is_zero_at_precision();
    long bound = d.valuation_lower_bound();
    return {clean, bound};
}

void check_range(const NormSequence& s, int m) {
    if (!s.in_range(m))
        throw RangeMismatch("level " + std::to_string(m) + " outside [" +
                            std::to_string(s.lo) + ", " + std::to_string(s.hi) + "]");
}

}  // namespace

const CycloElement& NormSequence::component(int m) const {
    check_range(*this, m);
    return comps[static_cast<size_t>(m - lo)];
}

long NormSequence::common_valuation() const {
    long v = PAdicNumber::kInfVal;
    bool first = true;
    for (const auto& c : comps) {
        long cv = c.is_exact_zero() ? PAdicNumber::kInfVal : c.valuation();
        if (first) {
            v = cv;
            first = false;
        } else if (cv != v) {
            throw CompatibilityFailure("components have different valuations");
        }
    }
    return v;
}

NormSequence NormSequence::unchecked(long p, int lo, int hi,
                                     std::vector<CycloElement> comps) {
    if (lo < 1 || hi < lo || comps.size() != static_cast<size_t>(hi - lo + 1))
        throw std::invalid_argument("norm sequence range/component mismatch");
    NormSequence s;
    s.p = p;
    s.lo = lo;
    s.hi = hi;
    s.comps = std::move(comps);
    return s;
}

CompatReport check_compatibility(const NormSequence& s, std::optional<long> min_exponent) {
    CompatReport rep;
    rep.pass = true;
    try {
        s.common_valuation();
        rep.common_valuation_ok = true;
    } catch (const CompatibilityFailure&) {
        rep.common_valuation_ok = false;
        rep.pass = false;
    }
    for (int m = s.lo; m < s.hi; ++m) {
        CycloElement down = norm_down(s.component(m + 1));
        auto v = vanishing_of(down - s.component(m));
        bool ok = min_exponent ? v.certified >= *min_exponent : v.clean;
        rep.pairs.push_back(CompatPair{m, v.certified, v.clean});
        if (!ok) {
            rep.pass = false;
            if (rep.first_failing_level < 0) rep.first_failing_level = m;
        }
    }
    return rep;
}

namespace {

// Validating constructor used by all module factories.
NormSequence finish_sequence(long p, int lo, int hi, std::vector<CycloElement> comps) {
    NormSequence s = NormSequence::unchecked(p, lo, hi, std::move(comps));
    for (int m = lo; m < hi; ++m) {
        CycloElement down = norm_down(s.component(m + 1));
        auto v = vanishing_of(down - s.component(m));
        if (!v.clean)
            throw CompatibilityFailure("norm compatibility fails at level " +
                                       std::to_string(m) + " (nu = " +
                                       std::to_string(v.certified) + ")");
        s.witnesses.push_back(v.certified);
    }
    s.common_valuation();
    return s;
}

}  // namespace

NormSequence uniformizer_sequence(const Tower& tower, int lo, int hi) {
    if (lo < 1 || hi < lo) throw std::invalid_argument("need 1 <= lo <= hi");
    std::vector<CycloElement> comps;
    for (int m = lo; m <= hi; ++m) comps.push_back(tower.lambda(m));
    NormSequence s = finish_sequence(tower.p(), lo, hi, std::move(comps));
    if (s.common_valuation() != 1)
        throw CompatibilityFailure("uniformizer net must have common valuation 1");
    return s;
}

NormSequence fon_mul(const NormSequence& a, const NormSequence& b) {
    if (a.p != b.p) throw RangeMismatch("sequences over different primes");
    int lo = std::max(a.lo, b.lo), hi = std::min(a.hi, b.hi);
    if (lo > hi) throw RangeMismatch("depth ranges do not overlap");
    std::vector<CycloElement> comps;
    for (int m = lo; m <= hi; ++m) comps.push_back(a.component(m) * b.component(m));
    return finish_sequence(a.p, lo, hi, std::move(comps));
}

namespace {

// Norm cascade of a level-M element down to lo; returns components for
// levels lo..hi (hi <= M).
std::vector<CycloElement> cascade(const CycloElement& top, int M, int lo, int hi) {
    std::vector<CycloElement> out(static_cast<size_t>(hi - lo + 1),
                                  CycloElement{});
    CycloElement cur = top;
    if (M <= hi) out[static_cast<size_t>(M - lo)] = cur;
    for (int m = M - 1; m >= lo; --m) {
        cur = norm_down(cur);
        if (m <= hi) out[static_cast<size_t>(m - lo)] = cur;
    }
    return out;
}

}  // namespace

AddResult fon_add(const Tower& tower, const NormSequence& a, const NormSequence& b,
                  int probe_depth, std::optional<int> result_hi) {
    if (a.p != b.p || a.p != tower.p())
        throw RangeMismatch("sequences over different primes");
    if (!a.in_range(probe_depth) || !b.in_range(probe_depth))
        throw RangeMismatch("both sequences must be defined up to the probe depth");
    int lo = std::max(a.lo, b.lo);
    int hi = result_hi.value_or(std::min({a.hi, b.hi, probe_depth - 1}));
    if (hi > std::min({a.hi, b.hi, probe_depth}))
        throw RangeMismatch("requested result depth exceeds the available data");
    if (lo > hi) throw RangeMismatch("depth ranges leave no result levels");

    auto comps = cascade(a.component(probe_depth) + b.component(probe_depth),
                         probe_depth, lo, hi);
    AddResult res{finish_sequence(a.p, lo, hi, std::move(comps)), probe_depth, {}, {}};

    // ApproxAPF congruence: gamma_m = a_m + b_m mod m^r(m).
    for (int m = lo; m <= hi; ++m) {
        long r = r_of_level(a.p, m);
        auto v = vanishing_of(res.sequence.component(m) - (a.component(m) + b.component(m)));
        if (!v.clean && v.certified < r)
            throw CompatibilityFailure("ApproxAPF congruence failed at level " +
                                       std::to_string(m));
        res.approx_congruence.push_back(v.certified);
    }

    // Stability against the shallower probe, when available.
    if (probe_depth - 1 >= hi && a.in_range(probe_depth - 1) && b.in_range(probe_depth - 1)) {
        auto prev = cascade(a.component(probe_depth - 1) + b.component(probe_depth - 1),
                            probe_depth - 1, lo, hi);
        for (int m = lo; m <= hi; ++m) {
            auto v = vanishing_of(res.sequence.component(m) -
                                  prev[static_cast<size_t>(m - lo)]);
            long required = r_of_level(a.p, m);
            res.stability.push_back(
                StabilityEntry{m, v.certified, required, v.clean || v.certified >= required});
        }
    }
    return res;
}

NormSequence teichmuller_embed(const Tower& tower, long r, int lo, int hi) {
    if (lo < 1 || hi < lo) throw std::invalid_argument("need 1 <= lo <= hi");
    PAdicNumber t = tower.teich(r);
    std::vector<CycloElement> comps;
    for (int m = lo; m <= hi; ++m)
        comps.push_back(CycloElement::from_padic(tower.level(m), t));
    return finish_sequence(tower.p(), lo, hi, std::move(comps));
}

NormSequence series_to_sequence(const Tower& tower, const std::vector<long>& g_coeffs,
                                int lo, int hi, int probe_depth) {
    if (lo < 1 || hi < lo) throw std::invalid_argument("need 1 <= lo <= hi");
    if (probe_depth < hi)
        throw RangeMismatch("probe depth must reach the requested top level");

    // Evaluate g at the probe level with Teichmuller coefficients, then
    // push down by norms.
    auto eval_at_level = [&](int m) {
        auto lv = tower.level(m);
        CycloElement lam = tower.lambda(m);
        CycloElement acc = CycloElement::zero(lv);
        for (size_t i = g_coeffs.size(); i-- > 0;) {
            acc = acc * lam;
            long ri = ((g_coeffs[i] % tower.p()) + tower.p()) % tower.p();
            if (ri != 0)
                acc = acc + CycloElement::from_padic(lv, tower.teich(ri));
        }
        return acc;
    };

    auto comps = cascade(eval_at_level(probe_depth), probe_depth, lo, hi);
    NormSequence s = NormSequence::unchecked(tower.p(), lo, hi, std::move(comps));
    // Adjacent-pair witnesses (compatible by construction).
    for (int m = lo; m < hi; ++m) {
        auto v = vanishing_of(norm_down(s.component(m + 1)) - s.component(m));
        if (!v.clean) throw CompatibilityFailure("cascade lost norm compatibility (bug)");
        s.witnesses.push_back(v.certified);
    }
    // Lemma 3.10: component at m matches the direct evaluation mod m^r(m).
    for (int m = lo; m <= hi; ++m) {
        long r = r_of_level(tower.p(), m);
        auto v = vanishing_of(s.component(m) - eval_at_level(m));
        if (!v.clean && v.certified < r)
            throw CompatibilityFailure("series congruence failed at level " +
                                       std::to_string(m) + " (certified " +
                                       std::to_string(v.certified) + " < r = " +
                                       std::to_string(r) + ")");
    }
    return s;
}

}  // namespace nlab
