#include "nlab/oortlift.hpp"

#include <numeric>
#include <sstream>

#include "nlab/ramification.hpp"

namespace nlab {

namespace {

long power_long(long b, int e) {
    long r = 1;
    while (e-- > 0) r *= b;
    return r;
}

// lambda = zeta_p - 1 viewed inside L^m.
CycloElement lambda1_at(const Tower& tower, int m) {
    CycloElement l1 = tower.lambda(1);
    return m == 1 ? l1 : embed_up(l1, tower.level(m));
}

std::string render_w(const PowerSeries<ZpSeriesRing>& W) {
    std::ostringstream os;
    bool first = true;
    for (long i = 0; i <= W.degree_bound(); ++i) {
        auto c = W.coeff(i);
        if (c.is_exact_zero() || c.is_zero_at_precision()) continue;
        if (!first) os << " + ";
        if (i == 0) {
            os << "1";
        } else {
            if (!(c.valuation() == 0 && c.unit() == 1)) os << c.unit() % W.ring.ctx->p << "*";
            os << "Z^" << i;
        }
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

}  // namespace

KummerCoverSpec make_kummer_spec(const Tower& tower, long c,
                                 const PowerSeries<ZpSeriesRing>& W) {
    long p = tower.p();
    if (c < 1) throw std::invalid_argument("c must be positive");
    if (std::gcd(c, p) != 1)
        throw std::invalid_argument("gcd(c, p) = 1 is required for the standard form");
    if (W.a.empty()) throw std::invalid_argument("W must have constant term 1");
    const auto& c0 = W.coeff(0);
    if (c0.is_zero_at_precision() || c0.valuation() != 0 || c0.unit() != 1)
        throw std::invalid_argument("W must have constant term exactly 1");
    for (long i = 1; i <= W.degree_bound(); ++i) {
        const auto& b = W.coeff(i);
        if (b.is_exact_zero()) continue;
        if (b.is_zero_at_precision())
            throw std::invalid_argument("W coefficient " + std::to_string(i) +
                                        " is an apparent zero; use an exact zero");
        // Teichmuller representatives satisfy b^p = b.
        if (!congruent_mod(b.pow(p), b, b.abs_precision()))
            throw std::invalid_argument("W coefficient " + std::to_string(i) +
                                        " is not a Teichmuller representative");
    }
    return KummerCoverSpec{p, c, W, render_w(W)};
}

KummerCoverSpec make_kummer_spec(const Tower& tower, long c,
                                 const std::vector<long>& w_residues) {
    if (w_residues.empty() || ((w_residues[0] % tower.p()) + tower.p()) % tower.p() != 1)
        throw std::invalid_argument("W must have constant term 1");
    ZpSeriesRing ring(tower.context());
    std::vector<PAdicNumber> coeffs;
    for (long r : w_residues) {
        long rr = ((r % tower.p()) + tower.p()) % tower.p();
        coeffs.push_back(rr == 0 ? ring.zero() : tower.teich(rr));
    }
    long M = std::max<long>(static_cast<long>(coeffs.size()) - 1, 1);
    return make_kummer_spec(tower, c, make_series(ring, std::move(coeffs), M));
}

GenericDifferent generic_different(const Tower& tower, const KummerCoverSpec& spec) {
    auto l1 = tower.level(1);
    CycloSeriesRing ring(l1);
    CycloElement lp = tower.lambda(1).pow(spec.p);
    long M = std::max<long>(spec.c, spec.W.degree_bound());
    std::vector<CycloElement> coeffs(static_cast<size_t>(M) + 1, ring.zero());
    for (long i = 0; i <= spec.W.degree_bound(); ++i) {
        auto wi = spec.W.coeff(i);
        if (wi.is_exact_zero()) continue;
        coeffs[static_cast<size_t>(i)] = CycloElement::from_padic(l1, wi) * lp;
    }
    coeffs[static_cast<size_t>(spec.c)] = coeffs[static_cast<size_t>(spec.c)] + ring.one();
    auto g = make_series(ring, std::move(coeffs), M, spec.W.exact());
    long d = weierstrass_degree(g);
    if (d != spec.c)
        throw WeierstrassDegreeMismatch("Weierstrass degree " + std::to_string(d) +
                                        " of Z^c + W lambda^p differs from c = " +
                                        std::to_string(spec.c));
    return GenericDifferent{spec.c + 1, (spec.c + 1) * (spec.p - 1)};
}

CycloElement specialize_unit(const Tower& tower, const KummerCoverSpec& spec, int m) {
    long D = power_long(spec.p, m);  // p e_m / (p-1)
    if (D <= spec.c)
        throw LevelTooSmall("need p e_m/(p-1) = " + std::to_string(D) + " > c = " +
                            std::to_string(spec.c));
    auto lv = tower.level(m);
    CycloElement pi = tower.lambda(m);
    CycloElement w_at_pi = evaluate_series(spec.W, pi);
    CycloElement lp = lambda1_at(tower, m).pow(spec.p);
    CycloElement u = CycloElement::one(lv) +
                     lp.shift_uniformizer(-spec.c) * w_at_pi;
    long v = (u - CycloElement::one(lv)).valuation();
    if (v != D - spec.c)
        throw Error("nu_m(u_m - 1) = " + std::to_string(v) + " differs from p^m - c = " +
                    std::to_string(D - spec.c) + " (W violates its invariants)");
    return u;
}

long kummer_conductor(const Tower& tower, const CycloElement& u) {
    const LevelPtr& lv = u.level();
    long p = lv->p();
    long D = lv->e() / (p - 1) * p;  // nu_m(lambda^p)
    if (u.is_zero_at_precision() || u.valuation() != 0)
        throw std::invalid_argument("conductor needs a unit argument");
    CycloElement one = CycloElement::one(lv);
    CycloElement cur = u;
    const int cap = 4096;
    for (int iter = 0; iter < cap; ++iter) {
        CycloElement w = cur - one;
        if (w.is_zero_at_precision()) {
            if (w.valuation_lower_bound() > D)
                throw IsPthPower("unit is congruent to 1 beyond nu(lambda^p)");
            throw PrecisionExhausted("unit index unresolved at the tracked precision");
        }
        long v = w.valuation();
        if (v <= 0) throw std::invalid_argument("conductor needs a principal unit");
        if (v > D) throw IsPthPower("unit index exceeds nu(lambda^p)");
        if (v == D) {
            // boundary: probe the p - 1 candidate corrections
            for (long b = 1; b < p; ++b) {
                CycloElement cand = (one + CycloElement::from_padic(lv, tower.teich(b))
                                               .shift_uniformizer(D / p))
                                        .pow(p);
                CycloElement probe = cur * cand - one;
                if (probe.is_zero_at_precision() || probe.valuation() > D)
                    throw IsPthPower("index passes nu(lambda^p) after a boundary correction");
            }
            throw ReductionStuck("index stalled at nu(lambda^p)");
        }
        if (v % p != 0) {
            long cprime = D - v;
            return cprime + 1;
        }
        // p | v: cancel the leading term with a Teichmuller p-th power
        long r = (w.shift_uniformizer(-v)).coords()[0].unit_residue();
        long neg_r = ((-r) % p + p) % p;
        CycloElement corr =
            (one + CycloElement::from_padic(lv, tower.teich(neg_r)).shift_uniformizer(v / p))
            .pow(p);
        cur = cur * corr;
    }
    throw PrecisionExhausted("conductor reduction loop did not terminate");
}

long special_different(const Tower& tower, const KummerCoverSpec& spec, int m) {
    CycloElement u = specialize_unit(tower, spec, m);
    return kummer_conductor(tower, u) * (spec.p - 1);
}

bool eisenstein_check_with_value(const Tower& tower, long c, int m,
                                 const CycloElement& w_at_pi) {
    long p = tower.p();
    long D = power_long(p, m);
    if (D <= c) throw LevelTooSmall("need p^m > c for the integral substitution");
    auto lv = tower.level(m);
    if (w_at_pi.is_zero_at_precision() || w_at_pi.valuation() != 0)
        return false;  // W degenerates at the point: no unit class to certify
    CycloElement pi = tower.lambda(m);
    CycloElement lp = lambda1_at(tower, m).pow(p);
    CycloElement g = pi.pow(c) + w_at_pi * lp;
    if (g.valuation() != c) return false;  // nu of the inner factor, prime to p
    CycloElement rhs = pi.pow((p - 1) * c) * g;
    if (rhs.valuation() != p * c) return false;  // constant term is p * (prime to p)
    // depressed unit class: principal and wildly ramified with conductor c+1
    CycloElement u = rhs.shift_uniformizer(-p * c);
    CycloElement w = u - CycloElement::one(lv);
    if (w.is_zero_at_precision() || w.valuation() != D - c) return false;
    try {
        return kummer_conductor(tower, u) == c + 1;
    } catch (const IsPthPower&) {
        return false;
    }
}

bool eisenstein_specialization_check(const Tower& tower, const KummerCoverSpec& spec,
                                     int m) {
    CycloElement pi = tower.lambda(m);
    return eisenstein_check_with_value(tower, spec.c, m, evaluate_series(spec.W, pi));
}

PthPowerCheck pth_power_lemma_check(const Tower& tower, const KummerCoverSpec& spec,
                                    int m) {
    long p = tower.p();
    long D = power_long(p, m + 1);  // nu_{m+1}(lambda^p)
    auto up = tower.level(m + 1);
    if (static_cast<long>(tower.relprec()) * up->e() <= D + 5)
        throw PrecisionExhausted("working precision does not reach past D = " +
                                 std::to_string(D));
    CycloElement um = specialize_unit(tower, spec, m);
    CycloElement um1 = specialize_unit(tower, spec, m + 1);
    CycloElement lam_up = lambda1_at(tower, m + 1);
    CycloElement corr =
        (CycloElement::one(up) - lam_up.shift_uniformizer(-spec.c)).pow(p);
    CycloElement q = embed_up(um, up) * um1.inverse() * corr;
    CycloElement diff = q - CycloElement::one(up);
    PthPowerCheck out{};
    out.D = D;
    out.resolved = !diff.is_zero_at_precision();
    out.certified = out.resolved ? diff.valuation() : diff.valuation_lower_bound();
    out.ok = out.certified > D;
    return out;
}

int compute_m0(const Tower&, const KummerCoverSpec& spec) {
    for (int m = 1; m <= 8; ++m) {
        long e_over = power_long(spec.p, m - 1);  // e_m / (p-1)
        if (e_over <= 2 * spec.c) continue;
        if (r_of_level(spec.p, m) > 2 * spec.c) return m;
    }
    throw LevelTooSmall("no admissible m_0 within the desk-scale tower");
}

// ---------------------------------------------------------------------------
// Explicit adjunction cross-check

namespace {

// Elements of N = L^m[T]/(T^p - u) as coefficient vectors over L^m.
struct KummerExt {
    LevelPtr lv;
    long p;
    CycloElement u;
    std::vector<CycloElement> zeta_pow;  // powers of zeta_p inside L^m

    using Elt = std::vector<CycloElement>;

    Elt zero() const { return Elt(static_cast<size_t>(p), CycloElement::zero(lv)); }

    Elt mul(const Elt& a, const Elt& b) const {
        std::vector<CycloElement> t(static_cast<size_t>(2 * p - 1),
                                    CycloElement::zero(lv));
        for (long i = 0; i < p; ++i)
            for (long j = 0; j < p; ++j)
                t[static_cast<size_t>(i + j)] += a[static_cast<size_t>(i)] *
                                                 b[static_cast<size_t>(j)];
        Elt out(t.begin(), t.begin() + p);
        for (long k = p; k <= 2 * p - 2; ++k)
            out[static_cast<size_t>(k - p)] += t[static_cast<size_t>(k)] * u;
        return out;
    }

    Elt pow(Elt base, long n) const {
        Elt acc = zero();
        acc[0] = CycloElement::one(lv);
        while (n > 0) {
            if (n & 1) acc = mul(acc, base);
            n >>= 1;
            if (n > 0) base = mul(base, base);
        }
        return acc;
    }

    Elt galois(const Elt& a, long j) const {  // t -> zeta^j t
        Elt out = a;
        for (long i = 1; i < p; ++i)
            out[static_cast<size_t>(i)] =
                out[static_cast<size_t>(i)] * zeta_pow[static_cast<size_t>((i * j) % p)];
        return out;
    }

    // Norm to L^m; CoercionFailure if the product has stray T-components.
    CycloElement norm(const Elt& a) const {
        Elt acc = a;
        for (long j = 1; j < p; ++j) acc = mul(acc, galois(a, j));
        for (long i = 1; i < p; ++i)
            if (!acc[static_cast<size_t>(i)].is_zero_at_precision())
                throw CoercionFailure("norm has a stray component along T^" +
                                      std::to_string(i));
        return acc[0];
    }

    long valuation(const Elt& a) const { return norm(a).valuation(); }
};

}  // namespace

CrossCheck explicit_kummer_crosscheck(const Tower& tower, const CycloElement& u) {
    const LevelPtr& lv = u.level();
    long p = tower.p();
    KummerExt N{lv, p, u, {}};
    CycloElement zeta = CycloElement::one(lv) + lambda1_at(tower, lv->m());
    N.zeta_pow.push_back(CycloElement::one(lv));
    for (long k = 1; k < p; ++k) N.zeta_pow.push_back(N.zeta_pow.back() * zeta);

    // s = t - 1 has nu_N = D - c' where c' + 1 is the conductor.
    KummerExt::Elt s = N.zero();
    s[1] = CycloElement::one(lv);
    s[0] = -CycloElement::one(lv);
    long w = N.valuation(s);
    if (w <= 0 || w % p == 0)
        throw Error("cross-check: t - 1 does not have the expected valuation shape");
    // uniformizer s^x pi^y with x w + y p = 1, 1 <= x < p
    long x = 1;
    while ((x * w) % p != 1) ++x;
    long y = (1 - x * w) / p;
    KummerExt::Elt unif = N.pow(s, x);
    CycloElement piy = CycloElement::one(lv).shift_uniformizer(y);
    for (auto& comp : unif) comp = comp * piy;
    if (N.valuation(unif) != 1) throw Error("cross-check uniformizer is off");

    CrossCheck out{0, 0};
    long first_i = -1;
    for (long j = 1; j < p; ++j) {
        KummerExt::Elt diff = N.galois(unif, j);
        for (long i = 0; i < p; ++i)
            diff[static_cast<size_t>(i)] -= unif[static_cast<size_t>(i)];
        long ij = N.valuation(diff) - 1;
        if (first_i < 0) first_i = ij;
        if (ij != first_i) throw Error("cross-check breaks differ across the group");
        out.different_degree += ij + 1;
    }
    out.conductor = first_i + 1;
    return out;
}

OortReport verify(const Tower& tower, const KummerCoverSpec& spec, int extra_levels,
                  bool cross_check) {
    OortReport rep{};
    rep.p = spec.p;
    rep.c = spec.c;
    rep.w_text = spec.w_text;
    rep.precision = tower.relprec();
    auto gen = generic_different(tower, spec);
    rep.branch_count = gen.branch_count;
    rep.d_eta = gen.d_eta;
    rep.m0 = compute_m0(tower, spec);
    rep.pass = true;
    auto fail = [&](const std::string& why) {
        if (rep.pass) {
            rep.pass = false;
            rep.first_fail = why;
        }
    };

    for (int m = rep.m0; m <= rep.m0 + extra_levels; ++m) {
        LevelRecord lr{};
        lr.m = m;
        lr.cross_different = -1;
        CycloElement u = specialize_unit(tower, spec, m);
        lr.nu_u_minus_1 = (u - CycloElement::one(tower.level(m))).valuation();
        try {
            lr.conductor = kummer_conductor(tower, u);
            lr.d_m = lr.conductor * (spec.p - 1);
        } catch (const IsPthPower&) {
            lr.conductor = 0;
            lr.d_m = 0;
            fail("specialized unit at level " + std::to_string(m) + " is a p-th power");
        }
        lr.eisenstein_ok = eisenstein_specialization_check(tower, spec, m);
        if (!lr.eisenstein_ok)
            fail("Eisenstein specialization check failed at level " + std::to_string(m));
        if (lr.d_m != rep.d_eta)
            fail("d_" + std::to_string(m) + " = " + std::to_string(lr.d_m) +
                 " differs from d_eta = " + std::to_string(rep.d_eta));
        if (cross_check && spec.p == 3 && m <= 2) {
            auto cx = explicit_kummer_crosscheck(tower, u);
            lr.cross_checked = true;
            lr.cross_different = cx.different_degree;
            if (cx.different_degree != lr.d_m || cx.conductor != lr.conductor)
                fail("explicit adjunction disagrees with the break formula at level " +
                     std::to_string(m));
        }
        rep.levels.push_back(lr);
    }
    for (int m = rep.m0; m < rep.m0 + extra_levels; ++m) {
        auto pc = pth_power_lemma_check(tower, spec, m);
        rep.pairs.push_back(PairRecord{m, m + 1, pc.D, pc.certified, pc.ok});
        if (!pc.ok)
            fail("p-th power congruence failed for levels (" + std::to_string(m) + ", " +
                 std::to_string(m + 1) + ")");
    }
    return rep;
}

}  // namespace nlab
