#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nlab/cyclotomic.hpp"
#include "nlab/padic.hpp"

namespace nlab {

// Truncated power series over Z_p or R_{L^1} = Z_p[zeta_p], Weierstrass
// preparation by the classical split-and-iterate division, rational
// sections kept in factored form, and specialization at points of the
// open disc with an explicit truncation-tail precision clamp.
//
// A series carries its truncation order M ("known mod Z^(M+1)") plus a
// tail bound: the Z-order below which nothing was discarded. Series built
// from honest polynomials have no tail (exact); arithmetic propagates the
// bound conservatively and specialization clamps result precision by
// tail * nu(alpha) - nu(f2(alpha)).

// ---------------------------------------------------------------------------
// Coefficient ring adapters

struct ZpSeriesRing {
    using Elt = PAdicNumber;
    const PadicContext* ctx;

    explicit ZpSeriesRing(const PadicContext& c) : ctx(&c) {}

    Elt zero() const { return PAdicNumber::zero(*ctx); }
    Elt one() const { return PAdicNumber::from_long(*ctx, 1); }
    static bool exact_zero(const Elt& x) { return x.is_exact_zero(); }
    static bool zero_at_precision(const Elt& x) { return x.is_zero_at_precision(); }
    static long val(const Elt& x) { return x.valuation(); }
    static long val_lower(const Elt& x) { return x.valuation_lower_bound(); }
    static long abs_prec(const Elt& x) { return x.abs_precision(); }
    static Elt shift(const Elt& x, long k) { return x.shift(k); }
    static Elt add(const Elt& a, const Elt& b) { return a + b; }
    static Elt sub(const Elt& a, const Elt& b) { return a - b; }
    static Elt mul(const Elt& a, const Elt& b) { return a * b; }
    static Elt neg(const Elt& a) { return -a; }
    static Elt inv(const Elt& a) { return a.inverse(); }
    static Elt clamp(const Elt& a, long abs) { return a.with_abs_precision(abs); }
    static bool congruent(const Elt& a, const Elt& b, long k) {
        return congruent_mod(a, b, k);
    }
    static bool identical(const Elt& a, const Elt& b) { return a.identical_to(b); }
    std::string tag() const { return "Zp"; }
    long p() const { return ctx->p; }
};

struct CycloSeriesRing {
    using Elt = CycloElement;
    LevelPtr level;

    explicit CycloSeriesRing(LevelPtr lv) : level(std::move(lv)) {}

    Elt zero() const { return CycloElement::zero(level); }
    Elt one() const { return CycloElement::one(level); }
    static bool exact_zero(const Elt& x) { return x.is_exact_zero(); }
    static bool zero_at_precision(const Elt& x) { return x.is_zero_at_precision(); }
    static long val(const Elt& x) { return x.valuation(); }
    static long val_lower(const Elt& x) { return x.valuation_lower_bound(); }
    static long abs_prec(const Elt& x) { return x.abs_precision(); }
    static Elt shift(const Elt& x, long k) { return x.shift_uniformizer(k); }
    static Elt add(const Elt& a, const Elt& b) { return a + b; }
    static Elt sub(const Elt& a, const Elt& b) { return a - b; }
    static Elt mul(const Elt& a, const Elt& b) { return a * b; }
    static Elt neg(const Elt& a) { return -a; }
    static Elt inv(const Elt& a) { return a.inverse(); }
    static Elt clamp(const Elt& a, long abs) { return a.with_abs_precision(abs); }
    static bool congruent(const Elt& a, const Elt& b, long k) {
        return congruent_mod_m(a, b, k);
    }
    static bool identical(const Elt& a, const Elt& b) { return a.identical_to(b); }
    std::string tag() const { return level->m() == 1 ? "R1" : "R" + std::to_string(level->m()); }
    long p() const { return level->p(); }
};

// Embedding of a coefficient into L^target, and the valuation of the
// coefficient ring's uniformizer there.
inline CycloElement embed_coeff(const ZpSeriesRing&, const PAdicNumber& x,
                                const LevelPtr& target) {
    return CycloElement::from_padic(target, x);
}
inline CycloElement embed_coeff(const CycloSeriesRing&, const CycloElement& x,
                                const LevelPtr& target) {
    return embed_up(x, target);
}
inline long uniformizer_val_at(const ZpSeriesRing&, const LevelPtr& target) {
    return target->e();
}
inline long uniformizer_val_at(const CycloSeriesRing& r, const LevelPtr& target) {
    if (target->m() < r.level->m())
        throw LevelMismatch("specialization point below the coefficient ring");
    long v = 1;
    for (int i = r.level->m(); i < target->m(); ++i) v *= r.level->p();
    return v;
}

// ---------------------------------------------------------------------------
// Series

inline constexpr long kNoTail = std::numeric_limits<long>::max();

template <typename Ring>
struct PowerSeries {
    using Elt = typename Ring::Elt;

    Ring ring;
    long M = 0;                 // known modulo Z^(M+1)
    std::vector<Elt> a;         // a[i] is the Z^i coefficient, size <= M+1
    long tail = kNoTail;        // discarded tail sits in Z^tail R[[Z]]

    Elt coeff(long i) const {
        if (i < 0 || static_cast<size_t>(i) >= a.size()) return ring.zero();
        return a[static_cast<size_t>(i)];
    }
    long degree_bound() const { return static_cast<long>(a.size()) - 1; }
    bool exact() const { return tail == kNoTail; }
};

// Builds a series from explicit coefficients. When `exact` the object is a
// genuine polynomial (degree <= M required); otherwise the tail starts at
// M+1. Coefficients must be certified integral.
template <typename Ring>
PowerSeries<Ring> make_series(const Ring& ring,
                              std::vector<typename Ring::Elt> coeffs, long M,
                              bool exact = true) {
    if (M < 0) throw std::invalid_argument("truncation order must be >= 0");
    if (static_cast<long>(coeffs.size()) > M + 1)
        throw std::invalid_argument("more coefficients than the truncation order admits");
    for (const auto& c : coeffs)
        if (Ring::val_lower(c) < 0)
            throw std::invalid_argument("series coefficients must be ring-integral");
    PowerSeries<Ring> s{ring, M, std::move(coeffs), exact ? kNoTail : M + 1};
    return s;
}

template <typename Ring>
PowerSeries<Ring> series_zero(const Ring& ring, long M) {
    return PowerSeries<Ring>{ring, M, {}, kNoTail};
}

template <typename Ring>
PowerSeries<Ring> operator+(const PowerSeries<Ring>& x, const PowerSeries<Ring>& y) {
    long M = std::min(x.M, y.M);
    long n = std::min(static_cast<long>(std::max(x.a.size(), y.a.size())), M + 1);
    std::vector<typename Ring::Elt> c;
    c.reserve(static_cast<size_t>(n));
    for (long i = 0; i < n; ++i) c.push_back(Ring::add(x.coeff(i), y.coeff(i)));
    return PowerSeries<Ring>{x.ring, M, std::move(c), std::min(x.tail, y.tail)};
}

template <typename Ring>
PowerSeries<Ring> operator-(const PowerSeries<Ring>& x, const PowerSeries<Ring>& y) {
    long M = std::min(x.M, y.M);
    long n = std::min(static_cast<long>(std::max(x.a.size(), y.a.size())), M + 1);
    std::vector<typename Ring::Elt> c;
    c.reserve(static_cast<size_t>(n));
    for (long i = 0; i < n; ++i) c.push_back(Ring::sub(x.coeff(i), y.coeff(i)));
    return PowerSeries<Ring>{x.ring, M, std::move(c), std::min(x.tail, y.tail)};
}

template <typename Ring>
PowerSeries<Ring> operator*(const PowerSeries<Ring>& x, const PowerSeries<Ring>& y) {
    long M = std::min(x.M, y.M);
    long degsum = x.degree_bound() + y.degree_bound();
    long n = std::min(degsum, M) + 1;
    if (n < 1) n = 1;
    std::vector<typename Ring::Elt> c(static_cast<size_t>(n), x.ring.zero());
    for (size_t i = 0; i < x.a.size(); ++i) {
        if (Ring::exact_zero(x.a[i])) continue;
        for (size_t j = 0; j < y.a.size() && i + j < static_cast<size_t>(n); ++j) {
            if (Ring::exact_zero(y.a[j])) continue;
            c[i + j] = Ring::add(c[i + j], Ring::mul(x.a[i], y.a[j]));
        }
    }
    long tail = std::min(x.tail, y.tail);
    if (tail == kNoTail && degsum > M) tail = M + 1;  // truncated an exact product
    return PowerSeries<Ring>{x.ring, M, std::move(c), tail};
}

template <typename Ring>
PowerSeries<Ring> scale(const PowerSeries<Ring>& x, const typename Ring::Elt& s) {
    auto c = x.a;
    for (auto& v : c) v = Ring::mul(v, s);
    return PowerSeries<Ring>{x.ring, x.M, std::move(c), x.tail};
}

// Multiply every coefficient by uniformizer^k.
template <typename Ring>
PowerSeries<Ring> shift_content(const PowerSeries<Ring>& x, long k) {
    auto c = x.a;
    for (auto& v : c) v = Ring::shift(v, k);
    return PowerSeries<Ring>{x.ring, x.M, std::move(c), x.tail};
}

template <typename Ring>
bool series_zero_at_precision(const PowerSeries<Ring>& x) {
    for (const auto& v : x.a)
        if (!Ring::zero_at_precision(v)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Weierstrass machinery

// Least index with a unit coefficient; ReducesToZero when everything up to
// M is certified to lie in the maximal ideal.
template <typename Ring>
long weierstrass_degree(const PowerSeries<Ring>& g) {
    for (long i = 0; i <= g.M; ++i) {
        const auto c = g.coeff(i);
        if (Ring::exact_zero(c)) continue;
        if (Ring::zero_at_precision(c)) {
            if (Ring::val_lower(c) >= 1) continue;  // certified in m
            throw PrecisionExhausted("coefficient " + std::to_string(i) +
                                     " cannot be certified unit or non-unit");
        }
        long v = Ring::val(c);
        if (v == 0) return i;
    }
    throw ReducesToZero("series reduces to 0 modulo the maximal ideal up to Z^" +
                        std::to_string(g.M));
}

// Newton inversion of a series with unit constant term, modulo Z^(M+1).
template <typename Ring>
PowerSeries<Ring> invert_unit_series(const PowerSeries<Ring>& g) {
    if (g.a.empty() || Ring::zero_at_precision(g.a[0]) || Ring::val(g.a[0]) != 0)
        throw std::invalid_argument("series inversion needs a unit constant term");
    long M = g.M;
    std::vector<typename Ring::Elt> y0{Ring::inv(g.a[0])};
    PowerSeries<Ring> y{g.ring, M, std::move(y0), kNoTail};
    PowerSeries<Ring> one{g.ring, M, {g.ring.one()}, kNoTail};
    int steps = 1;
    while ((1L << steps) < M + 1) ++steps;
    for (int k = 0; k <= steps; ++k) y = y + y * (one - g * y);
    long tail = std::min(g.tail, g.degree_bound() > 0 ? M + 1 : kNoTail);
    y.tail = tail;
    return y;
}

template <typename Ring>
struct DistinguishedPoly {
    using Elt = typename Ring::Elt;
    Ring ring;
    std::vector<Elt> low;  // a_0 .. a_{d-1}; the polynomial is Z^d + sum a_i Z^i

    long degree() const { return static_cast<long>(low.size()); }
};

// Validates that every non-leading coefficient is certified in the maximal
// ideal.
template <typename Ring>
DistinguishedPoly<Ring> make_distinguished(const Ring& ring,
                                           std::vector<typename Ring::Elt> low) {
    for (const auto& c : low)
        if (Ring::val_lower(c) < 1)
            throw std::invalid_argument(
                "distinguished polynomial needs coefficients in the maximal ideal");
    return DistinguishedPoly<Ring>{ring, std::move(low)};
}

template <typename Ring>
PowerSeries<Ring> to_series(const DistinguishedPoly<Ring>& f, long M) {
    std::vector<typename Ring::Elt> c = f.low;
    c.resize(static_cast<size_t>(f.degree()) + 1, f.ring.zero());
    c[static_cast<size_t>(f.degree())] = f.ring.one();
    if (f.degree() > M) throw std::invalid_argument("truncation below the degree");
    return PowerSeries<Ring>{f.ring, M, std::move(c), kNoTail};
}

template <typename Ring>
struct WeierstrassFactorization {
    long c;                     // uniformizer exponent
    DistinguishedPoly<Ring> f;  // distinguished factor
    PowerSeries<Ring> U;        // unit series
};

template <typename Ring>
struct WeierstrassDivision {
    PowerSeries<Ring> q;
    PowerSeries<Ring> r;  // degree < d
};

// h = q g + r with deg r < weierstrass_degree(g); classical iteration on
// the low/high split of g.
//
// A hard Z-truncation leaves the solution pair determined only up to
// m^ceil((M+1-d-i)/d) in the Z^i coefficient (slack enters at the top and
// migrates down d slots per maximal-ideal digit). For exact polynomial
// inputs the working truncation is therefore extended until the slack
// falls beyond the data's own precision; for genuinely truncated series
// the result precision is clamped to the slack bound instead.
template <typename Ring>
WeierstrassDivision<Ring> weierstrass_divide(const PowerSeries<Ring>& h,
                                             const PowerSeries<Ring>& g) {
    long d = weierstrass_degree(g);
    const long Mout = std::min(h.M, g.M);
    const bool exact_inputs = h.exact() && g.exact();
    long T = 0;  // target certified digits
    long M = Mout;
    if (exact_inputs) {
        for (const auto& c : g.a)
            if (!Ring::exact_zero(c)) T = std::max(T, Ring::abs_prec(c));
        for (const auto& c : h.a)
            if (!Ring::exact_zero(c)) T = std::max(T, Ring::abs_prec(c));
        T = std::min<long>(T, 96);
        M = std::max(Mout, d * (T + 3) + std::max(g.degree_bound(), h.degree_bound()));
        M = std::min<long>(M, 4000);
    } else {
        T = (M + 1 - d) / std::max<long>(d, 1);
        if (T <= 0)
            throw PrecisionExhausted("truncation order too small for division by degree " +
                                     std::to_string(d));
    }
    // split g = L + Z^d H
    std::vector<typename Ring::Elt> lowc, highc;
    for (long i = 0; i < d; ++i) lowc.push_back(g.coeff(i));
    for (long i = d; i <= g.degree_bound(); ++i) highc.push_back(g.coeff(i));
    PowerSeries<Ring> L{g.ring, M, std::move(lowc), kNoTail};
    PowerSeries<Ring> H{g.ring, M, std::move(highc), g.tail == kNoTail ? kNoTail : g.tail - d};
    PowerSeries<Ring> Hinv = invert_unit_series(H);
    PowerSeries<Ring> hM{h.ring, M, h.a, h.tail};

    PowerSeries<Ring> q = series_zero(g.ring, M);
    PowerSeries<Ring> r = series_zero(g.ring, M);
    const long cap = T + M + 16;
    for (long iter = 0; iter < cap; ++iter) {
        PowerSeries<Ring> s = hM - L * q;
        std::vector<typename Ring::Elt> rl, sh;
        for (long i = 0; i < d; ++i) rl.push_back(s.coeff(i));
        for (long i = d; i <= s.degree_bound(); ++i) sh.push_back(s.coeff(i));
        PowerSeries<Ring> rn{g.ring, M, std::move(rl), s.tail};
        PowerSeries<Ring> qn = Hinv * PowerSeries<Ring>{g.ring, M, std::move(sh), s.tail};
        bool settled = series_zero_at_precision(qn - q) &&
                       series_zero_at_precision(rn - r);
        q = std::move(qn);
        r = std::move(rn);
        if (settled || iter + 1 == cap) break;
    }
    // Truncate back to the caller's order and apply the honest clamp.
    auto finish = [&](PowerSeries<Ring>& s, bool is_r) {
        if (s.degree_bound() > Mout) s.a.resize(static_cast<size_t>(Mout) + 1);
        s.M = Mout;
        if (!is_r) s.tail = std::min(s.tail, Mout + 1);
        for (long i = 0; i <= s.degree_bound(); ++i) {
            long digits = exact_inputs ? T : std::max<long>(0, (M + 1 - d - i + d - 1) / d);
            s.a[static_cast<size_t>(i)] =
                Ring::clamp(s.a[static_cast<size_t>(i)], digits);
        }
    };
    finish(q, false);
    finish(r, true);
    return {q, r};
}

namespace detail {

// Dense polynomial helpers on coefficient vectors (constant first).
template <typename Ring>
std::vector<typename Ring::Elt> poly_mul(const Ring& ring,
                                         const std::vector<typename Ring::Elt>& a,
                                         const std::vector<typename Ring::Elt>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<typename Ring::Elt> c(a.size() + b.size() - 1, ring.zero());
    for (size_t i = 0; i < a.size(); ++i) {
        if (Ring::exact_zero(a[i])) continue;
        for (size_t j = 0; j < b.size(); ++j) {
            if (Ring::exact_zero(b[j])) continue;
            c[i + j] = Ring::add(c[i + j], Ring::mul(a[i], b[j]));
        }
    }
    return c;
}

// Division by a monic polynomial f (low coefficients f.size()-1 = degree).
template <typename Ring>
void poly_divmod_monic(const Ring& ring, std::vector<typename Ring::Elt> a,
                       const std::vector<typename Ring::Elt>& f,
                       std::vector<typename Ring::Elt>* quot,
                       std::vector<typename Ring::Elt>* rem) {
    long d = static_cast<long>(f.size()) - 1;
    long da = static_cast<long>(a.size()) - 1;
    std::vector<typename Ring::Elt> q(
        static_cast<size_t>(std::max<long>(da - d + 1, 0)), ring.zero());
    for (long k = da; k >= d; --k) {
        auto c = a[static_cast<size_t>(k)];
        q[static_cast<size_t>(k - d)] = c;
        if (Ring::exact_zero(c)) continue;
        for (long j = 0; j <= d; ++j)
            a[static_cast<size_t>(k - d + j)] =
                Ring::sub(a[static_cast<size_t>(k - d + j)],
                          Ring::mul(c, f[static_cast<size_t>(j)]));
    }
    a.resize(static_cast<size_t>(std::min<long>(d, da + 1) < 0 ? 0 : std::min<long>(d, da + 1)));
    if (quot) *quot = std::move(q);
    if (rem) *rem = std::move(a);
}

template <typename Ring>
bool poly_zero_at_precision(const std::vector<typename Ring::Elt>& a) {
    for (const auto& c : a)
        if (!Ring::zero_at_precision(c)) return false;
    return true;
}

// Monic-factor Hensel lifting for an exact polynomial g with Weierstrass
// degree d: returns the distinguished factor to the full precision of the
// data, quadratically and without truncation slack.
template <typename Ring>
std::vector<typename Ring::Elt> lift_distinguished_factor(
    const Ring& ring, const std::vector<typename Ring::Elt>& g, long d) {
    // start: f = Z^d + (low part of g), congruent to z^d mod m
    std::vector<typename Ring::Elt> f(g.begin(), g.begin() + d);
    f.push_back(ring.one());
    std::vector<typename Ring::Elt> u, rem;
    poly_divmod_monic(ring, g, f, &u, &rem);
    // u^(-1) mod f, refreshed by Newton with a warm start each round
    std::vector<typename Ring::Elt> uinv{Ring::inv(u[0])};
    for (int round = 0; round < 40; ++round) {
        if (poly_zero_at_precision<Ring>(rem)) break;
        uinv.resize(static_cast<size_t>(d), ring.zero());
        for (int it = 0; it < 24; ++it) {
            auto prod = poly_mul(ring, u, uinv);
            std::vector<typename Ring::Elt> pr;
            poly_divmod_monic(ring, prod, f, nullptr, &pr);
            pr.resize(static_cast<size_t>(d), ring.zero());
            pr[0] = Ring::sub(pr[0], ring.one());
            if (poly_zero_at_precision<Ring>(pr)) break;
            // uinv -= uinv (u uinv - 1)
            auto corr = poly_mul(ring, uinv, pr);
            std::vector<typename Ring::Elt> cr;
            poly_divmod_monic(ring, corr, f, nullptr, &cr);
            cr.resize(static_cast<size_t>(d), ring.zero());
            for (long i = 0; i < d; ++i)
                uinv[static_cast<size_t>(i)] =
                    Ring::sub(uinv[static_cast<size_t>(i)], cr[static_cast<size_t>(i)]);
        }
        auto delta = poly_mul(ring, rem, uinv);
        std::vector<typename Ring::Elt> dr;
        poly_divmod_monic(ring, delta, f, nullptr, &dr);
        dr.resize(static_cast<size_t>(d), ring.zero());
        for (long i = 0; i < d; ++i)
            f[static_cast<size_t>(i)] =
                Ring::add(f[static_cast<size_t>(i)], dr[static_cast<size_t>(i)]);
        poly_divmod_monic(ring, g, f, &u, &rem);
    }
    if (!poly_zero_at_precision<Ring>(rem))
        throw PrecisionExhausted("distinguished-factor lifting did not settle");
    return f;
}

// U = g / f recovered top-down from the monic side of f; the seed window
// of zeros is pushed far enough out that its error falls beyond `digits`.
template <typename Ring>
PowerSeries<Ring> unit_cofactor(const Ring& ring,
                                const std::vector<typename Ring::Elt>& g, long dg_bound,
                                const std::vector<typename Ring::Elt>& f, long M,
                                long digits) {
    long d = static_cast<long>(f.size()) - 1;
    long mstart = std::max(M, dg_bound) + d * (digits + 4) + 4;
    if (mstart > 20000) mstart = 20000;
    std::vector<typename Ring::Elt> U(static_cast<size_t>(mstart) + 1, ring.zero());
    auto gc = [&](long i) {
        return (i >= 0 && static_cast<size_t>(i) < g.size()) ? g[static_cast<size_t>(i)]
                                                             : ring.zero();
    };
    for (long k = mstart - d; k >= 0; --k) {
        auto acc = gc(k + d);
        for (long j = 0; j < d; ++j) {
            const auto& fj = f[static_cast<size_t>(j)];
            if (Ring::exact_zero(fj)) continue;
            acc = Ring::sub(acc, Ring::mul(fj, U[static_cast<size_t>(k + d - j)]));
        }
        U[static_cast<size_t>(k)] = acc;
    }
    U.resize(static_cast<size_t>(M) + 1);
    for (auto& c : U) c = Ring::clamp(c, digits);
    return PowerSeries<Ring>{ring, M, std::move(U), M + 1};
}

}  // namespace detail

// g = uniformizer^c * f * U uniquely; verified by reconstruction before
// returning.
template <typename Ring>
WeierstrassFactorization<Ring> weierstrass_prepare(const PowerSeries<Ring>& g) {
    if (g.a.empty()) throw ReducesToZero("empty series");
    bool all_exact_zero = true;
    long content = PAdicNumber::kInfVal;
    long unresolved = PAdicNumber::kInfVal;
    for (const auto& c : g.a) {
        if (Ring::exact_zero(c)) continue;
        all_exact_zero = false;
        if (Ring::zero_at_precision(c))
            unresolved = std::min(unresolved, Ring::val_lower(c));
        else
            content = std::min(content, Ring::val(c));
    }
    if (all_exact_zero) throw ReducesToZero("zero series has no preparation");
    if (content == PAdicNumber::kInfVal)
        throw PrecisionExhausted("series is zero at precision; content unresolved");
    if (unresolved < content)
        throw PrecisionExhausted("apparent-zero coefficient could undercut the content");

    PowerSeries<Ring> g1 = shift_content(g, -content);
    long d = weierstrass_degree(g1);
    WeierstrassFactorization<Ring> out{content,
                                       DistinguishedPoly<Ring>{g.ring, {}},
                                       series_zero(g.ring, g.M)};
    if (d == 0) {
        out.U = g1;
    } else if (g1.exact()) {
        // Polynomial input: quadratic monic-factor lifting, then the unit
        // cofactor by the top-down recurrence.
        std::vector<typename Ring::Elt> gv = g1.a;
        if (static_cast<long>(gv.size()) < d + 1) gv.resize(static_cast<size_t>(d) + 1, g.ring.zero());
        auto fv = detail::lift_distinguished_factor(g.ring, gv, d);
        long T = 0;
        for (const auto& c : g1.a)
            if (!Ring::exact_zero(c)) T = std::max(T, Ring::abs_prec(c));
        T = std::min<long>(T, 96);
        out.U = detail::unit_cofactor(g.ring, gv, g1.degree_bound(), fv, g1.M, T);
        fv.pop_back();  // drop the monic leading 1
        out.f = make_distinguished(g.ring, std::move(fv));
    } else {
        PowerSeries<Ring> zd{g.ring, g1.M, {}, kNoTail};
        zd.a.assign(static_cast<size_t>(d) + 1, g.ring.zero());
        zd.a[static_cast<size_t>(d)] = g.ring.one();
        auto div = weierstrass_divide(zd, g1);
        std::vector<typename Ring::Elt> low;
        for (long i = 0; i < d; ++i) low.push_back(Ring::neg(div.r.coeff(i)));
        out.f = make_distinguished(g.ring, std::move(low));
        out.U = invert_unit_series(div.q);
    }
    // Reconstruction: uniformizer^c f U must reproduce g at precision.
    PowerSeries<Ring> recon = shift_content(to_series(out.f, g1.M) * out.U, content);
    for (long i = 0; i <= std::min(g.M, recon.M); ++i) {
        auto diff = Ring::sub(recon.coeff(i), g.coeff(i));
        if (!Ring::zero_at_precision(diff))
            throw PrecisionExhausted("Weierstrass reconstruction mismatch at Z^" +
                                     std::to_string(i));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Rational sections A(Z) = uniformizer^c f1 U / f2 and specialization

template <typename Ring>
struct RationalSection {
    long c;
    DistinguishedPoly<Ring> f1;
    PowerSeries<Ring> U;
    DistinguishedPoly<Ring> f2;

    long d1() const { return f1.degree(); }
    long d2() const { return f2.degree(); }
};

// Preparation of the numerator; c adds any explicit uniformizer power.
template <typename Ring>
RationalSection<Ring> make_rational_section(const PowerSeries<Ring>& numerator,
                                            const DistinguishedPoly<Ring>& denominator,
                                            long c_extra = 0) {
    auto w = weierstrass_prepare(numerator);
    return RationalSection<Ring>{w.c + c_extra, w.f, w.U, denominator};
}

// Evaluates a polynomial/series at a point of L^target by Horner.
template <typename Ring>
CycloElement eval_at(const Ring& ring, const std::vector<typename Ring::Elt>& coeffs,
                     bool monic, const CycloElement& alpha) {
    const LevelPtr& lv = alpha.level();
    CycloElement acc = monic ? CycloElement::one(lv) : CycloElement::zero(lv);
    for (size_t i = coeffs.size(); i-- > 0;)
        acc = acc * alpha + embed_coeff(ring, coeffs[i], lv);
    return acc;
}

// Series value at alpha with the truncation clamp; OutsideDisc if
// nu(alpha) <= 0.
template <typename Ring>
CycloElement evaluate_series(const PowerSeries<Ring>& s, const CycloElement& alpha) {
    long va = alpha.valuation();
    if (va <= 0) throw OutsideDisc("specialization point must satisfy nu > 0");
    CycloElement v = eval_at(s.ring, s.a, false, alpha);
    if (s.tail != kNoTail) v = v.with_abs_precision(s.tail * va);
    return v;
}

// A(alpha) = uniformizer^c f1(alpha) U(alpha) / f2(alpha).
template <typename Ring>
CycloElement specialize(const RationalSection<Ring>& A, const CycloElement& alpha) {
    long va = alpha.valuation();
    if (va <= 0) throw OutsideDisc("specialization point must satisfy nu > 0");
    const LevelPtr& lv = alpha.level();
    CycloElement den = eval_at(A.f2.ring, A.f2.low, true, alpha);
    if (den.is_zero_at_precision())
        throw DenominatorVanishes("f2 vanishes at the requested point");
    long vden = den.valuation();
    CycloElement num = eval_at(A.f1.ring, A.f1.low, true, alpha);
    CycloElement uval = eval_at(A.U.ring, A.U.a, false, alpha);
    CycloElement unif_c = embed_coeff(A.U.ring, Ring::shift(A.U.ring.one(), A.c), lv);
    CycloElement out = unif_c * num * uval / den;
    if (A.U.tail != kNoTail)
        out = out.with_abs_precision(A.U.tail * va - vden);
    return out;
}

// Product of monic polynomials with maximal-ideal lower coefficients is
// again distinguished.
template <typename Ring>
DistinguishedPoly<Ring> dist_mul(const DistinguishedPoly<Ring>& f,
                                 const DistinguishedPoly<Ring>& g) {
    long M = f.degree() + g.degree();
    auto prod = to_series(f, M) * to_series(g, M);
    std::vector<typename Ring::Elt> low;
    for (long i = 0; i < M; ++i) low.push_back(prod.coeff(i));
    return make_distinguished(f.ring, std::move(low));
}

template <typename Ring>
RationalSection<Ring> section_mul(const RationalSection<Ring>& A,
                                  const RationalSection<Ring>& B) {
    return RationalSection<Ring>{A.c + B.c, dist_mul(A.f1, B.f1), A.U * B.U,
                                 dist_mul(A.f2, B.f2)};
}

// A + B over the common denominator f2a f2b; the numerator is re-prepared.
template <typename Ring>
RationalSection<Ring> section_add(const RationalSection<Ring>& A,
                                  const RationalSection<Ring>& B) {
    long M = std::max(A.U.M, B.U.M) + A.d1() + B.d1() + A.d2() + B.d2();
    auto na = shift_content(to_series(A.f1, M) * A.U * to_series(B.f2, M), A.c);
    auto nb = shift_content(to_series(B.f1, M) * B.U * to_series(A.f2, M), B.c);
    return make_rational_section(na + nb, dist_mul(A.f2, B.f2));
}

// nu_m(A(pi_m)) = c E + (d1 - d2) without evaluating, valid once every
// maximal-ideal coefficient contributes more than d1 + d2; E is the
// valuation of the coefficient-ring uniformizer at level m.
template <typename Ring>
long specialization_valuation(const RationalSection<Ring>& A, const LevelPtr& target) {
    long E = uniformizer_val_at(A.U.ring, target);
    if (E <= A.d1() + A.d2())
        throw LevelTooSmall("need e_m > d1 + d2 = " + std::to_string(A.d1() + A.d2()));
    return A.c * E + A.d1() - A.d2();
}

// ---------------------------------------------------------------------------
// Eisenstein test

// coeffs: constant first, leading coefficient included (monic expected).
inline bool is_eisenstein(const std::vector<CycloElement>& coeffs) {
    if (coeffs.size() < 2) throw std::invalid_argument("polynomial must have degree >= 1");
    const CycloElement& lead = coeffs.back();
    if (lead.is_zero_at_precision() || lead.valuation() != 0)
        throw std::invalid_argument("polynomial must be monic (unit leading coefficient)");
    for (size_t i = 1; i + 1 < coeffs.size(); ++i) {
        const auto& c = coeffs[i];
        if (c.is_exact_zero()) continue;
        if (c.is_zero_at_precision()) {
            if (c.valuation_lower_bound() >= 1) continue;
            throw PrecisionExhausted("middle coefficient unresolved");
        }
        if (c.valuation() < 1) return false;
    }
    const auto& c0 = coeffs.front();
    if (c0.is_exact_zero()) return false;
    if (c0.is_zero_at_precision())
        throw PrecisionExhausted("constant term unresolved");
    return c0.valuation() == 1;
}

}  // namespace nlab
