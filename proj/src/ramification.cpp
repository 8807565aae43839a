#include "nlab/ramification.hpp"

#include <algorithm>

namespace nlab {

namespace {

long power_long(long b, int e) {
    long r = 1;
    while (e-- > 0) r *= b;
    return r;
}

// Exponents of Gal(L^top | L^base) as classes mod p^top, identity included.
std::vector<long> group_elements(const Extension& ext) {
    long mod = power_long(ext.p, ext.top_m);
    long step_mod = power_long(ext.p, ext.base_m);  // a = 1 mod p^base
    std::vector<long> out;
    for (long a = 1; a < mod; ++a) {
        if (a % ext.p == 0) continue;
        if (ext.base_m >= 1 && (a - 1) % step_mod != 0) continue;
        out.push_back(a);
    }
    return out;
}

void validate(const Extension& ext) {
    if (ext.base_m < 0 || ext.top_m <= ext.base_m)
        throw std::invalid_argument("extension needs 0 <= base < top");
}

}  // namespace

PiecewiseLinearFn::PiecewiseLinearFn(std::vector<std::pair<Rat, Rat>> breakpoints,
                                     std::vector<Rat> slopes)
    : bp_(std::move(breakpoints)), slopes_(std::move(slopes)) {
    if (bp_.empty() || slopes_.size() != bp_.size())
        throw std::invalid_argument("breakpoint/slope shape mismatch");
    for (size_t i = 0; i + 1 < bp_.size(); ++i) {
        if (!(bp_[i].first < bp_[i + 1].first && bp_[i].second < bp_[i + 1].second))
            throw std::invalid_argument("breakpoints must increase strictly");
        Rat s = (bp_[i + 1].second - bp_[i].second) / (bp_[i + 1].first - bp_[i].first);
        if (s != slopes_[i]) throw std::invalid_argument("slope inconsistent with breakpoints");
    }
    for (const Rat& s : slopes_)
        if (s <= Rat(0)) throw std::invalid_argument("slopes must be positive");
}

Rat PiecewiseLinearFn::operator()(const Rat& x) const {
    if (x < bp_.front().first)
        throw std::domain_error("piecewise-linear function evaluated left of its domain");
    size_t k = 0;
    while (k + 1 < bp_.size() && x >= bp_[k + 1].first) ++k;
    return bp_[k].second + slopes_[k] * (x - bp_[k].first);
}

PiecewiseLinearFn PiecewiseLinearFn::inverse() const {
    std::vector<std::pair<Rat, Rat>> bp;
    bp.reserve(bp_.size());
    for (const auto& [x, y] : bp_) bp.emplace_back(y, x);
    std::vector<Rat> slopes;
    slopes.reserve(slopes_.size());
    for (const Rat& s : slopes_) slopes.push_back(Rat(1) / s);
    return PiecewiseLinearFn(std::move(bp), std::move(slopes));
}

long i_value(const Extension& ext, long a) {
    validate(ext);
    long mod = power_long(ext.p, ext.top_m);
    long aa = ((a % mod) + mod) % mod;
    if (aa == 0 || aa % ext.p == 0)
        throw std::invalid_argument("Galois exponent must be prime to p");
    if (ext.base_m >= 1 && (aa - 1) % power_long(ext.p, ext.base_m) != 0)
        throw std::invalid_argument("exponent does not fix the base level");
    if (aa == 1) throw TrivialElement("i_L of the identity is +infinity");
    auto lv = tower_level(ext.p, ext.top_m);
    CycloElement lam = CycloElement::lambda(lv);
    CycloElement diff = sigma_lambda(lv, aa) - lam;
    return diff.valuation() - 1;
}

RamificationProfile filtration(const Extension& ext) {
    validate(ext);
    RamificationProfile prof;
    prof.ext = ext;
    auto elems = group_elements(ext);
    prof.group_order = static_cast<long>(elems.size());

    long imax = -1;
    for (long a : elems) {
        if (a == 1) continue;
        long i = i_value(ext, a);
        prof.i_table[a] = i;
        imax = std::max(imax, i);
    }

    // n(i) = #G_i for integer i >= -1
    auto order_at = [&](long i) {
        long n = 1;  // identity
        for (const auto& [a, iv] : prof.i_table)
            if (iv >= i) ++n;
        return n;
    };
    long g0 = order_at(0);
    if (g0 != prof.group_order)
        throw Error("tower step is not totally ramified (G_0 != G)");

    prof.different_degree = 0;
    for (const auto& [a, iv] : prof.i_table) prof.different_degree += iv + 1;

    for (long i = 0; i <= imax; ++i)
        if (order_at(i) != order_at(i + 1)) prof.lower_jumps.push_back(i);

    // phi: slope 1 on [-1, 0], then #G_i/#G_0 on (i-1, i]; a breakpoint is
    // emitted wherever the slope changes while walking the integers.
    std::vector<std::pair<Rat, Rat>> bp{{Rat(-1), Rat(-1)}};
    std::vector<Rat> slopes{Rat(1)};
    Rat x(0), y(0), cur(1);
    for (long i = 1; i <= imax + 1; ++i) {
        Rat s(order_at(i), g0);
        if (s != cur) {
            bp.emplace_back(x, y);
            slopes.push_back(s);
            cur = s;
        }
        x += 1;
        y += cur;
    }
    prof.phi = PiecewiseLinearFn(std::move(bp), std::move(slopes));
    prof.psi = prof.phi.inverse();

    for (long j : prof.lower_jumps) {
        Rat u = prof.phi(Rat(j));
        if (u.denominator() != 1)
            throw Error("Hasse-Arf violated on an abelian profile (bug)");
        prof.upper_jumps.push_back(u);
    }
    prof.conductor = prof.upper_jumps.empty()
                         ? 0
                         : rat_ceil(prof.upper_jumps.back()) + 1;
    return prof;
}

std::vector<long> RamificationProfile::lower_group(long t) const {
    std::vector<long> out{1};
    for (const auto& [a, iv] : i_table)
        if (iv >= t) out.push_back(a);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<long> RamificationProfile::upper_group(const Rat& s) const {
    Rat t = s <= Rat(0) ? s : psi(s);
    long tt = rat_ceil(t);
    return lower_group(tt);
}

long different_via_derivative(const Extension& ext) {
    validate(ext);
    auto top = tower_level(ext.p, ext.top_m);
    const auto& ctx = top->context();
    CycloElement lam = CycloElement::lambda(top);
    if (ext.base_m == 0) {
        // f = Phi_{p^top}(1+X), integer coefficients; evaluate f' by Horner.
        const auto& mp = top->minpoly();
        CycloElement acc = CycloElement::zero(top);
        for (size_t k = mp.size() - 1; k >= 1; --k) {
            auto coef = PAdicNumber::from_int(ctx, mpz_class(static_cast<long>(k)) * mp[k]);
            acc = acc * lam + CycloElement::from_padic(top, coef);
        }
        return acc.valuation();
    }
    // f = (1+X)^q - (1+lambda_base): f' = q (1+X)^(q-1)
    long q = power_long(ext.p, ext.top_m - ext.base_m);
    CycloElement onep = lam + CycloElement::one(top);
    CycloElement fp = onep.pow(q - 1) *
                      PAdicNumber::from_long(ctx, q);
    return fp.valuation();
}

Rat apf_first_jump(long p, int m) {
    if (m < 1) throw std::invalid_argument("apf_first_jump needs m >= 1");
    auto prof = filtration(Extension{p, m, m + 1});
    if (prof.upper_jumps.empty()) throw Error("unramified tower step (bug)");
    Rat u = prof.upper_jumps.front();
    if (u <= Rat(0)) throw Error("tower step is not totally wildly ramified (bug)");
    return u;
}

long r_of_level(long p, int m) {
    Rat i = apf_first_jump(p, m);
    return rat_ceil(Rat(p - 1, p) * i);
}

bool quotient_compatible(long p, int base_m, int mid_m, int top_m, int grid_points) {
    if (!(base_m < mid_m && mid_m < top_m))
        throw std::invalid_argument("need base < mid < top");
    auto big = filtration(Extension{p, base_m, top_m});
    auto quo = filtration(Extension{p, base_m, mid_m});
    long mid_mod = power_long(p, mid_m);

    std::vector<Rat> grid{Rat(-1), Rat(-1, 2), Rat(0)};
    Rat hi = big.upper_jumps.empty() ? Rat(2) : big.upper_jumps.back() + Rat(2);
    for (int k = 1; k <= grid_points; ++k)
        grid.push_back(Rat(-1) + Rat(k * 2, grid_points) * (hi + Rat(1)) / Rat(2));
    for (const Rat& u : big.upper_jumps) {
        grid.push_back(u);
        grid.push_back(u + Rat(1, 3));
        if (u - Rat(1, 3) >= Rat(-1)) grid.push_back(u - Rat(1, 3));
    }

    for (const Rat& s : grid) {
        auto gs = big.upper_group(s);
        std::vector<long> image;
        for (long a : gs) image.push_back(a % mid_mod);
        std::sort(image.begin(), image.end());
        image.erase(std::unique(image.begin(), image.end()), image.end());
        auto qs = quo.upper_group(s);
        if (image != qs) return false;
    }
    return true;
}

}  // namespace nlab
