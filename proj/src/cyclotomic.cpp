#include "nlab/cyclotomic.hpp"

#include <algorithm>
#include <numeric>

namespace nlab {

namespace {

constexpr int kMaxLevel = 8;
constexpr long kMaxDegree = 4000;

long power_long(long b, int e) {
    long r = 1;
    while (e-- > 0) r *= b;
    return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// TowerLevel construction and caches

namespace {

std::mutex registry_mutex;
std::map<std::pair<long, int>, LevelPtr>& level_registry() {
    static std::map<std::pair<long, int>, LevelPtr> registry;
    return registry;
}

}  // namespace

LevelPtr tower_level(long p, int m) {
    const PadicContext& ctx = padic_context(p);
    if (m < 1 || m > kMaxLevel)
        throw std::invalid_argument("tower level m must be in [1, " +
                                    std::to_string(kMaxLevel) + "]");
    {
        std::lock_guard<std::mutex> lock(registry_mutex);
        auto it = level_registry().find(std::make_pair(p, m));
        if (it != level_registry().end()) return it->second;
    }
    LevelPtr lower;
    if (m >= 2) lower = tower_level(p, m - 1);  // build bottom-up

    auto lv = std::shared_ptr<TowerLevel>(new TowerLevel());
    lv->ctx_ = &ctx;
    lv->m_ = m;
    lv->e_ = power_long(p, m - 1) * (p - 1);
    if (lv->e_ > kMaxDegree)
        throw std::invalid_argument("tower level too deep for desk scale");
    lv->lower_ = lower;

    // Phi_{p^m}(1+X) = sum_{j=0}^{p-1} (1+X)^(j p^(m-1))
    long q = power_long(p, m - 1);
    std::vector<mpz_class> mp(static_cast<size_t>(lv->e_) + 1, mpz_class(0));
    for (long j = 0; j < p; ++j) {
        long n = j * q;
        mpz_class binom = 1;  // C(n, k) built incrementally
        for (long k = 0; k <= n; ++k) {
            mp[static_cast<size_t>(k)] += binom;
            binom = binom * (n - k) / (k + 1);
        }
    }
    // Eisenstein sanity: monic, constant term exactly p, middle terms in (p).
    if (mp[static_cast<size_t>(lv->e_)] != 1 || mp[0] != p)
        throw Error("cyclotomic minimal polynomial construction failed");
    for (long i = 1; i < lv->e_; ++i)
        if (mp[static_cast<size_t>(i)] % p != 0)
            throw Error("cyclotomic minimal polynomial is not Eisenstein");
    lv->minpoly_z_ = mp;
    lv->minpoly_pad_.reserve(static_cast<size_t>(lv->e_));
    for (long i = 0; i < lv->e_; ++i)
        lv->minpoly_pad_.push_back(PAdicNumber::from_int(ctx, mp[static_cast<size_t>(i)]));

    // lambda^(-1) = -(lambda^(e-1) + c_{e-1} lambda^(e-2) + ... + c_1) / p
    lv->inv_lambda_.assign(static_cast<size_t>(lv->e_), PAdicNumber::zero(ctx));
    for (long i = 1; i <= lv->e_; ++i) {
        mpz_class num = -mp[static_cast<size_t>(i)];
        lv->inv_lambda_[static_cast<size_t>(i - 1)] =
            PAdicNumber::from_int(ctx, num).shift(-1);
    }

    LevelPtr out = lv;
    std::lock_guard<std::mutex> lock(registry_mutex);
    auto [pos, inserted] = level_registry().emplace(std::make_pair(p, m), out);
    return inserted ? out : pos->second;
}

Coords mul_coords(const TowerLevel& lv, const Coords& a, const Coords& b) {
    const size_t e = static_cast<size_t>(lv.e_);
    Coords t(2 * e - 1, PAdicNumber::zero(*lv.ctx_));
    for (size_t i = 0; i < e; ++i) {
        if (a[i].is_exact_zero()) continue;
        for (size_t j = 0; j < e; ++j) {
            if (b[j].is_exact_zero()) continue;
            t[i + j] += a[i] * b[j];
        }
    }
    // Reduce top-down: lambda^k = -(sum_i c_i lambda^(k-e+i)) for k >= e.
    for (size_t k = 2 * e - 2; k >= e; --k) {
        PAdicNumber top = t[k];
        if (top.is_exact_zero()) continue;
        for (size_t i = 0; i < e; ++i)
            t[k - e + i] -= top * lv.minpoly_pad_[i];
    }
    t.resize(e);
    return t;
}

const std::vector<Coords>& TowerLevel::mu_powers() const {
    if (m_ < 2) throw LevelMismatch("no lower level below L^1");
    std::call_once(mu_once_, [this] {
        // mu = (1 + lambda)^p - 1, the image of the lower uniformizer.
        Coords lam(static_cast<size_t>(e_), PAdicNumber::zero(*ctx_));
        lam[1] = PAdicNumber::from_long(*ctx_, 1);
        Coords onep = lam;
        onep[0] = PAdicNumber::from_long(*ctx_, 1);
        Coords mu = onep;
        for (long i = 1; i < ctx_->p; ++i) mu = mul_coords(*this, mu, onep);
        mu[0] -= PAdicNumber::from_long(*ctx_, 1);
        long elow = lower_->e();
        mu_powers_.reserve(static_cast<size_t>(elow));
        Coords one(static_cast<size_t>(e_), PAdicNumber::zero(*ctx_));
        one[0] = PAdicNumber::from_long(*ctx_, 1);
        mu_powers_.push_back(one);
        for (long k = 1; k < elow; ++k)
            mu_powers_.push_back(mul_coords(*this, mu_powers_.back(), mu));
    });
    return mu_powers_;
}

const std::vector<Coords>& TowerLevel::down_basis() const {
    if (m_ < 2) throw LevelMismatch("no lower level below L^1");
    std::call_once(basis_once_, [this] {
        const auto& mp = mu_powers();
        long p = ctx_->p;
        down_basis_.assign(static_cast<size_t>(e_), Coords());
        for (long k = 0; k < lower_->e(); ++k) {
            for (long j = 0; j < p; ++j) {
                // lambda^j mu^k: flat degree j + pk, shift with no overflow.
                Coords v(static_cast<size_t>(e_), PAdicNumber::zero(*ctx_));
                for (long i = 0; i + j < e_; ++i)
                    v[static_cast<size_t>(i + j)] = mp[static_cast<size_t>(k)][static_cast<size_t>(i)];
                down_basis_[static_cast<size_t>(j + p * k)] = std::move(v);
            }
        }
    });
    return down_basis_;
}

const std::vector<Coords>& TowerLevel::sigma_powers(long a) const {
    std::lock_guard<std::mutex> lock(sigma_mu_);
    auto it = sigma_powers_.find(a);
    if (it != sigma_powers_.end()) return it->second;
    Coords sl = sigma_lambda(shared_from_this(), a).coords();
    std::vector<Coords> pw;
    pw.reserve(static_cast<size_t>(e_));
    Coords one(static_cast<size_t>(e_), PAdicNumber::zero(*ctx_));
    one[0] = PAdicNumber::from_long(*ctx_, 1);
    pw.push_back(one);
    if (e_ > 1) pw.push_back(sl);
    for (long k = 2; k < e_; ++k) pw.push_back(mul_coords(*this, pw.back(), sl));
    auto [pos, ok] = sigma_powers_.emplace(a, std::move(pw));
    (void)ok;
    return pos->second;
}

// ---------------------------------------------------------------------------
// CycloElement basics

CycloElement CycloElement::zero(const LevelPtr& lv) {
    CycloElement x;
    x.level_ = lv;
    x.c_.assign(static_cast<size_t>(lv->e()), PAdicNumber::zero(lv->context()));
    return x;
}

CycloElement CycloElement::one(const LevelPtr& lv, int relprec) {
    CycloElement x = zero(lv);
    x.c_[0] = PAdicNumber::from_long(lv->context(), 1, relprec);
    return x;
}

CycloElement CycloElement::lambda(const LevelPtr& lv, int relprec) {
    CycloElement x = zero(lv);
    if (lv->e() < 2) throw Error("level degree too small for lambda coordinate");
    x.c_[1] = PAdicNumber::from_long(lv->context(), 1, relprec);
    return x;
}

CycloElement CycloElement::from_padic(const LevelPtr& lv, const PAdicNumber& s) {
    CycloElement x = zero(lv);
    x.c_[0] = s;
    return x;
}

CycloElement CycloElement::from_coords(const LevelPtr& lv, Coords c) {
    if (c.size() != static_cast<size_t>(lv->e()))
        throw std::invalid_argument("coordinate vector has wrong length");
    CycloElement x;
    x.level_ = lv;
    x.c_ = std::move(c);
    return x;
}

bool CycloElement::is_exact_zero() const {
    for (const auto& x : c_)
        if (!x.is_exact_zero()) return false;
    return true;
}

bool CycloElement::is_zero_at_precision() const {
    for (const auto& x : c_)
        if (!x.is_zero_at_precision()) return false;
    return true;
}

long CycloElement::valuation() const {
    const long e = level_->e();
    long resolved = PAdicNumber::kInfVal;
    long unresolved = PAdicNumber::kInfVal;
    for (long i = 0; i < e; ++i) {
        const auto& x = c_[static_cast<size_t>(i)];
        if (x.is_exact_zero()) continue;
        if (x.is_zero_at_precision())
            unresolved = std::min(unresolved, e * x.valuation_lower_bound() + i);
        else
            resolved = std::min(resolved, e * x.valuation() + i);
    }
    if (resolved == PAdicNumber::kInfVal) {
        if (unresolved == PAdicNumber::kInfVal) return PAdicNumber::kInfVal;
        throw PrecisionExhausted("element is zero at precision; valuation unresolved");
    }
    if (unresolved <= resolved)
        throw PrecisionExhausted("apparent-zero coordinate could undercut nu_m");
    return resolved;
}

long CycloElement::valuation_lower_bound() const {
    const long e = level_->e();
    long bound = PAdicNumber::kInfVal;
    for (long i = 0; i < e; ++i) {
        const auto& x = c_[static_cast<size_t>(i)];
        if (x.is_exact_zero()) continue;
        bound = std::min(bound, e * x.valuation_lower_bound() + i);
    }
    return bound;
}

long CycloElement::abs_precision() const {
    const long e = level_->e();
    long prec = PAdicNumber::kInfVal;
    for (long i = 0; i < e; ++i) {
        const auto& x = c_[static_cast<size_t>(i)];
        if (x.is_exact_zero()) continue;
        prec = std::min(prec, e * x.abs_precision() + i);
    }
    return prec;
}

CycloElement CycloElement::operator-() const {
    CycloElement x = *this;
    for (auto& v : x.c_) v = -v;
    return x;
}

static void check_same_level(const CycloElement& a, const CycloElement& b) {
    if (a.level() != b.level())
        throw LevelMismatch("operands live at different tower levels");
}

CycloElement operator+(const CycloElement& a, const CycloElement& b) {
    check_same_level(a, b);
    Coords c = a.coords();
    for (size_t i = 0; i < c.size(); ++i) c[i] += b.coords()[i];
    return CycloElement::from_coords(a.level(), std::move(c));
}

CycloElement operator-(const CycloElement& a, const CycloElement& b) {
    return a + (-b);
}

CycloElement operator*(const CycloElement& a, const CycloElement& b) {
    check_same_level(a, b);
    return CycloElement::from_coords(a.level(),
                                     mul_coords(*a.level(), a.coords(), b.coords()));
}

CycloElement operator*(const CycloElement& a, const PAdicNumber& s) {
    Coords c = a.coords();
    for (auto& v : c) v = v * s;
    return CycloElement::from_coords(a.level(), std::move(c));
}

CycloElement operator/(const CycloElement& a, const CycloElement& b) {
    return a * b.inverse();
}

CycloElement CycloElement::shift_uniformizer(long k) const {
    if (k == 0) return *this;
    if (k > 0) {
        CycloElement lam = lambda(level_);
        return *this * lam.pow(k);
    }
    CycloElement linv = from_coords(level_, level_->inv_lambda_coords());
    return *this * linv.pow(-k);
}

CycloElement CycloElement::pow(long n) const {
    if (n < 0) return inverse().pow(-n);
    CycloElement acc = one(level_);
    CycloElement base = *this;
    while (n > 0) {
        if (n & 1) acc = acc * base;
        n >>= 1;
        if (n > 0) base = base * base;
    }
    return acc;
}

CycloElement CycloElement::inverse() const {
    if (is_exact_zero()) throw DivisionByApparentZero("inverse of exact zero");
    long v = valuation();  // throws PrecisionExhausted on apparent zero
    CycloElement u = shift_uniformizer(-v);
    long r0 = u.coords()[0].unit_residue();
    long p = level_->p();
    long inv0 = 1;
    for (long x = 1; x < p; ++x)
        if ((x * r0) % p == 1) {
            inv0 = x;
            break;
        }
    CycloElement y = from_padic(level_, PAdicNumber::from_long(level_->context(), inv0));
    CycloElement one_elt = one(level_);
    for (int iter = 0; iter < 64; ++iter) {
        CycloElement err = one_elt - u * y;
        if (err.is_zero_at_precision()) return y.shift_uniformizer(-v);
        y = y + y * err;
    }
    throw PrecisionExhausted("Newton inversion did not converge");
}

CycloElement CycloElement::with_abs_precision(long abs_m) const {
    const long e = level_->e();
    Coords c = c_;
    for (long i = 0; i < e; ++i) {
        // allowed p-adic absolute precision at coordinate i
        long allowed = abs_m - i;
        long digits = allowed >= 0 ? allowed / e + (allowed % e ? 1 : 0) : 0;
        c[static_cast<size_t>(i)] = c[static_cast<size_t>(i)].with_abs_precision(digits);
    }
    return from_coords(level_, std::move(c));
}

bool CycloElement::identical_to(const CycloElement& o) const {
    if (level_ != o.level_) return false;
    for (size_t i = 0; i < c_.size(); ++i)
        if (!c_[i].identical_to(o.c_[i])) return false;
    return true;
}

bool congruent_mod_m(const CycloElement& a, const CycloElement& b, long k) {
    CycloElement d = a - b;
    const long e = d.level()->e();
    long resolved = PAdicNumber::kInfVal;
    long unresolved = PAdicNumber::kInfVal;
    for (long i = 0; i < e; ++i) {
        const auto& x = d.coords()[static_cast<size_t>(i)];
        if (x.is_exact_zero()) continue;
        if (x.is_zero_at_precision())
            unresolved = std::min(unresolved, e * x.valuation_lower_bound() + i);
        else
            resolved = std::min(resolved, e * x.valuation() + i);
    }
    if (resolved < k) return false;
    if (unresolved < k)
        throw PrecisionExhausted("congruence mod m^" + std::to_string(k) +
                                 " exceeds the tracked precision");
    return true;
}

// ---------------------------------------------------------------------------
// Galois action, embeddings, norms

GaloisElement::GaloisElement(LevelPtr lv, long a_in) : level(std::move(lv)) {
    long mod = 1;
    for (int i = 0; i < level->m(); ++i) mod *= level->p();
    a = ((a_in % mod) + mod) % mod;
    if (a == 0 || a % level->p() == 0)
        throw std::invalid_argument("Galois exponent must be prime to p");
}

CycloElement sigma_lambda(const LevelPtr& lv, long a) {
    CycloElement base = CycloElement::lambda(lv) + CycloElement::one(lv);
    return base.pow(a) - CycloElement::one(lv);
}

CycloElement galois_apply(const GaloisElement& s, const CycloElement& x) {
    if (s.level != x.level())
        throw LevelMismatch("Galois element and operand level differ");
    if (s.a == 1) return x;
    const auto& pw = s.level->sigma_powers(s.a);
    Coords out(static_cast<size_t>(s.level->e()), PAdicNumber::zero(s.level->context()));
    for (size_t i = 0; i < x.coords().size(); ++i) {
        const auto& xi = x.coords()[i];
        if (xi.is_exact_zero()) continue;
        const Coords& row = pw[i];
        for (size_t j = 0; j < out.size(); ++j) {
            if (row[j].is_exact_zero()) continue;
            out[j] += xi * row[j];
        }
    }
    return CycloElement::from_coords(s.level, std::move(out));
}

CycloElement embed_up(const CycloElement& x, const LevelPtr& target) {
    if (target->p() != x.level()->p())
        throw LevelMismatch("embedding across different primes");
    if (target->m() < x.level()->m())
        throw LevelMismatch("embed_up target is below the source level");
    if (target->m() == x.level()->m()) {
        if (target != x.level()) throw LevelMismatch("levels differ");
        return x;
    }
    // Chain one step at a time through the interned levels.
    std::vector<LevelPtr> chain;
    LevelPtr lv = target;
    while (lv->m() > x.level()->m()) {
        chain.push_back(lv);
        lv = lv->lower();
    }
    if (lv != x.level()) throw LevelMismatch("levels belong to different towers");
    CycloElement cur = x;
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
        const LevelPtr& up = *it;
        const auto& mp = up->mu_powers();
        Coords out(static_cast<size_t>(up->e()), PAdicNumber::zero(up->context()));
        for (size_t i = 0; i < cur.coords().size(); ++i) {
            const auto& xi = cur.coords()[i];
            if (xi.is_exact_zero()) continue;
            const Coords& row = mp[i];
            for (size_t j = 0; j < out.size(); ++j) {
                if (row[j].is_exact_zero()) continue;
                out[j] += xi * row[j];
            }
        }
        cur = CycloElement::from_coords(up, std::move(out));
    }
    return cur;
}

CycloElement coerce_down(const CycloElement& x, long margin) {
    const LevelPtr& lv = x.level();
    if (!lv->lower()) throw LevelMismatch("no level below L^1 to coerce into");
    const auto& basis = lv->down_basis();
    const long p = lv->p();
    const long e = lv->e();
    const long elow = lv->lower()->e();
    Coords v = x.coords();
    Coords rel(static_cast<size_t>(e), PAdicNumber::zero(lv->context()));
    for (long i = e - 1; i >= 0; --i) {
        PAdicNumber c = v[static_cast<size_t>(i)];
        rel[static_cast<size_t>(i)] = c;
        if (c.is_exact_zero()) continue;
        const Coords& B = basis[static_cast<size_t>(i)];
        for (long idx = 0; idx <= i; ++idx) {
            if (B[static_cast<size_t>(idx)].is_exact_zero()) continue;
            v[static_cast<size_t>(idx)] -= c * B[static_cast<size_t>(idx)];
        }
    }
    Coords out(static_cast<size_t>(elow), PAdicNumber::zero(lv->context()));
    for (long i = 0; i < e; ++i) {
        long j = i % p, k = i / p;
        const PAdicNumber& c = rel[static_cast<size_t>(i)];
        if (j == 0) {
            out[static_cast<size_t>(k)] = c;
            continue;
        }
        if (c.is_exact_zero()) continue;
        if (!c.is_zero_at_precision() || c.valuation_lower_bound() < margin)
            throw CoercionFailure(
                "conjugate product does not lie in the subfield at precision "
                "(relative coordinate " + std::to_string(i) + ")");
    }
    return CycloElement::from_coords(lv->lower(), std::move(out));
}

CycloElement norm_down(const CycloElement& x) {
    const LevelPtr& lv = x.level();
    if (!lv->lower()) throw LevelMismatch("norm_down needs a level above L^1");
    long pm = 1;
    for (int i = 0; i < lv->m() - 1; ++i) pm *= lv->p();
    CycloElement acc = x;
    for (long t = 1; t < lv->p(); ++t) {
        GaloisElement s(lv, 1 + t * pm);
        acc = acc * galois_apply(s, x);
    }
    return coerce_down(acc);
}

std::vector<CycloElement> minimal_polynomial_step(const LevelPtr& lv) {
    const long p = lv->p();
    std::vector<CycloElement> coeffs;
    coeffs.reserve(static_cast<size_t>(p) + 1);
    coeffs.push_back(-CycloElement::lambda(lv));  // (-1)^p pi_m with p odd
    mpz_class binom = p;                          // C(p, k)
    for (long k = 1; k < p; ++k) {
        coeffs.push_back(CycloElement::from_padic(
            lv, PAdicNumber::from_int(lv->context(), binom)));
        binom = binom * (p - k) / (k + 1);
    }
    coeffs.push_back(CycloElement::one(lv));
    return coeffs;
}

// ---------------------------------------------------------------------------
// Tower

Tower::Tower(long p, int relprec) : ctx_(&padic_context(p)), relprec_(relprec) {
    if (relprec < 1 || relprec > kMaxRelPrec)
        throw std::invalid_argument("working precision out of range");
}

CycloElement Tower::lambda(int m) const {
    return CycloElement::lambda(level(m), relprec_);
}

CycloElement Tower::one(int m) const { return CycloElement::one(level(m), relprec_); }

PAdicNumber Tower::teich(long r) const {
    long rr = ((r % p()) + p()) % p();
    if (rr == 0) return PAdicNumber::zero(*ctx_);
    return teichmuller(*ctx_, rr, relprec_);
}

}  // namespace nlab
