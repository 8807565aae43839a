#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "nlab/padic.hpp"

namespace nlab {

// Arithmetic in the cyclotomic tower L^m = Q_p(zeta_{p^m}) over Q_p.
//
// Elements are coordinate vectors in the power basis of the uniformizer
// lambda_m = zeta_{p^m} - 1, whose minimal polynomial Phi_{p^m}(1+X) is
// Eisenstein of degree e_m = p^(m-1)(p-1). The normalized valuation nu_m
// has nu_m(lambda_m) = 1 and nu_m(p) = e_m, and is read off exactly from
// the coordinates: nu_m(x) = min_i (e_m nu_p(x_i) + i), the minimum being
// attained at a unique index.

class TowerLevel;
using LevelPtr = std::shared_ptr<const TowerLevel>;
using Coords = std::vector<PAdicNumber>;

// Interned handle for L^m; pointer equality identifies levels globally.
LevelPtr tower_level(long p, int m);

class TowerLevel : public std::enable_shared_from_this<TowerLevel> {
  public:
    long p() const { return ctx_->p; }
    int m() const { return m_; }
    long e() const { return e_; }  // e(L^m | Q_p)
    const PadicContext& context() const { return *ctx_; }
    const LevelPtr& lower() const { return lower_; }  // null for m = 1

    // Integer coefficients of Phi_{p^m}(1+X), constant term first (size e+1).
    const std::vector<mpz_class>& minpoly() const { return minpoly_z_; }

    // Internal caches (exact constants, built on first use).
    const Coords& inv_lambda_coords() const { return inv_lambda_; }
    const std::vector<Coords>& mu_powers() const;          // m >= 2
    const std::vector<Coords>& down_basis() const;         // m >= 2
    const std::vector<Coords>& sigma_powers(long a) const;

  private:
    friend LevelPtr tower_level(long p, int m);
    TowerLevel() = default;

    const PadicContext* ctx_ = nullptr;
    int m_ = 0;
    long e_ = 0;
    LevelPtr lower_;
    std::vector<mpz_class> minpoly_z_;
    Coords minpoly_pad_;  // non-leading coefficients as exact constants
    Coords inv_lambda_;

    mutable std::once_flag mu_once_;
    mutable std::vector<Coords> mu_powers_;
    mutable std::once_flag basis_once_;
    mutable std::vector<Coords> down_basis_;
    mutable std::mutex sigma_mu_;
    mutable std::map<long, std::vector<Coords>> sigma_powers_;

    friend class CycloElement;
    friend Coords mul_coords(const TowerLevel& lv, const Coords& a, const Coords& b);
};

class CycloElement {
  public:
    CycloElement() = default;

    static CycloElement zero(const LevelPtr& lv);
    static CycloElement one(const LevelPtr& lv, int relprec = kMaxRelPrec);
    static CycloElement lambda(const LevelPtr& lv, int relprec = kMaxRelPrec);
    static CycloElement from_padic(const LevelPtr& lv, const PAdicNumber& x);
    static CycloElement from_coords(const LevelPtr& lv, Coords c);

    const LevelPtr& level() const { return level_; }
    const Coords& coords() const { return c_; }
    long e() const { return level_->e(); }

    bool is_exact_zero() const;
    bool is_zero_at_precision() const;

    // Exact nu_m; kInfVal for exact zero; PrecisionExhausted when some
    // coordinate is an apparent zero that could undercut the resolved ones.
    long valuation() const;
    // Certified lower bound on nu_m (always available).
    long valuation_lower_bound() const;
    // Certified absolute precision in m-units: min_i (e abs_i + i).
    long abs_precision() const;

    CycloElement operator-() const;
    friend CycloElement operator+(const CycloElement& a, const CycloElement& b);
    friend CycloElement operator-(const CycloElement& a, const CycloElement& b);
    friend CycloElement operator*(const CycloElement& a, const CycloElement& b);
    friend CycloElement operator*(const CycloElement& a, const PAdicNumber& s);
    friend CycloElement operator/(const CycloElement& a, const CycloElement& b);
    CycloElement& operator+=(const CycloElement& b) { return *this = *this + b; }
    CycloElement& operator-=(const CycloElement& b) { return *this = *this - b; }
    CycloElement& operator*=(const CycloElement& b) { return *this = *this * b; }

    CycloElement inverse() const;
    CycloElement pow(long n) const;
    // Multiply by lambda^k (k may be negative).
    CycloElement shift_uniformizer(long k) const;
    CycloElement with_abs_precision(long abs_m) const;

    bool identical_to(const CycloElement& o) const;

  private:
    LevelPtr level_;
    Coords c_;
};

// nu_m(a - b) >= k, certified; throws PrecisionExhausted when undecidable.
bool congruent_mod_m(const CycloElement& a, const CycloElement& b, long k);

struct GaloisElement {
    LevelPtr level;
    long a;  // class in (Z/p^m)^x, acting by zeta -> zeta^a

    GaloisElement(LevelPtr lv, long a_in);
};

// sigma_a(lambda_m) = (1+lambda_m)^a - 1, computed directly (no cache).
CycloElement sigma_lambda(const LevelPtr& lv, long a);

// Ring automorphism action; uses the per-level power cache.
CycloElement galois_apply(const GaloisElement& s, const CycloElement& x);

// Image under lambda_m -> (1+lambda_{m'})^{p^(m'-m)} - 1; LevelMismatch if
// the target is below the source. Valuations multiply by p^(m'-m).
CycloElement embed_up(const CycloElement& x, const LevelPtr& target);

// Re-expression of an element of L^(m+1) known to lie in L^m. Coordinates
// in the relative basis lambda^j mu^k (j != 0) must vanish with at least
// `margin` base-p digits of certified precision, else CoercionFailure.
CycloElement coerce_down(const CycloElement& x, long margin = 5);

// Product of the p conjugates over L^m, recognized at level m.
CycloElement norm_down(const CycloElement& x);

// Coefficients (constant first, monic) of the minimal polynomial
// (X+1)^p - (1+lambda_m) of lambda_{m+1} over L^m.
std::vector<CycloElement> minimal_polynomial_step(const LevelPtr& lv);

// Session handle fixing p and the working relative precision used when
// constructing pipeline inputs.
class Tower {
  public:
    Tower(long p, int relprec = 60);

    long p() const { return ctx_->p; }
    int relprec() const { return relprec_; }
    const PadicContext& context() const { return *ctx_; }

    LevelPtr level(int m) const { return tower_level(ctx_->p, m); }
    CycloElement lambda(int m) const;  // at the working precision
    CycloElement one(int m) const;
    PAdicNumber teich(long r) const;   // Teichmuller lift at working precision

  private:
    const PadicContext* ctx_;
    int relprec_;
};

}  // namespace nlab
