#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "nlab/errors.hpp"

namespace nlab {

// Exact arithmetic in Q_p at tracked absolute precision.
//
// An element is p^val * unit where unit is a residue coprime to p modulo
// p^relprec. The pair (val, relprec) is the precision contract: the element
// is known modulo p^(val+relprec) and no operation ever claims more than
// its inputs warrant. Two degenerate shapes are allowed:
//   - exact zero: val = +inf (sentinel), known to infinite precision;
//   - apparent zero: unit = 0, relprec = 0, val = k, meaning "nu >= k and
//     nothing below p^k is known".

// Session-wide cap on relative precision; also sizes the power table.
inline constexpr int kMaxRelPrec = 256;

struct PadicContext {
    long p = 0;
    std::vector<mpz_class> pow;  // pow[k] = p^k for k = 0..kMaxRelPrec

    const mpz_class& ppow(long k) const;
};

// Returns the interned context for an odd prime p. Throws
// std::invalid_argument for p = 2, composites, or p < 3.
const PadicContext& padic_context(long p);

class PAdicNumber {
  public:
    static constexpr long kInfVal = std::numeric_limits<long>::max();

    PAdicNumber() = default;  // detached exact zero

    static PAdicNumber zero(const PadicContext& ctx);
    static PAdicNumber apparent_zero(const PadicContext& ctx, long abs_prec);
    // p-adic image of n at the given relative precision.
    static PAdicNumber from_int(const PadicContext& ctx, const mpz_class& n,
                                int relprec = kMaxRelPrec);
    static PAdicNumber from_long(const PadicContext& ctx, long n,
                                 int relprec = kMaxRelPrec);
    // p^val * unit directly; unit is normalized mod p^relprec.
    static PAdicNumber make(const PadicContext& ctx, long val,
                            const mpz_class& unit, int relprec);

    bool attached() const { return ctx_ != nullptr; }
    const PadicContext& context() const;
    long p() const { return ctx_ ? ctx_->p : 0; }

    bool is_exact_zero() const { return val_ == kInfVal; }
    // Zero as far as the tracked precision can tell.
    bool is_zero_at_precision() const { return is_exact_zero() || relprec_ == 0; }

    // Normalized valuation; throws PrecisionExhausted on an apparent zero
    // (the valuation is only bounded below, not known).
    long valuation() const;
    // Largest k with "nu >= k" certified. kInfVal for exact zero.
    long valuation_lower_bound() const;
    long abs_precision() const;  // val + relprec, kInfVal for exact zero
    int relprec() const { return relprec_; }
    const mpz_class& unit() const { return unit_; }

    PAdicNumber operator-() const;
    friend PAdicNumber operator+(const PAdicNumber& a, const PAdicNumber& b);
    friend PAdicNumber operator-(const PAdicNumber& a, const PAdicNumber& b);
    friend PAdicNumber operator*(const PAdicNumber& a, const PAdicNumber& b);
    friend PAdicNumber operator/(const PAdicNumber& a, const PAdicNumber& b);
    PAdicNumber& operator+=(const PAdicNumber& b) { return *this = *this + b; }
    PAdicNumber& operator-=(const PAdicNumber& b) { return *this = *this - b; }
    PAdicNumber& operator*=(const PAdicNumber& b) { return *this = *this * b; }

    PAdicNumber inverse() const;
    PAdicNumber pow(long n) const;
    // Multiply by p^k (exact shift of the valuation).
    PAdicNumber shift(long k) const;
    // Clamp absolute precision down to abs_prec (no-op if already lower).
    PAdicNumber with_abs_precision(long abs_prec) const;

    // Representation equality: same val, unit, relprec (the round-trip notion).
    bool identical_to(const PAdicNumber& o) const;
    // x == y modulo p^k, certified by the precision of both operands.
    friend bool congruent_mod(const PAdicNumber& a, const PAdicNumber& b, long k);

    // Residue of a unit in [1, p-1]; requires nu = 0 resolved.
    long unit_residue() const;

    std::string render() const;

  private:
    const PadicContext* ctx_ = nullptr;
    long val_ = kInfVal;
    int relprec_ = 0;
    mpz_class unit_{0};

    static PAdicNumber normalized(const PadicContext& ctx, long val,
                                  mpz_class unit, long abs_prec);
};

// Parse of the textual format "p^v * (d0 + d1*p + d2*p^2) [relprec]";
// exact zero renders as "p^inf * (0) [0]". Bit-exact round trip with
// PAdicNumber::render.
PAdicNumber padic_parse(const std::string& text);

// Dense polynomial over Q_p, constant term first.
struct PadicPoly {
    std::vector<PAdicNumber> coeffs;

    PAdicNumber eval(const PAdicNumber& x) const;
    PadicPoly derivative() const;
};

// Simple Hensel/Newton lifting: requires nu(f(x0)) > 2 nu(f'(x0)), returns
// a root at working precision with x = x0 mod p^(nu f(x0) - nu f'(x0)).
PAdicNumber hensel_lift(const PadicPoly& f, const PAdicNumber& x0);

// Teichmuller representative of r in F_p^x: the unique (p-1)st root of
// unity congruent to r mod p.
PAdicNumber teichmuller(const PadicContext& ctx, long r, int relprec);

}  // namespace nlab
