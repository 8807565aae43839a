#include "nlab/padic.hpp"

#include <map>
#include <mutex>
#include <sstream>

namespace nlab {

namespace {

bool is_small_prime(long p) {
    if (p < 2) return false;
    for (long d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

}  // namespace

const mpz_class& PadicContext::ppow(long k) const {
    if (k < 0 || k > kMaxRelPrec)
        throw PrecisionExhausted("p-power exponent " + std::to_string(k) +
                                 " outside the session cap");
    return pow[static_cast<size_t>(k)];
}

const PadicContext& padic_context(long p) {
    if (p == 2)
        throw std::invalid_argument("p = 2 is rejected for this session");
    if (!is_small_prime(p))
        throw std::invalid_argument("p must be an odd prime, got " + std::to_string(p));
    static std::mutex mu;
    static std::map<long, PadicContext*> registry;  // leaked on purpose: session-long handles
    std::lock_guard<std::mutex> lock(mu);
    auto it = registry.find(p);
    if (it != registry.end()) return *it->second;
    auto* ctx = new PadicContext;
    ctx->p = p;
    ctx->pow.reserve(kMaxRelPrec + 1);
    mpz_class q = 1;
    for (int k = 0; k <= kMaxRelPrec; ++k) {
        ctx->pow.push_back(q);
        q *= p;
    }
    registry.emplace(p, ctx);
    return *ctx;
}

const PadicContext& PAdicNumber::context() const {
    if (!ctx_) throw Error("detached p-adic value has no context");
    return *ctx_;
}

PAdicNumber PAdicNumber::zero(const PadicContext& ctx) {
    PAdicNumber x;
    x.ctx_ = &ctx;
    return x;
}

PAdicNumber PAdicNumber::apparent_zero(const PadicContext& ctx, long abs_prec) {
    PAdicNumber x;
    x.ctx_ = &ctx;
    x.val_ = abs_prec;
    x.relprec_ = 0;
    x.unit_ = 0;
    return x;
}

PAdicNumber PAdicNumber::normalized(const PadicContext& ctx, long val,
                                    mpz_class unit, long abs_prec) {
    // Invariant on entry: the element is p^val * unit known mod p^abs_prec.
    if (abs_prec - val > kMaxRelPrec) abs_prec = val + kMaxRelPrec;
    if (val >= abs_prec) return apparent_zero(ctx, abs_prec);
    mpz_fdiv_r(unit.get_mpz_t(), unit.get_mpz_t(), ctx.ppow(abs_prec - val).get_mpz_t());
    if (unit == 0) return apparent_zero(ctx, abs_prec);
    mp_bitcnt_t k = mpz_remove(unit.get_mpz_t(), unit.get_mpz_t(),
                               mpz_class(ctx.p).get_mpz_t());
    val += static_cast<long>(k);
    if (val >= abs_prec) return apparent_zero(ctx, abs_prec);
    PAdicNumber x;
    x.ctx_ = &ctx;
    x.val_ = val;
    x.relprec_ = static_cast<int>(abs_prec - val);
    mpz_fdiv_r(unit.get_mpz_t(), unit.get_mpz_t(), ctx.ppow(x.relprec_).get_mpz_t());
    x.unit_ = std::move(unit);
    return x;
}

PAdicNumber PAdicNumber::from_int(const PadicContext& ctx, const mpz_class& n,
                                  int relprec) {
    if (relprec < 1 || relprec > kMaxRelPrec)
        throw std::invalid_argument("relative precision out of range");
    if (n == 0) return zero(ctx);
    mpz_class u = n;
    mp_bitcnt_t k = mpz_remove(u.get_mpz_t(), u.get_mpz_t(), mpz_class(ctx.p).get_mpz_t());
    return normalized(ctx, static_cast<long>(k), std::move(u),
                      static_cast<long>(k) + relprec);
}

PAdicNumber PAdicNumber::from_long(const PadicContext& ctx, long n, int relprec) {
    return from_int(ctx, mpz_class(n), relprec);
}

PAdicNumber PAdicNumber::make(const PadicContext& ctx, long val,
                              const mpz_class& unit, int relprec) {
    if (relprec < 0 || relprec > kMaxRelPrec)
        throw std::invalid_argument("relative precision out of range");
    return normalized(ctx, val, unit, val + relprec);
}

long PAdicNumber::valuation() const {
    if (is_exact_zero()) return kInfVal;
    if (relprec_ == 0)
        throw PrecisionExhausted("valuation of an apparent zero (only nu >= " +
                                 std::to_string(val_) + " is certified)");
    return val_;
}

long PAdicNumber::valuation_lower_bound() const {
    return val_;  // for apparent zero val_ is the certified bound
}

long PAdicNumber::abs_precision() const {
    if (is_exact_zero()) return kInfVal;
    return val_ + relprec_;
}

PAdicNumber PAdicNumber::operator-() const {
    if (is_zero_at_precision()) return *this;
    PAdicNumber x = *this;
    x.unit_ = ctx_->ppow(relprec_) - unit_;
    return x;
}

PAdicNumber operator+(const PAdicNumber& a, const PAdicNumber& b) {
    if (a.is_exact_zero()) return b.attached() ? b : a;
    if (b.is_exact_zero()) return a;
    if (a.ctx_ != b.ctx_) throw Error("mixed p-adic contexts");
    const PadicContext& ctx = *a.ctx_;
    long abs = std::min(a.abs_precision(), b.abs_precision());
    long v = std::min(a.val_, b.val_);
    if (v >= abs) return PAdicNumber::apparent_zero(ctx, abs);
    // An apparent zero contributes nothing below its own abs precision.
    mpz_class u = 0;
    if (a.relprec_ != 0) u += a.unit_ * ctx.ppow(std::min(a.val_, abs) - v);
    if (b.relprec_ != 0) u += b.unit_ * ctx.ppow(std::min(b.val_, abs) - v);
    return PAdicNumber::normalized(ctx, v, std::move(u), abs);
}

PAdicNumber operator-(const PAdicNumber& a, const PAdicNumber& b) {
    return a + (-b);
}

PAdicNumber operator*(const PAdicNumber& a, const PAdicNumber& b) {
    if (a.is_exact_zero()) return a.attached() || !b.attached() ? a : PAdicNumber::zero(*b.ctx_);
    if (b.is_exact_zero()) return b.attached() ? b : PAdicNumber::zero(*a.ctx_);
    if (a.ctx_ != b.ctx_) throw Error("mixed p-adic contexts");
    const PadicContext& ctx = *a.ctx_;
    long v = a.val_ + b.val_;
    int r = std::min(a.relprec_, b.relprec_);
    if (r == 0) return PAdicNumber::apparent_zero(ctx, v);
    mpz_class u = a.unit_ * b.unit_;
    mpz_fdiv_r(u.get_mpz_t(), u.get_mpz_t(), ctx.ppow(r).get_mpz_t());
    PAdicNumber x;
    x.ctx_ = &ctx;
    x.val_ = v;
    x.relprec_ = r;
    x.unit_ = std::move(u);
    return x;
}

PAdicNumber operator/(const PAdicNumber& a, const PAdicNumber& b) {
    if (b.is_zero_at_precision())
        throw DivisionByApparentZero("division by a p-adic zero at precision");
    if (a.is_exact_zero()) return a;
    if (a.ctx_ != b.ctx_) throw Error("mixed p-adic contexts");
    const PadicContext& ctx = *a.ctx_;
    long v = a.val_ - b.val_;
    if (a.relprec_ == 0) return PAdicNumber::apparent_zero(ctx, v);
    int r = std::min(a.relprec_, b.relprec_);
    mpz_class binv;
    if (mpz_invert(binv.get_mpz_t(), b.unit_.get_mpz_t(), ctx.ppow(r).get_mpz_t()) == 0)
        throw Error("unit inversion failed (corrupt representation)");
    mpz_class u = a.unit_ * binv;
    mpz_fdiv_r(u.get_mpz_t(), u.get_mpz_t(), ctx.ppow(r).get_mpz_t());
    PAdicNumber x;
    x.ctx_ = &ctx;
    x.val_ = v;
    x.relprec_ = r;
    x.unit_ = std::move(u);
    return x;
}

PAdicNumber PAdicNumber::inverse() const {
    return from_long(context(), 1) / *this;
}

PAdicNumber PAdicNumber::pow(long n) const {
    if (n < 0) return inverse().pow(-n);
    PAdicNumber acc = from_long(context(), 1);
    PAdicNumber base = *this;
    while (n > 0) {
        if (n & 1) acc = acc * base;
        n >>= 1;
        if (n > 0) base = base * base;
    }
    return acc;
}

PAdicNumber PAdicNumber::shift(long k) const {
    if (is_exact_zero()) return *this;
    PAdicNumber x = *this;
    x.val_ += k;
    return x;
}

PAdicNumber PAdicNumber::with_abs_precision(long abs_prec) const {
    if (is_exact_zero())
        return apparent_zero(context(), abs_prec);
    if (abs_precision() <= abs_prec) return *this;
    return normalized(*ctx_, val_, unit_, abs_prec);
}

bool PAdicNumber::identical_to(const PAdicNumber& o) const {
    return val_ == o.val_ && relprec_ == o.relprec_ && unit_ == o.unit_;
}

bool congruent_mod(const PAdicNumber& a, const PAdicNumber& b, long k) {
    PAdicNumber d = a - b;
    if (d.abs_precision() < k)
        throw PrecisionExhausted("congruence mod p^" + std::to_string(k) +
                                 " exceeds the tracked precision");
    return d.valuation_lower_bound() >= k;
}

long PAdicNumber::unit_residue() const {
    if (valuation() != 0) throw Error("unit_residue requires a unit");
    mpz_class r = unit_ % context().p;
    return r.get_si();
}

std::string PAdicNumber::render() const {
    std::ostringstream os;
    long p = context().p;
    if (is_exact_zero()) {
        os << p << "^inf * (0) [0]";
        return os.str();
    }
    os << p << "^" << val_ << " * (";
    if (unit_ == 0) {
        os << "0";
    } else {
        mpz_class u = unit_;
        bool first = true;
        for (int i = 0; u != 0; ++i) {
            mpz_class d = u % p;
            u /= p;
            if (d != 0) {
                if (!first) os << " + ";
                if (i == 0)
                    os << d;
                else if (i == 1)
                    os << d << "*" << p;
                else
                    os << d << "*" << p << "^" << i;
                first = false;
            }
        }
    }
    os << ") [" << relprec_ << "]";
    return os.str();
}

namespace {

void skip_ws(const std::string& s, size_t& i) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
}

long parse_long(const std::string& s, size_t& i) {
    skip_ws(s, i);
    size_t start = i;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
    while (i < s.size() && isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == start) throw std::invalid_argument("expected integer in p-adic literal");
    return std::stol(s.substr(start, i - start));
}

void expect(const std::string& s, size_t& i, char c) {
    skip_ws(s, i);
    if (i >= s.size() || s[i] != c)
        throw std::invalid_argument(std::string("expected '") + c + "' in p-adic literal");
    ++i;
}

}  // namespace

PAdicNumber padic_parse(const std::string& text) {
    size_t i = 0;
    long p = parse_long(text, i);
    const PadicContext& ctx = padic_context(p);
    expect(text, i, '^');
    skip_ws(text, i);
    bool inf = false;
    long val = 0;
    if (text.compare(i, 3, "inf") == 0) {
        inf = true;
        i += 3;
    } else {
        val = parse_long(text, i);
    }
    expect(text, i, '*');
    expect(text, i, '(');
    mpz_class unit = 0;
    skip_ws(text, i);
    while (true) {
        long d = parse_long(text, i);
        long e = 0;
        skip_ws(text, i);
        if (i < text.size() && text[i] == '*') {
            ++i;
            long base = parse_long(text, i);
            if (base != p) throw std::invalid_argument("digit base mismatch in p-adic literal");
            e = 1;
            skip_ws(text, i);
            if (i < text.size() && text[i] == '^') {
                ++i;
                e = parse_long(text, i);
            }
        }
        unit += mpz_class(d) * ctx.ppow(e);
        skip_ws(text, i);
        if (i < text.size() && text[i] == '+') {
            ++i;
            continue;
        }
        break;
    }
    expect(text, i, ')');
    expect(text, i, '[');
    long relprec = parse_long(text, i);
    expect(text, i, ']');
    if (inf) {
        if (unit != 0 || relprec != 0)
            throw std::invalid_argument("malformed exact zero literal");
        return PAdicNumber::zero(ctx);
    }
    if (relprec == 0) return PAdicNumber::apparent_zero(ctx, val);
    return PAdicNumber::make(ctx, val, unit, static_cast<int>(relprec));
}

PAdicNumber PadicPoly::eval(const PAdicNumber& x) const {
    if (coeffs.empty()) return PAdicNumber::zero(x.context());
    PAdicNumber acc = coeffs.back();
    for (size_t i = coeffs.size() - 1; i-- > 0;) acc = acc * x + coeffs[i];
    return acc;
}

PadicPoly PadicPoly::derivative() const {
    PadicPoly d;
    for (size_t i = 1; i < coeffs.size(); ++i)
        d.coeffs.push_back(coeffs[i] * PAdicNumber::from_long(coeffs[i].context(),
                                                              static_cast<long>(i)));
    return d;
}

PAdicNumber hensel_lift(const PadicPoly& f, const PAdicNumber& x0) {
    PadicPoly fp = f.derivative();
    PAdicNumber fx = f.eval(x0);
    PAdicNumber fpx = fp.eval(x0);
    long vfp;
    try {
        vfp = fpx.valuation();
    } catch (const PrecisionExhausted&) {
        throw HenselHypothesisFailed("f'(x0) is zero at precision");
    }
    if (fx.valuation_lower_bound() <= 2 * vfp)
        throw HenselHypothesisFailed(
            "nu(f(x0)) = " + std::to_string(fx.valuation_lower_bound()) +
            " <= 2 nu(f'(x0)) = " + std::to_string(2 * vfp));
    PAdicNumber x = x0;
    for (int iter = 0; iter < 64; ++iter) {
        fx = f.eval(x);
        if (fx.is_zero_at_precision()) return x;
        PAdicNumber step = fx / fp.eval(x);
        if (step.is_zero_at_precision()) return x;
        x = x - step;
    }
    throw PrecisionExhausted("Hensel iteration did not converge");
}

PAdicNumber teichmuller(const PadicContext& ctx, long r, int relprec) {
    long rr = ((r % ctx.p) + ctx.p) % ctx.p;
    if (rr == 0) throw std::invalid_argument("teichmuller needs a nonzero residue");
    PadicPoly f;  // x^(p-1) - 1
    f.coeffs.assign(static_cast<size_t>(ctx.p), PAdicNumber::zero(ctx));
    f.coeffs[0] = PAdicNumber::from_long(ctx, -1);
    f.coeffs[static_cast<size_t>(ctx.p - 1)] = PAdicNumber::from_long(ctx, 1);
    return hensel_lift(f, PAdicNumber::from_long(ctx, rr, relprec));
}

}  // namespace nlab
