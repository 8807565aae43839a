#pragma once

#include <stdexcept>
#include <string>

namespace nlab {

// Base class for all library errors. Subclasses are named after the
// condition they signal so callers can catch precisely.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Arithmetic asked for a digit that the tracked precision cannot supply.
struct PrecisionExhausted : Error {
    using Error::Error;
};

// Divisor is zero at its tracked precision (exact zero or apparent zero).
struct DivisionByApparentZero : Error {
    using Error::Error;
};

// nu(f(x0)) > 2 nu(f'(x0)) failed.
struct HenselHypothesisFailed : Error {
    using Error::Error;
};

// Operands live at different tower levels (or an embedding ran downhill).
struct LevelMismatch : Error {
    using Error::Error;
};

// A conjugate product failed to land in the expected subfield.
struct CoercionFailure : Error {
    using Error::Error;
};

// Power series is 0 modulo the maximal ideal up to its truncation order.
struct ReducesToZero : Error {
    using Error::Error;
};

// Denominator of a rational section vanishes at the requested point.
struct DenominatorVanishes : Error {
    using Error::Error;
};

// Specialization point does not lie in the open disc (nu <= 0).
struct OutsideDisc : Error {
    using Error::Error;
};

// Tower level too shallow for the requested bound or threshold.
struct LevelTooSmall : Error {
    using Error::Error;
};

// Depth ranges of two norm sequences do not overlap as required.
struct RangeMismatch : Error {
    using Error::Error;
};

// Norm compatibility of a sequence failed where it is guaranteed.
struct CompatibilityFailure : Error {
    using Error::Error;
};

// i_L requested for the identity (the value would be +infinity).
struct TrivialElement : Error {
    using Error::Error;
};

// Kummer unit turned out to be a p-th power: no conductor exists.
struct IsPthPower : Error {
    using Error::Error;
};

// Conductor reduction loop stalled at the p-th power bound.
struct ReductionStuck : Error {
    using Error::Error;
};

// Weierstrass degree of the Kummer right-hand side differs from c.
struct WeierstrassDegreeMismatch : Error {
    using Error::Error;
};

}  // namespace nlab
