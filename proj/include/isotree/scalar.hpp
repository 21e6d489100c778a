#pragma once

#include <cstdint>
#include <string>

#include <boost/multiprecision/gmp.hpp>
#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/mpfr.hpp>

namespace isotree {

namespace bmp = boost::multiprecision;

using BigInt = bmp::number<bmp::gmp_int, bmp::et_off>;
using Rational = bmp::number<bmp::gmp_rational, bmp::et_off>;
using Real = bmp::number<bmp::mpfr_float_backend<0>, bmp::et_off>;

inline constexpr unsigned kDefaultPrecisionBits = 192;

// Working precision for Real values constructed while the scope is alive.
// Precision is requested in bits and rounded up, never down.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_digits10_;
};

// Bits of precision a freshly constructed Real receives right now.
unsigned working_precision_bits();
// Bits actually carried by a value.
unsigned precision_bits(const Real& x);

template <class F>
struct FieldTraits;

template <>
struct FieldTraits<Rational> {
  static constexpr bool exact = true;
  static constexpr const char* name = "rational";
};

template <>
struct FieldTraits<Real> {
  static constexpr bool exact = false;
  static constexpr const char* name = "real";
};

template <class F>
concept Field = requires { FieldTraits<F>::exact; };

Real to_real(const Rational& q);
inline Real to_real(const Real& x) { return x; }

// Parses "3", "-2", "1/2" or "0.5" (decimal literals are converted exactly).
Rational parse_rational(const std::string& text);

// Fixed-point decimal rendering with an explicit number of fractional digits.
std::string to_decimal(const Rational& q, int digits);
std::string to_decimal(const Real& x, int digits);

BigInt factorial(unsigned n);

inline Real real_e() { return bmp::exp(Real(1)); }
inline Real real_pi() { return boost::math::constants::pi<Real>(); }

}  // namespace isotree
