#include "isotree/scalar.hpp"

#include <cmath>
#include <stdexcept>

namespace isotree {
namespace {

unsigned bits_to_digits10(unsigned bits) {
  // Boost converts digits10 back to bits rounding up, so ceil here keeps us
  // at or above the request.
  return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}

}  // namespace

PrecisionScope::PrecisionScope(unsigned bits) : saved_digits10_(Real::default_precision()) {
  if (bits < 53) throw std::invalid_argument("precision below 53 bits is not supported");
  Real::default_precision(bits_to_digits10(bits));
}

PrecisionScope::~PrecisionScope() { Real::default_precision(saved_digits10_); }

unsigned working_precision_bits() {
  Real probe;
  return precision_bits(probe);
}

unsigned precision_bits(const Real& x) {
  return static_cast<unsigned>(mpfr_get_prec(x.backend().data()));
}

Real to_real(const Rational& q) {
  Real r;
  mpfr_set_q(r.backend().data(), q.backend().data(), MPFR_RNDN);
  return r;
}

namespace {

// Base-10 integer with optional sign. The string constructors of the GMP
// backends would read a leading zero as octal and "0x" as hex.
bool parse_decimal_integer(const std::string& s, BigInt& out) {
  const std::size_t sign = !s.empty() && (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (s.size() == sign || s.find_first_not_of("0123456789", sign) != std::string::npos) return false;
  std::size_t lead = sign;
  while (lead + 1 < s.size() && s[lead] == '0') ++lead;
  out = BigInt(s.substr(lead));
  if (s[0] == '-') out = -out;
  return true;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  const auto bad = [&] { return std::invalid_argument("invalid rational literal '" + text + "'"); };
  if (const auto slash = text.find('/'); slash != std::string::npos) {
    BigInt num, den;
    const std::string d = text.substr(slash + 1);
    if (!parse_decimal_integer(text.substr(0, slash), num) || d.empty() || d[0] == '-' || d[0] == '+' ||
        !parse_decimal_integer(d, den) || den == 0) {
      throw bad();
    }
    return Rational(num, den);
  }
  const auto dot = text.find('.');
  if (dot == std::string::npos) {
    BigInt v;
    if (!parse_decimal_integer(text, v)) throw bad();
    return Rational(v);
  }
  const std::string whole = text.substr(0, dot), frac = text.substr(dot + 1);
  if (frac.empty() || frac.find_first_not_of("0123456789") != std::string::npos) throw bad();
  BigInt num;
  const bool bare = whole.empty() || whole == "-" || whole == "+";
  if (!parse_decimal_integer(bare ? whole + "0" + frac : whole + frac, num)) throw bad();
  return Rational(num, bmp::pow(BigInt(10), static_cast<unsigned>(frac.size())));
}

std::string to_decimal(const Rational& q, int digits) {
  BigInt scale = bmp::pow(BigInt(10), static_cast<unsigned>(digits));
  BigInt num = bmp::numerator(q) * scale;
  BigInt den = bmp::denominator(q);
  bool neg = num < 0;
  if (neg) num = -num;
  // round half up on the magnitude
  BigInt scaled = (2 * num + den) / (2 * den);
  std::string s = scaled.str();
  if (digits > 0) {
    if (s.size() <= static_cast<std::size_t>(digits)) s.insert(0, digits + 1 - s.size(), '0');
    s.insert(s.size() - digits, ".");
  }
  if (neg && scaled != 0) s.insert(0, "-");
  return s;
}

std::string to_decimal(const Real& x, int digits) {
  return x.str(digits, std::ios_base::fixed);
}

BigInt factorial(unsigned n) {
  BigInt r = 1;
  for (unsigned k = 2; k <= n; ++k) r *= k;
  return r;
}

}  // namespace isotree
