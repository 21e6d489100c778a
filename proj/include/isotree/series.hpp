#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "isotree/scalar.hpp"

namespace isotree {

// Power series in x truncated after x^order. Coefficients 0..order are stored
// explicitly; binary operations return the smaller of the operand orders.
template <Field F>
class TruncSeries {
 public:
  using scalar_type = F;

  explicit TruncSeries(std::size_t order = 0) : coeffs_(order + 1, F(0)) {}

  TruncSeries(std::initializer_list<F> coeffs, std::size_t order) : coeffs_(order + 1, F(0)) {
    std::size_t k = 0;
    for (const F& c : coeffs) {
      if (k > order) break;
      coeffs_[k++] = c;
    }
  }

  static TruncSeries constant(const F& c, std::size_t order) {
    TruncSeries s(order);
    s.coeffs_[0] = c;
    return s;
  }

  // The monomial x (or 0 at order 0).
  static TruncSeries variable(std::size_t order) {
    TruncSeries s(order);
    if (order >= 1) s.coeffs_[1] = F(1);
    return s;
  }

  std::size_t order() const { return coeffs_.size() - 1; }
  const std::vector<F>& coeffs() const { return coeffs_; }

  const F& operator[](std::size_t k) const { return coeffs_[k]; }
  F& operator[](std::size_t k) { return coeffs_[k]; }

  // Coefficient or zero beyond the stored order.
  F coeff_or_zero(std::size_t k) const { return k <= order() ? coeffs_[k] : F(0); }

  TruncSeries truncated(std::size_t order) const {
    TruncSeries s(order);
    std::size_t top = std::min(order, this->order());
    std::copy(coeffs_.begin(), coeffs_.begin() + top + 1, s.coeffs_.begin());
    return s;
  }

  TruncSeries& operator+=(const TruncSeries& b) { return *this = *this + b; }
  TruncSeries& operator-=(const TruncSeries& b) { return *this = *this - b; }
  TruncSeries& operator*=(const TruncSeries& b) { return *this = *this * b; }

  TruncSeries& operator*=(const F& c) {
    for (F& a : coeffs_) a *= c;
    return *this;
  }

  friend TruncSeries operator+(const TruncSeries& a, const TruncSeries& b) {
    std::size_t n = std::min(a.order(), b.order());
    TruncSeries r(n);
    for (std::size_t k = 0; k <= n; ++k) r.coeffs_[k] = a.coeffs_[k] + b.coeffs_[k];
    return r;
  }

  friend TruncSeries operator-(const TruncSeries& a, const TruncSeries& b) {
    std::size_t n = std::min(a.order(), b.order());
    TruncSeries r(n);
    for (std::size_t k = 0; k <= n; ++k) r.coeffs_[k] = a.coeffs_[k] - b.coeffs_[k];
    return r;
  }

  friend TruncSeries operator-(const TruncSeries& a) {
    TruncSeries r(a.order());
    for (std::size_t k = 0; k <= a.order(); ++k) r.coeffs_[k] = -a.coeffs_[k];
    return r;
  }

  friend TruncSeries operator*(const TruncSeries& a, const TruncSeries& b) {
    std::size_t n = std::min(a.order(), b.order());
    TruncSeries r(n);
    for (std::size_t i = 0; i <= n; ++i) {
      if (a.coeffs_[i] == 0) continue;
      for (std::size_t j = 0; i + j <= n; ++j) {
        if (b.coeffs_[j] == 0) continue;
        r.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
      }
    }
    return r;
  }

  friend TruncSeries operator*(const F& c, TruncSeries a) {
    a *= c;
    return a;
  }

  friend bool operator==(const TruncSeries& a, const TruncSeries& b) {
    return a.coeffs_ == b.coeffs_;
  }

  friend std::ostream& operator<<(std::ostream& os, const TruncSeries& s) {
    os << "[";
    for (std::size_t k = 0; k <= s.order(); ++k) os << (k ? ", " : "") << s.coeffs_[k];
    return os << "] + O(x^" << s.order() + 1 << ")";
  }

 private:
  std::vector<F> coeffs_;
};

namespace detail {

inline Rational scalar_exp(const Rational& a) {
  if (a != 0) throw std::domain_error("exp: nonzero constant term has no rational exponential");
  return Rational(1);
}
inline Real scalar_exp(const Real& a) { return bmp::exp(a); }

inline Rational scalar_log1p(const Rational& a) {
  if (a != 0) throw std::domain_error("log1p: nonzero constant term has no rational logarithm");
  return Rational(0);
}
inline Real scalar_log1p(const Real& a) {
  if (a <= -1) throw std::domain_error("log1p: constant term must exceed -1");
  return bmp::log1p(a);
}

}  // namespace detail

// Formal exponential via (exp a)' = a' exp a.
template <Field F>
TruncSeries<F> exp(const TruncSeries<F>& a) {
  const std::size_t n = a.order();
  TruncSeries<F> e(n);
  e[0] = detail::scalar_exp(a[0]);
  for (std::size_t m = 1; m <= n; ++m) {
    F s(0);
    for (std::size_t k = 1; k <= m; ++k) {
      if (a[k] != 0) s += F(k) * a[k] * e[m - k];
    }
    e[m] = s / F(m);
  }
  return e;
}

// Formal log(1 + a) via (1 + a) l' = a'.
template <Field F>
TruncSeries<F> log1p(const TruncSeries<F>& a) {
  const std::size_t n = a.order();
  TruncSeries<F> l(n);
  l[0] = detail::scalar_log1p(a[0]);
  const F lead = F(1) + a[0];
  for (std::size_t m = 1; m <= n; ++m) {
    F s = F(m) * a[m];
    for (std::size_t k = 1; k < m; ++k) {
      if (a[m - k] != 0) s -= F(k) * l[k] * a[m - k];
    }
    l[m] = s / (F(m) * lead);
  }
  return l;
}

// b(x) = a(x^j), truncated at `order`.
template <Field F>
TruncSeries<F> substitute_power(const TruncSeries<F>& a, std::size_t j, std::size_t order) {
  if (j == 0) throw std::invalid_argument("substitute_power: j must be positive");
  TruncSeries<F> b(order);
  for (std::size_t k = 0; k <= a.order() && j * k <= order; ++k) b[j * k] = a[k];
  return b;
}

template <Field F>
TruncSeries<F> substitute_power(const TruncSeries<F>& a, std::size_t j) {
  return substitute_power(a, j, a.order());
}

// Horner evaluation of the stored polynomial; no tail estimate.
template <Field F, class X>
X eval(const TruncSeries<F>& a, const X& x) {
  X acc(0);
  for (std::size_t k = a.order() + 1; k-- > 0;) acc = acc * x + X(a[k]);
  return acc;
}

template <Field F>
TruncSeries<F> derivative(const TruncSeries<F>& a) {
  const std::size_t n = a.order() == 0 ? 0 : a.order() - 1;
  TruncSeries<F> d(n);
  for (std::size_t k = 1; k <= a.order(); ++k) d[k - 1] = F(k) * a[k];
  return d;
}

// 1 / (1 - a) for a with zero constant term.
template <Field F>
TruncSeries<F> geometric(const TruncSeries<F>& a) {
  if (a[0] != 0) throw std::domain_error("geometric: constant term must vanish");
  const std::size_t n = a.order();
  TruncSeries<F> r(n);
  r[0] = F(1);
  for (std::size_t m = 1; m <= n; ++m) {
    F s(0);
    for (std::size_t k = 1; k <= m; ++k) {
      if (a[k] != 0) s += a[k] * r[m - k];
    }
    r[m] = s;
  }
  return r;
}

template <Field F>
TruncSeries<F> shift_up(const TruncSeries<F>& a, std::size_t order) {
  TruncSeries<F> r(order);
  for (std::size_t k = 0; k + 1 <= order && k <= a.order(); ++k) r[k + 1] = a[k];
  return r;
}

inline TruncSeries<Real> to_real(const TruncSeries<Rational>& a) {
  TruncSeries<Real> r(a.order());
  for (std::size_t k = 0; k <= a.order(); ++k) r[k] = to_real(a[k]);
  return r;
}
inline TruncSeries<Real> to_real(const TruncSeries<Real>& a) { return a; }

}  // namespace isotree
