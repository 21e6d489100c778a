#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

#include "isotree/partitions.hpp"
#include "isotree/scalar.hpp"
#include "isotree/series.hpp"
#include "isotree/trees.hpp"

namespace isotree {

// Forward-mode derivative pair, used both pointwise (T = Real) and on whole
// series (T = TruncSeries).
template <class T>
struct Dual {
  T v;
  T d;
  friend Dual operator+(const Dual& a, const Dual& b) { return {a.v + b.v, a.d + b.d}; }
  friend Dual operator*(const Dual& a, const Dual& b) { return {a.v * b.v, a.v * b.d + a.d * b.v}; }
  template <class S>
  friend Dual operator*(const S& c, const Dual& a) {
    return {c * a.v, c * a.d};
  }
};

inline Real vexp(const Real& a) { return bmp::exp(a); }
template <Field F>
TruncSeries<F> vexp(const TruncSeries<F>& a) {
  return exp(a);
}
template <class T>
Dual<T> vexp(const Dual<T>& a) {
  T e = vexp(a.v);
  return {e, a.d * e};
}

enum class FamilyKind {
  tree_function,  // y = x e^y, no nested terms
  polya,          // P(x,t) = x exp(P + sum_{j>=2} c(j,t)/j P(x^j, jt))
  degree,         // P_D(x,t) = x sum_{k in D} (w_k k!)^t sum_i P^i/i! h_{k-i}
};

// Every family is written as y = x (A(x) e^y + sum_l B_l(x) y^l). Marks u_i on
// out-degrees d_i enter as (u_i - 1) times the degree-d_i term (exponential
// kinds) or as a factor on (w_d d!)^t (degree kind); nested terms at level
// j use (jt, u^j).
template <class V>
struct Coefficients {
  bool has_a = false;
  V a;
  std::vector<V> b;  // b[l] multiplies y^l
};

template <Field F>
class EquationFamily {
 public:
  static EquationFamily tree_function(std::vector<unsigned> marks = {});
  static EquationFamily polya(std::vector<unsigned> marks = {});
  static EquationFamily degree(DegreeModel m, std::vector<unsigned> marks = {});

  FamilyKind kind() const { return kind_; }
  const std::vector<unsigned>& marks() const { return marks_; }
  const DegreeModel& model() const { return model_; }

  // Coefficients of P(x, t; u) through x^N. Empty u means every mark is one.
  // Exact in the rational field when t is an integer.
  TruncSeries<F> series(const F& t, std::size_t N, const std::vector<F>& u = {});
  // dP/du_i at u = 1.
  TruncSeries<F> mark_derivative(const F& t, std::size_t N, std::size_t i);

  // c(j, t) for j = 0..J together with the nested series P(., jt; u^j) at
  // order N/j (j = 2..J), unsubstituted. J = N for exponential kinds and
  // max degree for the degree kind.
  struct Nested {
    std::vector<F> c;
    std::vector<TruncSeries<F>> p;                // p[j]
    std::vector<std::vector<TruncSeries<F>>> dp;  // dp[i][j] = dP/du_i at level j (u = 1 only)
  };
  Nested nested(const F& t, std::size_t N, const std::vector<F>& u, bool with_mark_derivatives);

  // Per-level constant data used by assemble().
  std::vector<F> degree_coefficients(const F& t) const;  // (w_k k!)^t, aligned with model().degrees()
  std::size_t max_b_power() const;
  std::size_t max_h_index() const;

  // Builds A and B_l from nested values (series, scalars or duals) and
  // per-mark factors. mark_factor[i] is u_i - 1 (exponential kinds) or u_i
  // (degree kind).
  template <class V>
  Coefficients<V> assemble(const std::vector<F>& c, const std::vector<V>& nested_values,
                           const std::vector<V>& mark_factor, const std::vector<F>& coef, const V& one,
                           const V& zero) const;

 private:
  EquationFamily(FamilyKind k, DegreeModel m, std::vector<unsigned> marks);
  std::size_t nested_depth(std::size_t N) const;
  std::vector<F> powered(const std::vector<F>& u, std::size_t j) const;
  std::vector<F> full_marks(const std::vector<F>& u) const;

  FamilyKind kind_;
  DegreeModel model_;
  std::vector<unsigned> marks_;
  std::map<std::pair<F, std::vector<F>>, TruncSeries<F>> memo_;
  std::map<std::pair<F, std::size_t>, TruncSeries<F>> dmemo_;
};

// Solves y = x (A e^y + sum_l B_l y^l) for y as a series, one coefficient at a
// time (y_{m+1} depends on y_1..y_m only).
template <Field F>
TruncSeries<F> solve_implicit(const Coefficients<TruncSeries<F>>& co, std::size_t N);

// First and second partials of F(x, y) at a point.
struct Partials {
  Real F, Fx, Fy, Fxy, Fyy;
};

// F(x, y) of one level (t, u) of a family, evaluated pointwise. Nested terms
// are the truncated polynomials P(x^j, jt; u^j).
class SingularMap {
 public:
  SingularMap(EquationFamily<Real>& family, const Real& t, std::size_t N, std::vector<Real> u = {});

  Partials at(const Real& x, const Real& y) const;
  // dF/du_i at (x, y); only for the level with every mark equal to one.
  Real du(const Real& x, const Real& y, std::size_t i) const;
  // True for exponential kinds without marks, where F = x A(x) e^y and the
  // singular point has y = 1.
  bool pure_exponential() const;
  // x A(x) with its x-derivative (exponential kinds).
  Dual<Real> x_times_a(const Real& x) const;

  const EquationFamily<Real>& family() const { return *family_; }

 private:
  Coefficients<Dual<Real>> coefficients_dx(const Real& x) const;

  EquationFamily<Real>* family_;
  Real t_;
  std::size_t N_;
  std::vector<Real> u_;
  bool at_unit_marks_;
  typename EquationFamily<Real>::Nested nested_;
  std::vector<TruncSeries<Real>> nested_deriv_;  // derivative series of nested_.p[j]
  std::vector<Real> coef_;
};

}  // namespace isotree
