#include "isotree/equations.hpp"

#include <algorithm>
#include <stdexcept>

namespace isotree {

namespace {

template <Field F>
F inv_factorial(unsigned l) {
  return F(1) / F(Rational(factorial(l)));
}

Rational integer_power(Rational base, const Rational& t) {
  if (denominator(t) != 1) throw std::domain_error("exact degree weights need an integer t");
  BigInt e = numerator(t);
  const bool invert = e < 0;
  if (invert) e = -e;
  Rational r = 1;
  while (e > 0) {
    if ((e & 1) != 0) r *= base;
    base *= base;
    e >>= 1;
  }
  return invert ? Rational(1 / r) : r;
}

Rational weight_power(const Rational& base, const Rational& t) { return integer_power(base, t); }
Real weight_power(const Rational& base, const Real& t) { return bmp::pow(to_real(base), t); }

template <Field F>
F int_power(const F& x, std::size_t j) {
  F r(1);
  for (std::size_t k = 0; k < j; ++k) r *= x;
  return r;
}

}  // namespace

template <Field F>
EquationFamily<F>::EquationFamily(FamilyKind k, DegreeModel m, std::vector<unsigned> marks)
    : kind_(k), model_(std::move(m)), marks_(std::move(marks)) {
  if (kind_ == FamilyKind::degree && model_.is_unbounded()) {
    throw std::invalid_argument("degree family needs a finite degree set");
  }
}

template <Field F>
EquationFamily<F> EquationFamily<F>::tree_function(std::vector<unsigned> marks) {
  return EquationFamily(FamilyKind::tree_function, DegreeModel::unbounded(), std::move(marks));
}
template <Field F>
EquationFamily<F> EquationFamily<F>::polya(std::vector<unsigned> marks) {
  return EquationFamily(FamilyKind::polya, DegreeModel::unbounded(), std::move(marks));
}
template <Field F>
EquationFamily<F> EquationFamily<F>::degree(DegreeModel m, std::vector<unsigned> marks) {
  return EquationFamily(FamilyKind::degree, std::move(m), std::move(marks));
}

template <Field F>
std::size_t EquationFamily<F>::nested_depth(std::size_t N) const {
  switch (kind_) {
    case FamilyKind::tree_function: return 1;
    case FamilyKind::polya: return std::max<std::size_t>(N, 1);
    case FamilyKind::degree: return std::max<std::size_t>(std::min<std::size_t>(N, model_.max_degree()), 1);
  }
  return 1;
}

template <Field F>
std::size_t EquationFamily<F>::max_h_index() const {
  if (kind_ == FamilyKind::degree) return model_.max_degree();
  std::size_t h = 0;
  for (unsigned d : marks_) h = std::max<std::size_t>(h, d);
  return h;
}

template <Field F>
std::size_t EquationFamily<F>::max_b_power() const {
  return max_h_index();
}

template <Field F>
std::vector<F> EquationFamily<F>::degree_coefficients(const F& t) const {
  std::vector<F> out;
  if (kind_ != FamilyKind::degree) return out;
  for (std::size_t i = 0; i < model_.degrees().size(); ++i) {
    const unsigned k = model_.degrees()[i];
    out.push_back(weight_power(model_.weights()[i] * Rational(factorial(k)), t));
  }
  return out;
}

template <Field F>
std::vector<F> EquationFamily<F>::full_marks(const std::vector<F>& u) const {
  if (u.empty()) return std::vector<F>(marks_.size(), F(1));
  if (u.size() != marks_.size()) throw std::invalid_argument("one mark value per marked degree is required");
  return u;
}

template <Field F>
std::vector<F> EquationFamily<F>::powered(const std::vector<F>& u, std::size_t j) const {
  std::vector<F> r;
  r.reserve(u.size());
  for (const F& v : u) r.push_back(int_power(v, j));
  return r;
}

template <Field F>
template <class V>
Coefficients<V> EquationFamily<F>::assemble(const std::vector<F>& c, const std::vector<V>& S,
                                            const std::vector<V>& mark_factor, const std::vector<F>& coef,
                                            const V& one, const V& zero) const {
  const std::size_t H = max_h_index();
  std::vector<V> h(H + 1, zero);
  h[0] = one;
  if (kind_ != FamilyKind::tree_function) {
    for (std::size_t m = 1; m <= H; ++m) {
      V acc = zero;
      for (std::size_t j = 2; j <= m && j < S.size(); ++j) acc = acc + c[j] * (S[j] * h[m - j]);
      h[m] = (F(1) / F(m)) * acc;
    }
  }

  Coefficients<V> co;
  co.b.assign(max_b_power() + 1, zero);
  if (kind_ == FamilyKind::degree) {
    co.has_a = false;
    co.a = zero;
    const auto& D = model_.degrees();
    for (std::size_t idx = 0; idx < D.size(); ++idx) {
      const unsigned k = D[idx];
      V mk = one;
      for (std::size_t i = 0; i < marks_.size(); ++i) {
        if (marks_[i] == k) mk = mark_factor[i];
      }
      for (unsigned l = 0; l <= k; ++l) co.b[l] = co.b[l] + (coef[idx] * inv_factorial<F>(l)) * (mk * h[k - l]);
    }
    return co;
  }

  co.has_a = true;
  if (kind_ == FamilyKind::polya) {
    V g = zero;
    for (std::size_t j = 2; j < S.size(); ++j) g = g + (c[j] / F(j)) * S[j];
    co.a = vexp(g);
  } else {
    co.a = one;
  }
  for (std::size_t i = 0; i < marks_.size(); ++i) {
    const unsigned d = marks_[i];
    for (unsigned l = 0; l <= d; ++l) co.b[l] = co.b[l] + inv_factorial<F>(l) * (mark_factor[i] * h[d - l]);
  }
  return co;
}

template <Field F>
TruncSeries<F> solve_implicit(const Coefficients<TruncSeries<F>>& co, std::size_t N) {
  TruncSeries<F> y(N);
  const std::size_t L = co.b.empty() ? 0 : co.b.size() - 1;
  std::vector<F> E(N + 1, F(0));
  E[0] = F(1);
  std::vector<std::vector<F>> pw(L + 1, std::vector<F>(N + 1, F(0)));
  if (L + 1 > 0) pw[0][0] = F(1);
  for (std::size_t m = 0; m + 1 <= N; ++m) {
    if (m >= 1) {
      F s(0);
      for (std::size_t k = 1; k <= m; ++k) s += F(k) * y[k] * E[m - k];
      E[m] = s / F(m);
      for (std::size_t l = 1; l <= L; ++l) {
        F p(0);
        for (std::size_t k = 1; k <= m; ++k) {
          if (y[k] != 0) p += y[k] * pw[l - 1][m - k];
        }
        pw[l][m] = p;
      }
    }
    F phi(0);
    if (co.has_a) {
      for (std::size_t i = 0; i <= m && i <= co.a.order(); ++i) phi += co.a[i] * E[m - i];
    }
    for (std::size_t l = 0; l <= L; ++l) {
      const auto& B = co.b[l];
      for (std::size_t i = 0; i <= m && i <= B.order(); ++i) {
        if (B[i] != 0) phi += B[i] * pw[l][m - i];
      }
    }
    y[m + 1] = phi;
  }
  return y;
}

template <Field F>
TruncSeries<F> EquationFamily<F>::series(const F& t, std::size_t N, const std::vector<F>& u_in) {
  const std::vector<F> u = full_marks(u_in);
  auto key = std::make_pair(t, u);
  if (auto it = memo_.find(key); it != memo_.end() && it->second.order() >= N) return it->second.truncated(N);

  const std::size_t J = nested_depth(N);
  const std::vector<F> c = c_coeff_table(static_cast<unsigned>(std::max(J, max_h_index()) + 1), t);
  const TruncSeries<F> one = TruncSeries<F>::constant(F(1), N);
  const TruncSeries<F> zero(N);
  std::vector<TruncSeries<F>> S;
  if (kind_ != FamilyKind::tree_function) {
    S.assign(J + 1, zero);
    for (std::size_t j = 2; j <= J; ++j) {
      if (N / j == 0) continue;
      S[j] = substitute_power(series(F(j) * t, N / j, powered(u, j)), j, N);
    }
  }
  std::vector<TruncSeries<F>> mfac;
  for (const F& v : u) mfac.push_back(TruncSeries<F>::constant(kind_ == FamilyKind::degree ? v : v - F(1), N));
  auto co = assemble(c, S, mfac, degree_coefficients(t), one, zero);
  TruncSeries<F> y = solve_implicit(co, N);
  memo_[key] = y;
  return y;
}

template <Field F>
TruncSeries<F> EquationFamily<F>::mark_derivative(const F& t, std::size_t N, std::size_t i) {
  if (i >= marks_.size()) throw std::out_of_range("mark index");
  auto key = std::make_pair(t, i);
  if (auto it = dmemo_.find(key); it != dmemo_.end() && it->second.order() >= N) return it->second.truncated(N);

  using TS = TruncSeries<F>;
  using D = Dual<TS>;
  const TS P = series(t, N);
  const std::size_t J = nested_depth(N);
  const std::vector<F> c = c_coeff_table(static_cast<unsigned>(std::max(J, max_h_index()) + 1), t);
  const TS zs(N);
  const D one{TS::constant(F(1), N), zs};
  const D zero{zs, zs};
  std::vector<D> S;
  if (kind_ != FamilyKind::tree_function) {
    S.assign(J + 1, zero);
    for (std::size_t j = 2; j <= J; ++j) {
      if (N / j == 0) continue;
      S[j] = D{substitute_power(series(F(j) * t, N / j), j, N),
               F(j) * substitute_power(mark_derivative(F(j) * t, N / j, i), j, N)};
    }
  }
  std::vector<D> mfac;
  for (std::size_t k = 0; k < marks_.size(); ++k) {
    mfac.push_back(D{TS::constant(F(kind_ == FamilyKind::degree ? 1 : 0), N), TS::constant(F(k == i ? 1 : 0), N)});
  }
  auto co = assemble(c, S, mfac, degree_coefficients(t), one, zero);

  // Q = x Phi_u / (1 - x Phi_y) with everything evaluated on y = P.
  TS num(N), dy(N);
  if (co.has_a) {
    const TS E = exp(P);
    num = num + co.a.d * E;
    dy = dy + co.a.v * E;
  }
  TS pl = TS::constant(F(1), N);  // P^l
  TS plm1(N);                     // P^(l-1)
  for (std::size_t l = 0; l < co.b.size(); ++l) {
    num = num + co.b[l].d * pl;
    if (l >= 1) dy = dy + F(l) * (co.b[l].v * plm1);
    plm1 = pl;
    pl = pl * P;
  }
  TS Q = shift_up(num, N) * geometric(shift_up(dy, N));
  dmemo_[key] = Q;
  return Q;
}

template <Field F>
typename EquationFamily<F>::Nested EquationFamily<F>::nested(const F& t, std::size_t N, const std::vector<F>& u_in,
                                                             bool with_mark_derivatives) {
  const std::vector<F> u = full_marks(u_in);
  const std::size_t J = nested_depth(N);
  Nested out;
  out.c = c_coeff_table(static_cast<unsigned>(std::max(J, max_h_index()) + 1), t);
  if (kind_ == FamilyKind::tree_function) return out;
  out.p.assign(J + 1, TruncSeries<F>(0));
  for (std::size_t j = 2; j <= J; ++j) out.p[j] = series(F(j) * t, N / j, powered(u, j));
  if (with_mark_derivatives) {
    out.dp.assign(marks_.size(), std::vector<TruncSeries<F>>(J + 1, TruncSeries<F>(0)));
    for (std::size_t i = 0; i < marks_.size(); ++i) {
      for (std::size_t j = 2; j <= J; ++j) out.dp[i][j] = mark_derivative(F(j) * t, N / j, i);
    }
  }
  return out;
}

template class EquationFamily<Rational>;
template class EquationFamily<Real>;
template TruncSeries<Rational> solve_implicit(const Coefficients<TruncSeries<Rational>>&, std::size_t);
template TruncSeries<Real> solve_implicit(const Coefficients<TruncSeries<Real>>&, std::size_t);

// ------------------------------------------------------------- SingularMap

SingularMap::SingularMap(EquationFamily<Real>& family, const Real& t, std::size_t N, std::vector<Real> u)
    : family_(&family), t_(t), N_(N) {
  u_ = u.empty() ? std::vector<Real>(family.marks().size(), Real(1)) : std::move(u);
  at_unit_marks_ = std::all_of(u_.begin(), u_.end(), [](const Real& v) { return v == 1; });
  nested_ = family.nested(t, N, u_, at_unit_marks_ && !u_.empty());
  nested_deriv_.reserve(nested_.p.size());
  for (const auto& p : nested_.p) nested_deriv_.push_back(derivative(p));
  coef_ = family.degree_coefficients(t);
}

bool SingularMap::pure_exponential() const {
  return family_->kind() != FamilyKind::degree && family_->marks().empty();
}

Coefficients<Dual<Real>> SingularMap::coefficients_dx(const Real& x) const {
  using D = Dual<Real>;
  std::vector<D> S(nested_.p.size(), D{Real(0), Real(0)});
  Real xj = x;  // x^(j-1) at the top of iteration j
  for (std::size_t j = 2; j < nested_.p.size(); ++j) {
    const Real xjm1 = xj;
    xj *= x;
    S[j] = D{eval(nested_.p[j], xj), Real(j) * xjm1 * eval(nested_deriv_[j], xj)};
  }
  std::vector<D> mfac;
  for (const Real& v : u_) mfac.push_back(D{family_->kind() == FamilyKind::degree ? v : v - 1, Real(0)});
  return family_->assemble(nested_.c, S, mfac, coef_, D{Real(1), Real(0)}, D{Real(0), Real(0)});
}

Partials SingularMap::at(const Real& x, const Real& y) const {
  const auto co = coefficients_dx(x);
  Partials p{Real(0), Real(0), Real(0), Real(0), Real(0)};
  Real phi(0), phiy(0), phiyy(0), px(0), pxy(0);
  if (co.has_a) {
    const Real E = bmp::exp(y);
    const Real ae = co.a.v * E;
    phi += ae;
    phiy += ae;
    phiyy += ae;
    px += (co.a.v + x * co.a.d) * E;
    pxy += (co.a.v + x * co.a.d) * E;
  }
  Real yl(1), ylm1(0), ylm2(0);  // y^l, y^(l-1), y^(l-2)
  for (std::size_t l = 0; l < co.b.size(); ++l) {
    const Real& b = co.b[l].v;
    const Real bx = b + x * co.b[l].d;
    phi += b * yl;
    px += bx * yl;
    if (l >= 1) {
      phiy += Real(l) * b * ylm1;
      pxy += Real(l) * bx * ylm1;
    }
    if (l >= 2) phiyy += Real(l * (l - 1)) * b * ylm2;
    ylm2 = ylm1;
    ylm1 = yl;
    yl *= y;
  }
  p.F = x * phi;
  p.Fy = x * phiy;
  p.Fyy = x * phiyy;
  p.Fx = px;
  p.Fxy = pxy;
  return p;
}

Real SingularMap::du(const Real& x, const Real& y, std::size_t i) const {
  if (!at_unit_marks_) throw std::logic_error("mark derivatives are available at u = 1 only");
  if (i >= u_.size()) throw std::out_of_range("mark index");
  using D = Dual<Real>;
  std::vector<D> S(nested_.p.size(), D{Real(0), Real(0)});
  Real xj = x;
  for (std::size_t j = 2; j < nested_.p.size(); ++j) {
    xj *= x;
    S[j] = D{eval(nested_.p[j], xj), Real(j) * eval(nested_.dp[i][j], xj)};
  }
  std::vector<D> mfac;
  for (std::size_t k = 0; k < u_.size(); ++k) {
    mfac.push_back(D{Real(family_->kind() == FamilyKind::degree ? 1 : 0), Real(k == i ? 1 : 0)});
  }
  const auto co = family_->assemble(nested_.c, S, mfac, coef_, D{Real(1), Real(0)}, D{Real(0), Real(0)});
  Real r(0);
  if (co.has_a) r += co.a.d * bmp::exp(y);
  Real yl(1);
  for (std::size_t l = 0; l < co.b.size(); ++l) {
    r += co.b[l].d * yl;
    yl *= y;
  }
  return x * r;
}

Dual<Real> SingularMap::x_times_a(const Real& x) const {
  const auto co = coefficients_dx(x);
  if (!co.has_a) throw std::logic_error("x_times_a applies to exponential families");
  return {x * co.a.v, co.a.v + x * co.a.d};
}

}  // namespace isotree
