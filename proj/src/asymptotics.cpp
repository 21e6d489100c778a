#include "isotree/asymptotics.hpp"

#include <cmath>
#include <functional>

namespace isotree {

namespace {

SolveHints hints_or_default(const AsymOptions& opt) { return opt.hints.value_or(SolveHints{}); }

// Finite-difference points move the singularity by a fraction of a percent,
// so the scan can start just below the unperturbed solution.
SolveHints near(SolveHints h, const Real& x0) {
  h.x_low = 0.97 * x0.convert_to<double>();
  h.growth = 1.02;
  return h;
}

AsymOptions doubled(const AsymOptions& opt) {
  AsymOptions o = opt;
  o.order *= 2;
  o.check_stability = false;
  return o;
}

Stability make_stability(double at_n, double at_2n) {
  Stability s;
  s.checked = true;
  s.at_n = at_n;
  s.at_2n = at_2n;
  s.rel_change = std::abs(at_2n - at_n) / std::max(std::abs(at_2n), 1e-300);
  return s;
}

template <Field F>
TruncSeries<F> xi_from_family(EquationFamily<F>& fam, std::size_t N) {
  auto nested = fam.nested(F(2), N, {}, false);
  TruncSeries<F> g(N);
  for (std::size_t j = 2; j < nested.p.size(); ++j) {
    g = g + (nested.c[j] / F(j)) * substitute_power(nested.p[j], j, N);
  }
  return shift_up(exp(g), N);
}

// First and second derivative at 0 of f from the stencil {0, +-h, +-2h} and
// the same stencil at h/2.
struct Stencil {
  DerivativeEstimate first, second;
};

Stencil five_point(const std::function<Real(const Real&)>& f, double h_double) {
  const Real h(h_double);
  const Real f0 = f(Real(0));
  const Real fq1 = f(h / 2), fm_q1 = f(-h / 2);
  const Real f1 = f(h), fm1 = f(-h);
  const Real f2 = f(2 * h), fm2 = f(-2 * h);
  auto d1 = [](const Real& a2, const Real& a1, const Real& b1, const Real& b2, const Real& s) {
    return (b2 - 8 * b1 + 8 * a1 - a2) / (12 * s);  // a: +, b: -
  };
  auto d2 = [&f0](const Real& a2, const Real& a1, const Real& b1, const Real& b2, const Real& s) {
    return (-a2 + 16 * a1 - 30 * f0 + 16 * b1 - b2) / (12 * s * s);
  };
  const Real h2 = h / 2;
  Stencil st;
  auto fill = [](DerivativeEstimate& e, const Real& at_h, const Real& at_half) {
    e.at_h = at_h.convert_to<double>();
    e.at_half_h = at_half.convert_to<double>();
    e.value = ((16 * at_half - at_h) / 15).convert_to<double>();
    e.drift = std::abs(e.at_h - e.at_half_h) / std::max(std::abs(e.at_half_h), 1e-300);
  };
  fill(st.first, d1(f2, f1, fm1, fm2, h), d1(f1, fq1, fm_q1, fm1, h2));
  fill(st.second, d2(f2, f1, fm1, fm2, h), d2(f1, fq1, fm_q1, fm1, h2));
  return st;
}

// Mixed second derivative at the origin from the 4-point cross stencil.
DerivativeEstimate mixed(const std::function<Real(const Real&, const Real&)>& f, double h_double) {
  auto cross = [&](const Real& h) { return (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4 * h * h); };
  const Real h(h_double);
  const Real a = cross(h), b = cross(h / 2);
  DerivativeEstimate e;
  e.at_h = a.convert_to<double>();
  e.at_half_h = b.convert_to<double>();
  e.value = ((4 * b - a) / 3).convert_to<double>();
  e.drift = std::abs(e.at_h - e.at_half_h) / std::max(std::abs(e.at_half_h), 1e-300);
  return e;
}

Real log_x0(EquationFamily<Real>& fam, const Real& t, std::size_t N, const std::vector<Real>& u,
            const SolveHints& hints) {
  SingularMap map(fam, t, N, u);
  return bmp::log(solve_singular_system(map, hints).x0);
}

}  // namespace

// ---------------------------------------------------------------- series

TruncSeries<Rational> solve_polya_series(const Rational& t, std::size_t N) {
  return EquationFamily<Rational>::polya().series(t, N);
}
TruncSeries<Real> solve_polya_series(const Real& t, std::size_t N) {
  return EquationFamily<Real>::polya().series(t, N);
}
TruncSeries<Rational> solve_degree_series(const DegreeModel& m, const Rational& t, std::size_t N) {
  return EquationFamily<Rational>::degree(m).series(t, N);
}
TruncSeries<Real> solve_degree_series(const DegreeModel& m, const Real& t, std::size_t N) {
  return EquationFamily<Real>::degree(m).series(t, N);
}

TruncSeries<Rational> simply_generated_series(const DegreeModel& m, std::size_t N) {
  if (m.is_unbounded()) throw std::invalid_argument("simply generated series needs a finite degree set");
  Coefficients<TruncSeries<Rational>> co;
  co.has_a = false;
  co.b.assign(m.max_degree() + 1, TruncSeries<Rational>(N));
  for (unsigned k : m.degrees()) co.b[k] = TruncSeries<Rational>::constant(m.weight(k), N);
  return solve_implicit(co, N);
}

TruncSeries<Rational> xi_series_exact(std::size_t N) {
  auto fam = EquationFamily<Rational>::polya();
  return xi_from_family(fam, N);
}

TruncSeries<Real> xi_series(std::size_t N) {
  auto fam = EquationFamily<Real>::polya();
  return xi_from_family(fam, N);
}

// ---------------------------------------------------------------- labeled

AlphaEstimate estimate_alpha(const AsymOptions& opt) {
  PrecisionScope scope(opt.precision_bits);
  AlphaEstimate out;
  out.order = opt.order;
  const TruncSeries<Real> xi = xi_series(opt.order);
  const TruncSeries<Real> dxi = derivative(xi);
  const Real target = 1 / real_e();
  auto f = [&](const Real& x) { return eval(xi, x) - target; };

  Real lo(kAlphaBracketLow), hi(kAlphaBracketHigh);
  if (opt.hints) {
    lo = Real(opt.hints->x_low);
    hi = Real(opt.hints->x_high);
  }
  if (f(lo) >= 0 || f(hi) <= 0) {
    throw SingularSolveError("xi(x) - 1/e has no sign change on the alpha bracket; raise the order");
  }
  while (hi - lo > Real(1e-12)) {
    const Real mid = (lo + hi) / 2;
    if (f(mid) < 0) lo = mid; else hi = mid;
    ++out.bisection_steps;
  }
  Real x = (lo + hi) / 2;
  const Real stop = bmp::ldexp(Real(1), -static_cast<int>(working_precision_bits()) + 16);
  for (int it = 0; it < 60; ++it) {
    const Real r = f(x);
    if (bmp::abs(r) < stop) break;
    x -= r / eval(dxi, x);
    ++out.newton_steps;
  }
  out.alpha = x;
  out.xi_prime = eval(dxi, x);
  out.residual = f(x);
  const Real tol(opt.hints ? opt.hints->residual_tol : SolveHints{}.residual_tol);
  if (bmp::abs(out.residual) > tol) throw SingularSolveError("alpha iteration did not reach the residual tolerance");
  return out;
}

LabeledConstants labeled_constants(const AsymOptions& opt) {
  PrecisionScope scope(opt.precision_bits);
  LabeledConstants out;
  out.alpha = estimate_alpha(opt);
  const Real& a = out.alpha.alpha;
  const Real e = real_e();
  out.A = bmp::sqrt(2 * real_pi() * e * a * out.alpha.xi_prime);
  out.c_l = 1 / (e * e * a);
  if (opt.check_stability) {
    const LabeledConstants twice = labeled_constants(doubled(opt));
    out.A_stability = make_stability(out.A.convert_to<double>(), twice.A.convert_to<double>());
    out.c_l_stability = make_stability(out.c_l.convert_to<double>(), twice.c_l.convert_to<double>());
  }
  return out;
}

// ---------------------------------------------------------------- unary-binary

UnaryBinaryConstants unary_binary_constants(const AsymOptions& opt) {
  PrecisionScope scope(opt.precision_bits);
  const SolveHints hints = hints_or_default(opt);
  auto fam = EquationFamily<Real>::degree(DegreeModel::unary_binary());
  UnaryBinaryConstants out;
  out.t1 = solve_singular_system(SingularMap(fam, Real(1), opt.order), hints);
  out.t2 = solve_singular_system(SingularMap(fam, Real(2), opt.order), hints);
  out.K1 = out.t1.coefficient_constant();
  out.K2 = out.t2.coefficient_constant();
  out.delta = out.t1.x0 * out.t1.x0 / out.t2.x0;
  out.C = out.K2 / (out.K1 * out.K1);
  if (opt.check_stability) {
    const UnaryBinaryConstants twice = unary_binary_constants(doubled(opt));
    out.delta_stability = make_stability(out.delta.convert_to<double>(), twice.delta.convert_to<double>());
    out.C_stability = make_stability(out.C.convert_to<double>(), twice.C.convert_to<double>());
  }
  return out;
}

// ---------------------------------------------------------------- leaves

LeafMeanConstant leaf_mean_constant(const AsymOptions& opt) {
  PrecisionScope scope(opt.precision_bits);
  const SolveHints hints = hints_or_default(opt);
  LeafMeanConstant out;
  const AlphaEstimate al = estimate_alpha(opt);
  const Real& a = al.alpha;
  const std::size_t N = opt.order;

  auto fam = EquationFamily<Real>::polya({0});
  const std::vector<Real> c = c_coeff_table(static_cast<unsigned>(N), Real(2));
  Real sum(0);
  Real aj = a;
  for (std::size_t j = 2; j <= N; ++j) {
    aj *= a;
    sum += c[j] * eval(fam.mark_derivative(Real(2 * j), N / j, 0), aj);
  }
  out.mu = (sum / (a * al.xi_prime) + 1 / al.xi_prime) / real_e();

  SingularMap map(fam, Real(2), N);
  const SingularPoint sp = solve_singular_system(map, hints);
  out.mu_partials = map.du(sp.x0, sp.y0, 0) / (sp.x0 * sp.d.Fx);

  auto tf = EquationFamily<Real>::tree_function({0});
  SingularMap tmap(tf, Real(0), N);
  const SingularPoint tp = solve_singular_system(tmap, hints);
  out.baseline = tmap.du(tp.x0, tp.y0, 0) / (tp.x0 * tp.d.Fx);

  if (opt.check_stability) {
    const LeafMeanConstant twice = leaf_mean_constant(doubled(opt));
    out.stability = make_stability(out.mu.convert_to<double>(), twice.mu.convert_to<double>());
  }
  return out;
}

// ---------------------------------------------------------------- CLTs

CltConstants logweight_clt_constants(const DegreeModel& m, const AsymOptions& opt) {
  PrecisionScope scope(opt.precision_bits);
  const SolveHints hints = hints_or_default(opt);
  auto fam = EquationFamily<Real>::degree(m);
  const SolveHints local = near(hints, solve_singular_system(SingularMap(fam, Real(0), opt.order), hints).x0);
  const Stencil st = five_point([&](const Real& t) { return log_x0(fam, t, opt.order, {}, local); }, opt.fd_step);
  CltConstants out;
  out.step = opt.fd_step;
  out.first = st.first;
  out.second = st.second;
  out.mu = -st.first.value;
  out.sigma2 = -st.second.value;
  if (opt.check_stability) {
    const CltConstants twice = logweight_clt_constants(m, doubled(opt));
    out.mu_stability = make_stability(out.mu, twice.mu);
    out.sigma2_stability = make_stability(out.sigma2, twice.sigma2);
  }
  return out;
}

AutCltConstants aut_clt_constants(const AsymOptions& opt) {
  PrecisionScope scope(opt.precision_bits);
  const SolveHints hints = hints_or_default(opt);
  auto fam = EquationFamily<Real>::polya();
  const SolveHints local = near(hints, solve_singular_system(SingularMap(fam, Real(0), opt.order), hints).x0);
  const Stencil st = five_point([&](const Real& t) { return log_x0(fam, t, opt.order, {}, local); }, opt.fd_step);
  AutCltConstants out;
  CltConstants& c = out.aut;
  c.step = opt.fd_step;
  c.first = st.first;
  c.second = st.second;
  c.mu = st.first.value;
  c.sigma2 = -st.second.value;
  if (opt.check_stability) {
    const AutCltConstants twice = aut_clt_constants(doubled(opt));
    c.mu_stability = make_stability(c.mu, twice.aut.mu);
    c.sigma2_stability = make_stability(c.sigma2, twice.aut.sigma2);
  }
  out.labelings_mu = c.mu + 1;
  return out;
}

DegreeCltConstants degree_clt_constants(const std::vector<unsigned>& degrees, DegreeLaw law, const DegreeModel& m,
                                        const AsymOptions& opt) {
  PrecisionScope scope(opt.precision_bits);
  const SolveHints hints = hints_or_default(opt);
  const std::size_t k = degrees.size();
  if (k == 0) throw std::invalid_argument("at least one marked degree is required");
  EquationFamily<Real> fam = law == DegreeLaw::isomorphic_pairs ? EquationFamily<Real>::polya(degrees)
                             : law == DegreeLaw::galton_watson ? EquationFamily<Real>::degree(m, degrees)
                                                               : EquationFamily<Real>::tree_function(degrees);
  const Real t(law == DegreeLaw::tree_function ? 0 : 2);

  DegreeCltConstants out;
  out.degrees = degrees;
  out.step = opt.fd_step;
  SingularMap map(fam, t, opt.order);
  const SingularPoint sp = solve_singular_system(map, hints);
  const SolveHints local = near(hints, sp.x0);
  for (std::size_t i = 0; i < k; ++i) {
    out.mean.push_back((map.du(sp.x0, sp.y0, i) / (sp.x0 * sp.d.Fx)).convert_to<double>());
  }

  auto f_at = [&](const std::vector<Real>& s) {
    std::vector<Real> u;
    for (const Real& v : s) u.push_back(bmp::exp(v));
    return log_x0(fam, t, opt.order, u, local);
  };
  out.covariance.assign(k, std::vector<double>(k, 0));
  out.fd.assign(k, std::vector<DerivativeEstimate>(k));
  for (std::size_t a = 0; a < k; ++a) {
    const Stencil st = five_point(
        [&](const Real& h) {
          std::vector<Real> s(k, Real(0));
          s[a] = h;
          return f_at(s);
        },
        opt.fd_step);
    out.fd[a][a] = st.second;
    out.covariance[a][a] = -st.second.value;
    for (std::size_t b = 0; b < a; ++b) {
      const DerivativeEstimate e = mixed(
          [&](const Real& ha, const Real& hb) {
            std::vector<Real> s(k, Real(0));
            s[a] = ha;
            s[b] = hb;
            return f_at(s);
          },
          opt.fd_step);
      out.fd[a][b] = out.fd[b][a] = e;
      out.covariance[a][b] = out.covariance[b][a] = -e.value;
    }
  }
  if (opt.check_stability) {
    const DegreeCltConstants twice = degree_clt_constants(degrees, law, m, doubled(opt));
    for (std::size_t i = 0; i < k; ++i) {
      out.mean_stability.push_back(make_stability(out.mean[i], twice.mean[i]));
      out.variance_stability.push_back(make_stability(out.covariance[i][i], twice.covariance[i][i]));
    }
  }
  return out;
}

}  // namespace isotree
