#include "isotree/singular.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace isotree {

namespace {

struct Fold {
  Real y;
  Real gap;  // min_y F - y
};

// y >= 0 with F_y(x, y) = 1, located by a bracketed Newton iteration.
Fold fold_at(const PartialsFn& F, const Real& x) {
  Partials p0 = F(x, Real(0));
  if (p0.Fy >= 1) return {Real(0), p0.F};
  Real lo(0), hi(1);
  Partials ph = F(x, hi);
  unsigned widen = 0;
  while (ph.Fy < 1) {
    lo = hi;
    hi *= 2;
    ph = F(x, hi);
    if (++widen > 200) throw SingularSolveError("F_y never reaches 1 in y");
  }
  // Only the sign of the gap matters here and it is quadratic in the error of
  // y, so a loose tolerance suffices; the final Newton polish restores full
  // precision.
  Real y = (lo + hi) / 2;
  const Real tiny(1e-24);
  for (int it = 0; it < 200; ++it) {
    Partials p = F(x, y);
    const Real g = p.Fy - 1;
    if (g < 0) lo = y; else hi = y;
    Real next = p.Fyy > 0 ? Real(y - g / p.Fyy) : Real((lo + hi) / 2);
    if (next <= lo || next >= hi) next = (lo + hi) / 2;
    if (bmp::abs(next - y) <= tiny * (1 + bmp::abs(y))) {
      y = next;
      break;
    }
    y = next;
  }
  return {y, F(x, y).F - y};
}

std::string str(const Real& v) {
  std::ostringstream os;
  os << std::setprecision(6) << v.convert_to<double>();
  return os.str();
}

void check_nondegenerate(const SingularPoint& s, const SolveHints& hints) {
  if (!(s.d.Fx > 0)) throw SingularSolveError("F_x is not positive at the singular point: " + str(s.d.Fx));
  if (!(s.d.Fyy > 0)) throw SingularSolveError("F_yy is not positive at the singular point: " + str(s.d.Fyy));
  const Real tol(hints.residual_tol);
  if (bmp::abs(s.residual_f) > tol || bmp::abs(s.residual_g) > tol) {
    throw SingularSolveError("singular system residuals " + str(s.residual_f) + ", " + str(s.residual_g) +
                             " above tolerance");
  }
}

template <class Below>
std::pair<Real, Real> bracket(Below below, const SolveHints& hints) {
  Real lo(hints.x_low);
  for (int k = 0; !below(lo); ++k) {
    if (k > 60) throw SingularSolveError("no analytic starting point below the singularity");
    lo /= 2;
  }
  const Real cap(hints.x_high), growth(hints.growth);
  Real hi = lo * growth;
  while (below(hi)) {
    lo = hi;
    hi *= growth;
    if (hi > cap) throw SingularSolveError("could not bracket the singularity below x = " + str(cap));
  }
  return {lo, hi};
}

}  // namespace

Real SingularPoint::coefficient_constant() const {
  return bmp::sqrt(x0 * d.Fx / (2 * real_pi() * d.Fyy));
}

SingularPoint solve_singular_system(const PartialsFn& F, const SolveHints& hints) {
  SingularPoint s;
  auto below = [&F](const Real& x) { return fold_at(F, x).gap < 0; };
  auto [lo, hi] = bracket(below, hints);
  // The gap is increasing in x with slope F_x (envelope theorem), so Newton
  // steps are taken whenever they stay inside the bracket.
  Real x = (lo + hi) / 2;
  Real y(0);
  for (int it = 0; it < 200 && hi - lo > Real(1e-11) * hi; ++it) {
    const Fold f = fold_at(F, x);
    y = f.y;
    if (f.gap < 0) lo = x; else hi = x;
    const Real fx = F(x, f.y).Fx;
    Real next = fx > 0 ? Real(x - f.gap / fx) : Real((lo + hi) / 2);
    if (next <= lo || next >= hi) next = (lo + hi) / 2;
    if (bmp::abs(next - x) < Real(1e-14) * x) {
      x = next;
      break;
    }
    x = next;
    ++s.bisection_steps;
  }
  y = fold_at(F, x).y;

  const Real stop = bmp::ldexp(Real(1), -static_cast<int>(working_precision_bits()) + 16);
  Partials p = F(x, y);
  for (int it = 0; it < 60; ++it) {
    const Real r1 = p.F - y, r2 = p.Fy - 1;
    if (bmp::abs(r1) < stop && bmp::abs(r2) < stop) break;
    const Real a = p.Fx, b = p.Fy - 1, c = p.Fxy, d = p.Fyy;
    const Real det = a * d - b * c;
    if (det == 0) throw SingularSolveError("singular Jacobian in the Newton polish");
    const Real dx = (-r1 * d + r2 * b) / det;
    const Real dy = (-r2 * a + r1 * c) / det;
    x += dx;
    y += dy;
    p = F(x, y);
    ++s.newton_steps;
  }
  s.x0 = x;
  s.y0 = y;
  s.d = p;
  s.residual_f = p.F - y;
  s.residual_g = p.Fy - 1;
  check_nondegenerate(s, hints);
  return s;
}

SingularPoint solve_singular_system(const SingularMap& map, const SolveHints& hints) {
  if (map.pure_exponential()) return solve_exponential_singularity(map, hints);
  return solve_singular_system([&map](const Real& x, const Real& y) { return map.at(x, y); }, hints);
}

SingularPoint solve_exponential_singularity(const SingularMap& map, const SolveHints& hints) {
  if (!map.pure_exponential()) throw std::logic_error("family has marks or is not exponential");
  const Real e = real_e();
  auto psi = [&](const Real& x) { return map.x_times_a(x).v * e - 1; };
  SingularPoint s;
  auto [lo, hi] = bracket([&psi](const Real& x) { return psi(x) < 0; }, hints);
  while (hi - lo > Real(1e-12) * hi) {
    const Real mid = (lo + hi) / 2;
    if (psi(mid) < 0) lo = mid; else hi = mid;
    ++s.bisection_steps;
  }
  Real x = (lo + hi) / 2;
  const Real stop = bmp::ldexp(Real(1), -static_cast<int>(working_precision_bits()) + 16);
  for (int it = 0; it < 60; ++it) {
    const Dual<Real> xa = map.x_times_a(x);
    const Real r = xa.v * e - 1;
    if (bmp::abs(r) < stop) break;
    x -= r / (xa.d * e);
    ++s.newton_steps;
  }
  s.x0 = x;
  s.y0 = 1;
  s.d = map.at(x, s.y0);
  s.residual_f = s.d.F - s.y0;
  s.residual_g = s.d.Fy - 1;
  check_nondegenerate(s, hints);
  return s;
}

}  // namespace isotree
