#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "isotree/equations.hpp"
#include "isotree/scalar.hpp"

namespace isotree {

class SingularSolveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Search window for the x coordinate. The scan starts at x_low, which must lie
// inside the analytic region, and walks up by `growth` until the fold is
// passed; stepping in small factors keeps the truncated nested polynomials
// from being evaluated far outside their disc of convergence. x_high caps the
// scan.
struct SolveHints {
  double x_low = 1e-3;
  double x_high = 10;
  double growth = 1.2;
  double residual_tol = 1e-20;
};

struct SingularPoint {
  Real x0, y0;
  Partials d;       // partials at (x0, y0)
  Real residual_f;  // F - y
  Real residual_g;  // F_y - 1
  unsigned bisection_steps = 0;
  unsigned newton_steps = 0;

  // [x^n] y ~ K x0^(-n) n^(-3/2)
  Real coefficient_constant() const;
};

using PartialsFn = std::function<Partials(const Real& x, const Real& y)>;

// Square-root singularity of y = F(x, y): F(x0,y0) = y0 and F_y(x0,y0) = 1.
// Bisection on x of min_y (F - y) localizes the fold, Newton on the 2x2
// system polishes it. Throws SingularSolveError when F_x or F_yy is not
// positive at the solution or the residuals stay above tolerance.
SingularPoint solve_singular_system(const PartialsFn& F, const SolveHints& hints = {});
SingularPoint solve_singular_system(const SingularMap& map, const SolveHints& hints = {});

// Root of x A(x) e = 1 for exponential families without marks (y0 = 1).
SingularPoint solve_exponential_singularity(const SingularMap& map, const SolveHints& hints = {});

}  // namespace isotree
