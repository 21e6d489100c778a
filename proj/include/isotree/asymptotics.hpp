#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "isotree/equations.hpp"
#include "isotree/series.hpp"
#include "isotree/singular.hpp"
#include "isotree/trees.hpp"

namespace isotree {

struct AsymOptions {
  std::size_t order = 64;  // truncation N of the series
  unsigned precision_bits = kDefaultPrecisionBits;
  double fd_step = 1e-3;
  bool check_stability = true;  // recompute at 2N
  double stability_tol = 1e-6;
  double richardson_tol = 1e-3;
  std::optional<SolveHints> hints;  // bracket override
};

// A constant recomputed with the truncation order doubled.
struct Stability {
  bool checked = false;
  double at_n = 0;
  double at_2n = 0;
  double rel_change = 0;
  bool ok(double tol) const { return !checked || rel_change < tol; }
};

// ---------------------------------------------------------------- series

TruncSeries<Rational> solve_polya_series(const Rational& t, std::size_t N);
TruncSeries<Real> solve_polya_series(const Real& t, std::size_t N);
TruncSeries<Rational> solve_degree_series(const DegreeModel& m, const Rational& t, std::size_t N);
TruncSeries<Real> solve_degree_series(const DegreeModel& m, const Real& t, std::size_t N);

// Simply generated T = x Phi(T) with Phi(z) = sum_k w_k z^k, solved directly.
TruncSeries<Rational> simply_generated_series(const DegreeModel& m, std::size_t N);

// xi(x) = x exp(sum_{j>=2} c(j,2)/j P(x^j, 2j)).
TruncSeries<Rational> xi_series_exact(std::size_t N);
TruncSeries<Real> xi_series(std::size_t N);

// ---------------------------------------------------------------- labeled

inline constexpr double kAlphaBracketLow = 0.3383;
inline constexpr double kAlphaBracketHigh = 0.400;

struct AlphaEstimate {
  Real alpha;
  Real xi_prime;
  Real residual;  // xi(alpha) - 1/e
  unsigned bisection_steps = 0;
  unsigned newton_steps = 0;
  std::size_t order = 0;
};

// Root of xi(x) = 1/e on the bracket above. Throws SingularSolveError when
// the bracket shows no sign change.
AlphaEstimate estimate_alpha(const AsymOptions& opt = {});

struct LabeledConstants {
  AlphaEstimate alpha;
  Real A;    // sqrt(2 pi e alpha xi'(alpha))
  Real c_l;  // 1/(e^2 alpha)
  Stability A_stability, c_l_stability;
};

LabeledConstants labeled_constants(const AsymOptions& opt = {});

// ---------------------------------------------------------------- unary-binary

struct UnaryBinaryConstants {
  SingularPoint t1, t2;
  Real K1, K2;
  Real delta;  // x1^2 / x2
  Real C;      // K2 / K1^2
  Stability delta_stability, C_stability;
};

UnaryBinaryConstants unary_binary_constants(const AsymOptions& opt = {});

// ---------------------------------------------------------------- leaves

struct LeafMeanConstant {
  Real mu;           // explicit xi-based formula
  Real mu_partials;  // F_u / (x0 F_x) on the marked family
  Real baseline;     // same constant for y = x e^y
  Stability stability;
};

LeafMeanConstant leaf_mean_constant(const AsymOptions& opt = {});

// ---------------------------------------------------------------- CLTs

// Central 5-point differences at steps h and h/2, combined by Richardson.
struct DerivativeEstimate {
  double value = 0;  // Richardson combination
  double at_h = 0;
  double at_half_h = 0;
  double drift = 0;  // |at_h - at_half_h| / |at_half_h|
};

struct CltConstants {
  double mu = 0;
  double sigma2 = 0;
  double step = 0;
  DerivativeEstimate first, second;  // of the underlying log-singularity curve
  Stability mu_stability, sigma2_stability;
  bool richardson_ok(double tol) const { return first.drift < tol && second.drift < tol; }
};

// log W under the uniform law on classes with out-degrees in D (t in P_D(x,t)).
CltConstants logweight_clt_constants(const DegreeModel& m, const AsymOptions& opt = {});

struct AutCltConstants {
  CltConstants aut;            // log|Aut| of uniform Polya trees
  double labelings_mu = 0;     // E log L = n log n - labelings_mu n + (log n)/2 + O(1)
};

AutCltConstants aut_clt_constants(const AsymOptions& opt = {});

enum class DegreeLaw {
  isomorphic_pairs,  // common shape of an isomorphic pair of labeled trees (t = 2)
  galton_watson,     // conditioned Galton-Watson shape, sum of W^2 over classes
  tree_function,     // labeled trees, y = x e^y
};

struct DegreeCltConstants {
  std::vector<unsigned> degrees;
  std::vector<double> mean;                     // explicit F_u / (x0 F_x)
  std::vector<std::vector<double>> covariance;  // finite differences
  std::vector<std::vector<DerivativeEstimate>> fd;
  std::vector<Stability> mean_stability;
  std::vector<Stability> variance_stability;
  double step = 0;
};

DegreeCltConstants degree_clt_constants(const std::vector<unsigned>& degrees, DegreeLaw law,
                                        const DegreeModel& m = DegreeModel::unary_binary(),
                                        const AsymOptions& opt = {});

}  // namespace isotree
