// Acceptance run: one PASS/FAIL line per criterion. Tolerances and budgets are
// fixed here on purpose; nothing is configurable from the command line except
// which criteria to run.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "isotree/asymptotics.hpp"
#include "isotree/enumeration.hpp"
#include "isotree/reference.hpp"
#include "isotree/samplers.hpp"

using namespace isotree;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  // Records a sub-check; any failing one fails the criterion.
  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    detail << "\n      " << (ok ? "ok   " : "FAIL ") << what;
  }
  // Context only; does not affect the verdict.
  void note(const std::string& what) { detail << "\n      info " << what; }
};

struct Criterion {
  int id;
  std::string title;
  double budget_seconds;  // 0 = no limit
  std::function<void(Outcome&)> run;
};

std::string fmt(double v, int prec = 8) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, v);
  return buf;
}

double dbl(const Real& x) { return x.convert_to<double>(); }
double dbl(const Rational& x) { return x.convert_to<double>(); }

void against(Outcome& o, const ReferenceValue& ref, double got, const std::string& label) {
  const double err = std::abs(got - ref.value);
  o.check(err <= ref.tolerance, label + " = " + fmt(got, 10) + " vs " + fmt(ref.value, 10) + " (|diff| " +
                                    fmt(err, 3) + ", tol " + fmt(ref.tolerance, 2) + ")");
}

void stable(Outcome& o, const Stability& s, const std::string& label, double tol = 1e-6) {
  o.check(s.checked && s.ok(tol), label + " stability at 2N: rel change " + fmt(s.rel_change, 3));
}

// W(P) = PR(P) * prod_v w_deg(v)
Rational class_weight_of(const ClassView& c, const DegreeModel& m) {
  Rational w = Rational(to_bigint(c.plane_representations()));
  const auto counts = c.degree_counts();
  for (unsigned d = 0; d < counts.size(); ++d) {
    for (unsigned k = 0; k < counts[d]; ++k) w *= m.weight(d);
  }
  return w;
}

std::vector<DegreeModel> finite_models() {
  return {DegreeModel::unary_binary(), DegreeModel::binary121(), DegreeModel::full_binary()};
}

// ------------------------------------------------------------------ 1
void series_agreement(Outcome& o) {
  const unsigned N = 15;
  {
    const auto s = solve_polya_series(Rational(2), N);
    PolyaEnumerator e(DegreeModel::unbounded());
    std::vector<unsigned> bad;
    for (unsigned n = 1; n <= N; ++n) {
      Rational sum = 0;
      e.for_each(n, [&](const ClassView& c) {
        const Rational a = Rational(to_bigint(c.aut));
        sum += 1 / (a * a);
      });
      if (sum != s[n]) bad.push_back(n);
    }
    o.check(bad.empty(), "P(x,2) vs sum 1/|Aut|^2, n <= 15: " + std::to_string(bad.size()) + " mismatches");
  }
  for (const auto& m : finite_models()) {
    const auto s = solve_degree_series(m, Rational(2), N);
    PolyaEnumerator e(m);
    std::vector<unsigned> bad;
    for (unsigned n = 1; n <= N; ++n) {
      Rational sum = 0;
      e.for_each(n, [&](const ClassView& c) {
        const Rational w = class_weight_of(c, m);
        sum += w * w;
      });
      if (sum != s[n]) bad.push_back(n);
    }
    o.check(bad.empty(), "P_D(x,2) vs sum W^2 [" + m.signature() + "], n <= 15: " + std::to_string(bad.size()) +
                             " mismatches");
  }
}

// ------------------------------------------------------------------ 2-6
void labeled(Outcome& o) {
  const auto c = labeled_constants();
  against(o, kRefLabeledA, dbl(c.A), "A");
  against(o, kRefLabeledCl, dbl(c.c_l), "c_l");
  stable(o, c.A_stability, "A");
  stable(o, c.c_l_stability, "c_l");
}

void unary_binary(Outcome& o) {
  const auto c = unary_binary_constants();
  against(o, kRefUbDelta, dbl(c.delta), "delta");
  against(o, kRefUbC, dbl(c.C), "C");
  stable(o, c.delta_stability, "delta");
  stable(o, c.C_stability, "C");
}

void leaf(Outcome& o) {
  const auto c = leaf_mean_constant();
  against(o, kRefLeafMu, dbl(c.mu), "leaf mu");
  against(o, kRefLeafBaseline, dbl(c.baseline), "labeled-tree leaf mu");
  stable(o, c.stability, "leaf mu");
}

void clt_checks(Outcome& o, const CltConstants& c, const ReferenceValue& mu, const ReferenceValue& s2,
                const std::string& tag) {
  against(o, mu, c.mu, tag + " mu");
  against(o, s2, c.sigma2, tag + " sigma2");
  stable(o, c.mu_stability, tag + " mu");
  stable(o, c.sigma2_stability, tag + " sigma2");
  o.check(c.richardson_ok(1e-3), tag + " step-halving drift: first " + fmt(c.first.drift, 3) + ", second " +
                                     fmt(c.second.drift, 3));
}

void logweight(Outcome& o) {
  clt_checks(o, logweight_clt_constants(DegreeModel::binary121()), kRefBinaryMu, kRefBinarySigma2, "binary121");
  clt_checks(o, logweight_clt_constants(DegreeModel::unary_binary()), kRefUbMu, kRefUbSigma2, "unary-binary");
}

void automorphisms(Outcome& o) { clt_checks(o, aut_clt_constants().aut, kRefAutMu, kRefAutSigma2, "log|Aut|"); }

// ------------------------------------------------------------------ 7
void identities(Outcome& o) {
  const unsigned N = 15;
  PolyaEnumerator e(DegreeModel::unbounded());
  std::vector<unsigned> cayley, catalan;
  BigInt cat = 1;  // C_{n-1}
  for (unsigned n = 1; n <= N; ++n) {
    if (n > 1) cat = cat * 2 * (2 * (n - 2) + 1) / n;
    BigInt lab = 0, plane = 0;
    const BigInt nf = factorial(n);
    e.for_each(n, [&](const ClassView& c) {
      lab += nf / to_bigint(c.aut);
      plane += to_bigint(c.plane_representations());
    });
    if (lab != bmp::pow(BigInt(n), n - 1)) cayley.push_back(n);
    if (plane != cat) catalan.push_back(n);
  }
  o.check(cayley.empty(), "sum n!/|Aut| = n^(n-1), n <= 15: " + std::to_string(cayley.size()) + " mismatches");
  o.check(catalan.empty(), "sum PR = Catalan(n-1), n <= 15: " + std::to_string(catalan.size()) + " mismatches");
  for (const auto& m : finite_models()) {
    const auto T = simply_generated_series(m, N);
    PolyaEnumerator em(m);
    std::vector<unsigned> bad;
    for (unsigned n = 1; n <= N; ++n) {
      if (weight_sums(em, n).sum != T[n]) bad.push_back(n);
    }
    o.check(bad.empty(), "sum W = [x^n]T [" + m.signature() + "], n <= 15: " + std::to_string(bad.size()) +
                             " mismatches");
  }
}

// ------------------------------------------------------------------ 8
void prediction(Outcome& o) {
  const auto lab = labeled_constants();
  const auto ub = unary_binary_constants();
  auto run = [&](const std::string& tag, double K, double base, unsigned lo, unsigned hi, auto exact) {
    std::vector<double> err;
    std::string row;
    for (unsigned n = lo; n <= hi; ++n) {
      const double pred = K * std::pow(n, 1.5) * std::pow(base, n);
      const double ex = exact(n);
      err.push_back(std::abs(pred - ex) / ex);
      row += (row.empty() ? "" : ", ") + fmt(err.back(), 3);
    }
    bool shrinking = true;
    for (std::size_t i = 1; i < err.size(); ++i) shrinking = shrinking && err[i] < err[i - 1];
    o.check(err.back() < 0.15, tag + " relative error at n=" + std::to_string(hi) + ": " + fmt(err.back(), 3));
    o.check(shrinking, tag + " error strictly shrinking over n=" + std::to_string(lo) + ".." + std::to_string(hi) +
                           ": [" + row + "]");
  };
  PolyaEnumerator e(DegreeModel::unbounded());
  run("labeled", dbl(lab.A), dbl(lab.c_l), 8, 12, [&](unsigned n) { return dbl(exact_p_labeled(e, n)); });
  PolyaEnumerator eu(DegreeModel::unary_binary());
  run("unary-binary", dbl(ub.C), dbl(ub.delta), 8, 14, [&](unsigned n) { return dbl(exact_p_gw(eu, n)); });
}

// ------------------------------------------------------------------ 9
void calibration(Outcome& o) {
  const unsigned reps = 100, need = 93;
  const std::uint64_t pairs = 1000000;
  McOptions opt;
  opt.workers = std::max(1u, std::thread::hardware_concurrency());
  unsigned pooled = 0, intervals = 0;
  auto run = [&](const std::string& tag, const McModel& model, unsigned n, double exact) {
    McRunner runner(n, model);
    unsigned covered = 0;
    for (unsigned r = 0; r < reps; ++r) {
      const auto est = runner.run(pairs, RngSpec{1000 + r, n}, opt);
      if (est.ci_low <= exact && exact <= est.ci_high) ++covered;
    }
    pooled += covered;
    intervals += reps;
    o.check(covered >= need, tag + " n=" + std::to_string(n) + ": " + std::to_string(covered) + "/" +
                                 std::to_string(reps) + " intervals cover " + fmt(exact, 8));
  };
  for (unsigned n = 3; n <= 8; ++n) run("labeled", McModel::labeled(), n, dbl(exact_p_labeled(n)));
  const auto ubm = DegreeModel::unary_binary();
  for (unsigned n = 3; n <= 10; ++n) run("unary-binary", McModel::cgw(ubm), n, dbl(exact_p_gw(n, ubm)));
  o.note("pooled coverage " + std::to_string(pooled) + "/" + std::to_string(intervals) +
         "; an exact 95% interval meets the 93-of-100 rule with probability 0.872 per size");
}

// ------------------------------------------------------------------ 10
void rates(Outcome& o) {
  const unsigned lo = 4, hi = 18;
  auto series_text = [](const std::vector<double>& r) {
    std::string s;
    for (double v : r) s += (s.empty() ? "" : ", ") + fmt(v, 5);
    return s;
  };
  auto monotone = [](const std::vector<double>& r, bool decreasing) {
    for (std::size_t i = 1; i < r.size(); ++i) {
      if (decreasing ? !(r[i] < r[i - 1]) : !(r[i] > r[i - 1])) return false;
    }
    return true;
  };

  std::vector<double> plane;
  for (const auto& row : plane_decay_table(hi)) {
    if (row.n >= lo) plane.push_back(dbl(row.rate));
  }
  o.check(monotone(plane, true), "plane -log(q_n)/n strictly decreasing on 4..18: [" + series_text(plane) + "]");

  const double lab_limit = -std::log(dbl(labeled_constants().c_l));
  const double ub_limit = -std::log(dbl(unary_binary_constants().delta));
  PolyaEnumerator e(DegreeModel::unbounded());
  PolyaEnumerator eu(DegreeModel::unary_binary());
  std::vector<double> lab, ub;
  for (unsigned n = lo; n <= hi; ++n) {
    lab.push_back(-std::log(dbl(exact_p_labeled(e, n))) / n);
    ub.push_back(-std::log(dbl(exact_p_gw(eu, n))) / n);
  }
  o.check(monotone(lab, false) && lab.back() < lab_limit,
          "labeled -log(p_n)/n increasing toward " + fmt(lab_limit, 6) + ": [" + series_text(lab) + "]");
  o.check(monotone(ub, false) && ub.back() < ub_limit,
          "unary-binary -log(g_n)/n increasing toward " + fmt(ub_limit, 6) + ": [" + series_text(ub) + "]");
}

// ------------------------------------------------------------------ 11
std::vector<double> range(unsigned lo, unsigned hi) {
  std::vector<double> r;
  for (unsigned n = lo; n <= hi; ++n) r.push_back(n);
  return r;
}

void slope_check(Outcome& o, const std::string& tag, double slope, double target, double rel) {
  const double err = std::abs(slope - target) / std::abs(target);
  o.check(err <= rel, tag + " slope " + fmt(slope, 6) + " vs " + fmt(target, 6) + " (rel " + fmt(err, 3) +
                          ", tol " + fmt(rel, 2) + ")");
}

void clt_evidence(Outcome& o) {
  // log W under uniform classes with D={0,1,2}, n = 8..14
  for (const auto& m : {DegreeModel::unary_binary(), DegreeModel::binary121()}) {
    const auto c = logweight_clt_constants(m);
    PolyaEnumerator e(m);
    std::vector<double> mean, var;
    for (unsigned n = 8; n <= 14; ++n) {
      const auto mo = uniform_log_weight_moments(e, n);
      mean.push_back(mo.mean);
      var.push_back(mo.variance);
    }
    slope_check(o, "E log W [" + m.signature() + "] n=8..14", regression_slope(range(8, 14), mean), c.mu, 0.05);
    slope_check(o, "Var log W [" + m.signature() + "] n=8..14", regression_slope(range(8, 14), var), c.sigma2, 0.10);
  }
  {
    const auto c = aut_clt_constants().aut;
    PolyaEnumerator e(DegreeModel::unbounded());
    std::vector<double> mean, var;
    for (unsigned n = 8; n <= 16; ++n) {
      const auto mo = uniform_log_aut_moments(e, n);
      mean.push_back(mo.mean);
      var.push_back(mo.variance);
    }
    slope_check(o, "E log|Aut| n=8..16", regression_slope(range(8, 16), mean), c.mu, 0.05);
    slope_check(o, "Var log|Aut| n=8..16", regression_slope(range(8, 16), var), c.sigma2, 0.10);
  }
  {
    AsymOptions opt;
    const auto c = degree_clt_constants({0}, DegreeLaw::isomorphic_pairs, DegreeModel::unary_binary(), opt);
    PolyaEnumerator e(DegreeModel::unbounded());
    std::vector<double> var;
    for (unsigned n = 8; n <= 14; ++n) var.push_back(pair_degree_moments(e, n, 0).variance);
    slope_check(o, "Var leaves (isomorphic pair shape) n=8..14", regression_slope(range(8, 14), var),
                c.covariance[0][0], 0.10);
  }
  {
    // log W at n = 200, classes uniform with D={0,1,2}, unit weights
    const unsigned n = 200;
    const std::uint64_t samples = 100000;
    PolyaUniformSampler sampler(n, DegreeModel::unary_binary());
    Rng rng(RngSpec{2024, 0});
    std::vector<double> xs;
    xs.reserve(samples);
    for (std::uint64_t i = 0; i < samples; ++i) {
      const auto t = sampler.sample(n, rng);
      double lw = 0;
      for (auto d : t.degrees()) {
        if (d == 2) lw += std::log(2.0);
      }
      lw -= std::log(aut_size(t).convert_to<double>());
      xs.push_back(lw);
    }
    double mean = 0;
    for (double x : xs) mean += x;
    mean /= samples;
    double m2 = 0, m3 = 0;
    for (double x : xs) {
      const double d = x - mean;
      m2 += d * d;
      m3 += d * d * d;
    }
    m2 /= samples;
    m3 /= samples;
    const double skew = m3 / std::pow(m2, 1.5);
    o.check(std::abs(skew) < 0.15, "skewness of log W at n=200 over 1e5 samples: " + fmt(skew, 4) +
                                       " (mean/n " + fmt(mean / n, 5) + ")");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> only;
  app.add_option("--criterion,-c", only, "run only these criteria (1-11)");
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all{
      {1, "exact series agreement with enumeration", 60, series_agreement},
      {2, "labeled-tree constants A and c_l", 60, labeled},
      {3, "unary-binary constants delta and C", 30, unary_binary},
      {4, "leaf mean constants", 120, leaf},
      {5, "log-weight limit law constants", 300, logweight},
      {6, "automorphism limit law constants", 300, automorphisms},
      {7, "oracle identities", 0, identities},
      {8, "leading-order prediction quality", 0, prediction},
      {9, "Monte Carlo interval calibration", 600, calibration},
      {10, "exact decay-rate monotonicity", 0, rates},
      {11, "limit-law evidence at small and moderate n", 0, clt_evidence},
  };

  int failures = 0;
  for (const auto& c : all) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& ex) {
      o.check(false, std::string("exception: ") + ex.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_seconds > 0) {
      o.check(secs < c.budget_seconds, "time " + fmt(secs, 4) + " s, budget " + fmt(c.budget_seconds, 4) + " s");
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << "  [" << c.id << "] " << c.title << "  (" << fmt(secs, 4) << " s)"
              << o.detail.str() << "\n"
              << std::flush;
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
