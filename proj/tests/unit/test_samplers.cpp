#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "brute.hpp"
#include "isotree/enumeration.hpp"
#include "isotree/samplers.hpp"

using namespace isotree;

namespace {

// Pearson statistic of observed counts against exact class probabilities.
double chi_square(const std::map<std::string, std::uint64_t>& obs, const std::map<std::string, double>& prob,
                  std::uint64_t total) {
  double chi = 0;
  for (const auto& [k, p] : prob) {
    const double expect = p * total;
    const auto it = obs.find(k);
    const double o = it == obs.end() ? 0.0 : double(it->second);
    chi += (o - expect) * (o - expect) / expect;
  }
  return chi;
}

std::string key(const RootedTree& t) { return canonical_code(t).hex(); }

}  // namespace

TEST(RngTest, ReproducibleAndBlockSeparated) {
  Rng a({7, 1}), b({7, 1}), c({7, 1}, 1), d({7, 2});
  const auto x = a.next();
  EXPECT_EQ(x, b.next());
  EXPECT_NE(x, c.next());
  EXPECT_NE(x, d.next());
  Rng r({3, 0});
  for (int i = 0; i < 1000; ++i) {
    EXPECT_LT(r.below(7), 7u);
    const double u = r.uniform01();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
  const BigInt big = BigInt(1) << 100;
  for (int i = 0; i < 100; ++i) EXPECT_LT(r.below(big), big);
}

TEST(LabeledSampler, IndexDecodingCoversEveryLabeledTree) {
  // Decoding every index must hit each class exactly n!/|Aut| times.
  for (unsigned n = 2; n <= 6; ++n) {
    std::map<brute::Seq, std::uint64_t> tally;
    const auto space = static_cast<std::uint64_t>(std::pow(n, n - 1));
    std::vector<std::uint32_t> deg;
    for (std::uint64_t i = 0; i < space; ++i) {
      labeled_degrees_from_index(n, i, deg);
      ++tally[brute::canonical(deg)];
    }
    for (const auto& [c, k] : tally) {
      EXPECT_EQ(k, brute::factorial(n) / brute::automorphisms(c)) << n;
    }
  }
}

TEST(LabeledSampler, ClassFrequencies) {
  const unsigned n = 7;
  std::map<std::string, double> prob;
  const double total = std::pow(n, n - 1);
  PolyaEnumerator e(DegreeModel::unbounded());
  e.for_each(n, [&](const ClassView& c) {
    prob[key(c.tree())] = (brute::factorial(n) / double(c.aut)) / total;
  });
  std::map<std::string, std::uint64_t> obs;
  Rng rng({11, 0});
  const std::uint64_t samples = 200000;
  for (std::uint64_t i = 0; i < samples; ++i) ++obs[key(sample_labeled_rooted(n, rng))];
  // 47 degrees of freedom; the 0.999 quantile is about 82.7
  EXPECT_LT(chi_square(obs, prob, samples), 82.7);
}

TEST(CgwSamplerTest, FullRankSpaceGivesExactWeights) {
  for (const auto& m : {DegreeModel::unary_binary(), DegreeModel::binary121()}) {
    const unsigned n = 7;
    CgwSampler s(n, m);
    ASSERT_GT(s.rank_space(), 0u);
    PolyaEnumerator e(m);
    const auto sums = weight_sums(e, n);
    std::map<std::string, std::uint64_t> tally;
    std::vector<std::uint32_t> deg(n);
    for (std::uint64_t r = 0; r < s.rank_space(); ++r) {
      s.unrank_degrees(r, deg.data());
      ++tally[key(RootedTree::from_degrees(deg))];
    }
    e.for_each(n, [&](const ClassView& c) {
      const Rational frac = Rational(tally[key(c.tree())]) / Rational(s.rank_space());
      EXPECT_EQ(frac, make_record(c, m).weight / sums.sum) << m.signature();
    });
    EXPECT_EQ(s.total_weight(), Rational(n) * sums.sum);
  }
}

TEST(CgwSamplerTest, SampledFrequencies) {
  const unsigned n = 8;
  const auto m = DegreeModel::finite({0, 1, 3}, {1, Rational(1, 3), 2});
  PolyaEnumerator e(m);
  const auto sums = weight_sums(e, n);
  std::map<std::string, double> prob;
  e.for_each(n, [&](const ClassView& c) {
    prob[key(c.tree())] = (make_record(c, m).weight / sums.sum).convert_to<double>();
  });
  CgwSampler s(n, m);
  Rng rng({5, 3});
  std::map<std::string, std::uint64_t> obs;
  const std::uint64_t samples = 100000;
  for (std::uint64_t i = 0; i < samples; ++i) {
    auto t = s.sample(rng);
    for (auto dgr : t.degrees()) ASSERT_TRUE(m.allows(dgr));
    ++obs[key(t)];
  }
  const double chi = chi_square(obs, prob, samples);
  EXPECT_LT(chi, 10.0 + 4.0 * std::sqrt(2.0 * prob.size()) + prob.size());
}

TEST(CgwSamplerTest, UnreachableSizeRejected) {
  EXPECT_THROW(CgwSampler(4, DegreeModel::full_binary()), UnreachableSize);
  EXPECT_NO_THROW(CgwSampler(5, DegreeModel::full_binary()));
}

TEST(PolyaUniform, CountsAndUniformity) {
  PolyaUniformSampler s(12);
  PolyaEnumerator e(DegreeModel::unbounded());
  for (unsigned n = 1; n <= 12; ++n) EXPECT_EQ(s.count(n), BigInt(e.count(n))) << n;
  PolyaUniformSampler r(10, DegreeModel::unary_binary());
  PolyaEnumerator er(DegreeModel::unary_binary());
  EXPECT_EQ(r.count(10), BigInt(er.count(10)));

  const unsigned n = 7;
  std::map<std::string, double> prob;
  e.for_each(n, [&](const ClassView& c) { prob[key(c.tree())] = 1.0 / 48; });
  std::map<std::string, std::uint64_t> obs;
  Rng rng({2, 0});
  const std::uint64_t samples = 96000;
  for (std::uint64_t i = 0; i < samples; ++i) ++obs[key(s.sample(n, rng))];
  EXPECT_EQ(obs.size(), 48u);
  EXPECT_LT(chi_square(obs, prob, samples), 82.7);
}

TEST(Intervals, WilsonAndNormal) {
  auto w = wilson_interval(50, 100);
  EXPECT_NEAR(w.low, 0.403831, 1e-6);
  EXPECT_NEAR(w.high, 0.596169, 1e-6);
  auto z = wilson_interval(0, 100);
  EXPECT_EQ(z.low, 0.0);
  EXPECT_GT(z.high, 0.0);
  auto nrm = normal_interval(50, 100);
  EXPECT_NEAR(nrm.low, 0.5 - 1.959964 * 0.05, 1e-6);
}

TEST(MonteCarlo, WorkerCountDoesNotChangeResult) {
  const RngSpec spec{99, 4};
  for (const auto& model : {McModel::labeled(), McModel::plane(), McModel::cgw(DegreeModel::unary_binary())}) {
    auto one = mc_iso_probability(9, model, 200000, spec, {1});
    auto three = mc_iso_probability(9, model, 200000, spec, {3});
    EXPECT_EQ(one.hits, three.hits) << model.name();
    EXPECT_EQ(one.samples, 200000u);
  }
}

TEST(MonteCarlo, IntervalsCoverExactValue) {
  const auto exact = exact_p_labeled(6).convert_to<double>();
  McRunner runner(6, McModel::labeled());
  unsigned covered = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    auto est = runner.run(20000, {seed, 6});
    EXPECT_EQ(est.method, "wilson");
    covered += est.ci_low <= exact && exact <= est.ci_high;
  }
  // 95% nominal: 57 expected, fewer than 52 has probability below 0.2%
  EXPECT_GE(covered, 52u);
}

TEST(MonteCarlo, PairLeafStatsNearExact) {
  auto s = mc_isomorphic_pair_leaf_stats(10, 100000, {8, 0});
  EXPECT_NEAR(s.mean_leaves, s.exact_mean_leaves, 0.03);
  EXPECT_NEAR(s.variance, s.exact_variance, 0.05 * s.exact_variance + 0.02);
}

TEST(MonteCarlo, WeightedModelIntervalsCoverExactValue) {
  const auto m = DegreeModel::binary121();
  const auto exact = exact_p_gw(7, m).convert_to<double>();
  McRunner runner(7, McModel::cgw(m));
  unsigned covered = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    auto est = runner.run(20000, {seed, 7});
    covered += est.ci_low <= exact && exact <= est.ci_high;
  }
  EXPECT_GE(covered, 52u);
}
