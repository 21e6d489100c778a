#include <gtest/gtest.h>

#include <set>

#include "isotree/partitions.hpp"

using namespace isotree;

namespace {

// p(n) by the standard coin-change recursion.
std::vector<std::uint64_t> partition_counts(unsigned nmax) {
  std::vector<std::uint64_t> p(nmax + 1, 0);
  p[0] = 1;
  for (unsigned part = 1; part <= nmax; ++part) {
    for (unsigned n = part; n <= nmax; ++n) p[n] += p[n - part];
  }
  return p;
}

// Direct transcription of the defining partition sum, written against the
// parts list only.
Rational c_by_definition(unsigned j, int t) {
  Rational sum = 0;
  for (const auto& p : enumerate_partitions(j)) {
    const auto parts = p.parts();
    std::vector<unsigned> ks;
    for (unsigned m = 1; m < p.mult.size(); ++m) {
      if (p.mult[m]) ks.push_back(p.mult[m]);
    }
    Rational term = Rational(multinomial(ks)) / Rational(parts.size());
    if (parts.size() % 2 == 0) term = -term;
    for (unsigned part : parts) {
      Rational f = Rational(factorial(part));
      for (int k = 0; k < std::abs(t); ++k) term = t > 0 ? Rational(term / f) : Rational(term * f);
    }
    sum += term;
  }
  return Rational(j) * sum;
}

}  // namespace

TEST(Partitions, CountsMatchRecursion) {
  const auto p = partition_counts(20);
  for (unsigned n = 1; n <= 20; ++n) EXPECT_EQ(enumerate_partitions(n).size(), p[n]) << n;
}

TEST(Partitions, AllDistinctAndOfRightWeight) {
  for (unsigned n = 1; n <= 12; ++n) {
    std::set<std::vector<unsigned>> seen;
    for (const auto& p : enumerate_partitions(n)) {
      EXPECT_EQ(p.weight(), n);
      auto parts = p.parts();
      EXPECT_TRUE(std::is_sorted(parts.rbegin(), parts.rend()));
      EXPECT_TRUE(seen.insert(parts).second);
    }
  }
}

TEST(Partitions, LargestPartFirst) {
  auto ps = enumerate_partitions(4);
  EXPECT_EQ(ps.front().parts(), (std::vector<unsigned>{4}));
  EXPECT_EQ(ps.back().parts(), (std::vector<unsigned>{1, 1, 1, 1}));
}

TEST(Partitions, Multinomial) {
  std::vector<unsigned> k{2, 1, 1};
  EXPECT_EQ(multinomial(k), BigInt(12));
  std::vector<unsigned> one{5};
  EXPECT_EQ(multinomial(one), BigInt(1));
}

TEST(CCoeff, KnownValues) {
  EXPECT_EQ(c_coeff(1, Rational(2)), Rational(1));
  EXPECT_EQ(c_coeff(2, Rational(2)), Rational(-1, 2));
  for (unsigned j = 1; j <= 8; ++j) EXPECT_EQ(c_coeff(j, Rational(0)), Rational(1)) << j;
  for (unsigned j = 2; j <= 8; ++j) EXPECT_EQ(c_coeff(j, Rational(1)), Rational(0)) << j;
}

TEST(CCoeff, MatchesDefinitionForIntegerT) {
  for (int t : {-1, 0, 1, 2, 3}) {
    for (unsigned j = 1; j <= 10; ++j) EXPECT_EQ(c_coeff(j, Rational(t)), c_by_definition(j, t)) << j << " " << t;
  }
}

TEST(CCoeff, TableAgreesWithPartitionSum) {
  for (int t : {0, 2, 4}) {
    auto table = c_coeff_table(14, Rational(t));
    for (unsigned j = 1; j <= 14; ++j) EXPECT_EQ(table[j], c_coeff(j, Rational(t))) << j;
  }
}

TEST(CCoeff, RealTableAgreesWithPartitionSum) {
  PrecisionScope s(192);
  const Real t("0.37");
  auto table = c_coeff_table(12, t);
  for (unsigned j = 1; j <= 12; ++j) {
    EXPECT_LT(bmp::abs(table[j] - c_coeff(j, t)), Real(1e-45)) << j;
  }
}

TEST(CCoeff, RationalRejectsFractionalT) {
  EXPECT_THROW(c_coeff(3, Rational(1, 2)), std::domain_error);
}
