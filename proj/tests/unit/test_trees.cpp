#include <gtest/gtest.h>

#include "brute.hpp"
#include "isotree/enumeration.hpp"
#include "isotree/trees.hpp"

using namespace isotree;

namespace {

RootedTree tree_of(const brute::Seq& s) { return RootedTree::from_degrees(s); }

}  // namespace

TEST(RootedTree, BracketRoundTrip) {
  for (const char* s : {"()", "(())", "(()())", "((())())", "(()(()())(()))"}) {
    EXPECT_EQ(RootedTree::parse(s).to_brackets(), s);
  }
  EXPECT_THROW(RootedTree::parse("(()"), std::invalid_argument);
  EXPECT_THROW(RootedTree::parse("()()"), std::invalid_argument);
}

TEST(RootedTree, DegreesValidated) {
  EXPECT_NO_THROW(RootedTree::from_degrees({2, 0, 1, 0}));
  EXPECT_THROW(RootedTree::from_degrees({2, 0}), std::invalid_argument);
  EXPECT_THROW(RootedTree::from_degrees({1, 0, 0}), std::invalid_argument);
  EXPECT_THROW(RootedTree::from_degrees({}), std::invalid_argument);
}

TEST(RootedTree, FromParentsUsesLabelOrder) {
  // root 2 with children 0 and 3; 3 has child 1
  auto t = RootedTree::from_parents({2, 3, -1, 2});
  EXPECT_EQ(t.degrees(), (std::vector<std::uint32_t>{2, 0, 1, 0}));
  EXPECT_EQ(t.leaves(), 2u);
  EXPECT_EQ(t.children(0), (std::vector<std::uint32_t>{1, 2}));
  EXPECT_EQ(t.subtree_size(2), 2u);
}

TEST(RootedTree, Reordered) {
  auto t = RootedTree::parse("(()(()))");
  auto r = t.reordered([](std::uint32_t, std::uint32_t k) {
    std::vector<std::uint32_t> p(k);
    for (std::uint32_t i = 0; i < k; ++i) p[i] = k - 1 - i;
    return p;
  });
  EXPECT_EQ(r.to_brackets(), "((())())");
}

TEST(Isomorphism, ClassCountsMatchBruteForce) {
  const std::vector<std::uint64_t> rooted_unlabeled{0, 1, 1, 2, 4, 9, 20, 48, 115};
  PolyaEnumerator e(DegreeModel::unbounded());
  for (unsigned n = 1; n <= 8; ++n) {
    std::set<brute::Seq> classes;
    for (const auto& s : brute::plane_trees(n)) classes.insert(brute::canonical(s));
    EXPECT_EQ(classes.size(), rooted_unlabeled[n]) << n;
    EXPECT_EQ(e.count(n), rooted_unlabeled[n]) << n;
  }
}

TEST(Isomorphism, CodeEqualityMatchesEmbeddingOrbits) {
  for (unsigned n = 1; n <= 7; ++n) {
    auto trees = brute::plane_trees(n);
    std::vector<brute::Seq> canon;
    std::vector<CanonicalCode> codes;
    std::vector<std::uint64_t> small;
    for (const auto& s : trees) {
      canon.push_back(brute::canonical(s));
      codes.push_back(canonical_code(tree_of(s)));
      small.push_back(small_code(tree_of(s)));
    }
    for (std::size_t i = 0; i < trees.size(); ++i) {
      for (std::size_t j = i; j < trees.size(); ++j) {
        const bool iso = canon[i] == canon[j];
        ASSERT_EQ(codes[i] == codes[j], iso) << n << " " << i << " " << j;
        ASSERT_EQ(small[i] == small[j], iso);
        ASSERT_EQ(are_isomorphic(tree_of(trees[i]), tree_of(trees[j])), iso);
      }
    }
  }
}

TEST(Isomorphism, AutomorphismsByOrbitCounting) {
  for (unsigned n = 1; n <= 7; ++n) {
    for (const auto& s : brute::plane_trees(n)) {
      const auto t = tree_of(s);
      const auto orbit = brute::embeddings(s).size();
      ASSERT_EQ(aut_size(t), BigInt(brute::automorphisms(s))) << t.to_brackets();
      ASSERT_EQ(plane_representations(t), BigInt(orbit)) << t.to_brackets();
    }
  }
}

TEST(Isomorphism, KnownAutomorphismGroups) {
  EXPECT_EQ(aut_size(RootedTree::parse("(()()()())")), BigInt(24));
  EXPECT_EQ(aut_size(RootedTree::parse("((()())(()()))")), BigInt(8));
  EXPECT_EQ(aut_size(RootedTree::parse("((())(()()))")), BigInt(2));
}

TEST(CanonicalCodes, RebuildAndSerialize) {
  for (const auto& s : brute::plane_trees(7)) {
    const auto t = tree_of(s);
    const auto c = canonical_code(t);
    EXPECT_EQ(c.tree_size(), 7u);
    const auto back = tree_from_code(c);
    EXPECT_TRUE(are_isomorphic(back, t));
    EXPECT_EQ(canonical_code(back), c);
    EXPECT_EQ(CanonicalCode::from_hex(c.hex(), c.bit_length()), c);
    EXPECT_EQ(CanonicalCode::from_bits(c.bits()), c);
  }
  EXPECT_EQ(canonical_code(RootedTree::parse("(()())")).bits(), "110100");
}

TEST(CanonicalCodes, SmallCodeMatchesPackedBits) {
  const auto t = RootedTree::parse("((())())");
  const auto c = canonical_code(t);
  std::uint64_t expect = 0;
  for (std::uint32_t i = 0; i < c.bit_length(); ++i) expect |= std::uint64_t(c.bit(i)) << (63 - i);
  EXPECT_EQ(small_code(t), expect);
}

TEST(DegreeModelTest, ZeroWeightsDropped) {
  auto m = DegreeModel::finite({0, 1, 2, 3}, {1, 0, 1, 0});
  EXPECT_EQ(m.degrees(), (std::vector<unsigned>{0, 2}));
  EXPECT_EQ(m, DegreeModel::full_binary());
  EXPECT_FALSE(m.allows(1));
  EXPECT_EQ(m.weight(3), Rational(0));
}

TEST(DegreeModelTest, InvalidModels) {
  EXPECT_THROW(DegreeModel::finite({1, 2}, {1, 1}), std::invalid_argument);
  EXPECT_THROW(DegreeModel::finite({0, 1}, {1, 1}), std::invalid_argument);
  EXPECT_THROW(DegreeModel::finite({0, 2}, {1, -1}), std::invalid_argument);
}

TEST(DegreeModelTest, SignatureAndHash) {
  EXPECT_EQ(DegreeModel::unary_binary().signature(), "D=0,1,2;w=1,1,1");
  EXPECT_NE(DegreeModel::unary_binary().weight_hash(), DegreeModel::binary121().weight_hash());
  EXPECT_EQ(DegreeModel::full_binary().period(), 1u);
  EXPECT_EQ(DegreeModel::finite({0, 3}, {1, 1}).period(), 2u);
}

TEST(ClassWeight, ProductOverVertices) {
  // cherry under a unary root, binary121: (2 * 1!) * (1 * 2!) / |Aut| = 4 / 2
  const auto t = RootedTree::parse("((()()))");
  EXPECT_EQ(class_weight(t, DegreeModel::binary121()), Rational(2));
  EXPECT_THROW(class_weight(t, DegreeModel::full_binary()), DegreeViolation);
}
