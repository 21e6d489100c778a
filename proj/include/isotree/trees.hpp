#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "isotree/scalar.hpp"

namespace isotree {

// Allowed out-degrees with per-degree weights. Either a finite set D with
// rational weights, or unbounded with every weight equal to one (plane trees).
class DegreeModel {
 public:
  static DegreeModel unbounded();
  // Degrees whose weight is zero are dropped. Throws std::invalid_argument when
  // 0 is missing, when no degree >= 2 survives, or on negative weights.
  static DegreeModel finite(const std::vector<unsigned>& degrees, const std::vector<Rational>& weights);

  static DegreeModel unary_binary();  // D={0,1,2}, w=[1,1,1]
  static DegreeModel binary121();     // D={0,1,2}, w=[1,2,1]
  static DegreeModel full_binary();   // D={0,2},   w=[1,1]

  bool is_unbounded() const { return unbounded_; }
  const std::vector<unsigned>& degrees() const { return degrees_; }
  const std::vector<Rational>& weights() const { return weights_; }
  bool allows(unsigned k) const;
  Rational weight(unsigned k) const;  // zero outside D
  unsigned max_degree() const;        // UINT32_MAX when unbounded
  // gcd of {k-1 : k in D, k > 0}; sizes n with (n-1) % period != 0 are unreachable
  // except through unary chains.
  unsigned period() const;

  // Stable text like "D=0,1,2;w=1,1,1" or "unbounded".
  std::string signature() const;
  // FNV-1a over the signature.
  std::uint64_t weight_hash() const;

  friend bool operator==(const DegreeModel&, const DegreeModel&) = default;

 private:
  bool unbounded_ = false;
  std::vector<unsigned> degrees_;
  std::vector<Rational> weights_;
};

// Ordered rooted tree stored as its preorder out-degree sequence. Vertex 0 is
// the root; the first child of v is v+1 and the next sibling of a child c is
// c + subtree_size(c).
class RootedTree {
 public:
  RootedTree();  // single vertex

  // Throws std::invalid_argument unless the sequence is a valid preorder walk.
  static RootedTree from_degrees(std::vector<std::uint32_t> preorder_degrees);
  // parent[v] = -1 for the root. Children are visited in increasing label order.
  static RootedTree from_parents(const std::vector<int>& parent);
  // Balanced brackets, one "(...)" per vertex: "(()())" is a cherry.
  static RootedTree parse(const std::string& brackets);

  std::uint32_t size() const { return static_cast<std::uint32_t>(deg_.size()); }
  std::uint32_t out_degree(std::uint32_t v) const { return deg_[v]; }
  std::uint32_t subtree_size(std::uint32_t v) const { return sub_[v]; }
  const std::vector<std::uint32_t>& degrees() const { return deg_; }
  std::vector<std::uint32_t> children(std::uint32_t v) const;
  std::uint32_t leaves() const;
  std::map<unsigned, unsigned> degree_profile() const;

  // Same tree with the children of every vertex reordered. order(v, k) must
  // return a permutation of 0..k-1.
  template <class Perm>
  RootedTree reordered(Perm&& order) const;

  std::string to_brackets() const;

  friend bool operator==(const RootedTree& a, const RootedTree& b) { return a.deg_ == b.deg_; }

 private:
  explicit RootedTree(std::vector<std::uint32_t> deg);
  void append_reordered(std::uint32_t v, std::vector<std::uint32_t>& out,
                        const std::vector<std::vector<std::uint32_t>>& perms) const;

  std::vector<std::uint32_t> deg_;
  std::vector<std::uint32_t> sub_;
};

// AHU code: a vertex is '1', its children's codes in sorted order, then '0'.
// Stored bit-packed, most significant bit first.
class CanonicalCode {
 public:
  CanonicalCode() = default;
  static CanonicalCode from_bits(const std::string& bits);
  static CanonicalCode from_hex(const std::string& hex, std::uint32_t nbits);

  std::uint32_t bit_length() const { return nbits_; }
  std::uint32_t tree_size() const { return nbits_ / 2; }
  bool bit(std::uint32_t i) const { return (bytes_[i >> 3] >> (7 - (i & 7))) & 1u; }
  const std::vector<std::uint8_t>& bytes() const { return bytes_; }
  std::string bits() const;
  std::string hex() const;

  friend bool operator==(const CanonicalCode&, const CanonicalCode&) = default;
  friend std::strong_ordering operator<=>(const CanonicalCode& a, const CanonicalCode& b);

 private:
  std::vector<std::uint8_t> bytes_;
  std::uint32_t nbits_ = 0;
};

CanonicalCode canonical_code(const RootedTree& t);
bool are_isomorphic(const RootedTree& a, const RootedTree& b);

// Same code, left aligned in a 64-bit word, for trees with at most 32 vertices.
std::uint64_t small_code(const RootedTree& t);
std::uint64_t small_code(const std::uint32_t* preorder_degrees, std::uint32_t n);

// Rebuilds a tree in canonical child order from its code.
RootedTree tree_from_code(const CanonicalCode& code);

BigInt aut_size(const RootedTree& t);
BigInt degree_factorial_product(const RootedTree& t);
BigInt plane_representations(const RootedTree& t);

class DegreeViolation : public std::invalid_argument {
 public:
  DegreeViolation(std::uint32_t vertex, std::uint32_t degree);
  std::uint32_t vertex;
  std::uint32_t degree;
};

// prod_v w_{deg v} deg(v)! / |Aut|. Throws DegreeViolation.
Rational class_weight(const RootedTree& t, const DegreeModel& m);

struct PolyaRecord {
  CanonicalCode code;
  unsigned n = 0;
  BigInt aut;
  BigInt pr;
  Rational weight;
  std::map<unsigned, unsigned> degree_profile;
};

PolyaRecord make_record(const RootedTree& t, const DegreeModel& m);

template <class Perm>
RootedTree RootedTree::reordered(Perm&& order) const {
  std::vector<std::vector<std::uint32_t>> perms(size());
  for (std::uint32_t v = 0; v < size(); ++v) {
    perms[v] = order(v, deg_[v]);
  }
  std::vector<std::uint32_t> out;
  out.reserve(size());
  append_reordered(0, out, perms);
  return RootedTree(std::move(out));
}

}  // namespace isotree
