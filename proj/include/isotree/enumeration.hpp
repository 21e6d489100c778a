#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "isotree/scalar.hpp"
#include "isotree/trees.hpp"

namespace isotree {

using u128 = unsigned __int128;

BigInt to_bigint(u128 v);

class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EnumerationLimits {
  unsigned unrestricted_ceiling = 22;
  unsigned restricted_ceiling = 26;  // applies when |D| <= 3
};

class PolyaEnumerator;

// One isomorphism class of the requested size. Valid only inside the callback.
struct ClassView {
  const PolyaEnumerator* owner = nullptr;
  unsigned n = 0;
  std::span<const std::uint32_t> root_children;  // stored class ids, non-increasing
  u128 aut = 1;
  u128 degree_factorials = 1;  // prod_v deg(v)!
  unsigned leaves = 0;

  u128 plane_representations() const { return degree_factorials / aut; }
  RootedTree tree() const;  // canonical child order
  // counts[d] = number of vertices of out-degree d, d = 0..n-1
  std::vector<unsigned> degree_counts() const;
};

// Generates Polya trees size by size as multisets of smaller classes. Every
// class of size < n is kept in compact form; size n itself is streamed.
class PolyaEnumerator {
 public:
  explicit PolyaEnumerator(DegreeModel m, EnumerationLimits limits = {});

  const DegreeModel& model() const { return model_; }
  unsigned ceiling() const { return ceiling_; }

  // Throws ResourceLimitError when n exceeds the ceiling.
  void for_each(unsigned n, const std::function<void(const ClassView&)>& fn);
  std::uint64_t count(unsigned n);

  // Stored class access (sizes below the largest streamed size).
  unsigned stored_size(std::uint32_t id) const { return size_[id]; }
  std::span<const std::uint32_t> stored_children(std::uint32_t id) const {
    return {pool_.data() + kid_off_[id], nkids_[id]};
  }
  void append_preorder(std::uint32_t id, std::vector<std::uint32_t>& deg) const;
  void add_degree_counts(std::uint32_t id, std::vector<unsigned>& counts) const;

 private:
  void check_ceiling(unsigned n) const;
  void build_through(unsigned s);
  template <class Emit>
  void combine(unsigned total, Emit&& emit);
  template <class Emit>
  void combine_rec(unsigned remaining, std::uint32_t max_id, std::vector<std::uint32_t>& kids, u128 aut,
                   u128 degf, unsigned leaves, unsigned run, Emit& emit);

  DegreeModel model_;
  unsigned ceiling_;
  unsigned max_deg_;
  unsigned built_ = 0;              // all sizes 1..built_ are stored
  std::vector<std::uint32_t> size_end_;  // size_end_[s] = first id of size > s
  std::vector<std::uint8_t> size_;
  std::vector<std::uint8_t> nkids_;
  std::vector<std::uint32_t> kid_off_;
  std::vector<std::uint32_t> pool_;
  std::vector<u128> aut_;
  std::vector<u128> degf_;
  std::vector<std::uint8_t> leaves_;
};

// Materialized and streamed records with exact statistics.
std::vector<PolyaRecord> enumerate_polya(unsigned n, const DegreeModel& m, EnumerationLimits limits = {});
void enumerate_polya(unsigned n, const DegreeModel& m, const std::function<void(const PolyaRecord&)>& fn,
                     EnumerationLimits limits = {});
PolyaRecord make_record(const ClassView& c, const DegreeModel& m);

// Probability that two uniform rooted labeled trees on n vertices are isomorphic.
Rational exact_p_labeled(unsigned n, EnumerationLimits limits = {});
Rational exact_p_labeled(PolyaEnumerator& unrestricted, unsigned n);

// sum W^2 / (sum W)^2 over classes of size n.
Rational exact_p_gw(unsigned n, const DegreeModel& m, EnumerationLimits limits = {});
Rational exact_p_gw(PolyaEnumerator& e, unsigned n);

// sum_P W(P) over classes of size n, and sum W^2.
struct WeightSums {
  Rational sum;
  Rational sum_sq;
  std::uint64_t classes = 0;
};
WeightSums weight_sums(PolyaEnumerator& e, unsigned n);

// Mean and variance of a class statistic under a law on the classes of one
// size, accumulated in long double.
struct Moments {
  double mean = 0;
  double variance = 0;
  std::uint64_t classes = 0;
};

// log W(P) with P uniform over the classes of size n.
Moments uniform_log_weight_moments(PolyaEnumerator& e, unsigned n);
// log|Aut P| with P uniform over the classes of size n.
Moments uniform_log_aut_moments(PolyaEnumerator& e, unsigned n);
// Number of out-degree-d vertices of the common shape of an isomorphic pair of
// uniform labeled trees (class probability proportional to (n!/|Aut|)^2).
Moments pair_degree_moments(PolyaEnumerator& unrestricted, unsigned n, unsigned d);

// Least-squares slope of ys against xs.
double regression_slope(const std::vector<double>& xs, const std::vector<double>& ys);

struct PlaneDecayRow {
  unsigned n = 0;
  BigInt plane_trees;  // sum of PR, a Catalan number
  Rational q;
  Real rate;  // -log(q)/n
};
std::vector<PlaneDecayRow> plane_decay_table(unsigned n_max, EnumerationLimits limits = {});

}  // namespace isotree
