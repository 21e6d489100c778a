#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "isotree/rng.hpp"
#include "isotree/trees.hpp"

namespace isotree {

// Uniform rooted labeled tree on n vertices (Pruefer sequence plus a uniform
// root), labels discarded. For n <= 16 one draw in [0, n^(n-1)) supplies all
// digits.
RootedTree sample_labeled_rooted(unsigned n, Rng& rng);
// Preorder degrees only; the hot path of the Monte Carlo kernel.
void sample_labeled_degrees(unsigned n, Rng& rng, std::vector<std::uint32_t>& deg);
// Decodes the rooted labeled tree with index in [0, n^(n-1)), n <= 16.
void labeled_degrees_from_index(unsigned n, std::uint64_t index, std::vector<std::uint32_t>& deg);

class UnreachableSize : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Conditioned Galton-Watson tree of size n: degree sequences weighted by
// prod w_{d_i} and summing to n-1 are drawn position by position from exact
// counts, then rotated by the cycle lemma into a preorder walk. When the
// (denominator-cleared) weighted count fits in 64 bits a single uniform rank
// is drawn and unranked with integer arithmetic; otherwise each position uses
// a double CDF derived from the exact counts.
class CgwSampler {
 public:
  CgwSampler(unsigned n, DegreeModel m);  // throws UnreachableSize

  unsigned size() const { return n_; }
  const DegreeModel& model() const { return model_; }
  // Weighted number of degree sequences (before rotation) = n * sum_P W(P).
  const Rational& total_weight() const { return total_; }

  void sample_degrees(Rng& rng, std::uint32_t* out) const;
  RootedTree sample(Rng& rng) const;

  // Size of the integer rank space, or 0 when it exceeds 64 bits.
  std::uint64_t rank_space() const { return space_; }
  // Rotated degrees of the sequence with the given rank in [0, rank_space()).
  void unrank_degrees(std::uint64_t rank, std::uint32_t* out) const;

 private:
  struct Cell {
    std::vector<double> cdf;           // cumulative, last entry exactly 1
    std::vector<std::uint32_t> value;  // degree per cdf slot
  };
  const Cell& cell(unsigned r, unsigned s) const { return cells_[r * n_ + s]; }
  void rotate(const std::uint32_t* seq, std::uint32_t* out) const;

  unsigned n_;
  DegreeModel model_;
  Rational total_;
  std::vector<Cell> cells_;  // (remaining positions r in 1..n, remaining sum s in 0..n-1)
  std::uint64_t space_ = 0;
  std::vector<std::uint32_t> allowed_;
  std::vector<std::uint64_t> w64_;
  std::vector<std::uint64_t> cnt64_;  // cnt64_[r * n + s]
};

RootedTree sample_cgw(unsigned n, const DegreeModel& m, Rng& rng);

// Uniform over the isomorphism classes of size n with out-degrees in D (or
// unrestricted), driven by exact class counts.
class PolyaUniformSampler {
 public:
  explicit PolyaUniformSampler(unsigned n_max, DegreeModel m = DegreeModel::unbounded(), unsigned ceiling = 2000);
  ~PolyaUniformSampler();
  PolyaUniformSampler(const PolyaUniformSampler&) = delete;
  PolyaUniformSampler& operator=(const PolyaUniformSampler&) = delete;

  const BigInt& count(unsigned n) const;  // number of classes of size n
  RootedTree sample(unsigned n, Rng& rng);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

RootedTree sample_polya_uniform(unsigned n, Rng& rng);

// ------------------------------------------------------------- Monte Carlo

enum class IntervalMethod { wilson, normal };

struct Interval {
  double low = 0;
  double high = 1;
};

inline constexpr double kZ95 = 1.959963984540054;

Interval wilson_interval(std::uint64_t hits, std::uint64_t samples, double z = kZ95);
Interval normal_interval(std::uint64_t hits, std::uint64_t samples, double z = kZ95);

struct MCEstimate {
  double estimate = 0;
  std::uint64_t samples = 0;
  std::uint64_t hits = 0;
  double ci_low = 0;
  double ci_high = 1;
  std::string method;
};

struct McModel {
  enum class Kind { labeled, cgw, plane };
  Kind kind = Kind::labeled;
  DegreeModel degrees = DegreeModel::unbounded();  // used by cgw

  static McModel labeled() { return {Kind::labeled, DegreeModel::unbounded()}; }
  static McModel plane() { return {Kind::plane, DegreeModel::unbounded()}; }
  static McModel cgw(DegreeModel m) { return {Kind::cgw, std::move(m)}; }
  std::string name() const;
};

struct McOptions {
  unsigned workers = 1;
  IntervalMethod interval = IntervalMethod::wilson;
  double z = kZ95;
};

// Pairs are processed in fixed blocks; block b draws from Rng(spec, b), so the
// result does not depend on the number of workers.
inline constexpr std::uint64_t kMcBlock = 1u << 16;

MCEstimate mc_iso_probability(unsigned n, const McModel& model, std::uint64_t samples, RngSpec spec,
                              const McOptions& opt = {});

// Keeps samplers and shape lookup tables alive across repeated runs.
class McRunner {
 public:
  McRunner(unsigned n, McModel model);
  ~McRunner();
  McRunner(const McRunner&) = delete;
  McRunner& operator=(const McRunner&) = delete;
  MCEstimate run(std::uint64_t samples, RngSpec spec, const McOptions& opt = {});

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct LeafStats {
  std::uint64_t samples = 0;
  double mean_leaves = 0;
  double mean_fraction = 0;
  double variance = 0;
  // Conditional law computed exactly from the enumeration, for comparison.
  double exact_mean_leaves = 0;
  double exact_variance = 0;
};

// Classes drawn with probability proportional to (n!/|Aut|)^2, the law of the
// common shape of an isomorphic pair of uniform labeled trees.
LeafStats mc_isomorphic_pair_leaf_stats(unsigned n, std::uint64_t samples, RngSpec spec);

}  // namespace isotree
