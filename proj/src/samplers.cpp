#include "isotree/samplers.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <thread>

#include "isotree/enumeration.hpp"

namespace isotree {

// ------------------------------------------------------------ labeled trees

namespace {

std::uint64_t labeled_index_space(unsigned n) {
  std::uint64_t s = 1;
  for (unsigned i = 1; i < n; ++i) s *= n;
  return s;
}

// Pruefer decode (linear-time variant) followed by a preorder walk from root.
void decode_prufer(unsigned n, const std::uint32_t* seq, std::uint32_t root, std::vector<std::uint32_t>& deg) {
  deg.clear();
  if (n == 1) {
    deg.push_back(0);
    return;
  }
  std::vector<std::uint32_t> eu, ev;
  eu.reserve(n - 1);
  ev.reserve(n - 1);
  std::vector<std::uint32_t> degree(n, 1);
  for (unsigned i = 0; i + 2 < n; ++i) ++degree[seq[i]];
  std::uint32_t ptr = 0;
  while (degree[ptr] != 1) ++ptr;
  std::uint32_t leaf = ptr;
  for (unsigned i = 0; i + 2 < n; ++i) {
    const std::uint32_t x = seq[i];
    eu.push_back(leaf);
    ev.push_back(x);
    if (--degree[x] == 1 && x < ptr) {
      leaf = x;
    } else {
      ++ptr;
      while (degree[ptr] != 1) ++ptr;
      leaf = ptr;
    }
  }
  eu.push_back(leaf);
  ev.push_back(n - 1);

  // adjacency in CSR form
  std::vector<std::uint32_t> start(n + 1, 0), adj(2 * (n - 1));
  for (unsigned e = 0; e + 1 < n; ++e) {
    ++start[eu[e] + 1];
    ++start[ev[e] + 1];
  }
  for (unsigned v = 0; v < n; ++v) start[v + 1] += start[v];
  std::vector<std::uint32_t> fill(start.begin(), start.end() - 1);
  for (unsigned e = 0; e + 1 < n; ++e) {
    adj[fill[eu[e]]++] = ev[e];
    adj[fill[ev[e]]++] = eu[e];
  }
  std::vector<std::int64_t> parent(n, -1);
  std::vector<std::uint32_t> stack{root};
  parent[root] = root;
  while (!stack.empty()) {
    const std::uint32_t v = stack.back();
    stack.pop_back();
    std::uint32_t kids = 0;
    for (std::uint32_t i = start[v + 1]; i-- > start[v];) {
      const std::uint32_t w = adj[i];
      if (parent[w] >= 0) continue;
      parent[w] = v;
      stack.push_back(w);
      ++kids;
    }
    deg.push_back(kids);
  }
}

}  // namespace

void labeled_degrees_from_index(unsigned n, std::uint64_t index, std::vector<std::uint32_t>& deg) {
  if (n == 0 || n > 16) throw std::invalid_argument("labeled index decoding supports 1 <= n <= 16");
  std::uint32_t digits[16];
  const auto root = static_cast<std::uint32_t>(index % n);
  index /= n;
  for (unsigned i = 0; i + 2 < n; ++i) {
    digits[i] = static_cast<std::uint32_t>(index % n);
    index /= n;
  }
  decode_prufer(n, digits, root, deg);
}

void sample_labeled_degrees(unsigned n, Rng& rng, std::vector<std::uint32_t>& deg) {
  if (n == 0) throw std::invalid_argument("tree size must be at least 1");
  if (n <= 16) {
    labeled_degrees_from_index(n, rng.below(labeled_index_space(n)), deg);
    return;
  }
  std::vector<std::uint32_t> seq(n - 2);
  for (auto& x : seq) x = static_cast<std::uint32_t>(rng.below(n));
  const auto root = static_cast<std::uint32_t>(rng.below(n));
  decode_prufer(n, seq.data(), root, deg);
}

RootedTree sample_labeled_rooted(unsigned n, Rng& rng) {
  std::vector<std::uint32_t> deg;
  sample_labeled_degrees(n, rng, deg);
  return RootedTree::from_degrees(std::move(deg));
}

// ---------------------------------------------------- conditioned GW trees

CgwSampler::CgwSampler(unsigned n, DegreeModel m) : n_(n), model_(std::move(m)) {
  if (n == 0) throw std::invalid_argument("tree size must be at least 1");
  std::vector<unsigned> allowed;
  std::vector<BigInt> w;
  // Clearing denominators scales every length-r sequence by L^r, which leaves
  // all conditional ratios unchanged.
  BigInt L = 1;
  if (model_.is_unbounded()) {
    for (unsigned k = 0; k < n; ++k) {
      allowed.push_back(k);
      w.push_back(1);
    }
  } else {
    for (const Rational& q : model_.weights()) L = bmp::lcm(L, bmp::denominator(q));
    for (std::size_t i = 0; i < model_.degrees().size(); ++i) {
      if (model_.degrees()[i] >= n) continue;
      allowed.push_back(model_.degrees()[i]);
      w.push_back(bmp::numerator(model_.weights()[i] * Rational(L)));
    }
  }
  // cnt[r][s]: weighted count of r-term sequences over allowed summing to s
  std::vector<std::vector<BigInt>> cnt(n + 1, std::vector<BigInt>(n, BigInt(0)));
  cnt[0][0] = 1;
  for (unsigned r = 1; r <= n; ++r) {
    for (unsigned s = 0; s < n; ++s) {
      BigInt acc = 0;
      for (std::size_t i = 0; i < allowed.size() && allowed[i] <= s; ++i) acc += w[i] * cnt[r - 1][s - allowed[i]];
      cnt[r][s] = std::move(acc);
    }
  }
  if (cnt[n][n - 1] == 0) {
    throw UnreachableSize("no tree of size " + std::to_string(n) + " under " + model_.signature());
  }
  total_ = Rational(cnt[n][n - 1], bmp::pow(L, n));
  if (cnt[n][n - 1] <= BigInt(std::numeric_limits<std::uint64_t>::max())) {
    // every intermediate count is bounded by the total, so all fit
    space_ = cnt[n][n - 1].convert_to<std::uint64_t>();
    allowed_.assign(allowed.begin(), allowed.end());
    for (const BigInt& x : w) w64_.push_back(x.convert_to<std::uint64_t>());
    cnt64_.assign((n + 1) * n, 0);
    for (unsigned r = 0; r <= n; ++r) {
      for (unsigned s = 0; s < n; ++s) {
        if (cnt[r][s] <= BigInt(std::numeric_limits<std::uint64_t>::max())) {
          cnt64_[r * n + s] = cnt[r][s].convert_to<std::uint64_t>();
        }
      }
    }
  }
  cells_.resize((n + 1) * n);
  for (unsigned r = 1; r <= n; ++r) {
    for (unsigned s = 0; s < n; ++s) {
      if (cnt[r][s] == 0) continue;
      Cell& c = cells_[r * n + s];
      BigInt cum = 0;
      for (std::size_t i = 0; i < allowed.size() && allowed[i] <= s; ++i) {
        BigInt part = w[i] * cnt[r - 1][s - allowed[i]];
        if (part == 0) continue;
        cum += part;
        c.cdf.push_back(Rational(cum, cnt[r][s]).convert_to<double>());
        c.value.push_back(allowed[i]);
      }
      c.cdf.back() = 1.0;
    }
  }
}

void CgwSampler::unrank_degrees(std::uint64_t rank, std::uint32_t* out) const {
  if (rank >= space_) throw std::out_of_range("rank outside the sequence space");
  std::uint32_t tmp[4096];
  std::vector<std::uint32_t> big;
  std::uint32_t* seq = tmp;
  if (n_ > 4096) {
    big.resize(n_);
    seq = big.data();
  }
  unsigned s = n_ - 1;
  for (unsigned r = n_; r >= 1; --r) {
    for (std::size_t i = 0; i < allowed_.size(); ++i) {
      const unsigned k = allowed_[i];
      if (k > s) break;
      const std::uint64_t part = w64_[i] * cnt64_[(r - 1) * n_ + (s - k)];
      if (rank < part) {
        // the block holds w_k copies of the remaining sub-space
        rank %= cnt64_[(r - 1) * n_ + (s - k)];
        seq[n_ - r] = k;
        s -= k;
        break;
      }
      rank -= part;
    }
  }
  rotate(seq, out);
}

void CgwSampler::rotate(const std::uint32_t* seq, std::uint32_t* out) const {
  // Cycle lemma: start right after the first minimum of the walk sum(d - 1).
  std::int64_t walk = 0, best = 1;
  unsigned arg = 0;
  for (unsigned i = 0; i < n_; ++i) {
    walk += static_cast<std::int64_t>(seq[i]) - 1;
    if (walk < best) {
      best = walk;
      arg = i;
    }
  }
  const unsigned first = (arg + 1) % n_;
  for (unsigned i = 0; i < n_; ++i) out[i] = seq[(first + i) % n_];
}

void CgwSampler::sample_degrees(Rng& rng, std::uint32_t* out) const {
  if (space_ != 0) {
    unrank_degrees(rng.below(space_), out);
    return;
  }
  std::uint32_t tmp[4096];
  std::vector<std::uint32_t> big;
  std::uint32_t* seq = tmp;
  if (n_ > 4096) {
    big.resize(n_);
    seq = big.data();
  }
  unsigned s = n_ - 1;
  for (unsigned r = n_; r >= 1; --r) {
    const Cell& c = cell(r, s);
    const double u = rng.uniform01();
    std::size_t i = 0;
    while (c.cdf[i] <= u) ++i;
    seq[n_ - r] = c.value[i];
    s -= c.value[i];
  }
  rotate(seq, out);
}

RootedTree CgwSampler::sample(Rng& rng) const {
  std::vector<std::uint32_t> deg(n_);
  sample_degrees(rng, deg.data());
  return RootedTree::from_degrees(std::move(deg));
}

RootedTree sample_cgw(unsigned n, const DegreeModel& m, Rng& rng) { return CgwSampler(n, m).sample(rng); }

// ------------------------------------------------------ uniform Polya trees

struct PolyaUniformSampler::Impl {
  struct Choice {
    BigInt cum;
    unsigned j;
    unsigned s;
  };
  DegreeModel model;
  unsigned n_max;
  std::vector<BigInt> a;               // a[s]: classes of size s
  std::vector<std::vector<BigInt>> M;  // finite D: M[k][m] multisets of k trees, total m
  std::vector<BigInt> forest;          // unbounded: forest[m] = a[m+1]
  std::map<std::pair<unsigned, unsigned>, std::vector<Choice>> tables;

  Impl(unsigned nmax, DegreeModel m) : model(std::move(m)), n_max(nmax), a(nmax + 2, BigInt(0)) {
    if (model.is_unbounded()) {
      forest.assign(nmax + 1, BigInt(0));
      forest[0] = 1;
      a[1] = 1;
      for (unsigned m = 1; m < nmax; ++m) {
        BigInt acc = 0;
        for (unsigned s = 1; s <= m; ++s) {
          for (unsigned j = 1; j * s <= m; ++j) acc += BigInt(s) * a[s] * forest[m - j * s];
        }
        forest[m] = acc / m;
        a[m + 1] = forest[m];
      }
    } else {
      const unsigned K = model.max_degree();
      M.assign(K + 1, std::vector<BigInt>(nmax, BigInt(0)));
      M[0][0] = 1;
      a[1] = 1;
      for (unsigned m = 1; m < nmax; ++m) {
        for (unsigned k = 1; k <= K; ++k) {
          BigInt acc = 0;
          for (unsigned j = 1; j <= k; ++j) {
            for (unsigned s = 1; j * s <= m; ++s) acc += a[s] * M[k - j][m - j * s];
          }
          M[k][m] = acc / k;
        }
        BigInt t = 0;
        for (unsigned k : model.degrees()) t += M[k][m];
        a[m + 1] = t;
      }
    }
  }

  // Candidates (j copies of one tree of size s) for a multiset with k members
  // (k = 0 means the unbounded forest) and total size m.
  const std::vector<Choice>& table(unsigned k, unsigned m) {
    auto key = std::make_pair(k, m);
    auto it = tables.find(key);
    if (it != tables.end()) return it->second;
    std::vector<Choice> t;
    BigInt cum = 0;
    if (model.is_unbounded()) {
      for (unsigned s = 1; s <= m; ++s) {
        for (unsigned j = 1; j * s <= m; ++j) {
          BigInt part = BigInt(s) * a[s] * forest[m - j * s];
          if (part == 0) continue;
          cum += part;
          t.push_back({cum, j, s});
        }
      }
    } else {
      for (unsigned j = 1; j <= k; ++j) {
        for (unsigned s = 1; j * s <= m; ++s) {
          BigInt part = a[s] * M[k - j][m - j * s];
          if (part == 0) continue;
          cum += part;
          t.push_back({cum, j, s});
        }
      }
    }
    return tables.emplace(key, std::move(t)).first->second;
  }

  const Choice& pick(unsigned k, unsigned m, Rng& rng) {
    const auto& t = table(k, m);
    const BigInt r = rng.below(t.back().cum);
    auto it = std::upper_bound(t.begin(), t.end(), r, [](const BigInt& x, const Choice& c) { return x < c.cum; });
    return *it;
  }

  // Appends the preorder degrees of a uniform tree of size s; returns nothing,
  // the root slot is patched once its children are known.
  void gen_tree(unsigned s, Rng& rng, std::vector<std::uint32_t>& out) {
    const std::size_t root = out.size();
    out.push_back(0);
    if (s == 1) return;
    unsigned m = s - 1;
    unsigned children = 0;
    if (model.is_unbounded()) {
      while (m > 0) {
        const Choice c = pick(0, m, rng);
        emit_copies(c, rng, out);
        children += c.j;
        m -= c.j * c.s;
      }
    } else {
      // root degree k with probability M[k][s-1] / a[s]
      BigInt r = rng.below(a[s]);
      unsigned k = 0;
      for (unsigned d : model.degrees()) {
        if (r < M[d][m]) {
          k = d;
          break;
        }
        r -= M[d][m];
      }
      while (k > 0) {
        const Choice c = pick(k, m, rng);
        emit_copies(c, rng, out);
        children += c.j;
        k -= c.j;
        m -= c.j * c.s;
      }
    }
    out[root] = children;
  }

  void emit_copies(const Choice& c, Rng& rng, std::vector<std::uint32_t>& out) {
    const std::size_t begin = out.size();
    gen_tree(c.s, rng, out);
    const std::size_t end = out.size();
    for (unsigned rep = 1; rep < c.j; ++rep) {
      for (std::size_t i = begin; i < end; ++i) out.push_back(out[i]);
    }
  }
};

PolyaUniformSampler::PolyaUniformSampler(unsigned n_max, DegreeModel m, unsigned ceiling) {
  if (n_max == 0) throw std::invalid_argument("tree size must be at least 1");
  if (n_max > ceiling) {
    throw ResourceLimitError("counting tables to n=" + std::to_string(n_max) + " exceed the ceiling " +
                             std::to_string(ceiling));
  }
  impl_ = std::make_unique<Impl>(n_max, std::move(m));
}

PolyaUniformSampler::~PolyaUniformSampler() = default;

const BigInt& PolyaUniformSampler::count(unsigned n) const {
  if (n == 0 || n > impl_->n_max) throw std::out_of_range("size outside the counting table");
  return impl_->a[n];
}

RootedTree PolyaUniformSampler::sample(unsigned n, Rng& rng) {
  if (count(n) == 0) throw UnreachableSize("no tree of size " + std::to_string(n) + " under " + impl_->model.signature());
  std::vector<std::uint32_t> deg;
  deg.reserve(n);
  impl_->gen_tree(n, rng, deg);
  return RootedTree::from_degrees(std::move(deg));
}

RootedTree sample_polya_uniform(unsigned n, Rng& rng) {
  PolyaUniformSampler s(n);
  return s.sample(n, rng);
}

// -------------------------------------------------------------- Monte Carlo

Interval wilson_interval(std::uint64_t hits, std::uint64_t samples, double z) {
  if (samples == 0) return {0, 1};
  const double n = static_cast<double>(samples);
  const double p = static_cast<double>(hits) / n;
  const double z2 = z * z;
  const double denom = 1 + z2 / n;
  const double center = (p + z2 / (2 * n)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom;
  Interval iv{std::max(0.0, center - half), std::min(1.0, center + half)};
  // keep the point estimate inside despite rounding at the ends
  iv.low = std::min(iv.low, p);
  iv.high = std::max(iv.high, p);
  return iv;
}

Interval normal_interval(std::uint64_t hits, std::uint64_t samples, double z) {
  if (samples == 0) return {0, 1};
  const double n = static_cast<double>(samples);
  const double p = static_cast<double>(hits) / n;
  const double half = z * std::sqrt(p * (1 - p) / n);
  return {std::max(0.0, p - half), std::min(1.0, p + half)};
}

std::string McModel::name() const {
  switch (kind) {
    case Kind::labeled:
      return "labeled";
    case Kind::plane:
      return "plane";
    case Kind::cgw:
      return "cgw(" + degrees.signature() + ")";
  }
  return "?";
}

namespace mc {

// Draws the shape of one tree and returns a key that is equal exactly for
// isomorphic shapes. Keys are 64-bit codes when n <= 32; larger trees fall
// back to full canonical codes.
class ShapeKernel {
 public:
  ShapeKernel(unsigned n, const McModel& model) : n_(n), model_(model) {
    if (model.kind == McModel::Kind::labeled) {
      if (n_ <= 16) space_ = labeled_index_space(n_);
    } else {
      cgw_ = std::make_unique<CgwSampler>(n_, model.kind == McModel::Kind::plane ? DegreeModel::unbounded()
                                                                                 : model.degrees);
      space_ = cgw_->rank_space();
    }
    // Every draw is a uniform rank in [0, space_), and the shape is a fixed
    // function of the rank, so small rank spaces memoize shape codes.
    if (space_ != 0 && space_ <= kTableLimit && n_ <= 32) table_.assign(space_, 0);
    deg_.resize(n_);
  }

  bool small() const { return n_ <= 32; }

  std::uint64_t draw_small(Rng& rng) {
    if (!table_.empty()) {
      const std::uint64_t idx = rng.below(space_);
      std::uint64_t& slot = table_[idx];
      if (slot == 0) {
        decode(idx);
        slot = small_code(deg_.data(), n_);
      }
      return slot;
    }
    draw_degrees(rng);
    return small_code(deg_.data(), n_);
  }

  CanonicalCode draw_large(Rng& rng) {
    draw_degrees(rng);
    return canonical_code(RootedTree::from_degrees(deg_));
  }

 private:
  void decode(std::uint64_t rank) {
    if (model_.kind == McModel::Kind::labeled) labeled_degrees_from_index(n_, rank, deg_);
    else cgw_->unrank_degrees(rank, deg_.data());
  }
  void draw_degrees(Rng& rng) {
    if (model_.kind == McModel::Kind::labeled) sample_labeled_degrees(n_, rng, deg_);
    else cgw_->sample_degrees(rng, deg_.data());
  }

  static constexpr std::uint64_t kTableLimit = 1ull << 22;
  unsigned n_;
  McModel model_;
  std::unique_ptr<CgwSampler> cgw_;
  std::uint64_t space_ = 0;
  std::vector<std::uint64_t> table_;
  std::vector<std::uint32_t> deg_;
};

std::uint64_t run_block(ShapeKernel& k, Rng& rng, std::uint64_t pairs) {
  std::uint64_t hits = 0;
  if (k.small()) {
    for (std::uint64_t i = 0; i < pairs; ++i) {
      const std::uint64_t a = k.draw_small(rng);
      hits += a == k.draw_small(rng);
    }
  } else {
    for (std::uint64_t i = 0; i < pairs; ++i) {
      const CanonicalCode a = k.draw_large(rng);
      hits += a == k.draw_large(rng);
    }
  }
  return hits;
}

}  // namespace mc

struct McRunner::Impl {
  unsigned n;
  McModel model;
  std::vector<std::unique_ptr<mc::ShapeKernel>> kernels;  // one per worker, reused across runs
};

McRunner::McRunner(unsigned n, McModel model) : impl_(std::make_unique<Impl>()) {
  if (n == 0) throw std::invalid_argument("tree size must be at least 1");
  impl_->n = n;
  impl_->model = std::move(model);
  // Built here so unreachable sizes surface on the calling thread.
  impl_->kernels.push_back(std::make_unique<mc::ShapeKernel>(n, impl_->model));
}

McRunner::~McRunner() = default;

MCEstimate McRunner::run(std::uint64_t samples, RngSpec spec, const McOptions& opt) {
  if (samples == 0) throw std::invalid_argument("samples must be at least 1");
  const std::uint64_t blocks = (samples + kMcBlock - 1) / kMcBlock;
  std::vector<std::uint64_t> block_hits(blocks, 0);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&](mc::ShapeKernel& k) {
    for (std::uint64_t b; (b = next.fetch_add(1)) < blocks;) {
      Rng rng(spec, b);
      const std::uint64_t pairs = std::min(kMcBlock, samples - b * kMcBlock);
      block_hits[b] = mc::run_block(k, rng, pairs);
    }
  };
  const unsigned workers = std::max(1u, std::min<unsigned>(opt.workers, static_cast<unsigned>(blocks)));
  while (impl_->kernels.size() < workers) impl_->kernels.push_back(std::make_unique<mc::ShapeKernel>(impl_->n, impl_->model));
  if (workers == 1) {
    worker(*impl_->kernels[0]);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker, std::ref(*impl_->kernels[w]));
    worker(*impl_->kernels[0]);
    for (auto& t : pool) t.join();
  }
  MCEstimate est;
  est.samples = samples;
  for (std::uint64_t h : block_hits) est.hits += h;
  est.estimate = static_cast<double>(est.hits) / static_cast<double>(samples);
  const Interval iv = opt.interval == IntervalMethod::wilson ? wilson_interval(est.hits, samples, opt.z)
                                                             : normal_interval(est.hits, samples, opt.z);
  est.ci_low = iv.low;
  est.ci_high = iv.high;
  est.method = opt.interval == IntervalMethod::wilson ? "wilson" : "normal";
  return est;
}

MCEstimate mc_iso_probability(unsigned n, const McModel& model, std::uint64_t samples, RngSpec spec,
                              const McOptions& opt) {
  return McRunner(n, model).run(samples, spec, opt);
}

LeafStats mc_isomorphic_pair_leaf_stats(unsigned n, std::uint64_t samples, RngSpec spec) {
  if (samples == 0) throw std::invalid_argument("samples must be at least 1");
  PolyaEnumerator e(DegreeModel::unbounded());
  std::vector<BigInt> cum;
  std::vector<unsigned> leaves;
  const BigInt nf = factorial(n);
  BigInt total = 0;
  Rational s1 = 0, s2 = 0;
  e.for_each(n, [&](const ClassView& c) {
    const BigInt labelings = nf / to_bigint(c.aut);
    const BigInt w = labelings * labelings;
    total += w;
    cum.push_back(total);
    leaves.push_back(c.leaves);
    s1 += Rational(w * c.leaves);
    s2 += Rational(w * c.leaves * c.leaves);
  });
  LeafStats st;
  st.samples = samples;
  const Rational mean = s1 / Rational(total);
  st.exact_mean_leaves = mean.convert_to<double>();
  st.exact_variance = (s2 / Rational(total) - mean * mean).convert_to<double>();

  Rng rng(spec);
  double sum = 0, sum2 = 0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    const BigInt r = rng.below(total);
    const auto k = std::upper_bound(cum.begin(), cum.end(), r) - cum.begin();
    const double l = leaves[k];
    sum += l;
    sum2 += l * l;
  }
  const double m = sum / static_cast<double>(samples);
  st.mean_leaves = m;
  st.mean_fraction = m / n;
  st.variance = samples > 1 ? (sum2 - samples * m * m) / static_cast<double>(samples - 1) : 0.0;
  return st;
}

}  // namespace isotree
