#pragma once

// Slow reference implementations used as test oracles. Nothing here calls the
// canonical-code or enumeration machinery of the library.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <vector>

namespace brute {

using Seq = std::vector<std::uint32_t>;  // preorder out-degrees

// All plane trees on n vertices, optionally with out-degrees restricted.
inline std::vector<Seq> plane_trees(unsigned n, const std::function<bool(unsigned)>& allowed = {}) {
  // forest(k, m): sequences of k trees with m vertices in total
  std::function<std::vector<Seq>(unsigned, unsigned)> forest;
  std::function<std::vector<Seq>(unsigned)> tree;
  std::map<unsigned, std::vector<Seq>> tree_memo;
  std::map<std::pair<unsigned, unsigned>, std::vector<Seq>> forest_memo;
  forest = [&](unsigned k, unsigned m) -> std::vector<Seq> {
    if (k == 0) return m == 0 ? std::vector<Seq>{Seq{}} : std::vector<Seq>{};
    if (m < k) return {};
    auto key = std::make_pair(k, m);
    if (auto it = forest_memo.find(key); it != forest_memo.end()) return it->second;
    std::vector<Seq> out;
    for (unsigned first = 1; first + (k - 1) <= m; ++first) {
      for (const Seq& a : tree(first)) {
        for (const Seq& b : forest(k - 1, m - first)) {
          Seq s = a;
          s.insert(s.end(), b.begin(), b.end());
          out.push_back(std::move(s));
        }
      }
    }
    forest_memo[key] = out;
    return out;
  };
  tree = [&](unsigned m) -> std::vector<Seq> {
    if (auto it = tree_memo.find(m); it != tree_memo.end()) return it->second;
    std::vector<Seq> out;
    for (unsigned k = 0; k + 1 <= m; ++k) {
      if (allowed && !allowed(k)) continue;
      for (const Seq& f : forest(k, m - 1)) {
        Seq s{k};
        s.insert(s.end(), f.begin(), f.end());
        out.push_back(std::move(s));
      }
    }
    tree_memo[m] = out;
    return out;
  };
  return tree(n);
}

// Every preorder sequence reachable by permuting children anywhere.
inline std::set<Seq> embeddings(const Seq& deg, std::size_t root = 0) {
  std::vector<std::size_t> kids;
  std::size_t pos = root + 1;
  for (std::uint32_t c = 0; c < deg[root]; ++c) {
    kids.push_back(pos);
    // skip the subtree starting at pos
    std::size_t need = 1;
    while (need > 0) need = need - 1 + deg[pos++];
  }
  std::vector<std::vector<Seq>> child_sets;
  for (std::size_t k : kids) {
    auto s = embeddings(deg, k);
    child_sets.emplace_back(s.begin(), s.end());
  }
  std::set<Seq> out;
  std::vector<std::size_t> perm(kids.size());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    std::vector<std::size_t> pick(kids.size(), 0);
    while (true) {
      Seq s{deg[root]};
      for (std::size_t i = 0; i < perm.size(); ++i) {
        const Seq& part = child_sets[perm[i]][pick[i]];
        s.insert(s.end(), part.begin(), part.end());
      }
      out.insert(std::move(s));
      std::size_t i = 0;
      while (i < pick.size() && ++pick[i] == child_sets[perm[i]].size()) pick[i++] = 0;
      if (i == pick.size()) break;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

inline Seq canonical(const Seq& deg) { return *embeddings(deg).begin(); }

inline std::uint64_t factorial(unsigned k) {
  std::uint64_t f = 1;
  for (unsigned i = 2; i <= k; ++i) f *= i;
  return f;
}

// |Aut| by orbit counting on the plane embeddings.
inline std::uint64_t automorphisms(const Seq& deg) {
  std::uint64_t prod = 1;
  for (auto d : deg) prod *= factorial(d);
  return prod / embeddings(deg).size();
}

// Every rooted labeled tree on n vertices as a parent array (root has -1),
// found by testing all maps V -> V.
inline std::vector<std::vector<int>> labeled_rooted_trees(unsigned n) {
  std::vector<std::vector<int>> out;
  std::vector<int> f(n, 0);
  while (true) {
    // exactly one fixed point, and every vertex reaches it
    int root = -1;
    bool ok = true;
    for (unsigned v = 0; v < n && ok; ++v) {
      if (f[v] == static_cast<int>(v)) {
        if (root >= 0) ok = false;
        root = static_cast<int>(v);
      }
    }
    if (ok && root >= 0) {
      for (unsigned v = 0; v < n && ok; ++v) {
        int x = static_cast<int>(v);
        for (unsigned step = 0; step < n && x != root; ++step) x = f[x];
        ok = x == root;
      }
    }
    if (ok && root >= 0) {
      std::vector<int> p(f);
      p[root] = -1;
      out.push_back(std::move(p));
    }
    unsigned i = 0;
    while (i < n && ++f[i] == static_cast<int>(n)) f[i++] = 0;
    if (i == n) break;
  }
  return out;
}

// Preorder degrees of a parent array, children in label order.
inline Seq degrees_of(const std::vector<int>& parent) {
  const int n = static_cast<int>(parent.size());
  std::vector<std::vector<int>> kids(n);
  int root = 0;
  for (int v = 0; v < n; ++v) {
    if (parent[v] < 0) root = v;
    else kids[parent[v]].push_back(v);
  }
  Seq out;
  std::function<void(int)> walk = [&](int v) {
    out.push_back(static_cast<std::uint32_t>(kids[v].size()));
    for (int c : kids[v]) walk(c);
  };
  walk(root);
  return out;
}

}  // namespace brute
