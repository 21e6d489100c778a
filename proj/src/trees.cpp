#include "isotree/trees.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

namespace isotree {

// ---------------------------------------------------------------- DegreeModel

DegreeModel DegreeModel::unbounded() {
  DegreeModel m;
  m.unbounded_ = true;
  return m;
}

DegreeModel DegreeModel::finite(const std::vector<unsigned>& degrees, const std::vector<Rational>& weights) {
  if (degrees.size() != weights.size()) {
    throw std::invalid_argument("degree list and weight list differ in length");
  }
  std::map<unsigned, Rational> table;
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    if (weights[i] < 0) throw std::invalid_argument("negative weight for degree " + std::to_string(degrees[i]));
    if (!table.emplace(degrees[i], weights[i]).second) {
      throw std::invalid_argument("degree " + std::to_string(degrees[i]) + " listed twice");
    }
  }
  DegreeModel m;
  for (const auto& [k, w] : table) {
    if (w == 0) continue;
    m.degrees_.push_back(k);
    m.weights_.push_back(w);
  }
  if (m.degrees_.empty() || m.degrees_.front() != 0) {
    throw std::invalid_argument("degree 0 must be allowed with positive weight");
  }
  if (m.degrees_.back() < 2) {
    throw std::invalid_argument("some degree >= 2 must carry positive weight");
  }
  return m;
}

DegreeModel DegreeModel::unary_binary() { return finite({0, 1, 2}, {1, 1, 1}); }
DegreeModel DegreeModel::binary121() { return finite({0, 1, 2}, {1, 2, 1}); }
DegreeModel DegreeModel::full_binary() { return finite({0, 2}, {1, 1}); }

bool DegreeModel::allows(unsigned k) const {
  return unbounded_ || std::binary_search(degrees_.begin(), degrees_.end(), k);
}

Rational DegreeModel::weight(unsigned k) const {
  if (unbounded_) return Rational(1);
  auto it = std::lower_bound(degrees_.begin(), degrees_.end(), k);
  if (it == degrees_.end() || *it != k) return Rational(0);
  return weights_[it - degrees_.begin()];
}

unsigned DegreeModel::max_degree() const {
  return unbounded_ ? std::numeric_limits<unsigned>::max() : degrees_.back();
}

unsigned DegreeModel::period() const {
  if (unbounded_) return 1;
  unsigned g = 0;
  for (unsigned k : degrees_) {
    if (k > 0) g = std::gcd(g, k - 1);
  }
  return g == 0 ? 1 : g;
}

std::string DegreeModel::signature() const {
  if (unbounded_) return "unbounded";
  std::ostringstream os;
  os << "D=";
  for (std::size_t i = 0; i < degrees_.size(); ++i) os << (i ? "," : "") << degrees_[i];
  os << ";w=";
  for (std::size_t i = 0; i < weights_.size(); ++i) os << (i ? "," : "") << weights_[i].str();
  return os.str();
}

std::uint64_t DegreeModel::weight_hash() const {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : signature()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// ----------------------------------------------------------------- RootedTree

RootedTree::RootedTree() : deg_{0}, sub_{1} {}

RootedTree::RootedTree(std::vector<std::uint32_t> deg) : deg_(std::move(deg)), sub_(deg_.size(), 1) {
  for (std::size_t v = deg_.size(); v-- > 0;) {
    std::uint32_t c = static_cast<std::uint32_t>(v) + 1;
    for (std::uint32_t k = 0; k < deg_[v]; ++k) {
      sub_[v] += sub_[c];
      c += sub_[c];
    }
  }
}

RootedTree RootedTree::from_degrees(std::vector<std::uint32_t> preorder_degrees) {
  if (preorder_degrees.empty()) throw std::invalid_argument("empty degree sequence");
  // Lukasiewicz condition: the open-slot count stays positive until the end.
  std::int64_t open = 1;
  for (std::size_t i = 0; i < preorder_degrees.size(); ++i) {
    if (open <= 0) throw std::invalid_argument("degree sequence closes before its end");
    open += static_cast<std::int64_t>(preorder_degrees[i]) - 1;
  }
  if (open != 0) throw std::invalid_argument("degree sequence does not close");
  return RootedTree(std::move(preorder_degrees));
}

RootedTree RootedTree::from_parents(const std::vector<int>& parent) {
  const int n = static_cast<int>(parent.size());
  std::vector<std::vector<int>> kids(n);
  int root = -1;
  for (int v = 0; v < n; ++v) {
    if (parent[v] < 0) {
      if (root >= 0) throw std::invalid_argument("more than one root");
      root = v;
    } else {
      if (parent[v] >= n) throw std::invalid_argument("parent label out of range");
      kids[parent[v]].push_back(v);
    }
  }
  if (root < 0) throw std::invalid_argument("no root");
  std::vector<std::uint32_t> deg;
  deg.reserve(n);
  std::vector<int> stack{root};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    deg.push_back(static_cast<std::uint32_t>(kids[v].size()));
    for (auto it = kids[v].rbegin(); it != kids[v].rend(); ++it) stack.push_back(*it);
  }
  if (static_cast<int>(deg.size()) != n) throw std::invalid_argument("parent array is not a tree");
  return from_degrees(std::move(deg));
}

RootedTree RootedTree::parse(const std::string& brackets) {
  std::vector<std::uint32_t> deg;
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < brackets.size(); ++i) {
    char c = brackets[i];
    if (c == '(') {
      if (!stack.empty()) ++deg[stack.back()];
      else if (!deg.empty()) throw std::invalid_argument("more than one root in bracket string");
      stack.push_back(deg.size());
      deg.push_back(0);
    } else if (c == ')') {
      if (stack.empty()) throw std::invalid_argument("unbalanced bracket string");
      stack.pop_back();
    } else if (c != ' ') {
      throw std::invalid_argument(std::string("unexpected character '") + c + "' in bracket string");
    }
  }
  if (!stack.empty() || deg.empty()) throw std::invalid_argument("unbalanced bracket string");
  return RootedTree(std::move(deg));
}

std::vector<std::uint32_t> RootedTree::children(std::uint32_t v) const {
  std::vector<std::uint32_t> out(deg_[v]);
  std::uint32_t c = v + 1;
  for (std::uint32_t k = 0; k < deg_[v]; ++k) {
    out[k] = c;
    c += sub_[c];
  }
  return out;
}

std::uint32_t RootedTree::leaves() const {
  return static_cast<std::uint32_t>(std::count(deg_.begin(), deg_.end(), 0u));
}

std::map<unsigned, unsigned> RootedTree::degree_profile() const {
  std::map<unsigned, unsigned> p;
  for (std::uint32_t d : deg_) ++p[d];
  return p;
}

void RootedTree::append_reordered(std::uint32_t v, std::vector<std::uint32_t>& out,
                                  const std::vector<std::vector<std::uint32_t>>& perms) const {
  out.push_back(deg_[v]);
  auto kids = children(v);
  for (std::uint32_t k : perms[v]) append_reordered(kids.at(k), out, perms);
}

std::string RootedTree::to_brackets() const {
  std::string s;
  s.reserve(2 * size());
  std::vector<std::uint32_t> open;  // remaining children per open vertex
  for (std::uint32_t v = 0; v < size(); ++v) {
    s += '(';
    open.push_back(deg_[v]);
    while (!open.empty() && open.back() == 0) {
      s += ')';
      open.pop_back();
      if (!open.empty()) --open.back();
    }
  }
  return s;
}

// -------------------------------------------------------------- CanonicalCode

CanonicalCode CanonicalCode::from_bits(const std::string& bits) {
  CanonicalCode c;
  c.nbits_ = static_cast<std::uint32_t>(bits.size());
  c.bytes_.assign((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') c.bytes_[i >> 3] |= static_cast<std::uint8_t>(0x80u >> (i & 7));
    else if (bits[i] != '0') throw std::invalid_argument("code bits must be 0 or 1");
  }
  return c;
}

CanonicalCode CanonicalCode::from_hex(const std::string& hex, std::uint32_t nbits) {
  if (hex.size() != 2 * ((nbits + 7) / 8)) throw std::invalid_argument("hex code length mismatch");
  CanonicalCode c;
  c.nbits_ = nbits;
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    c.bytes_.push_back(static_cast<std::uint8_t>(std::stoul(hex.substr(i, 2), nullptr, 16)));
  }
  return c;
}

std::string CanonicalCode::bits() const {
  std::string s(nbits_, '0');
  for (std::uint32_t i = 0; i < nbits_; ++i) {
    if (bit(i)) s[i] = '1';
  }
  return s;
}

std::string CanonicalCode::hex() const {
  static const char* digits = "0123456789abcdef";
  std::string s;
  s.reserve(2 * bytes_.size());
  for (std::uint8_t b : bytes_) {
    s += digits[b >> 4];
    s += digits[b & 15];
  }
  return s;
}

std::strong_ordering operator<=>(const CanonicalCode& a, const CanonicalCode& b) {
  if (auto c = a.bytes_ <=> b.bytes_; c != 0) return c;
  return a.nbits_ <=> b.nbits_;
}

namespace {

// Bottom-up AHU pass over reverse preorder.
std::string ahu_root_code(const RootedTree& t) {
  const std::uint32_t n = t.size();
  std::vector<std::string> code(n);
  for (std::uint32_t v = n; v-- > 0;) {
    auto kids = t.children(v);
    std::vector<std::string> cs;
    cs.reserve(kids.size());
    for (std::uint32_t c : kids) cs.push_back(std::move(code[c]));
    std::sort(cs.begin(), cs.end());
    std::size_t len = 2;
    for (const auto& s : cs) len += s.size();
    std::string& out = code[v];
    out.reserve(len);
    out += '1';
    for (const auto& s : cs) out += s;
    out += '0';
  }
  return std::move(code[0]);
}

}  // namespace

CanonicalCode canonical_code(const RootedTree& t) {
  return CanonicalCode::from_bits(ahu_root_code(t));
}

bool are_isomorphic(const RootedTree& a, const RootedTree& b) {
  return a.size() == b.size() && canonical_code(a) == canonical_code(b);
}

std::uint64_t small_code(const std::uint32_t* deg, std::uint32_t n) {
  if (n > 32) throw std::invalid_argument("small_code handles at most 32 vertices");
  std::uint64_t code[32];
  std::uint32_t len[32];
  std::uint32_t sub[32];
  std::pair<std::uint64_t, std::uint32_t> kids[32];
  for (std::uint32_t v = n; v-- > 0;) {
    std::uint32_t c = v + 1;
    std::uint32_t k = 0;
    sub[v] = 1;
    for (std::uint32_t i = 0; i < deg[v]; ++i) {
      kids[k++] = {code[c], len[c]};
      sub[v] += sub[c];
      c += sub[c];
    }
    std::sort(kids, kids + k);
    std::uint64_t acc = 1ull << 63;
    std::uint32_t pos = 1;
    for (std::uint32_t i = 0; i < k; ++i) {
      acc |= kids[i].first >> pos;
      pos += kids[i].second;
    }
    code[v] = acc;
    len[v] = pos + 1;
  }
  return code[0];
}

std::uint64_t small_code(const RootedTree& t) { return small_code(t.degrees().data(), t.size()); }

RootedTree tree_from_code(const CanonicalCode& code) {
  std::vector<std::uint32_t> deg;
  std::vector<std::size_t> stack;
  for (std::uint32_t i = 0; i < code.bit_length(); ++i) {
    if (code.bit(i)) {
      if (!stack.empty()) ++deg[stack.back()];
      stack.push_back(deg.size());
      deg.push_back(0);
    } else {
      if (stack.empty()) throw std::invalid_argument("malformed canonical code");
      stack.pop_back();
    }
  }
  if (!stack.empty() || deg.empty()) throw std::invalid_argument("malformed canonical code");
  return RootedTree::from_degrees(std::move(deg));
}

BigInt aut_size(const RootedTree& t) {
  // Same pass as the code, grouping equal child codes into runs.
  const std::uint32_t n = t.size();
  std::vector<BigInt> aut(n, BigInt(1));
  std::vector<std::string> code(n);
  for (std::uint32_t v = n; v-- > 0;) {
    auto kids = t.children(v);
    std::vector<std::uint32_t> idx(kids.begin(), kids.end());
    std::sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) { return code[a] < code[b]; });
    BigInt a = 1;
    std::size_t run = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      run = (i > 0 && code[idx[i]] == code[idx[i - 1]]) ? run + 1 : 1;
      a *= aut[idx[i]] * run;
    }
    aut[v] = a;
    std::string& out = code[v];
    out += '1';
    for (std::uint32_t c : idx) {
      out += code[c];
      std::string().swap(code[c]);
    }
    out += '0';
  }
  return aut[0];
}

BigInt degree_factorial_product(const RootedTree& t) {
  BigInt p = 1;
  for (std::uint32_t d : t.degrees()) {
    for (std::uint32_t k = 2; k <= d; ++k) p *= k;
  }
  return p;
}

BigInt plane_representations(const RootedTree& t) { return degree_factorial_product(t) / aut_size(t); }

DegreeViolation::DegreeViolation(std::uint32_t v, std::uint32_t d)
    : std::invalid_argument("vertex " + std::to_string(v) + " has out-degree " + std::to_string(d) +
                            ", which the degree model does not allow"),
      vertex(v),
      degree(d) {}

Rational class_weight(const RootedTree& t, const DegreeModel& m) {
  Rational w = 1;
  for (std::uint32_t v = 0; v < t.size(); ++v) {
    const std::uint32_t d = t.out_degree(v);
    if (!m.allows(d)) throw DegreeViolation(v, d);
    w *= m.weight(d);
  }
  return w * Rational(degree_factorial_product(t), aut_size(t));
}

PolyaRecord make_record(const RootedTree& t, const DegreeModel& m) {
  PolyaRecord r;
  r.code = canonical_code(t);
  r.n = t.size();
  r.aut = aut_size(t);
  r.pr = degree_factorial_product(t) / r.aut;
  r.weight = class_weight(t, m);
  r.degree_profile = t.degree_profile();
  return r;
}

}  // namespace isotree
