#include "isotree/enumeration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace isotree {

BigInt to_bigint(u128 v) {
  BigInt hi = static_cast<std::uint64_t>(v >> 64);
  BigInt lo = static_cast<std::uint64_t>(v);
  return (hi << 64) + lo;
}

RootedTree ClassView::tree() const {
  std::vector<std::uint32_t> deg;
  deg.reserve(n);
  deg.push_back(static_cast<std::uint32_t>(root_children.size()));
  for (std::uint32_t c : root_children) owner->append_preorder(c, deg);
  return RootedTree::from_degrees(std::move(deg));
}

std::vector<unsigned> ClassView::degree_counts() const {
  std::vector<unsigned> counts(n, 0);
  ++counts[root_children.size()];
  for (std::uint32_t c : root_children) owner->add_degree_counts(c, counts);
  return counts;
}

PolyaEnumerator::PolyaEnumerator(DegreeModel m, EnumerationLimits limits)
    : model_(std::move(m)),
      ceiling_(model_.is_unbounded() || model_.degrees().size() > 3 ? limits.unrestricted_ceiling
                                                                    : limits.restricted_ceiling),
      max_deg_(model_.max_degree()),
      size_end_{0} {}

void PolyaEnumerator::check_ceiling(unsigned n) const {
  if (n == 0) throw std::invalid_argument("tree size must be at least 1");
  if (n > ceiling_) {
    throw ResourceLimitError("enumeration at n=" + std::to_string(n) + " exceeds the ceiling " +
                             std::to_string(ceiling_) + " for model " + model_.signature());
  }
}

void PolyaEnumerator::append_preorder(std::uint32_t id, std::vector<std::uint32_t>& deg) const {
  deg.push_back(nkids_[id]);
  for (std::uint32_t c : stored_children(id)) append_preorder(c, deg);
}

void PolyaEnumerator::add_degree_counts(std::uint32_t id, std::vector<unsigned>& counts) const {
  ++counts[nkids_[id]];
  for (std::uint32_t c : stored_children(id)) add_degree_counts(c, counts);
}

template <class Emit>
void PolyaEnumerator::combine_rec(unsigned remaining, std::uint32_t max_id, std::vector<std::uint32_t>& kids,
                                  u128 aut, u128 degf, unsigned leaves, unsigned run, Emit& emit) {
  const auto k = static_cast<unsigned>(kids.size());
  if (remaining == 0) {
    if (model_.allows(k)) {
      u128 f = degf;
      for (unsigned i = 2; i <= k; ++i) f *= i;
      emit(std::span<const std::uint32_t>(kids), aut, f, leaves + (k == 0 ? 1u : 0u));
    }
    return;
  }
  if (k >= max_deg_) return;
  const std::uint32_t top = std::min<std::uint32_t>(max_id, size_end_[std::min(remaining, built_)]);
  const std::uint32_t slots = max_deg_ - k;
  for (std::uint32_t id = top; id-- > 0;) {
    const unsigned s = size_[id];
    // Sizes only shrink from here, so if the remaining slots cannot absorb
    // the remainder at this size, nothing later can either.
    if (!model_.is_unbounded() && static_cast<std::uint64_t>(slots) * s < remaining) break;
    const unsigned r = (k > 0 && kids.back() == id) ? run + 1 : 1;
    kids.push_back(id);
    combine_rec(remaining - s, id + 1, kids, aut * aut_[id] * r, degf * degf_[id], leaves + leaves_[id], r, emit);
    kids.pop_back();
  }
}

template <class Emit>
void PolyaEnumerator::combine(unsigned total, Emit&& emit) {
  std::vector<std::uint32_t> kids;
  combine_rec(total, std::numeric_limits<std::uint32_t>::max(), kids, 1, 1, 0, 0, emit);
}

void PolyaEnumerator::build_through(unsigned s_max) {
  while (built_ < s_max) {
    const unsigned s = built_ + 1;
    // Children only reference sizes <= built_, so appending is safe.
    combine(s - 1, [&](std::span<const std::uint32_t> kids, u128 aut, u128 degf, unsigned leaves) {
      size_.push_back(static_cast<std::uint8_t>(s));
      nkids_.push_back(static_cast<std::uint8_t>(kids.size()));
      kid_off_.push_back(static_cast<std::uint32_t>(pool_.size()));
      pool_.insert(pool_.end(), kids.begin(), kids.end());
      aut_.push_back(aut);
      degf_.push_back(degf);
      leaves_.push_back(static_cast<std::uint8_t>(leaves));
    });
    size_end_.push_back(static_cast<std::uint32_t>(size_.size()));
    built_ = s;
  }
}

void PolyaEnumerator::for_each(unsigned n, const std::function<void(const ClassView&)>& fn) {
  check_ceiling(n);
  build_through(n - 1);
  ClassView view;
  view.owner = this;
  view.n = n;
  combine(n - 1, [&](std::span<const std::uint32_t> kids, u128 aut, u128 degf, unsigned leaves) {
    view.root_children = kids;
    view.aut = aut;
    view.degree_factorials = degf;
    view.leaves = leaves;
    fn(view);
  });
}

std::uint64_t PolyaEnumerator::count(unsigned n) {
  std::uint64_t c = 0;
  for_each(n, [&](const ClassView&) { ++c; });
  return c;
}

PolyaRecord make_record(const ClassView& c, const DegreeModel& m) {
  PolyaRecord r;
  RootedTree t = c.tree();
  r.code = canonical_code(t);
  r.n = c.n;
  r.aut = to_bigint(c.aut);
  r.pr = to_bigint(c.plane_representations());
  r.weight = Rational(r.pr);
  auto counts = c.degree_counts();
  for (unsigned d = 0; d < counts.size(); ++d) {
    if (!counts[d]) continue;
    r.degree_profile[d] = counts[d];
    Rational w = m.weight(d);
    for (unsigned i = 0; i < counts[d]; ++i) r.weight *= w;
  }
  return r;
}

void enumerate_polya(unsigned n, const DegreeModel& m, const std::function<void(const PolyaRecord&)>& fn,
                     EnumerationLimits limits) {
  PolyaEnumerator e(m, limits);
  e.for_each(n, [&](const ClassView& c) { fn(make_record(c, m)); });
}

std::vector<PolyaRecord> enumerate_polya(unsigned n, const DegreeModel& m, EnumerationLimits limits) {
  std::vector<PolyaRecord> out;
  enumerate_polya(n, m, [&](const PolyaRecord& r) { out.push_back(r); }, limits);
  return out;
}

Rational exact_p_labeled(PolyaEnumerator& e, unsigned n) {
  if (!e.model().is_unbounded()) throw std::invalid_argument("labeled trees need the unbounded degree model");
  // Group by |Aut| to keep the rational work per distinct value.
  std::map<u128, std::uint64_t> by_aut;
  e.for_each(n, [&](const ClassView& c) { ++by_aut[c.aut]; });
  Rational s = 0;
  for (const auto& [aut, cnt] : by_aut) {
    BigInt a = to_bigint(aut);
    s += Rational(BigInt(cnt), a * a);
  }
  BigInt f = factorial(n);
  BigInt cayley = bmp::pow(BigInt(n), n - 1);
  return s * Rational(f * f, cayley * cayley);
}

Rational exact_p_labeled(unsigned n, EnumerationLimits limits) {
  PolyaEnumerator e(DegreeModel::unbounded(), limits);
  return exact_p_labeled(e, n);
}

WeightSums weight_sums(PolyaEnumerator& e, unsigned n) {
  const DegreeModel& m = e.model();
  // Classes sharing a degree profile share the weight product, so sum PR and
  // PR^2 per profile and apply the weights once.
  struct Acc {
    BigInt pr;
    BigInt pr2;
  };
  std::map<std::vector<unsigned>, Acc> groups;
  WeightSums out;
  e.for_each(n, [&](const ClassView& c) {
    ++out.classes;
    std::vector<unsigned> key;
    if (!m.is_unbounded()) {
      auto counts = c.degree_counts();
      for (unsigned d : m.degrees()) key.push_back(d < counts.size() ? counts[d] : 0);
    }
    BigInt pr = to_bigint(c.plane_representations());
    Acc& a = groups[key];
    a.pr += pr;
    a.pr2 += pr * pr;
  });
  for (const auto& [key, a] : groups) {
    Rational w = 1;
    for (std::size_t i = 0; i < key.size(); ++i) {
      for (unsigned r = 0; r < key[i]; ++r) w *= m.weights()[i];
    }
    out.sum += w * Rational(a.pr);
    out.sum_sq += w * w * Rational(a.pr2);
  }
  return out;
}

namespace {

struct MomentAcc {
  long double w = 0, s1 = 0, s2 = 0;
  std::uint64_t classes = 0;
  void add(long double weight, long double value) {
    w += weight;
    s1 += weight * value;
    s2 += weight * value * value;
    ++classes;
  }
  Moments result() const {
    Moments m;
    m.classes = classes;
    const long double mean = s1 / w;
    m.mean = static_cast<double>(mean);
    m.variance = static_cast<double>(s2 / w - mean * mean);
    return m;
  }
};

long double log_u128(u128 v) {
  const auto hi = static_cast<long double>(static_cast<std::uint64_t>(v >> 64));
  const auto lo = static_cast<long double>(static_cast<std::uint64_t>(v));
  return std::log(hi * 18446744073709551616.0L + lo);
}

}  // namespace

Moments uniform_log_weight_moments(PolyaEnumerator& e, unsigned n) {
  const DegreeModel& m = e.model();
  std::vector<long double> logw;
  bool unit = true;
  for (const Rational& w : m.weights()) {
    logw.push_back(std::log(w.convert_to<long double>()));
    if (w != 1) unit = false;
  }
  MomentAcc acc;
  e.for_each(n, [&](const ClassView& c) {
    long double v = log_u128(c.degree_factorials) - log_u128(c.aut);
    if (!unit) {
      auto counts = c.degree_counts();
      for (std::size_t i = 0; i < m.degrees().size(); ++i) {
        const unsigned d = m.degrees()[i];
        if (d < counts.size()) v += counts[d] * logw[i];
      }
    }
    acc.add(1, v);
  });
  return acc.result();
}

Moments uniform_log_aut_moments(PolyaEnumerator& e, unsigned n) {
  MomentAcc acc;
  e.for_each(n, [&](const ClassView& c) { acc.add(1, log_u128(c.aut)); });
  return acc.result();
}

Moments pair_degree_moments(PolyaEnumerator& e, unsigned n, unsigned d) {
  // (n!/aut)^2 relative to (n!)^2 is aut^-2; the common factor cancels.
  MomentAcc acc;
  e.for_each(n, [&](const ClassView& c) {
    const long double a = static_cast<long double>(c.aut);
    const long double value = d == 0 ? c.leaves : c.degree_counts()[d];
    acc.add(1 / (a * a), value);
  });
  return acc.result();
}

double regression_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw std::invalid_argument("regression needs two or more points");
  const double k = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= k;
  my /= k;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

Rational exact_p_gw(PolyaEnumerator& e, unsigned n) {
  WeightSums s = weight_sums(e, n);
  if (s.sum == 0) {
    throw std::invalid_argument("size " + std::to_string(n) + " is unreachable under " + e.model().signature());
  }
  return s.sum_sq / (s.sum * s.sum);
}

Rational exact_p_gw(unsigned n, const DegreeModel& m, EnumerationLimits limits) {
  PolyaEnumerator e(m, limits);
  return exact_p_gw(e, n);
}

std::vector<PlaneDecayRow> plane_decay_table(unsigned n_max, EnumerationLimits limits) {
  PolyaEnumerator e(DegreeModel::unbounded(), limits);
  if (n_max > e.ceiling()) {
    throw ResourceLimitError("plane decay table to n=" + std::to_string(n_max) + " exceeds the ceiling " +
                             std::to_string(e.ceiling()));
  }
  std::vector<PlaneDecayRow> rows;
  for (unsigned n = 1; n <= n_max; ++n) {
    WeightSums s = weight_sums(e, n);
    PlaneDecayRow row;
    row.n = n;
    row.plane_trees = bmp::numerator(s.sum);
    row.q = s.sum_sq / (s.sum * s.sum);
    row.rate = -bmp::log(to_real(row.q)) / n;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace isotree
