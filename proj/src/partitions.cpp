#include "isotree/partitions.hpp"

#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <tuple>
#include <utility>

namespace isotree {

unsigned Partition::weight() const {
  unsigned w = 0;
  for (std::size_t m = 1; m < mult.size(); ++m) w += static_cast<unsigned>(m) * mult[m];
  return w;
}

unsigned Partition::num_parts() const { return std::accumulate(mult.begin(), mult.end(), 0u); }

std::vector<unsigned> Partition::parts() const {
  std::vector<unsigned> out;
  for (std::size_t m = mult.size(); m-- > 1;) out.insert(out.end(), mult[m], static_cast<unsigned>(m));
  return out;
}

namespace {

void partitions_rec(unsigned remaining, unsigned max_part, Partition& cur, std::vector<Partition>& out) {
  if (remaining == 0) {
    out.push_back(cur);
    return;
  }
  for (unsigned p = std::min(remaining, max_part); p >= 1; --p) {
    ++cur.mult[p];
    partitions_rec(remaining - p, p, cur, out);
    --cur.mult[p];
  }
}

// m!^{-e} for integer e, exact.
Rational factorial_power(unsigned m, long e) {
  BigInt f = factorial(m);
  BigInt p = 1;
  for (long i = 0; i < (e < 0 ? -e : e); ++i) p *= f;
  return e >= 0 ? Rational(BigInt(1), p) : Rational(p);
}

long require_integer(const Rational& t) {
  if (bmp::denominator(t) != 1) {
    throw std::domain_error("c(j,t) in the rational field needs integer t; use the real field");
  }
  return bmp::numerator(t).convert_to<long>();
}

template <class K, class V>
class MemoTable {
 public:
  template <class Fn>
  V get(const K& key, Fn compute) {
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = table_.find(key);
      if (it != table_.end()) return it->second;
    }
    V v = compute();
    std::lock_guard<std::mutex> lock(mu_);
    return table_.emplace(key, std::move(v)).first->second;
  }

 private:
  std::mutex mu_;
  std::map<K, V> table_;
};

}  // namespace

std::vector<Partition> enumerate_partitions(unsigned j) {
  if (j == 0) throw std::invalid_argument("enumerate_partitions: j must be positive");
  std::vector<Partition> out;
  Partition cur{std::vector<unsigned>(j + 1, 0)};
  partitions_rec(j, j, cur, out);
  return out;
}

BigInt multinomial(std::span<const unsigned> kparts) {
  unsigned total = 0;
  for (unsigned k : kparts) total += k;
  BigInt num = factorial(total);
  for (unsigned k : kparts) num /= factorial(k);
  return num;
}

Rational c_coeff(unsigned j, const Rational& t) {
  static MemoTable<std::pair<unsigned, Rational>, Rational> memo;
  return memo.get({j, t}, [&] {
    const long e = require_integer(t);
    Rational sum = 0;
    for (const Partition& lam : enumerate_partitions(j)) {
      const unsigned parts = lam.num_parts();
      Rational term(multinomial(lam.mult), BigInt(parts));
      if (parts % 2 == 0) term = -term;
      for (unsigned m = 1; m <= j; ++m) {
        if (lam.mult[m]) term *= factorial_power(m, e * static_cast<long>(lam.mult[m]));
      }
      sum += term;
    }
    return Rational(j) * sum;
  });
}

Real c_coeff(unsigned j, const Real& t) {
  // Precision is part of the key so a value is never reused at a finer setting.
  static MemoTable<std::tuple<unsigned, unsigned, Real>, Real> memo;
  return memo.get({j, working_precision_bits(), t}, [&] {
    Real sum = 0;
    for (const Partition& lam : enumerate_partitions(j)) {
      const unsigned parts = lam.num_parts();
      Real term = Real(multinomial(lam.mult)) / parts;
      if (parts % 2 == 0) term = -term;
      Real logw = 0;
      for (unsigned m = 1; m <= j; ++m) {
        if (lam.mult[m]) logw += lam.mult[m] * bmp::lgamma(Real(m + 1));
      }
      sum += term * bmp::exp(-t * logw);
    }
    return Real(j) * sum;
  });
}

namespace {

// j * [z^j] log(1 + sum_{m>=1} a_m z^m)
template <class F>
std::vector<F> log_series_times_index(const std::vector<F>& a) {
  const std::size_t n = a.size() - 1;
  std::vector<F> l(n + 1, F(0));
  for (std::size_t m = 1; m <= n; ++m) {
    F s = F(m) * a[m];
    for (std::size_t k = 1; k < m; ++k) s -= F(k) * l[k] * a[m - k];
    l[m] = s / F(m);
  }
  for (std::size_t m = 1; m <= n; ++m) l[m] *= F(m);
  return l;
}

}  // namespace

std::vector<Rational> c_coeff_table(unsigned jmax, const Rational& t) {
  static MemoTable<std::pair<unsigned, Rational>, std::vector<Rational>> memo;
  return memo.get({jmax, t}, [&] {
    const long e = require_integer(t);
    std::vector<Rational> a(jmax + 1, Rational(0));
    for (unsigned m = 1; m <= jmax; ++m) a[m] = factorial_power(m, e);
    return log_series_times_index(a);
  });
}

std::vector<Real> c_coeff_table(unsigned jmax, const Real& t) {
  static MemoTable<std::tuple<unsigned, unsigned, Real>, std::vector<Real>> memo;
  return memo.get({jmax, working_precision_bits(), t}, [&] {
    std::vector<Real> a(jmax + 1, Real(0));
    Real logfact = 0;
    for (unsigned m = 1; m <= jmax; ++m) {
      logfact += bmp::log(Real(m));
      a[m] = bmp::exp(-t * logfact);
    }
    return log_series_times_index(a);
  });
}

}  // namespace isotree
