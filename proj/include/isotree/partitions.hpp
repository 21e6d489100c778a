#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "isotree/scalar.hpp"

namespace isotree {

// Integer partition stored by multiplicity: mult[m] = number of parts equal to
// m (index 0 unused).
struct Partition {
  std::vector<unsigned> mult;

  unsigned weight() const;
  unsigned num_parts() const;
  // Parts in non-increasing order.
  std::vector<unsigned> parts() const;

  friend bool operator==(const Partition&, const Partition&) = default;
};

// All partitions of j, largest parts first ((j), (j-1,1), ...).
std::vector<Partition> enumerate_partitions(unsigned j);

// (sum k)! / prod k_i!
BigInt multinomial(std::span<const unsigned> kparts);

// c(j,t) = j * sum_{lambda |- j} (-1)^{|lambda|-1}/|lambda| * multinomial(lambda)
//          * prod_m m!^{-lambda_m t}, summed over enumerate_partitions(j).
// Exact for integer t in the rational field; memoized per (j, t).
Rational c_coeff(unsigned j, const Rational& t);
Real c_coeff(unsigned j, const Real& t);

// c(0..jmax, t) from c(j,t)/j = [z^j] log(sum_m z^m / m!^t), which is the
// generating function of the partition sum above. O(jmax^2); entry 0 is zero.
std::vector<Rational> c_coeff_table(unsigned jmax, const Rational& t);
std::vector<Real> c_coeff_table(unsigned jmax, const Real& t);

}  // namespace isotree
