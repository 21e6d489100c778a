#pragma once

#include <cstdint>
#include <random>

#include "isotree/scalar.hpp"

namespace isotree {

struct RngSpec {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

// mt19937_64 seeded through seed_seq from (seed, stream, block). Both the
// engine and seed_seq are fully specified by the standard and the helpers
// below avoid the implementation-defined std distributions, so a given
// (seed, stream, block) yields the same numbers everywhere.
class Rng {
 public:
  explicit Rng(RngSpec spec, std::uint64_t block = 0);

  std::uint64_t next() { return eng_(); }

  // Uniform in [0, bound), bound > 0 (Lemire's multiply-and-reject).
  std::uint64_t below(std::uint64_t bound) {
    unsigned __int128 m = static_cast<unsigned __int128>(eng_()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = -bound % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(eng_()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // Uniform in [0, bound) for big bounds, by rejection on the bit length.
  BigInt below(const BigInt& bound);

 private:
  std::mt19937_64 eng_;
};

}  // namespace isotree
