#include "isotree/rng.hpp"

#include <limits>
#include <stdexcept>

namespace isotree {

Rng::Rng(RngSpec spec, std::uint64_t block) {
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq seq{lo(spec.seed), hi(spec.seed), lo(spec.stream), hi(spec.stream), lo(block), hi(block)};
  eng_.seed(seq);
}

BigInt Rng::below(const BigInt& bound) {
  if (bound <= 0) throw std::invalid_argument("Rng::below needs a positive bound");
  if (bound <= BigInt(std::numeric_limits<std::uint64_t>::max())) {
    return BigInt(below(bound.convert_to<std::uint64_t>()));
  }
  const std::size_t bits = bmp::msb(bound) + 1;
  const std::size_t words = (bits + 63) / 64;
  const std::size_t spare = words * 64 - bits;
  for (;;) {
    BigInt r = 0;
    for (std::size_t w = 0; w < words; ++w) {
      std::uint64_t x = eng_();
      if (w == 0 && spare) x >>= spare;
      r = (r << 64) | BigInt(x);
    }
    if (r < bound) return r;
  }
}

}  // namespace isotree
