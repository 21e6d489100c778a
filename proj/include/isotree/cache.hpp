#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "isotree/trees.hpp"

namespace isotree {

// On-disk enumeration cache, all integers little-endian:
//
//   header  "PTRC" | u16 version | u32 n | u32 |D| | u32 D[i]... | u64 weight hash | u64 count
//           (|D| = 0 marks the unbounded model)
//   record  u32 code bits | code bytes | bigint aut | bigint pr | bigint weight num | bigint weight den
//           | u32 profile entries | (u32 degree, u32 count)...
//   bigint  u32 byte length | magnitude bytes, least significant first (all values are non-negative)
inline constexpr std::uint16_t kCacheVersion = 1;

class CacheFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RecordCache {
  unsigned n = 0;
  std::vector<unsigned> degrees;  // empty for unbounded
  std::uint64_t weight_hash = 0;
  std::vector<PolyaRecord> records;
};

void write_record_cache(std::ostream& out, unsigned n, const DegreeModel& m, const std::vector<PolyaRecord>& records);
RecordCache read_record_cache(std::istream& in);

// True when the cache header matches (n, model).
bool cache_matches(const RecordCache& c, unsigned n, const DegreeModel& m);

}  // namespace isotree
