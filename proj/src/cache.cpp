#include "isotree/cache.hpp"

#include <array>
#include <istream>
#include <ostream>

namespace isotree {
namespace {

template <class T>
void put(std::ostream& out, T v) {
  std::array<char, sizeof(T)> b;
  for (std::size_t i = 0; i < sizeof(T); ++i) b[i] = static_cast<char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xff);
  out.write(b.data(), b.size());
}

template <class T>
T get(std::istream& in) {
  std::array<unsigned char, sizeof(T)> b;
  if (!in.read(reinterpret_cast<char*>(b.data()), b.size())) throw CacheFormatError("truncated cache file");
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return static_cast<T>(v);
}

void put_bigint(std::ostream& out, BigInt v) {
  if (v < 0) throw std::invalid_argument("cache stores non-negative integers only");
  std::vector<char> bytes;
  while (v != 0) {
    bytes.push_back(static_cast<char>(static_cast<unsigned>(v & 0xff)));
    v >>= 8;
  }
  put<std::uint32_t>(out, static_cast<std::uint32_t>(bytes.size()));
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

BigInt get_bigint(std::istream& in) {
  const auto len = get<std::uint32_t>(in);
  BigInt v = 0;
  std::vector<unsigned char> bytes(len);
  if (len && !in.read(reinterpret_cast<char*>(bytes.data()), len)) throw CacheFormatError("truncated big integer");
  for (std::size_t i = len; i-- > 0;) v = (v << 8) + bytes[i];
  return v;
}

}  // namespace

void write_record_cache(std::ostream& out, unsigned n, const DegreeModel& m, const std::vector<PolyaRecord>& records) {
  out.write("PTRC", 4);
  put<std::uint16_t>(out, kCacheVersion);
  put<std::uint32_t>(out, n);
  const auto& d = m.is_unbounded() ? std::vector<unsigned>{} : m.degrees();
  put<std::uint32_t>(out, static_cast<std::uint32_t>(d.size()));
  for (unsigned k : d) put<std::uint32_t>(out, k);
  put<std::uint64_t>(out, m.weight_hash());
  put<std::uint64_t>(out, records.size());
  for (const PolyaRecord& r : records) {
    put<std::uint32_t>(out, r.code.bit_length());
    out.write(reinterpret_cast<const char*>(r.code.bytes().data()), static_cast<std::streamsize>(r.code.bytes().size()));
    put_bigint(out, r.aut);
    put_bigint(out, r.pr);
    put_bigint(out, bmp::numerator(r.weight));
    put_bigint(out, bmp::denominator(r.weight));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(r.degree_profile.size()));
    for (const auto& [deg, cnt] : r.degree_profile) {
      put<std::uint32_t>(out, deg);
      put<std::uint32_t>(out, cnt);
    }
  }
  if (!out) throw CacheFormatError("failed writing cache");
}

RecordCache read_record_cache(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::string(magic, 4) != "PTRC") throw CacheFormatError("not a record cache (bad magic)");
  const auto version = get<std::uint16_t>(in);
  if (version != kCacheVersion) {
    throw CacheFormatError("unsupported cache version " + std::to_string(version));
  }
  RecordCache c;
  c.n = get<std::uint32_t>(in);
  const auto nd = get<std::uint32_t>(in);
  for (std::uint32_t i = 0; i < nd; ++i) c.degrees.push_back(get<std::uint32_t>(in));
  c.weight_hash = get<std::uint64_t>(in);
  const auto count = get<std::uint64_t>(in);
  for (std::uint64_t i = 0; i < count; ++i) {
    PolyaRecord r;
    const auto bits = get<std::uint32_t>(in);
    std::string raw((bits + 7) / 8, '\0');
    if (!in.read(raw.data(), static_cast<std::streamsize>(raw.size()))) throw CacheFormatError("truncated code");
    std::string hex;
    static const char* digits = "0123456789abcdef";
    for (unsigned char b : raw) {
      hex += digits[b >> 4];
      hex += digits[b & 15];
    }
    r.code = CanonicalCode::from_hex(hex, bits);
    r.n = bits / 2;
    r.aut = get_bigint(in);
    r.pr = get_bigint(in);
    BigInt num = get_bigint(in);
    BigInt den = get_bigint(in);
    if (den == 0) throw CacheFormatError("zero weight denominator");
    r.weight = Rational(num, den);
    const auto np = get<std::uint32_t>(in);
    for (std::uint32_t k = 0; k < np; ++k) {
      const auto deg = get<std::uint32_t>(in);
      r.degree_profile[deg] = get<std::uint32_t>(in);
    }
    c.records.push_back(std::move(r));
  }
  if (in.peek() != std::char_traits<char>::eof()) throw CacheFormatError("trailing bytes after the last record");
  return c;
}

bool cache_matches(const RecordCache& c, unsigned n, const DegreeModel& m) {
  const auto& d = m.is_unbounded() ? std::vector<unsigned>{} : m.degrees();
  return c.n == n && c.degrees == d && c.weight_hash == m.weight_hash();
}

}  // namespace isotree
