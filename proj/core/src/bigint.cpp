#include "expramsey/bigint.hpp"

#include <algorithm>

namespace expramsey {

std::size_t bit_length(const BigInt& v) {
  if (v == 0) return 0;
  return boost::multiprecision::msb(boost::multiprecision::abs(v)) + 1;
}

std::optional<std::uint64_t> to_u64(const BigInt& v) {
  if (v < 0 || bit_length(v) > 64) return std::nullopt;
  return v.convert_to<std::uint64_t>();
}

std::optional<u128> to_u128(const BigInt& v) {
  if (v < 0 || bit_length(v) > 128) return std::nullopt;
  const BigInt hi = v >> 64;
  const BigInt lo = v & BigInt(UINT64_MAX);
  return (static_cast<u128>(hi.convert_to<std::uint64_t>()) << 64) |
         static_cast<u128>(lo.convert_to<std::uint64_t>());
}

BigInt from_u128(u128 v) {
  BigInt r = static_cast<std::uint64_t>(v >> 64);
  r <<= 64;
  r += static_cast<std::uint64_t>(v);
  return r;
}

std::string to_decimal(const BigInt& v) { return v.str(); }

std::string to_decimal(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

unsigned ceil_log2(std::uint64_t m) {
  unsigned k = 0;
  while (k < 64 && (std::uint64_t{1} << k) < m) ++k;
  return k;
}

}  // namespace expramsey
