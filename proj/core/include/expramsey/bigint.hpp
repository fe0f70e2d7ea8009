#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace expramsey {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;
using u128 = unsigned __int128;

/// Number of bits needed to write |v|; 0 for v == 0.
std::size_t bit_length(const BigInt& v);

std::optional<std::uint64_t> to_u64(const BigInt& v);
std::optional<u128> to_u128(const BigInt& v);
BigInt from_u128(u128 v);

std::string to_decimal(const BigInt& v);
std::string to_decimal(u128 v);

/// ceil(log2 m) for m >= 1.
unsigned ceil_log2(std::uint64_t m);

}  // namespace expramsey
