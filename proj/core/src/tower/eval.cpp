#include "expramsey/tower/eval.hpp"

#include <algorithm>
#include <unordered_map>

#include "expramsey/error.hpp"
#include "expramsey/tower/arith.hpp"

namespace expramsey::tower {

namespace {

EvalConfig& config_storage() {
  static EvalConfig config;
  return config;
}

[[noreturn]] void symbolic(const ExpTerm& t) {
  throw Error(ErrorKind::SymbolicUnsupported, "term has no numeric value: " + t.to_string());
}

constexpr u128 kU128Max = ~u128{0};

std::optional<u128> checked_mul(u128 a, u128 b, u128 cutoff) {
  u128 r;
  if (__builtin_mul_overflow(a, b, &r) || r > cutoff) return std::nullopt;
  return r;
}

unsigned bit_length_u128(u128 v) {
  unsigned n = 0;
  while (v != 0) {
    v >>= 1;
    ++n;
  }
  return n;
}

u128 mulmod(u128 a, u128 b, std::uint64_t m) { return (a % m) * (b % m) % m; }

std::uint64_t cached_totient(std::uint64_t m) {
  thread_local std::unordered_map<std::uint64_t, std::uint64_t> cache;
  if (auto it = cache.find(m); it != cache.end()) return it->second;
  const std::uint64_t phi = totient(m);
  if (cache.size() > 4096) cache.clear();
  cache.emplace(m, phi);
  return phi;
}

std::string structural_key(const ExpTerm& t);

std::string structural_key_power(ExpTerm base, ExpTerm exponent) {
  while (base.is_power()) {
    exponent = ExpTerm::product(base.exponent(), exponent);
    base = base.base();
  }
  return "(" + structural_key(base) + ")^(" + structural_key(exponent) + ")";
}

std::string structural_key(const ExpTerm& t) {
  if (!t.has_symbol()) {
    if (auto v = eval_small(t, kU128Max >> 1)) return to_decimal(*v);
  }
  switch (t.kind()) {
    case ExpTerm::Kind::Literal:
    case ExpTerm::Kind::Symbol:
      return t.to_string();
    case ExpTerm::Kind::Power:
      return structural_key_power(t.base(), t.exponent());
    case ExpTerm::Kind::Product: {
      std::vector<std::string> keys;
      for (const auto& f : t.factors()) keys.push_back(structural_key(f));
      std::sort(keys.begin(), keys.end());
      std::string s = "[";
      for (std::size_t i = 0; i < keys.size(); ++i) s += (i ? "*" : "") + keys[i];
      return s + "]";
    }
  }
  return {};
}

}  // namespace

const EvalConfig& default_config() noexcept { return config_storage(); }

void set_default_config(EvalConfig config) {
  if (config.cutoff < 2) throw Error(ErrorKind::InvalidArgument, "cutoff must be >= 2");
  config_storage() = std::move(config);
}

std::optional<u128> eval_small(const ExpTerm& t, u128 cutoff) {
  switch (t.kind()) {
    case ExpTerm::Kind::Literal: {
      auto v = t.small_value();
      if (v && *v <= cutoff) return v;
      return std::nullopt;
    }
    case ExpTerm::Kind::Symbol:
      symbolic(t);
    case ExpTerm::Kind::Product: {
      u128 acc = 1;
      for (const auto& f : t.factors()) {
        auto v = eval_small(f, cutoff);
        if (!v) return std::nullopt;
        auto p = checked_mul(acc, *v, cutoff);
        if (!p) return std::nullopt;
        acc = *p;
      }
      return acc;
    }
    case ExpTerm::Kind::Power: {
      auto a = eval_small(t.base(), cutoff);
      if (!a) return std::nullopt;
      if (*a == 1) return u128{1};
      // a >= 2, so b > bitlen(cutoff) forces a^b > cutoff.
      auto b = eval_small(t.exponent(), std::max<u128>(2, bit_length_u128(cutoff)));
      if (!b) return std::nullopt;
      u128 result = 1;
      u128 base = *a;
      u128 e = *b;
      while (true) {
        if (e & 1) {
          auto r = checked_mul(result, base, cutoff);
          if (!r) return std::nullopt;
          result = *r;
        }
        e >>= 1;
        if (e == 0) break;
        auto sq = checked_mul(base, base, cutoff);
        if (!sq) return std::nullopt;
        base = *sq;
      }
      return result;
    }
  }
  return std::nullopt;
}

BoundedValue eval_exact(const ExpTerm& t, const BigInt& cutoff) {
  if (cutoff < 2) throw Error(ErrorKind::InvalidArgument, "eval_exact: cutoff must be >= 2");
  if (bit_length(cutoff) <= 127) {
    auto v = eval_small(t, *to_u128(cutoff));
    if (v) return BoundedValue::exact(from_u128(*v));
    return BoundedValue::huge(cutoff);
  }
  switch (t.kind()) {
    case ExpTerm::Kind::Literal:
      if (t.value() <= cutoff) return BoundedValue::exact(t.value());
      return BoundedValue::huge(cutoff);
    case ExpTerm::Kind::Symbol:
      symbolic(t);
    case ExpTerm::Kind::Product: {
      BigInt acc = 1;
      for (const auto& f : t.factors()) {
        auto v = eval_exact(f, cutoff);
        if (v.is_huge()) return BoundedValue::huge(cutoff);
        acc *= v.value();
        if (acc > cutoff) return BoundedValue::huge(cutoff);
      }
      return BoundedValue::exact(std::move(acc));
    }
    case ExpTerm::Kind::Power: {
      auto a = eval_exact(t.base(), cutoff);
      if (a.is_huge()) return BoundedValue::huge(cutoff);
      if (a.value() == 1) return BoundedValue::exact(1);
      const std::size_t cbits = bit_length(cutoff);
      auto b = eval_exact(t.exponent(), BigInt(std::max<std::size_t>(2, cbits)));
      if (b.is_huge()) return BoundedValue::huge(cutoff);
      const auto e = b.value().convert_to<std::uint64_t>();
      // a^e >= 2^((bitlen(a)-1) e); bail out before materialising anything large.
      if ((bit_length(a.value()) - 1) * e >= cbits) return BoundedValue::huge(cutoff);
      BigInt r = boost::multiprecision::pow(a.value(), static_cast<unsigned>(e));
      if (r > cutoff) return BoundedValue::huge(cutoff);
      return BoundedValue::exact(std::move(r));
    }
  }
  return BoundedValue::huge(cutoff);
}

BoundedValue eval_exact(const ExpTerm& t) { return eval_exact(t, default_config().cutoff); }

std::uint64_t pow_mod(std::uint64_t base, u128 exponent, std::uint64_t m) {
  if (m == 1) return 0;
  u128 result = 1;
  u128 b = base % m;
  while (exponent > 0) {
    if (exponent & 1) result = mulmod(result, b, m);
    b = mulmod(b, b, m);
    exponent >>= 1;
  }
  return static_cast<std::uint64_t>(result);
}

std::uint64_t eval_mod(const ExpTerm& t, std::uint64_t m) {
  if (m == 0) throw Error(ErrorKind::InvalidArgument, "eval_mod: modulus must be >= 1");
  if (t.has_symbol()) symbolic(t);
  if (m == 1) return 0;
  switch (t.kind()) {
    case ExpTerm::Kind::Literal:
      if (auto v = t.small_value()) return static_cast<std::uint64_t>(*v % m);
      return static_cast<std::uint64_t>(t.value() % m);
    case ExpTerm::Kind::Symbol:
      symbolic(t);
    case ExpTerm::Kind::Product: {
      u128 acc = 1;
      for (const auto& f : t.factors()) acc = mulmod(acc, eval_mod(f, m), m);
      return static_cast<std::uint64_t>(acc);
    }
    case ExpTerm::Kind::Power: {
      const std::uint64_t base = eval_mod(t.base(), m);
      const unsigned threshold = ceil_log2(m) + 1;
      if (auto b = eval_small(t.exponent(), threshold)) return pow_mod(base, *b, m);
      // The exponent exceeds log2 m: lift through the totient.
      const std::uint64_t phi = cached_totient(m);
      const u128 e = static_cast<u128>(eval_mod(t.exponent(), phi)) + phi;
      return pow_mod(base, e, m);
    }
  }
  return 0;
}

bool same_value(const ExpTerm& a, const ExpTerm& b) {
  if (a == b) return true;
  if (!a.has_symbol() && !b.has_symbol()) {
    auto va = eval_exact(a);
    auto vb = eval_exact(b);
    if (va.is_exact() || vb.is_exact()) {
      return va.is_exact() && vb.is_exact() && va.value() == vb.value();
    }
  }
  return value_key(a) == value_key(b);
}

std::string value_key(const ExpTerm& t) {
  if (!t.has_symbol()) {
    auto v = eval_exact(t);
    if (v.is_exact()) return v.value().str();
  }
  return "#" + structural_key(t);
}

}  // namespace expramsey::tower
