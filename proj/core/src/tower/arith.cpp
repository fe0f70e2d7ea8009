#include "expramsey/tower/arith.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <random>

#include <boost/multiprecision/miller_rabin.hpp>

#include "expramsey/error.hpp"

namespace expramsey::tower {

namespace {

std::uint64_t mulmod64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod64(r, a, m);
    a = mulmod64(a, a, m);
    e >>= 1;
  }
  return r;
}

const std::vector<std::uint32_t>& small_primes(std::uint64_t limit) {
  static std::vector<std::uint32_t> primes;
  static std::uint64_t sieved = 0;
  static std::mutex mu;
  std::lock_guard lock(mu);
  if (sieved < limit) {
    std::vector<bool> composite(limit + 1, false);
    primes.clear();
    for (std::uint64_t i = 2; i <= limit; ++i) {
      if (composite[i]) continue;
      primes.push_back(static_cast<std::uint32_t>(i));
      for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
    }
    sieved = limit;
  }
  return primes;
}

// Brent's variant of Pollard rho; returns a nontrivial factor or 0.
std::uint64_t rho_u64(std::uint64_t n, std::uint64_t c, std::uint64_t max_iter) {
  auto f = [&](std::uint64_t x) { return (mulmod64(x, x, n) + c) % n; };
  std::uint64_t y = 2, x = 2, q = 1, g = 1, ys = 2;
  std::uint64_t r = 1, iter = 0;
  constexpr std::uint64_t m = 128;
  while (g == 1) {
    x = y;
    for (std::uint64_t i = 0; i < r; ++i) y = f(y);
    std::uint64_t k = 0;
    while (k < r && g == 1) {
      ys = y;
      const std::uint64_t lim = std::min(m, r - k);
      for (std::uint64_t i = 0; i < lim; ++i) {
        y = f(y);
        q = mulmod64(q, x > y ? x - y : y - x, n);
      }
      g = std::gcd(q, n);
      k += m;
      iter += lim;
      if (iter > max_iter) return 0;
    }
    r <<= 1;
  }
  if (g == n) {
    do {
      ys = f(ys);
      g = std::gcd(x > ys ? x - ys : ys - x, n);
    } while (g == 1);
  }
  return g == n ? 0 : g;
}

void factor_rec_u64(std::uint64_t n, std::map<std::uint64_t, unsigned>& out) {
  if (n == 1) return;
  if (is_prime_u64(n)) {
    ++out[n];
    return;
  }
  for (std::uint64_t c = 1;; ++c) {
    const std::uint64_t d = rho_u64(n, c, UINT64_MAX);
    if (d != 0) {
      factor_rec_u64(d, out);
      factor_rec_u64(n / d, out);
      return;
    }
  }
}

// Brent's variant over BigInt, gcd batched every 128 steps.
BigInt rho_big(const BigInt& n, unsigned c, std::uint64_t max_iter) {
  auto f = [&](const BigInt& x) { return BigInt((x * x + c) % n); };
  BigInt y = 2, x = 2, ys = 2, q = 1, g = 1;
  std::uint64_t r = 1, iter = 0;
  constexpr std::uint64_t m = 128;
  while (g == 1) {
    x = y;
    for (std::uint64_t i = 0; i < r; ++i) y = f(y);
    std::uint64_t k = 0;
    while (k < r && g == 1) {
      ys = y;
      const std::uint64_t lim = std::min(m, r - k);
      for (std::uint64_t i = 0; i < lim; ++i) {
        y = f(y);
        q = q * BigInt(x > y ? x - y : y - x) % n;
      }
      g = boost::multiprecision::gcd(q, n);
      k += m;
      iter += lim;
      if (iter > max_iter) return 0;
    }
    r <<= 1;
  }
  if (g == n) {
    do {
      ys = f(ys);
      g = boost::multiprecision::gcd(BigInt(x > ys ? x - ys : ys - x), n);
    } while (g == 1);
  }
  return g == n ? BigInt(0) : g;
}

void factor_rec_big(const BigInt& n, std::map<BigInt, BigInt>& out, const FactorBudget& budget) {
  if (n == 1) return;
  if (auto small = to_u64(n)) {
    for (auto [p, e] : factorize_u64(*small)) out[BigInt(p)] += e;
    return;
  }
  if (boost::multiprecision::miller_rabin_test(n, 25)) {
    out[n] += 1;
    return;
  }
  for (unsigned attempt = 0; attempt < budget.rho_attempts; ++attempt) {
    const BigInt d = rho_big(n, attempt + 1, budget.rho_iterations);
    if (d != 0) {
      factor_rec_big(d, out, budget);
      factor_rec_big(n / d, out, budget);
      return;
    }
  }
  throw Error(ErrorKind::FactorizationBudgetExceeded,
              "could not split a " + std::to_string(bit_length(n)) + "-bit cofactor");
}

BigInt exact_exponent(const ExpTerm& e) {
  auto v = eval_exact(e);
  if (v.is_huge()) {
    throw Error(ErrorKind::ExactnessRequired, "exponent exceeds the exactness cutoff: " + e.to_string());
  }
  return v.value();
}

void factor_map(const ExpTerm& t, const BigInt& scale, std::map<BigInt, BigInt>& out) {
  switch (t.kind()) {
    case ExpTerm::Kind::Literal:
      for (const auto& [p, e] : factorize(t.value())) out[p] += e * scale;
      return;
    case ExpTerm::Kind::Power: {
      auto e = eval_exact(t.exponent());
      if (e.is_huge()) {
        throw Error(ErrorKind::UnsupportedShape,
                    "product with a power whose exponent exceeds the cutoff: " + t.to_string());
      }
      factor_map(t.base(), scale * e.value(), out);
      return;
    }
    case ExpTerm::Kind::Product:
      for (const auto& f : t.factors()) factor_map(f, scale, out);
      return;
    case ExpTerm::Kind::Symbol:
      throw Error(ErrorKind::SymbolicUnsupported, "term has no numeric value: " + t.to_string());
  }
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Deterministic for all 64-bit n with these bases.
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = powmod64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = mulmod64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

SmallFactorization factorize_u64(std::uint64_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "factorize(0)");
  std::map<std::uint64_t, unsigned> found;
  for (std::uint64_t p : {2u, 3u, 5u, 7u, 11u, 13u}) {
    while (n % p == 0) {
      ++found[p];
      n /= p;
    }
  }
  for (std::uint64_t p = 17; p < 1000 && p * p <= n; p += 2) {
    while (n % p == 0) {
      ++found[p];
      n /= p;
    }
  }
  factor_rec_u64(n, found);
  return {found.begin(), found.end()};
}

std::uint64_t totient(std::uint64_t n) {
  std::uint64_t phi = n;
  for (auto [p, e] : factorize_u64(n)) phi = phi / p * (p - 1);
  return phi;
}

Factorization factorize(const BigInt& n, const FactorBudget& budget) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "factorize requires n >= 1");
  std::map<BigInt, BigInt> found;
  if (auto small = to_u64(n)) {
    for (auto [p, e] : factorize_u64(*small)) found[BigInt(p)] += e;
    return {found.begin(), found.end()};
  }
  BigInt m = n;
  for (std::uint32_t p : small_primes(budget.trial_division_limit)) {
    if (m == 1) break;
    if (BigInt(p) * p > m) break;
    unsigned e = 0;
    while (static_cast<std::uint32_t>(m % p) == 0) {
      m /= p;
      ++e;
    }
    if (e) found[BigInt(p)] += e;
  }
  factor_rec_big(m, found, budget);
  return {found.begin(), found.end()};
}

BigInt max_root_exponent(const ExpTerm& t) {
  switch (t.kind()) {
    case ExpTerm::Kind::Literal: {
      if (t.value() == 1) return 0;
      BigInt g = 0;
      for (const auto& [p, e] : factorize(t.value())) g = boost::multiprecision::gcd(g, e);
      return g;
    }
    case ExpTerm::Kind::Power:
      return max_root_exponent(t.base()) * exact_exponent(t.exponent());
    case ExpTerm::Kind::Product: {
      std::map<BigInt, BigInt> m;
      factor_map(t, 1, m);
      BigInt g = 0;
      for (const auto& [p, e] : m) g = boost::multiprecision::gcd(g, e);
      return g;
    }
    case ExpTerm::Kind::Symbol:
      break;
  }
  throw Error(ErrorKind::SymbolicUnsupported, "term has no numeric value: " + t.to_string());
}

std::uint64_t max_root_exponent_mod(const ExpTerm& t, std::uint64_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "modulus must be >= 1");
  if (t.is_power()) {
    const u128 la = max_root_exponent_mod(t.base(), n);
    return static_cast<std::uint64_t>(la * eval_mod(t.exponent(), n) % n);
  }
  return static_cast<std::uint64_t>(max_root_exponent(t) % n);
}

std::optional<ExpTerm> valuation_term(const ExpTerm& t, std::uint64_t p) {
  if (!is_prime_u64(p)) throw Error(ErrorKind::InvalidArgument, "valuation base must be prime");
  switch (t.kind()) {
    case ExpTerm::Kind::Literal: {
      std::uint64_t count = 0;
      if (auto s = t.small_value()) {
        u128 v = *s;
        while (v % p == 0) {
          v /= p;
          ++count;
        }
      } else {
        BigInt v = t.value();
        while (v % p == 0) {
          v /= p;
          ++count;
        }
      }
      if (count == 0) return std::nullopt;
      return ExpTerm::literal(count);
    }
    case ExpTerm::Kind::Power: {
      auto vb = valuation_term(t.base(), p);
      if (!vb) return std::nullopt;
      return ExpTerm::product(*vb, t.exponent());
    }
    case ExpTerm::Kind::Product: {
      std::vector<ExpTerm> parts;
      for (const auto& f : t.factors()) {
        if (auto v = valuation_term(f, p)) parts.push_back(*v);
      }
      if (parts.empty()) return std::nullopt;
      if (parts.size() == 1) return parts.front();
      BigInt sum = 0;
      for (const auto& v : parts) {
        auto e = eval_exact(v);
        if (e.is_huge()) {
          throw Error(ErrorKind::ExactnessRequired,
                      "valuation of a product with a huge component: " + t.to_string());
        }
        sum += e.value();
      }
      return ExpTerm::literal(sum);
    }
    case ExpTerm::Kind::Symbol:
      break;
  }
  throw Error(ErrorKind::SymbolicUnsupported, "term has no numeric value: " + t.to_string());
}

BigInt nu_p(const ExpTerm& t, std::uint64_t p) {
  auto v = valuation_term(t, p);
  if (!v) return 0;
  auto e = eval_exact(*v);
  if (e.is_huge()) {
    throw Error(ErrorKind::ExactnessRequired, "valuation exceeds the cutoff: " + v->to_string());
  }
  return e.value();
}

std::uint64_t nu_p_mod(const ExpTerm& t, std::uint64_t p, std::uint64_t n) {
  auto v = valuation_term(t, p);
  if (!v) return 0;
  return eval_mod(*v, n);
}

}  // namespace expramsey::tower
