#pragma once

#include <cstdint>

#include "expramsey/bigint.hpp"
#include "expramsey/tower/exp_term.hpp"

namespace expramsey::tower {

struct FactorBudget {
  std::uint64_t trial_division_limit = 1'000'000;
  std::uint64_t rho_iterations = 2'000'000;  // per attempt
  unsigned rho_attempts = 16;
};

/// Process-wide evaluation settings. Set once at startup (before any worker
/// threads run); read-only afterwards.
struct EvalConfig {
  BigInt cutoff = BigInt(1) << 64;
  FactorBudget factor;
};

const EvalConfig& default_config() noexcept;
void set_default_config(EvalConfig config);

/// Either the exact value (when it does not exceed the cutoff) or the fact
/// that the value exceeds the cutoff.
class BoundedValue {
 public:
  static BoundedValue exact(BigInt v) { return BoundedValue(true, std::move(v)); }
  static BoundedValue huge(BigInt cutoff) { return BoundedValue(false, std::move(cutoff)); }

  bool is_exact() const noexcept { return exact_; }
  bool is_huge() const noexcept { return !exact_; }
  /// The exact value; for Huge, the cutoff that was exceeded.
  const BigInt& value() const noexcept { return value_; }

 private:
  BoundedValue(bool exact, BigInt v) : exact_(exact), value_(std::move(v)) {}
  bool exact_;
  BigInt value_;
};

/// Exact value if it is <= cutoff, else Huge. Never materialises values far
/// above the cutoff. Precondition: cutoff >= 2.
BoundedValue eval_exact(const ExpTerm& t, const BigInt& cutoff);
BoundedValue eval_exact(const ExpTerm& t);

/// Allocation-free variant: the value if it is <= cutoff, else nullopt.
std::optional<u128> eval_small(const ExpTerm& t, u128 cutoff);

/// Residue of the denoted integer modulo m (m >= 1). Powers are reduced
/// with the generalised Euler rule a^b = a^(phi(m) + b mod phi(m)) once b
/// is known to be >= log2 m.
std::uint64_t eval_mod(const ExpTerm& t, std::uint64_t m);

/// Value equality where decidable: exact comparison when both sides fit the
/// cutoff, structural otherwise.
bool same_value(const ExpTerm& a, const ExpTerm& b);

/// Dedup key: decimal value when exact under the cutoff, otherwise a
/// normalised structural rendering (prefixed with '#').
std::string value_key(const ExpTerm& t);

std::uint64_t pow_mod(std::uint64_t base, u128 exponent, std::uint64_t m);

}  // namespace expramsey::tower
