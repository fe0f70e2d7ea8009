#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "expramsey/bigint.hpp"
#include "expramsey/tower/eval.hpp"
#include "expramsey/tower/exp_term.hpp"

namespace expramsey::tower {

/// Prime factorisation as (prime, exponent) pairs in increasing prime order.
using Factorization = std::vector<std::pair<BigInt, BigInt>>;
using SmallFactorization = std::vector<std::pair<std::uint64_t, unsigned>>;

bool is_prime_u64(std::uint64_t n);
SmallFactorization factorize_u64(std::uint64_t n);
std::uint64_t totient(std::uint64_t n);

/// Trial division up to the budget's limit, then Pollard-Brent rho with an
/// iteration cap. Throws FactorizationBudgetExceeded rather than returning a
/// partial answer.
Factorization factorize(const BigInt& n, const FactorBudget& budget = default_config().factor);

/// l(x): the largest b with x = a^b, i.e. the gcd of the prime exponents;
/// l(1) = 0. Uses l(a^b) = l(a)*b for powers.
BigInt max_root_exponent(const ExpTerm& t);
std::uint64_t max_root_exponent_mod(const ExpTerm& t, std::uint64_t n);

/// The p-adic valuation as a term (nullopt means 0). For powers
/// v_p(a^b) = v_p(a) * b stays symbolic, so v_p(2^(2^k)) is the term 2^k.
std::optional<ExpTerm> valuation_term(const ExpTerm& t, std::uint64_t p);
/// Exact valuation; ExactnessRequired when it exceeds the cutoff.
BigInt nu_p(const ExpTerm& t, std::uint64_t p);
std::uint64_t nu_p_mod(const ExpTerm& t, std::uint64_t p, std::uint64_t n);

}  // namespace expramsey::tower
