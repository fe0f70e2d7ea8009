#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "expramsey/patterns/shape.hpp"
#include "expramsey/patterns/weight.hpp"
#include "expramsey/tower/exp_term.hpp"

namespace expramsey::search {

using tower::ExpTerm;

/// Wall-clock deadline plus a cap on enumerated instances.
struct SearchBudget {
  std::optional<std::chrono::steady_clock::time_point> deadline;
  std::uint64_t max_instances = 2'000'000'000;

  static SearchBudget seconds(double s);
  /// Throws BudgetExceeded once the deadline has passed.
  void check_time() const;
};

/// One member of a family: the generator tuple and the element set it spans.
struct Instance {
  std::vector<std::uint64_t> generators;
  /// Deduplicated by value, in role order.
  std::vector<ExpTerm> elements;
  std::vector<std::string> roles;
};

using Visitor = std::function<bool(std::span<const std::uint64_t>)>;

/// A finite, deterministically ordered family of instances below a bound.
class Family {
 public:
  virtual ~Family() = default;

  virtual std::string descriptor() const = 0;
  virtual std::size_t arity() const = 0;

  /// Integer families keep every element a machine integer; values() works.
  virtual bool integer_valued() const { return false; }
  /// Largest element value for integer families (colour cache size).
  virtual std::uint64_t max_value(std::uint64_t bound) const { return bound; }
  /// Touches (nearly) every integer up to max_value, so a dense colour cache pays.
  virtual bool dense() const { return false; }

  /// Visits generator tuples in canonical order until visit returns false.
  virtual void for_each(std::uint64_t bound, const Visitor& visit, const SearchBudget& budget = {}) const = 0;
  /// Element values in role order (duplicates kept). Integer families only.
  virtual void values(std::span<const std::uint64_t> gens, std::vector<std::uint64_t>& out) const;
  /// Elements as terms in role order (duplicates kept).
  virtual std::vector<ExpTerm> terms(std::span<const std::uint64_t> gens) const;
  virtual std::vector<std::string> role_names(std::span<const std::uint64_t> gens) const = 0;
  /// Whether gens is a legal generator tuple of the family within bound.
  virtual bool admits(std::span<const std::uint64_t> gens, std::uint64_t bound) const = 0;

  Instance instance(std::span<const std::uint64_t> gens) const;
  std::uint64_t count(std::uint64_t bound, const SearchBudget& budget = {}) const;
};

using FamilyPtr = std::shared_ptr<const Family>;

/// {a, b, a^b} with a, b >= 2 and a^b <= bound; ordered by a^b, then a.
/// strict drops a == b. With r > 0 only pairs with log_(r) a <= b are kept.
FamilyPtr exp_triple_family(bool strict = false, unsigned logcond_r = 0);
/// {a, b, a^b, b^a}, 2 <= a <= b <= bound (generator bound); ordered by b, then a.
FamilyPtr quadruple_family();
/// {x, y, x+y}, 1 <= x <= y, x+y <= bound; ordered by x+y, then x.
FamilyPtr schur_family();
/// {x, y, x+y, a, b, a^b}, all <= bound; ordered by the largest element, then (x, y, a, b).
FamilyPtr schur_plus_exp_family();
/// The shape pattern of R over generators in [2, bound]^m; ordered by the largest generator, then lex.
FamilyPtr shape_family(patterns::ShapeRelation r);
/// FEP_W over generators in [2, bound]^m; same order as shape families.
FamilyPtr fep_family(unsigned m, patterns::WeightFn w, std::string weight_source);
/// {x, x + b_n}, 1 <= x <= bound, n <= nmax, b_n = seq(n); ordered by x + b_n, then x.
FamilyPtr difference_pair_family(const std::string& seq, unsigned nmax);

/// exptriple | exptriple-strict | exptriple-logcond[:r=R] | quadruple | schur |
/// schurplusexp | shape:M:EDGES | fep:M:W (W an integer or a weight JSON file) |
/// diffpair:seq=...,nmax=N
FamilyPtr parse_family(std::string_view spec);

/// Every (a, b) with a, b >= 2, a^b <= bound, sorted by (a^b, a).
std::vector<std::pair<std::uint64_t, std::uint64_t>> exp_pairs(std::uint64_t bound);

}  // namespace expramsey::search
