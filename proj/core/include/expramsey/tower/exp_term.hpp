#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "expramsey/bigint.hpp"

namespace expramsey::tower {

/// Symbolic numeral: a positive integer written as a literal, a power or an
/// ordered product. Terms are immutable and cheap to copy (shared nodes).
///
/// Canonical form is enforced by the factories:
///  - literals are >= 1;
///  - power(x, 1) == x and power(1, y) == 1;
///  - products are flattened, drop factors equal to 1, and merge adjacent
///    literal factors while the merged value stays under the default
///    exactness cutoff; a product of fewer than two factors collapses.
///
/// Symbol terms are named indeterminates (assumed > 1). They exist so that
/// patterns can be generated and printed over placeholder generators; value
/// functionals reject them with SymbolicUnsupported.
class ExpTerm {
 public:
  enum class Kind : std::uint8_t { Literal, Power, Product, Symbol };

  static ExpTerm literal(const BigInt& value);
  static ExpTerm literal(std::uint64_t value);
  static ExpTerm power(const ExpTerm& base, const ExpTerm& exponent);
  static ExpTerm product(std::vector<ExpTerm> factors);
  static ExpTerm product(const ExpTerm& a, const ExpTerm& b);
  static ExpTerm symbol(std::string name);

  Kind kind() const noexcept;
  bool is_literal() const noexcept { return kind() == Kind::Literal; }
  bool is_power() const noexcept { return kind() == Kind::Power; }
  bool is_product() const noexcept { return kind() == Kind::Product; }
  bool is_symbol() const noexcept { return kind() == Kind::Symbol; }

  /// Literal value. Precondition: is_literal().
  const BigInt& value() const;
  /// Literal value when it fits in 128 bits.
  std::optional<u128> small_value() const noexcept;
  bool is_literal(std::uint64_t v) const noexcept;

  const ExpTerm& base() const;
  const ExpTerm& exponent() const;
  std::span<const ExpTerm> factors() const;
  const std::string& name() const;

  /// True when a Symbol occurs anywhere in the term.
  bool has_symbol() const noexcept;
  std::size_t hash() const noexcept;

  /// Tower syntax: decimal literals, right-associative `^`, `*`, parentheses.
  std::string to_string() const;

  /// Structural equality (not value equality).
  friend bool operator==(const ExpTerm& a, const ExpTerm& b) noexcept;

 private:
  struct Node;
  explicit ExpTerm(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Parses tower syntax, e.g. `2^(3*2^5)` or `x1^x2`. Throws Error(Parse).
ExpTerm parse_term(std::string_view text);

/// Replaces every Symbol named in `names` by the matching replacement.
ExpTerm substitute(const ExpTerm& t, std::span<const std::string> names,
                   std::span<const ExpTerm> replacements);

/// The power tower 2^2^...^2 with `height` twos (height 0 is 1).
ExpTerm tower_of_twos(unsigned height);

struct ExpTermHash {
  std::size_t operator()(const ExpTerm& t) const noexcept { return t.hash(); }
};

}  // namespace expramsey::tower
