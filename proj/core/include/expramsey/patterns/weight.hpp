#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "expramsey/bigint.hpp"
#include "expramsey/tower/exp_term.hpp"

namespace expramsey::patterns {

/// Weight function on finite sets of positive integers.
///
/// Entries are keyed by the sorted, duplicate-free member list; the empty
/// set is a legal key. An optional default applies to every set without an
/// explicit entry. Lookups on sets with neither throw WeightUndefined.
class WeightFn {
 public:
  using Key = std::vector<BigInt>;

  WeightFn() = default;
  static WeightFn constant(std::uint64_t w);

  void set(Key key, std::uint64_t w);
  void set_default(std::uint64_t w) { default_ = w; }
  std::optional<std::uint64_t> default_weight() const { return default_; }
  const std::map<Key, std::uint64_t>& entries() const { return table_; }

  /// W(A) as given.
  std::uint64_t operator()(const Key& set) const;

  /// W'(A) = max{W(B) : B subset of A}, taken over B in the table together
  /// with A itself. Monotone under inclusion.
  std::uint64_t normalized(const Key& set) const;

  /// W (or W') of the set of values of `members`. Members must evaluate
  /// exactly unless the table is empty and only a default is configured.
  std::uint64_t lookup(std::span<const tower::ExpTerm> members, bool normalize) const;

  /// JSON object: keys "[2,3]", "[]" and optionally "*" for the default.
  static WeightFn from_json(const std::string& text);
  std::string to_json() const;

 private:
  std::map<Key, std::uint64_t> table_;
  std::optional<std::uint64_t> default_;
};

std::string key_string(const WeightFn::Key& key);

}  // namespace expramsey::patterns
