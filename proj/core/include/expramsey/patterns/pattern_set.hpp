#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "expramsey/patterns/weight.hpp"
#include "expramsey/tower/exp_term.hpp"

namespace expramsey::patterns {

using tower::ExpTerm;

/// How an element was built from the generators x1..xm.
struct Provenance {
  /// The construction with the generators replaced by placeholders x1..xm.
  std::string recipe;
  /// 1-based generator indices used as summands, factors or bases.
  std::vector<unsigned> indices;
  /// Per entry of `indices`, the exponent vector p_1..p_m of its weighted
  /// product exponent (weighted products and FEP only).
  std::vector<std::vector<std::uint64_t>> exponents;
};

struct PatternElement {
  ExpTerm term;
  Provenance provenance;
  /// True when deduplicated by exact value, false when by structure.
  bool exact_key;
};

/// Elements deduplicated by tower::value_key, kept in insertion order.
class PatternSet {
 public:
  PatternSet(std::string family, std::vector<ExpTerm> generators)
      : family_(std::move(family)), generators_(std::move(generators)) {}

  /// Inserts unless an element with the same value key is present.
  bool insert(ExpTerm term, Provenance provenance);

  bool contains(const ExpTerm& t) const;
  bool contains(std::uint64_t v) const;
  const PatternElement* find(const ExpTerm& t) const;

  std::size_t size() const { return elements_.size(); }
  bool empty() const { return elements_.empty(); }
  const std::vector<PatternElement>& elements() const { return elements_; }
  const std::string& family() const { return family_; }
  const std::vector<ExpTerm>& generators() const { return generators_; }

  std::string to_json() const;

 private:
  std::string family_;
  std::vector<ExpTerm> generators_;
  std::vector<PatternElement> elements_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Default cap on generated elements for the weighted families.
inline constexpr std::size_t kDefaultElementCap = 1'000'000;

/// {sum_{i in I} x_i : nonempty I}. Literal generators only.
PatternSet finite_sums(const std::vector<ExpTerm>& xs);

/// {prod_{i in I} x_i : nonempty I}.
PatternSet finite_products(const std::vector<ExpTerm>& xs);

/// FE(x_m) = {x_m}; FE(x_1..x_m) = {x_i^(e_{i+1}...e_m) : i in [m],
/// e_j in FE(x_j..x_m) + {1}}.
PatternSet finite_exponentials(const std::vector<ExpTerm>& xs, std::size_t cap = kDefaultElementCap);

/// {prod_{i in S} x_i^(p_i) : 0 <= p_i <= W({x_{i+1}..x_m})}, including 1.
/// S holds 1-based indices.
PatternSet weighted_products(const std::vector<unsigned>& support, const WeightFn& w,
                             const std::vector<ExpTerm>& xs, std::size_t cap = kDefaultElementCap);

/// FEP_W: for nonempty B, prod_{i in B} x_i^(e_i) where e_i is a weighted
/// product supported on {i+1..m} minus B. W is normalised first.
PatternSet fep(const WeightFn& w, const std::vector<ExpTerm>& xs, std::size_t cap = kDefaultElementCap);

}  // namespace expramsey::patterns
