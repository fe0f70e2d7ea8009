#pragma once

#include <optional>
#include <set>
#include <string_view>
#include <utility>
#include <vector>

#include "expramsey/patterns/pattern_set.hpp"

namespace expramsey::patterns {

/// Binary relation R on [m] (1-based).
class ShapeRelation {
 public:
  using Edge = std::pair<unsigned, unsigned>;

  explicit ShapeRelation(unsigned m) : m_(m) {}
  ShapeRelation(unsigned m, std::vector<Edge> edges);

  /// "1-2,2-3,2-4"; an empty string is the empty relation.
  static ShapeRelation parse(unsigned m, std::string_view text);

  void add(unsigned i, unsigned j);
  unsigned m() const { return m_; }
  const std::set<Edge>& edges() const { return edges_; }
  std::string to_string() const;

 private:
  unsigned m_;
  std::set<Edge> edges_;
};

/// {x_1..x_m} together with x_i^(x_j) for each (i, j) in R.
PatternSet shape_pattern(const ShapeRelation& r, const std::vector<ExpTerm>& xs);

/// A directed cycle (y_1,y_2),...,(y_l,y_1) in R when one exists; a
/// self-loop (i,i) is a cycle of length one.
std::optional<std::vector<ShapeRelation::Edge>> find_directed_cycle(const ShapeRelation& r);
inline bool has_directed_cycle(const ShapeRelation& r) { return find_directed_cycle(r).has_value(); }

}  // namespace expramsey::patterns
