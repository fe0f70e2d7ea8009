#include "expramsey/patterns/shape.hpp"

#include <charconv>

#include "expramsey/error.hpp"

namespace expramsey::patterns {

ShapeRelation::ShapeRelation(unsigned m, std::vector<Edge> edges) : m_(m) {
  for (auto [i, j] : edges) add(i, j);
}

void ShapeRelation::add(unsigned i, unsigned j) {
  if (i < 1 || j < 1 || i > m_ || j > m_) {
    throw Error(ErrorKind::InvalidArgument,
                "edge (" + std::to_string(i) + "," + std::to_string(j) + ") outside [" + std::to_string(m_) + "]");
  }
  edges_.emplace(i, j);
}

ShapeRelation ShapeRelation::parse(unsigned m, std::string_view text) {
  ShapeRelation r(m);
  std::size_t pos = 0;
  auto number = [&](std::string_view s) {
    unsigned v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty()) {
      throw Error(ErrorKind::Parse, "bad edge index '" + std::string(s) + "'");
    }
    return v;
  };
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view item = text.substr(pos, comma - pos);
    const std::size_t dash = item.find('-');
    if (dash == std::string_view::npos) throw Error(ErrorKind::Parse, "edge must look like i-j: '" + std::string(item) + "'");
    r.add(number(item.substr(0, dash)), number(item.substr(dash + 1)));
    pos = comma + 1;
  }
  return r;
}

std::string ShapeRelation::to_string() const {
  std::string s;
  for (auto [i, j] : edges_) {
    if (!s.empty()) s += ",";
    s += std::to_string(i) + "-" + std::to_string(j);
  }
  return s;
}

PatternSet shape_pattern(const ShapeRelation& r, const std::vector<ExpTerm>& xs) {
  if (xs.size() != r.m()) {
    throw Error(ErrorKind::ArityMismatch,
                "relation on [" + std::to_string(r.m()) + "] needs " + std::to_string(r.m()) + " generators, got " +
                    std::to_string(xs.size()));
  }
  for (const auto& x : xs) {
    if (!x.has_symbol() && x.is_literal(1)) throw Error(ErrorKind::InvalidArgument, "shape: generators must be > 1");
  }
  PatternSet out("shape", xs);
  for (unsigned i = 1; i <= r.m(); ++i) out.insert(xs[i - 1], {"x" + std::to_string(i), {i}, {}});
  for (auto [i, j] : r.edges()) {
    out.insert(ExpTerm::power(xs[i - 1], xs[j - 1]),
               {"x" + std::to_string(i) + "^x" + std::to_string(j), {i, j}, {}});
  }
  return out;
}

std::optional<std::vector<ShapeRelation::Edge>> find_directed_cycle(const ShapeRelation& r) {
  const unsigned m = r.m();
  std::vector<std::vector<unsigned>> adj(m + 1);
  for (auto [i, j] : r.edges()) {
    if (i == j) return std::vector<ShapeRelation::Edge>{{i, i}};
    adj[i].push_back(j);
  }
  enum : char { White, Grey, Black };
  std::vector<char> state(m + 1, White);
  std::vector<unsigned> parent(m + 1, 0);
  for (unsigned root = 1; root <= m; ++root) {
    if (state[root] != White) continue;
    // Iterative DFS; stack holds (vertex, next child position).
    std::vector<std::pair<unsigned, std::size_t>> stack{{root, 0}};
    state[root] = Grey;
    while (!stack.empty()) {
      auto& [v, pos] = stack.back();
      if (pos == adj[v].size()) {
        state[v] = Black;
        stack.pop_back();
        continue;
      }
      const unsigned w = adj[v][pos++];
      if (state[w] == Grey) {
        // Back edge v -> w closes the cycle w -> ... -> v -> w.
        std::vector<unsigned> path{v};
        for (unsigned u = v; u != w; u = parent[u]) path.push_back(parent[u]);
        std::vector<ShapeRelation::Edge> cycle;
        for (std::size_t k = path.size(); k-- > 1;) cycle.emplace_back(path[k], path[k - 1]);
        cycle.emplace_back(v, w);
        return cycle;
      }
      if (state[w] == White) {
        state[w] = Grey;
        parent[w] = v;
        stack.emplace_back(w, 0);
      }
    }
  }
  return std::nullopt;
}

}  // namespace expramsey::patterns
