#include "expramsey/search/ramsey.hpp"

#include <algorithm>
#include <bit>
#include <random>
#include <unordered_map>

#include <json.hpp>

#include "expramsey/error.hpp"

namespace expramsey::search {

namespace {

using Edge = std::vector<int>;

// Not-all-equal colouring problem over hyperedges; edges only ever grow.
class NaeProblem {
 public:
  explicit NaeProblem(unsigned k) : k_(k) {}

  int var(std::uint64_t value) {
    auto [it, fresh] = index_.emplace(value, static_cast<int>(values_.size()));
    if (fresh) {
      values_.push_back(value);
      incident_.emplace_back();
    }
    return it->second;
  }
  void add_edge(Edge e) {
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    for (int v : e) incident_[v].push_back(static_cast<int>(edges_.size()));
    edges_.push_back(std::move(e));
  }

  unsigned k() const { return k_; }
  std::size_t vars() const { return values_.size(); }
  std::uint64_t value(int v) const { return values_[v]; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& incident(int v) const { return incident_[v]; }

  bool satisfied_by(const std::vector<int>& colour) const {
    for (const auto& e : edges_) {
      if (monochromatic(e, colour)) return false;
    }
    return true;
  }
  static bool monochromatic(const Edge& e, const std::vector<int>& colour) {
    for (int v : e) {
      if (colour[v] < 0 || colour[v] != colour[e[0]]) return false;
    }
    return true;
  }

 private:
  unsigned k_;
  std::unordered_map<std::uint64_t, int> index_;
  std::vector<std::uint64_t> values_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> incident_;
};

// Backtracking with MRV, value-symmetry breaking and NAE propagation.
class Backtracker {
 public:
  Backtracker(const NaeProblem& p, const SearchBudget& budget, std::uint64_t& nodes)
      : p_(p), budget_(budget), nodes_(nodes) {}

  std::optional<std::vector<int>> solve() {
    const std::size_t n = p_.vars();
    colour_.assign(n, -1);
    domain_.assign(n, p_.k() >= 32 ? ~0u : (1u << p_.k()) - 1);
    trail_.clear();
    if (!dfs()) return std::nullopt;
    return colour_;
  }

 private:
  struct Change {
    int var;
    std::uint32_t old_domain;
    bool assigned;
  };

  int pick() const {
    int best = -1;
    int best_size = 1 << 30;
    std::size_t best_degree = 0;
    for (std::size_t v = 0; v < colour_.size(); ++v) {
      if (colour_[v] >= 0) continue;
      const int size = std::popcount(domain_[v]);
      const std::size_t degree = p_.incident(static_cast<int>(v)).size();
      if (size < best_size || (size == best_size && degree > best_degree)) {
        best = static_cast<int>(v);
        best_size = size;
        best_degree = degree;
      }
    }
    return best;
  }

  bool assign(int v, int c, std::vector<int>& queue) {
    trail_.push_back({v, domain_[v], true});
    colour_[v] = c;
    domain_[v] = 1u << c;
    queue.push_back(v);
    return true;
  }

  // Propagates from the queued assignments; false on conflict.
  bool propagate(std::vector<int>& queue) {
    while (!queue.empty()) {
      const int v = queue.back();
      queue.pop_back();
      for (int ei : p_.incident(v)) {
        const Edge& e = p_.edges()[ei];
        int open = -1, open_count = 0;
        bool same = true;
        const int c = colour_[v];
        for (int u : e) {
          if (colour_[u] < 0) {
            open = u;
            ++open_count;
          } else if (colour_[u] != c) {
            same = false;
          }
        }
        if (!same) continue;
        if (open_count == 0) return false;
        if (open_count > 1) continue;
        if (!(domain_[open] >> c & 1u)) continue;
        trail_.push_back({open, domain_[open], false});
        domain_[open] &= ~(1u << c);
        if (domain_[open] == 0) return false;
        if (std::popcount(domain_[open]) == 1) assign(open, std::countr_zero(domain_[open]), queue);
      }
    }
    return true;
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      const Change ch = trail_.back();
      trail_.pop_back();
      domain_[ch.var] = ch.old_domain;
      if (ch.assigned) colour_[ch.var] = -1;
    }
  }

  int max_used() const {
    int m = -1;
    for (int c : colour_) m = std::max(m, c);
    return m;
  }

  bool dfs() {
    if ((++nodes_ & 0x3ff) == 0) budget_.check_time();
    const int v = pick();
    if (v < 0) return true;
    const int limit = std::min<int>(static_cast<int>(p_.k()) - 1, max_used() + 1);
    for (int c = 0; c <= limit; ++c) {
      if (!(domain_[v] >> c & 1u)) continue;
      const std::size_t mark = trail_.size();
      std::vector<int> queue;
      assign(v, c, queue);
      if (propagate(queue) && dfs()) return true;
      undo(mark);
    }
    return false;
  }

  const NaeProblem& p_;
  const SearchBudget& budget_;
  std::uint64_t& nodes_;
  std::vector<int> colour_;
  std::vector<std::uint32_t> domain_;
  std::vector<Change> trail_;
};

// Tries to colour the uncoloured variables without breaking any edge.
bool extend(const NaeProblem& p, std::vector<int>& colour, std::size_t from) {
  if (from >= colour.size()) return p.satisfied_by(colour);
  for (int c = 0; c < static_cast<int>(p.k()); ++c) {
    colour[from] = c;
    bool ok = true;
    for (int ei : p.incident(static_cast<int>(from))) {
      if (NaeProblem::monochromatic(p.edges()[ei], colour)) {
        ok = false;
        break;
      }
    }
    if (ok && extend(p, colour, from + 1)) return true;
  }
  colour[from] = -1;
  return false;
}

// Seeded random-restart local search over hyperedges given as value sets.
struct LocalSearchResult {
  bool found = false;
  std::vector<int> colour;  // indexed like `vars`
  std::uint64_t restarts = 0;
  std::uint64_t flips = 0;
};

LocalSearchResult local_search(const std::vector<std::vector<std::uint64_t>>& sets, unsigned k,
                               const RamseyOptions& opt) {
  std::vector<std::uint64_t> vars;
  for (const auto& s : sets) vars.insert(vars.end(), s.begin(), s.end());
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  auto id = [&](std::uint64_t v) {
    return static_cast<int>(std::lower_bound(vars.begin(), vars.end(), v) - vars.begin());
  };
  std::vector<Edge> edges;
  std::vector<std::vector<int>> incident(vars.size());
  for (const auto& s : sets) {
    Edge e;
    for (auto v : s) e.push_back(id(v));
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    for (int v : e) incident[v].push_back(static_cast<int>(edges.size()));
    edges.push_back(std::move(e));
  }

  LocalSearchResult out;
  std::mt19937_64 rng(opt.seed);
  std::vector<int> colour(vars.size());
  auto mono = [&](const Edge& e) {
    for (int v : e) {
      if (colour[v] != colour[e[0]]) return false;
    }
    return true;
  };
  for (unsigned restart = 0; restart < opt.max_restarts; ++restart) {
    ++out.restarts;
    for (auto& c : colour) c = static_cast<int>(rng() % k);
    std::vector<int> bad;  // violated edges
    std::vector<int> where(edges.size(), -1);
    auto mark = [&](int ei) {
      const bool m = mono(edges[ei]);
      if (m && where[ei] < 0) {
        where[ei] = static_cast<int>(bad.size());
        bad.push_back(ei);
      } else if (!m && where[ei] >= 0) {
        const int last = bad.back();
        bad[where[ei]] = last;
        where[last] = where[ei];
        bad.pop_back();
        where[ei] = -1;
      }
    };
    for (int ei = 0; ei < static_cast<int>(edges.size()); ++ei) mark(ei);
    for (std::uint64_t flip = 0; flip < opt.max_flips; ++flip) {
      if (bad.empty()) {
        out.found = true;
        out.colour = colour;
        return out;
      }
      if ((flip & 0xfff) == 0) opt.budget.check_time();
      ++out.flips;
      const Edge& e = edges[bad[rng() % bad.size()]];
      int best_v = e[rng() % e.size()];
      int best_c = static_cast<int>(rng() % k);
      if (rng() % 10 >= 3) {
        // Greedy move: the recolouring inside this edge that leaves the fewest violations.
        long best_score = 1L << 40;
        for (int v : e) {
          const int old = colour[v];
          for (int c = 0; c < static_cast<int>(k); ++c) {
            if (c == old) continue;
            colour[v] = c;
            long score = 0;
            for (int ei : incident[v]) score += mono(edges[ei]);
            colour[v] = old;
            if (score < best_score) {
              best_score = score;
              best_v = v;
              best_c = c;
            }
          }
        }
      }
      colour[best_v] = best_c;
      for (int ei : incident[best_v]) mark(ei);
    }
  }
  return out;
}

std::vector<unsigned> dense_colouring(const NaeProblem& p, const std::vector<int>& colour, std::uint64_t n) {
  std::vector<unsigned> out(n, 1);
  for (std::size_t v = 0; v < colour.size(); ++v) {
    const std::uint64_t x = p.value(static_cast<int>(v));
    if (x <= n && colour[v] >= 0) out[x - 1] = colour[v] + 1;
  }
  return out;
}

std::uint64_t pow_u64(std::uint64_t a, std::uint64_t b) {
  std::uint64_t v = 1;
  for (std::uint64_t i = 0; i < b; ++i) v *= a;
  return v;
}

// Exponential triples inside [n] as value sets, by a direct double loop.
std::vector<std::vector<std::uint64_t>> exp_triple_sets(std::uint64_t n) {
  std::vector<std::vector<std::uint64_t>> out;
  for (std::uint64_t b = 2; b < 64; ++b) {
    for (std::uint64_t a = 2;; ++a) {
      u128 v = 1;
      for (std::uint64_t i = 0; i < b && v <= n; ++i) v *= a;
      if (v > n) break;
      out.push_back({a, b, static_cast<std::uint64_t>(v)});
    }
  }
  return out;
}

std::vector<std::vector<std::uint64_t>> progression_sets(std::uint64_t n, unsigned length) {
  std::vector<std::vector<std::uint64_t>> out;
  for (std::uint64_t s = 1; s <= n; ++s) {
    for (std::uint64_t d = 1; s + (length - 1) * d <= n; ++d) {
      std::vector<std::uint64_t> ap;
      for (unsigned i = 0; i < length; ++i) ap.push_back(s + i * d);
      out.push_back(std::move(ap));
    }
  }
  return out;
}

void cross_check(RamseyComputation& r, const std::vector<std::vector<std::uint64_t>>& sets,
                 const RamseyOptions& opt, bool (*avoids)(std::span<const unsigned>, unsigned), unsigned length) {
  r.cross_check.method = "random-restart local search";
  r.cross_check.ran = true;
  const std::uint64_t n = r.witness.size();
  LocalSearchResult ls = local_search(sets, r.k, opt);
  r.cross_check.restarts = ls.restarts;
  r.cross_check.flips = ls.flips;
  if (!ls.found) return;
  std::vector<std::uint64_t> vars;
  for (const auto& s : sets) vars.insert(vars.end(), s.begin(), s.end());
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  std::vector<unsigned> dense(n, 1);
  for (std::size_t i = 0; i < vars.size(); ++i) dense[vars[i] - 1] = ls.colour[i] + 1;
  r.cross_check.agreed = avoids(dense, length);
}

bool avoids_exp_adapter(std::span<const unsigned> c, unsigned) { return avoids_exp_triples(c); }

}  // namespace

RamseyComputation exp_ramsey_number(unsigned k, std::uint64_t n_max, const RamseyOptions& options) {
  if (k < 1 || k > 32) throw Error(ErrorKind::InvalidArgument, "exp_ramsey_number: k must be in 1..32");
  RamseyComputation r;
  r.kind = "exptriple";
  r.k = k;
  r.n_max = n_max;
  r.seed = options.seed;

  NaeProblem p(k);
  std::vector<int> colour;  // current instance-free colouring of the relevant values
  const auto pairs = exp_pairs(n_max);
  std::size_t i = 0;
  std::uint64_t last_free = n_max;
  while (i < pairs.size()) {
    options.budget.check_time();
    const std::uint64_t top = pow_u64(pairs[i].first, pairs[i].second);
    const std::size_t before = p.vars();
    for (; i < pairs.size() && pow_u64(pairs[i].first, pairs[i].second) == top; ++i) {
      const auto [a, b] = pairs[i];
      p.add_edge({p.var(a), p.var(b), p.var(top)});
    }
    colour.resize(p.vars(), -1);
    if (extend(p, colour, before)) continue;
    Backtracker bt(p, options.budget, r.backtrack_nodes);
    if (auto sol = bt.solve()) {
      colour = *sol;
      continue;
    }
    r.exact = true;
    r.value = top;
    last_free = top - 1;
    colour.resize(before);
    break;
  }
  r.relevant_values = p.vars();
  r.constraints = p.edges().size();
  if (!r.exact) r.value = n_max;

  // Colouring of [last_free]; values that only enter at `value` are dropped.
  r.witness = dense_colouring(p, colour, last_free);
  if (!avoids_exp_triples(r.witness)) throw std::logic_error("backtracking witness contains a triple");
  cross_check(r, exp_triple_sets(last_free), options, avoids_exp_adapter, 0);
  return r;
}

RamseyComputation vdw_number(unsigned k, unsigned length, std::uint64_t n_max, const RamseyOptions& options) {
  if (k < 1 || k > 32) throw Error(ErrorKind::InvalidArgument, "vdw_number: k must be in 1..32");
  if (length < 1) throw Error(ErrorKind::InvalidArgument, "vdw_number: length must be >= 1");
  RamseyComputation r;
  r.kind = "vdw";
  r.k = k;
  r.length = length;
  r.n_max = n_max;
  r.seed = options.seed;

  NaeProblem p(k);
  std::vector<int> colour;
  std::uint64_t last_free = n_max;
  for (std::uint64_t n = 1; n <= n_max; ++n) {
    options.budget.check_time();
    const std::size_t before = p.vars();
    p.var(n);
    // Progressions ending at n.
    for (std::uint64_t d = 1; length >= 2 && (length - 1) * d < n; ++d) {
      Edge e;
      for (unsigned j = 0; j < length; ++j) e.push_back(p.var(n - j * d));
      p.add_edge(std::move(e));
    }
    if (length == 1) p.add_edge({p.var(n)});
    colour.resize(p.vars(), -1);
    if (extend(p, colour, before)) continue;
    Backtracker bt(p, options.budget, r.backtrack_nodes);
    if (auto sol = bt.solve()) {
      colour = *sol;
      continue;
    }
    r.exact = true;
    r.value = n;
    last_free = n - 1;
    colour.resize(before);
    break;
  }
  r.relevant_values = p.vars();
  r.constraints = p.edges().size();
  if (!r.exact) r.value = n_max;
  r.witness = dense_colouring(p, colour, last_free);
  if (!avoids_progressions(r.witness, length)) throw std::logic_error("backtracking witness contains a progression");
  cross_check(r, progression_sets(last_free, length), options, avoids_progressions, length);
  return r;
}

bool avoids_exp_triples(std::span<const unsigned> c) {
  const std::uint64_t n = c.size();
  for (std::uint64_t b = 2; b < 64 && b <= n; ++b) {
    for (std::uint64_t a = 2;; ++a) {
      u128 v = 1;
      for (std::uint64_t i = 0; i < b && v <= n; ++i) v *= a;
      if (v > n) break;
      if (c[a - 1] == c[b - 1] && c[a - 1] == c[static_cast<std::uint64_t>(v) - 1]) return false;
    }
  }
  return true;
}

bool avoids_progressions(std::span<const unsigned> c, unsigned length) {
  const std::uint64_t n = c.size();
  if (length <= 1) return n == 0;
  for (std::uint64_t s = 1; s <= n; ++s) {
    for (std::uint64_t d = 1; s + (length - 1) * d <= n; ++d) {
      bool mono = true;
      for (unsigned j = 1; j < length && mono; ++j) mono = c[s + j * d - 1] == c[s - 1];
      if (mono) return false;
    }
  }
  return true;
}

std::string exp_triple_dimacs(unsigned k, std::uint64_t n) {
  const auto sets = exp_triple_sets(n);
  std::vector<std::uint64_t> vals;
  for (const auto& s : sets) vals.insert(vals.end(), s.begin(), s.end());
  std::sort(vals.begin(), vals.end());
  vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
  auto var = [&](std::uint64_t v, unsigned c) {
    return (std::lower_bound(vals.begin(), vals.end(), v) - vals.begin()) * k + c + 1;
  };
  std::vector<std::string> clauses;
  for (auto v : vals) {
    std::string cl;
    for (unsigned c = 0; c < k; ++c) cl += std::to_string(var(v, c)) + " ";
    clauses.push_back(cl + "0");
  }
  for (const auto& s : sets) {
    std::vector<std::uint64_t> e = s;
    std::sort(e.begin(), e.end());
    e.erase(std::unique(e.begin(), e.end()), e.end());
    for (unsigned c = 0; c < k; ++c) {
      std::string cl;
      for (auto v : e) cl += "-" + std::to_string(var(v, c)) + " ";
      clauses.push_back(cl + "0");
    }
  }
  std::string out = "c exponential triples {a, b, a^b} inside [" + std::to_string(n) + "], " + std::to_string(k) +
                    " colours\n";
  for (std::size_t i = 0; i < vals.size(); ++i) {
    out += "c var " + std::to_string(i * k + 1) + ".." + std::to_string(i * k + k) + " = " + std::to_string(vals[i]) +
           "\n";
  }
  out += "p cnf " + std::to_string(vals.size() * k) + " " + std::to_string(clauses.size()) + "\n";
  for (const auto& cl : clauses) out += cl + "\n";
  return out;
}

std::optional<GridWitness> find_monochromatic_grid(std::span<const unsigned> colours, std::uint64_t N, unsigned n,
                                                   unsigned length, const SearchBudget& budget) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "grid dimension must be >= 1");
  long double cells = 1;
  for (unsigned i = 0; i < n; ++i) cells *= static_cast<long double>(N);
  if (cells > 1e8L) throw Error(ErrorKind::BudgetExceeded, "grid too large");
  if (colours.size() != static_cast<std::size_t>(cells)) {
    throw Error(ErrorKind::InvalidArgument, "expected N^n colours");
  }
  auto index = [&](const std::vector<std::uint64_t>& p) {
    std::uint64_t idx = 0, scale = 1;
    for (unsigned i = 0; i < n; ++i) {
      idx += (p[i] - 1) * scale;
      scale *= N;
    }
    return idx;
  };
  std::uint64_t work = 0;
  for (std::uint64_t d = 1; length == 0 ? d == 1 : length * d < N; ++d) {
    const std::uint64_t top = N - length * d;  // largest corner coordinate
    std::vector<std::uint64_t> s(n, 1);
    while (true) {
      if ((++work & 0xfff) == 0) budget.check_time();
      const unsigned c = colours[index(s)];
      bool mono = true;
      std::vector<unsigned> off(n, 0);
      std::vector<std::uint64_t> p(n);
      while (mono) {
        for (unsigned i = 0; i < n; ++i) p[i] = s[i] + off[i] * d;
        mono = colours[index(p)] == c;
        unsigned i = n;
        while (i > 0 && off[i - 1] == length) off[--i] = 0;
        if (i == 0) break;
        ++off[i - 1];
      }
      if (mono) return GridWitness{s, d, c};
      unsigned i = n;
      while (i > 0 && s[i - 1] == top) s[--i] = 1;
      if (i == 0) break;
      ++s[i - 1];
    }
  }
  return std::nullopt;
}

namespace {

bool fu_dfs(std::span<const unsigned> colours, unsigned N, unsigned m, unsigned start, unsigned colour,
            std::vector<std::uint32_t>& unions, std::vector<std::uint32_t>& blocks, const SearchBudget& budget,
            std::uint64_t& work) {
  if (blocks.size() == m) return true;
  if (start >= N) return false;
  const std::uint32_t span_count = 1u << (N - start);
  for (std::uint32_t sub = 1; sub < span_count; ++sub) {
    if ((++work & 0xfff) == 0) budget.check_time();
    const std::uint32_t a = sub << start;
    const unsigned c = colour ? colour : colours[a];
    if (colours[a] != c) continue;
    bool ok = true;
    for (auto u : unions) {
      if (colours[u | a] != c) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    const std::size_t old = unions.size();
    for (std::size_t i = 0; i < old; ++i) unions.push_back(unions[i] | a);
    unions.push_back(a);
    blocks.push_back(a);
    const unsigned next = 32 - static_cast<unsigned>(std::countl_zero(a));
    if (fu_dfs(colours, N, m, next, c, unions, blocks, budget, work)) return true;
    blocks.pop_back();
    unions.resize(old);
  }
  return false;
}

}  // namespace

std::optional<FuWitness> ordered_fu_search(std::span<const unsigned> colours, unsigned N, unsigned m,
                                           const SearchBudget& budget) {
  if (N > 20) throw Error(ErrorKind::BudgetExceeded, "ordered_fu_search supports N <= 20");
  if (colours.size() != (std::size_t{1} << N)) throw Error(ErrorKind::InvalidArgument, "expected 2^N colours");
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "need m >= 1");
  std::vector<std::uint32_t> unions, blocks;
  std::uint64_t work = 0;
  if (!fu_dfs(colours, N, m, 0, 0, unions, blocks, budget, work)) return std::nullopt;
  return FuWitness{blocks, colours[blocks[0]]};
}

std::string RamseyComputation::to_json() const {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["kind"] = "ramsey";
  j["family"] = kind;
  j["k"] = k;
  if (kind == "vdw") j["length"] = length;
  j["n_max"] = n_max;
  j["status"] = exact ? "exact" : "exceeds_budget";
  if (exact) {
    j["value"] = value;
  } else {
    j["value"] = nullptr;
  }
  j["relevant_values"] = relevant_values;
  j["constraints"] = constraints;
  j["backtrack_nodes"] = backtrack_nodes;
  nlohmann::ordered_json cc;
  cc["method"] = cross_check.method;
  cc["ran"] = cross_check.ran;
  cc["agreed"] = cross_check.agreed;
  cc["restarts"] = cross_check.restarts;
  cc["flips"] = cross_check.flips;
  j["cross_check"] = cc;
  j["seed"] = seed;
  nlohmann::ordered_json w;
  w["n"] = witness.size();
  w["colouring"] = witness;
  j["witness"] = w;
  return j.dump(2) + "\n";
}

}  // namespace expramsey::search
