#include "expramsey/search/family.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "expramsey/colourings/lacunary.hpp"
#include "expramsey/error.hpp"
#include "expramsey/patterns/pattern_set.hpp"
#include "expramsey/tower/eval.hpp"
#include "expramsey/tower/log_star.hpp"

namespace expramsey::search {

namespace {

constexpr std::uint64_t kMaxExpPairs = 50'000'000;

ExpTerm lit(std::uint64_t v) { return ExpTerm::literal(v); }

// a^b if it is <= bound.
std::optional<std::uint64_t> pow_within(std::uint64_t a, std::uint64_t b, std::uint64_t bound) {
  u128 v = 1;
  for (std::uint64_t i = 0; i < b; ++i) {
    v *= a;
    if (v > bound) return std::nullopt;
  }
  return static_cast<std::uint64_t>(v);
}

unsigned parse_unsigned(std::string_view s, const std::string& what) {
  unsigned v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size()) {
    throw Error(ErrorKind::Parse, what + ": expected an integer, got '" + std::string(s) + "'");
  }
  return v;
}

// Tuples in [2, bound]^m ordered by their largest entry, then lexicographically.
void for_each_tuple(unsigned m, std::uint64_t bound, const Visitor& visit, const SearchBudget& budget) {
  std::vector<std::uint64_t> t(m);
  std::uint64_t seen = 0;
  for (std::uint64_t top = 2; top <= bound; ++top) {
    std::fill(t.begin(), t.end(), 2);
    while (true) {
      if (std::find(t.begin(), t.end(), top) != t.end()) {
        if (++seen > budget.max_instances) throw Error(ErrorKind::BudgetExceeded, "instance cap reached");
        if ((seen & 0xfff) == 0) budget.check_time();
        if (!visit(t)) return;
      }
      std::size_t p = m;
      while (p > 0 && t[p - 1] == top) t[--p] = 2;
      if (p == 0) break;
      ++t[p - 1];
    }
  }
}

class ExpTripleFamily final : public Family {
 public:
  ExpTripleFamily(bool strict, unsigned r) : strict_(strict), r_(r) {}
  std::string descriptor() const override {
    if (r_ > 0) return r_ == 1 ? "exptriple-logcond" : "exptriple-logcond:r=" + std::to_string(r_);
    return strict_ ? "exptriple-strict" : "exptriple";
  }
  std::size_t arity() const override { return 2; }
  bool integer_valued() const override { return true; }
  void for_each(std::uint64_t bound, const Visitor& visit, const SearchBudget& budget) const override {
    std::uint64_t seen = 0;
    for (auto [a, b] : exp_pairs(bound)) {
      if (!keep(a, b)) continue;
      if (++seen > budget.max_instances) throw Error(ErrorKind::BudgetExceeded, "instance cap reached");
      const std::uint64_t g[2] = {a, b};
      if (!visit(g)) return;
    }
  }
  void values(std::span<const std::uint64_t> g, std::vector<std::uint64_t>& out) const override {
    out.assign({g[0], g[1], *pow_within(g[0], g[1], ~std::uint64_t{0})});
  }
  std::vector<std::string> role_names(std::span<const std::uint64_t>) const override { return {"a", "b", "a^b"}; }
  bool admits(std::span<const std::uint64_t> g, std::uint64_t bound) const override {
    return g.size() == 2 && g[0] >= 2 && g[1] >= 2 && pow_within(g[0], g[1], bound) && keep(g[0], g[1]);
  }

 private:
  bool keep(std::uint64_t a, std::uint64_t b) const {
    if (strict_ && a == b) return false;
    return r_ == 0 || tower::compare_iter_log(lit(a), r_, lit(b));
  }
  bool strict_;
  unsigned r_;
};

class QuadrupleFamily final : public Family {
 public:
  std::string descriptor() const override { return "quadruple"; }
  std::size_t arity() const override { return 2; }
  void for_each(std::uint64_t bound, const Visitor& visit, const SearchBudget& budget) const override {
    std::uint64_t seen = 0;
    for (std::uint64_t b = 2; b <= bound; ++b) {
      budget.check_time();
      for (std::uint64_t a = 2; a <= b; ++a) {
        if (++seen > budget.max_instances) throw Error(ErrorKind::BudgetExceeded, "instance cap reached");
        const std::uint64_t g[2] = {a, b};
        if (!visit(g)) return;
      }
    }
  }
  std::vector<ExpTerm> terms(std::span<const std::uint64_t> g) const override {
    return {lit(g[0]), lit(g[1]), ExpTerm::power(lit(g[0]), lit(g[1])), ExpTerm::power(lit(g[1]), lit(g[0]))};
  }
  std::vector<std::string> role_names(std::span<const std::uint64_t>) const override {
    return {"a", "b", "a^b", "b^a"};
  }
  bool admits(std::span<const std::uint64_t> g, std::uint64_t bound) const override {
    return g.size() == 2 && g[0] >= 2 && g[0] <= g[1] && g[1] <= bound;
  }
};

class SchurFamily final : public Family {
 public:
  std::string descriptor() const override { return "schur"; }
  std::size_t arity() const override { return 2; }
  bool integer_valued() const override { return true; }
  bool dense() const override { return true; }
  void for_each(std::uint64_t bound, const Visitor& visit, const SearchBudget& budget) const override {
    std::uint64_t seen = 0;
    for (std::uint64_t s = 2; s <= bound; ++s) {
      if ((s & 0xff) == 0) budget.check_time();
      for (std::uint64_t x = 1; 2 * x <= s; ++x) {
        if (++seen > budget.max_instances) throw Error(ErrorKind::BudgetExceeded, "instance cap reached");
        const std::uint64_t g[2] = {x, s - x};
        if (!visit(g)) return;
      }
    }
  }
  void values(std::span<const std::uint64_t> g, std::vector<std::uint64_t>& out) const override {
    out.assign({g[0], g[1], g[0] + g[1]});
  }
  std::vector<std::string> role_names(std::span<const std::uint64_t>) const override { return {"x", "y", "x+y"}; }
  bool admits(std::span<const std::uint64_t> g, std::uint64_t bound) const override {
    return g.size() == 2 && g[0] >= 1 && g[0] <= g[1] && g[1] <= bound && g[0] + g[1] <= bound;
  }
};

class SchurPlusExpFamily final : public Family {
 public:
  std::string descriptor() const override { return "schurplusexp"; }
  std::size_t arity() const override { return 4; }
  bool integer_valued() const override { return true; }
  bool dense() const override { return true; }
  void for_each(std::uint64_t bound, const Visitor& visit, const SearchBudget& budget) const override {
    // Schur triples by sum, exponential pairs by value; instances with largest
    // element M pair one side at M with the other side at most M.
    std::vector<std::pair<std::uint64_t, std::uint64_t>> schur;
    for (std::uint64_t s = 2; s <= bound; ++s) {
      for (std::uint64_t x = 1; 2 * x <= s; ++x) schur.emplace_back(x, s - x);
    }
    const auto exps = exp_pairs(bound);
    auto sum = [](auto& p) { return p.first + p.second; };
    auto val = [](auto& p) { return *pow_within(p.first, p.second, ~std::uint64_t{0}); };
    std::uint64_t seen = 0;
    std::size_t si = 0, ei = 0;
    std::vector<std::array<std::uint64_t, 4>> batch;
    for (std::uint64_t top = 2; top <= bound; ++top) {
      budget.check_time();
      std::size_t s_end = si, e_end = ei;
      while (s_end < schur.size() && sum(schur[s_end]) == top) ++s_end;
      while (e_end < exps.size() && val(exps[e_end]) == top) ++e_end;
      batch.clear();
      for (std::size_t i = 0; i < s_end; ++i) {
        for (std::size_t j = 0; j < e_end; ++j) {
          if (i < si && j < ei) continue;
          batch.push_back({schur[i].first, schur[i].second, exps[j].first, exps[j].second});
        }
      }
      std::sort(batch.begin(), batch.end());
      for (const auto& g : batch) {
        if (++seen > budget.max_instances) throw Error(ErrorKind::BudgetExceeded, "instance cap reached");
        if (!visit(g)) return;
      }
      si = s_end;
      ei = e_end;
    }
  }
  void values(std::span<const std::uint64_t> g, std::vector<std::uint64_t>& out) const override {
    out.assign({g[0], g[1], g[0] + g[1], g[2], g[3], *pow_within(g[2], g[3], ~std::uint64_t{0})});
  }
  std::vector<std::string> role_names(std::span<const std::uint64_t>) const override {
    return {"x", "y", "x+y", "a", "b", "a^b"};
  }
  bool admits(std::span<const std::uint64_t> g, std::uint64_t bound) const override {
    return g.size() == 4 && g[0] >= 1 && g[0] <= g[1] && g[0] + g[1] <= bound && g[2] >= 2 && g[3] >= 2 &&
           pow_within(g[2], g[3], bound);
  }
};

class ShapeFamily final : public Family {
 public:
  explicit ShapeFamily(patterns::ShapeRelation r) : r_(std::move(r)) {}
  std::string descriptor() const override { return "shape:" + std::to_string(r_.m()) + ":" + r_.to_string(); }
  std::size_t arity() const override { return r_.m(); }
  void for_each(std::uint64_t bound, const Visitor& visit, const SearchBudget& budget) const override {
    for_each_tuple(r_.m(), bound, visit, budget);
  }
  std::vector<ExpTerm> terms(std::span<const std::uint64_t> g) const override {
    std::vector<ExpTerm> out;
    const auto set = patterns::shape_pattern(r_, generators(g));
    for (const auto& e : set.elements()) out.push_back(e.term);
    return out;
  }
  std::vector<std::string> role_names(std::span<const std::uint64_t> g) const override {
    std::vector<std::string> out;
    const auto set = patterns::shape_pattern(r_, generators(g));
    for (const auto& e : set.elements()) out.push_back(e.provenance.recipe);
    return out;
  }
  bool admits(std::span<const std::uint64_t> g, std::uint64_t bound) const override {
    return g.size() == r_.m() && std::all_of(g.begin(), g.end(), [&](auto x) { return x >= 2 && x <= bound; });
  }

 private:
  static std::vector<ExpTerm> generators(std::span<const std::uint64_t> g) {
    std::vector<ExpTerm> xs;
    for (auto x : g) xs.push_back(lit(x));
    return xs;
  }
  patterns::ShapeRelation r_;
};

class FepFamily final : public Family {
 public:
  FepFamily(unsigned m, patterns::WeightFn w, std::string source) : m_(m), w_(std::move(w)), source_(std::move(source)) {}
  std::string descriptor() const override { return "fep:" + std::to_string(m_) + ":" + source_; }
  std::size_t arity() const override { return m_; }
  void for_each(std::uint64_t bound, const Visitor& visit, const SearchBudget& budget) const override {
    for_each_tuple(m_, bound, visit, budget);
  }
  std::vector<ExpTerm> terms(std::span<const std::uint64_t> g) const override {
    std::vector<ExpTerm> out;
    const auto set = build(g);
    for (const auto& e : set.elements()) out.push_back(e.term);
    return out;
  }
  std::vector<std::string> role_names(std::span<const std::uint64_t> g) const override {
    std::vector<std::string> out;
    const auto set = build(g);
    for (const auto& e : set.elements()) out.push_back(e.provenance.recipe);
    return out;
  }
  bool admits(std::span<const std::uint64_t> g, std::uint64_t bound) const override {
    return g.size() == m_ && std::all_of(g.begin(), g.end(), [&](auto x) { return x >= 2 && x <= bound; });
  }

 private:
  patterns::PatternSet build(std::span<const std::uint64_t> g) const {
    std::vector<ExpTerm> xs;
    for (auto x : g) xs.push_back(lit(x));
    return patterns::fep(w_, xs);
  }
  unsigned m_;
  patterns::WeightFn w_;
  std::string source_;
};

class DifferencePairFamily final : public Family {
 public:
  DifferencePairFamily(const std::string& seq, unsigned nmax)
      : descriptor_("diffpair:seq=" + tower::parse_term(seq).to_string() + ",nmax=" + std::to_string(nmax)) {
    for (const auto& b : colourings::sequence_terms(seq, nmax)) {
      auto v = to_u64(numerator(b));
      if (!v || *v > (std::uint64_t{1} << 40)) throw Error(ErrorKind::BudgetExceeded, "difference too large");
      if (*v == 0) throw Error(ErrorKind::InvalidArgument, "differences must be positive");
      terms_.push_back(*v);
    }
  }
  std::string descriptor() const override { return descriptor_; }
  std::size_t arity() const override { return 2; }
  bool integer_valued() const override { return true; }
  bool dense() const override { return true; }
  std::uint64_t max_value(std::uint64_t bound) const override {
    return bound + *std::max_element(terms_.begin(), terms_.end());
  }
  // Generators are (x, n) with n 1-based.
  void for_each(std::uint64_t bound, const Visitor& visit, const SearchBudget& budget) const override {
    std::vector<unsigned> by_size(terms_.size());
    for (unsigned i = 0; i < by_size.size(); ++i) by_size[i] = i;
    // Largest difference first gives the smallest x for a fixed top.
    std::stable_sort(by_size.begin(), by_size.end(), [&](unsigned i, unsigned j) { return terms_[i] > terms_[j]; });
    std::uint64_t seen = 0;
    const std::uint64_t top_max = max_value(bound);
    for (std::uint64_t top = 2; top <= top_max; ++top) {
      if ((top & 0xfff) == 0) budget.check_time();
      std::uint64_t last_x = 0;
      for (unsigned i : by_size) {
        if (terms_[i] >= top) continue;
        const std::uint64_t x = top - terms_[i];
        if (x > bound || x == last_x) continue;  // equal terms give the same pair
        last_x = x;
        if (++seen > budget.max_instances) throw Error(ErrorKind::BudgetExceeded, "instance cap reached");
        const std::uint64_t g[2] = {x, i + 1};
        if (!visit(g)) return;
      }
    }
  }
  void values(std::span<const std::uint64_t> g, std::vector<std::uint64_t>& out) const override {
    out.assign({g[0], g[0] + terms_[g[1] - 1]});
  }
  std::vector<std::string> role_names(std::span<const std::uint64_t> g) const override {
    return {"x", "x+b_" + std::to_string(g[1])};
  }
  bool admits(std::span<const std::uint64_t> g, std::uint64_t bound) const override {
    return g.size() == 2 && g[0] >= 1 && g[0] <= bound && g[1] >= 1 && g[1] <= terms_.size();
  }

 private:
  std::string descriptor_;
  std::vector<std::uint64_t> terms_;
};

}  // namespace

SearchBudget SearchBudget::seconds(double s) {
  SearchBudget b;
  b.deadline = std::chrono::steady_clock::now() +
               std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(s));
  return b;
}

void SearchBudget::check_time() const {
  if (deadline && std::chrono::steady_clock::now() > *deadline) {
    throw Error(ErrorKind::BudgetExceeded, "time budget exhausted");
  }
}

void Family::values(std::span<const std::uint64_t>, std::vector<std::uint64_t>&) const {
  throw Error(ErrorKind::InvalidArgument, descriptor() + " is not an integer family");
}

std::vector<ExpTerm> Family::terms(std::span<const std::uint64_t> gens) const {
  std::vector<std::uint64_t> v;
  values(gens, v);
  std::vector<ExpTerm> out;
  for (auto x : v) out.push_back(lit(x));
  return out;
}

Instance Family::instance(std::span<const std::uint64_t> gens) const {
  Instance out;
  out.generators.assign(gens.begin(), gens.end());
  const auto ts = terms(gens);
  const auto rs = role_names(gens);
  std::vector<std::string> keys;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    std::string key = tower::value_key(ts[i]);
    if (std::find(keys.begin(), keys.end(), key) != keys.end()) continue;
    keys.push_back(std::move(key));
    out.elements.push_back(ts[i]);
    out.roles.push_back(rs[i]);
  }
  return out;
}

std::uint64_t Family::count(std::uint64_t bound, const SearchBudget& budget) const {
  std::uint64_t n = 0;
  for_each(bound, [&](std::span<const std::uint64_t>) { return ++n, true; }, budget);
  return n;
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> exp_pairs(std::uint64_t bound) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  if (bound < 4) return out;
  if (static_cast<long double>(std::sqrt(static_cast<long double>(bound))) > kMaxExpPairs) {
    throw Error(ErrorKind::BudgetExceeded, "too many exponential pairs below " + std::to_string(bound));
  }
  std::vector<std::uint64_t> vals;
  for (std::uint64_t b = 2; b < 64; ++b) {
    for (std::uint64_t a = 2;; ++a) {
      auto v = pow_within(a, b, bound);
      if (!v) break;
      out.emplace_back(a, b);
    }
  }
  std::sort(out.begin(), out.end(), [](auto& p, auto& q) {
    const std::uint64_t vp = *pow_within(p.first, p.second, ~std::uint64_t{0});
    const std::uint64_t vq = *pow_within(q.first, q.second, ~std::uint64_t{0});
    return vp != vq ? vp < vq : p.first < q.first;
  });
  return out;
}

FamilyPtr exp_triple_family(bool strict, unsigned logcond_r) {
  return std::make_shared<ExpTripleFamily>(strict, logcond_r);
}
FamilyPtr quadruple_family() { return std::make_shared<QuadrupleFamily>(); }
FamilyPtr schur_family() { return std::make_shared<SchurFamily>(); }
FamilyPtr schur_plus_exp_family() { return std::make_shared<SchurPlusExpFamily>(); }
FamilyPtr shape_family(patterns::ShapeRelation r) { return std::make_shared<ShapeFamily>(std::move(r)); }
FamilyPtr fep_family(unsigned m, patterns::WeightFn w, std::string weight_source) {
  if (m < 1) throw Error(ErrorKind::InvalidArgument, "fep family needs m >= 1");
  return std::make_shared<FepFamily>(m, std::move(w), std::move(weight_source));
}
FamilyPtr difference_pair_family(const std::string& seq, unsigned nmax) {
  if (nmax < 1) throw Error(ErrorKind::InvalidArgument, "diffpair: nmax must be >= 1");
  return std::make_shared<DifferencePairFamily>(seq, nmax);
}

FamilyPtr parse_family(std::string_view spec) {
  const std::size_t colon = spec.find(':');
  const std::string name(spec.substr(0, colon));
  const std::string rest = colon == std::string_view::npos ? "" : std::string(spec.substr(colon + 1));
  auto no_params = [&] {
    if (!rest.empty()) throw Error(ErrorKind::Parse, name + " takes no parameters");
  };
  if (name == "exptriple") return no_params(), exp_triple_family(false);
  if (name == "exptriple-strict") return no_params(), exp_triple_family(true);
  if (name == "quadruple") return no_params(), quadruple_family();
  if (name == "schur") return no_params(), schur_family();
  if (name == "schurplusexp") return no_params(), schur_plus_exp_family();
  if (name == "exptriple-logcond") {
    if (rest.empty()) return exp_triple_family(false, 1);
    if (rest.rfind("r=", 0) != 0) throw Error(ErrorKind::Parse, "exptriple-logcond: expected r=R");
    const unsigned r = parse_unsigned(std::string_view(rest).substr(2), name);
    if (r < 1) throw Error(ErrorKind::InvalidArgument, "exptriple-logcond: r must be >= 1");
    return exp_triple_family(false, r);
  }
  if (name == "shape" || name == "fep") {
    const std::size_t c2 = rest.find(':');
    if (c2 == std::string::npos) throw Error(ErrorKind::Parse, name + ": expected " + name + ":M:...");
    const unsigned m = parse_unsigned(std::string_view(rest).substr(0, c2), name);
    const std::string tail = rest.substr(c2 + 1);
    if (name == "shape") return shape_family(patterns::ShapeRelation::parse(m, tail));
    if (!tail.empty() && std::all_of(tail.begin(), tail.end(), [](char ch) { return ch >= '0' && ch <= '9'; })) {
      return fep_family(m, patterns::WeightFn::constant(parse_unsigned(tail, name)), tail);
    }
    std::ifstream in(tail);
    if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open weight file '" + tail + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return fep_family(m, patterns::WeightFn::from_json(ss.str()), tail);
  }
  if (name == "diffpair") {
    std::string seq;
    unsigned nmax = 12;
    std::size_t pos = 0;
    while (pos < rest.size()) {
      std::size_t comma = rest.find(',', pos);
      if (comma == std::string::npos) comma = rest.size();
      const std::string item = rest.substr(pos, comma - pos);
      if (item.rfind("seq=", 0) == 0) {
        seq = item.substr(4);
      } else if (item.rfind("nmax=", 0) == 0) {
        nmax = parse_unsigned(std::string_view(item).substr(5), name);
      } else {
        throw Error(ErrorKind::Parse, "diffpair: unknown parameter '" + item + "'");
      }
      pos = comma + 1;
    }
    if (seq.empty()) throw Error(ErrorKind::Parse, "diffpair: missing seq=");
    return difference_pair_family(seq, nmax);
  }
  throw Error(ErrorKind::Parse, "unknown family '" + name + "'");
}

}  // namespace expramsey::search
