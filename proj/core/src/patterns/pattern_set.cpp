#include "expramsey/patterns/pattern_set.hpp"

#include <algorithm>

#include <json.hpp>

#include "expramsey/error.hpp"
#include "expramsey/tower/eval.hpp"

namespace expramsey::patterns {

namespace {

constexpr unsigned kMaxGenerators = 24;

// A term together with the same construction over placeholders.
struct Built {
  ExpTerm term;
  ExpTerm recipe;
};

ExpTerm placeholder(unsigned i) { return ExpTerm::symbol("x" + std::to_string(i)); }

void check_arity(const std::vector<ExpTerm>& xs, const char* family) {
  if (xs.empty()) throw Error(ErrorKind::InvalidArgument, std::string(family) + ": need at least one generator");
  if (xs.size() > kMaxGenerators) {
    throw Error(ErrorKind::BudgetExceeded, std::string(family) + ": too many generators");
  }
}

void check_gt_one(const std::vector<ExpTerm>& xs, const char* family) {
  for (const auto& x : xs) {
    if (!x.has_symbol() && x.is_literal(1)) {
      throw Error(ErrorKind::InvalidArgument, std::string(family) + ": generators must be > 1");
    }
  }
}

// Nonempty subsets of [m] (1-based), by increasing size then lexicographically.
std::vector<std::vector<unsigned>> subsets_by_size(unsigned m) {
  std::vector<std::vector<unsigned>> out;
  for (unsigned k = 1; k <= m; ++k) {
    std::vector<unsigned> idx(k);
    for (unsigned i = 0; i < k; ++i) idx[i] = i + 1;
    while (true) {
      out.push_back(idx);
      int p = static_cast<int>(k) - 1;
      while (p >= 0 && idx[p] == m - k + p + 1) --p;
      if (p < 0) break;
      ++idx[p];
      for (unsigned q = p + 1; q < k; ++q) idx[q] = idx[q - 1] + 1;
    }
  }
  return out;
}

std::string joined(const std::vector<unsigned>& idx, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < idx.size(); ++i) s += (i ? sep : "") + ("x" + std::to_string(idx[i]));
  return s;
}

// Saturating product of (bound + 1) factors; reports whether it stays <= cap.
bool combos_within(const std::vector<std::uint64_t>& bounds, std::size_t cap, std::size_t already) {
  long double total = 1;
  for (auto b : bounds) total *= static_cast<long double>(b) + 1;
  return total + static_cast<long double>(already) <= static_cast<long double>(cap);
}

[[noreturn]] void over_cap(const char* family, std::size_t cap) {
  throw Error(ErrorKind::BudgetExceeded, std::string(family) + ": element cap " + std::to_string(cap) + " exceeded");
}

// Advances a mixed-radix counter (last digit fastest); false after wrapping.
bool advance(std::vector<std::uint64_t>& digits, const std::vector<std::uint64_t>& bounds) {
  for (std::size_t p = digits.size(); p-- > 0;) {
    if (digits[p] < bounds[p]) {
      ++digits[p];
      return true;
    }
    digits[p] = 0;
  }
  return false;
}

}  // namespace

bool PatternSet::insert(ExpTerm term, Provenance provenance) {
  std::string key = tower::value_key(term);
  if (index_.count(key)) return false;
  const bool exact = key.empty() || key[0] != '#';
  index_.emplace(std::move(key), elements_.size());
  elements_.push_back({std::move(term), std::move(provenance), exact});
  return true;
}

const PatternElement* PatternSet::find(const ExpTerm& t) const {
  auto it = index_.find(tower::value_key(t));
  return it == index_.end() ? nullptr : &elements_[it->second];
}

bool PatternSet::contains(const ExpTerm& t) const { return find(t) != nullptr; }
bool PatternSet::contains(std::uint64_t v) const { return index_.count(std::to_string(v)) > 0; }

std::string PatternSet::to_json() const {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["family"] = family_;
  auto gens = nlohmann::ordered_json::array();
  for (const auto& g : generators_) gens.push_back(g.to_string());
  j["generators"] = gens;
  j["count"] = elements_.size();
  auto els = nlohmann::ordered_json::array();
  for (const auto& e : elements_) {
    nlohmann::ordered_json o;
    o["term"] = e.term.to_string();
    if (e.exact_key) {
      o["value"] = tower::value_key(e.term);
    } else {
      o["value"] = nullptr;
    }
    o["dedup"] = e.exact_key ? "value" : "structural";
    o["recipe"] = e.provenance.recipe;
    o["indices"] = e.provenance.indices;
    if (!e.provenance.exponents.empty()) o["exponents"] = e.provenance.exponents;
    els.push_back(std::move(o));
  }
  j["elements"] = els;
  return j.dump(2);
}

PatternSet finite_sums(const std::vector<ExpTerm>& xs) {
  check_arity(xs, "FS");
  for (const auto& x : xs) {
    if (!x.is_literal()) {
      throw Error(ErrorKind::SymbolicUnsupported, "FS needs literal generators, got " + x.to_string());
    }
  }
  PatternSet out("fs", xs);
  for (const auto& idx : subsets_by_size(static_cast<unsigned>(xs.size()))) {
    BigInt sum = 0;
    for (unsigned i : idx) sum += xs[i - 1].value();
    out.insert(ExpTerm::literal(sum), {joined(idx, "+"), idx, {}});
  }
  return out;
}

PatternSet finite_products(const std::vector<ExpTerm>& xs) {
  check_arity(xs, "FP");
  PatternSet out("fp", xs);
  for (const auto& idx : subsets_by_size(static_cast<unsigned>(xs.size()))) {
    std::vector<ExpTerm> fs;
    for (unsigned i : idx) fs.push_back(xs[i - 1]);
    out.insert(ExpTerm::product(std::move(fs)), {joined(idx, "*"), idx, {}});
  }
  return out;
}

PatternSet finite_exponentials(const std::vector<ExpTerm>& xs, std::size_t cap) {
  check_arity(xs, "FE");
  check_gt_one(xs, "FE");
  const unsigned m = static_cast<unsigned>(xs.size());
  // fresh[i]: elements with base x_i; the suffix set FE(x_i..x_m) is the
  // union of fresh[i..m].
  std::vector<std::vector<Built>> fresh(m + 2);
  std::vector<std::vector<Built>> suffix(m + 2);
  std::size_t produced = 0;
  for (unsigned i = m; i >= 1; --i) {
    // Choice 0 for e_j is the exponent 1.
    std::vector<std::uint64_t> bounds;
    for (unsigned j = i + 1; j <= m; ++j) bounds.push_back(suffix[j].size());
    if (!combos_within(bounds, cap, produced)) over_cap("FE", cap);
    std::vector<std::uint64_t> digits(bounds.size(), 0);
    PatternSet seen("fe", {});
    do {
      std::vector<ExpTerm> e, er;
      for (std::size_t p = 0; p < digits.size(); ++p) {
        if (digits[p] == 0) continue;
        const Built& b = suffix[i + 1 + p][digits[p] - 1];
        e.push_back(b.term);
        er.push_back(b.recipe);
      }
      Built el{ExpTerm::power(xs[i - 1], ExpTerm::product(e)),
               ExpTerm::power(placeholder(i), ExpTerm::product(er))};
      ++produced;
      if (seen.insert(el.term, {})) fresh[i].push_back(std::move(el));
    } while (advance(digits, bounds));
    // Deduplicate the suffix union by value.
    PatternSet uni("fe", {});
    for (unsigned k = i; k <= m; ++k) {
      for (const auto& b : fresh[k]) {
        if (uni.insert(b.term, {})) suffix[i].push_back(b);
      }
    }
  }
  PatternSet out("fe", xs);
  for (unsigned i = 1; i <= m; ++i) {
    for (const auto& b : fresh[i]) out.insert(b.term, {b.recipe.to_string(), {i}, {}});
  }
  return out;
}

PatternSet weighted_products(const std::vector<unsigned>& support, const WeightFn& w,
                             const std::vector<ExpTerm>& xs, std::size_t cap) {
  check_arity(xs, "FP_{S,W}");
  const unsigned m = static_cast<unsigned>(xs.size());
  std::vector<unsigned> s = support;
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  for (unsigned i : s) {
    if (i < 1 || i > m) throw Error(ErrorKind::InvalidArgument, "support index out of range: " + std::to_string(i));
  }
  std::vector<std::uint64_t> bounds;
  for (unsigned i : s) {
    bounds.push_back(w.lookup(std::span<const ExpTerm>(xs).subspan(i), false));
  }
  if (!combos_within(bounds, cap, 0)) over_cap("FP_{S,W}", cap);
  PatternSet out("fpw", xs);
  std::vector<std::uint64_t> digits(bounds.size(), 0);
  do {
    std::vector<ExpTerm> fs, fr;
    std::vector<std::uint64_t> p(m, 0);
    for (std::size_t k = 0; k < s.size(); ++k) {
      p[s[k] - 1] = digits[k];
      if (digits[k] == 0) continue;
      fs.push_back(ExpTerm::power(xs[s[k] - 1], ExpTerm::literal(digits[k])));
      fr.push_back(ExpTerm::power(placeholder(s[k]), ExpTerm::literal(digits[k])));
    }
    out.insert(ExpTerm::product(std::move(fs)), {ExpTerm::product(std::move(fr)).to_string(), s, {p}});
  } while (advance(digits, bounds));
  return out;
}

PatternSet fep(const WeightFn& w, const std::vector<ExpTerm>& xs, std::size_t cap) {
  check_arity(xs, "FEP");
  check_gt_one(xs, "FEP");
  const unsigned m = static_cast<unsigned>(xs.size());
  std::vector<std::uint64_t> suffix_weight(m + 1);
  for (unsigned j = 1; j <= m; ++j) {
    suffix_weight[j] = w.lookup(std::span<const ExpTerm>(xs).subspan(j), true);
  }
  PatternSet out("fep", xs);
  std::size_t produced = 0;
  for (const auto& base : subsets_by_size(m)) {
    std::vector<bool> in_b(m + 1, false);
    for (unsigned i : base) in_b[i] = true;
    // One counter digit per (base i, support j) pair.
    std::vector<std::pair<unsigned, unsigned>> slots;
    std::vector<std::uint64_t> bounds;
    for (unsigned i : base) {
      for (unsigned j = i + 1; j <= m; ++j) {
        if (in_b[j]) continue;
        slots.emplace_back(i, j);
        bounds.push_back(suffix_weight[j]);
      }
    }
    if (!combos_within(bounds, cap, produced)) over_cap("FEP", cap);
    std::vector<std::uint64_t> digits(bounds.size(), 0);
    do {
      ++produced;
      std::vector<ExpTerm> fs, fr;
      std::vector<std::vector<std::uint64_t>> exps;
      for (unsigned i : base) {
        std::vector<ExpTerm> e, er;
        std::vector<std::uint64_t> p(m, 0);
        for (std::size_t k = 0; k < slots.size(); ++k) {
          if (slots[k].first != i || digits[k] == 0) continue;
          const unsigned j = slots[k].second;
          p[j - 1] = digits[k];
          e.push_back(ExpTerm::power(xs[j - 1], ExpTerm::literal(digits[k])));
          er.push_back(ExpTerm::power(placeholder(j), ExpTerm::literal(digits[k])));
        }
        fs.push_back(ExpTerm::power(xs[i - 1], ExpTerm::product(std::move(e))));
        fr.push_back(ExpTerm::power(placeholder(i), ExpTerm::product(std::move(er))));
        exps.push_back(std::move(p));
      }
      out.insert(ExpTerm::product(std::move(fs)),
                 {ExpTerm::product(std::move(fr)).to_string(), base, std::move(exps)});
    } while (advance(digits, bounds));
  }
  return out;
}

}  // namespace expramsey::patterns
