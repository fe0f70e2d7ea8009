#include "expramsey/search/certificate.hpp"

#include <algorithm>
#include <exception>
#include <random>
#include <thread>

#include <json.hpp>

#include "expramsey/error.hpp"

namespace expramsey::search {

namespace {

using colourings::Colouring;
using colourings::ColouringPtr;

constexpr std::uint64_t kMaxDenseCache = std::uint64_t{1} << 26;
constexpr std::size_t kBlock = 8192;

class ColourLookup {
 public:
  ColourLookup(const Colouring& c, std::uint64_t dense_limit) : c_(c) {
    cache_.resize(dense_limit + 1);
    for (std::uint64_t v = 1; v <= dense_limit; ++v) cache_[v] = c.colour(v);
  }
  unsigned operator()(std::uint64_t v) const { return v < cache_.size() && v > 0 ? cache_[v] : c_.colour(v); }
  unsigned operator()(const ExpTerm& t) const { return c_.colour(t); }

 private:
  const Colouring& c_;
  std::vector<unsigned> cache_;
};

std::uint64_t dense_limit(const Family& f, std::uint64_t bound) {
  return f.dense() ? std::min(f.max_value(bound), kMaxDenseCache) : 0;
}

// The common colour of every element, if there is one.
std::optional<unsigned> monochromatic(const Family& f, std::span<const std::uint64_t> g, const ColourLookup& col,
                                      std::vector<std::uint64_t>& scratch) {
  if (f.integer_valued()) {
    f.values(g, scratch);
    const unsigned c = col(scratch[0]);
    for (std::size_t i = 1; i < scratch.size(); ++i) {
      if (col(scratch[i]) != c) return std::nullopt;
    }
    return c;
  }
  const auto ts = f.terms(g);
  const unsigned c = col(ts[0]);
  for (std::size_t i = 1; i < ts.size(); ++i) {
    if (col(ts[i]) != c) return std::nullopt;
  }
  return c;
}

Witness make_witness(const Family& f, std::span<const std::uint64_t> g, unsigned colour) {
  Witness w;
  const Instance inst = f.instance(g);
  w.generators = inst.generators;
  for (const auto& e : inst.elements) w.elements.push_back(e.to_string());
  w.roles = inst.roles;
  w.colour = colour;
  return w;
}

struct Found {
  std::vector<std::uint64_t> gens;
  unsigned colour = 0;
  std::uint64_t position = 0;  // 1-based
};

std::optional<Found> scan_serial(const Family& f, std::uint64_t bound, const ColourLookup& col,
                                 const SearchBudget& budget, std::uint64_t& checked) {
  std::optional<Found> found;
  std::vector<std::uint64_t> scratch;
  f.for_each(
      bound,
      [&](std::span<const std::uint64_t> g) {
        ++checked;
        if ((checked & 0x3ff) == 0) budget.check_time();
        if (auto c = monochromatic(f, g, col, scratch)) {
          found = Found{{g.begin(), g.end()}, *c, checked};
          return false;
        }
        return true;
      },
      budget);
  return found;
}

std::optional<Found> scan_parallel(const Family& f, std::uint64_t bound, const ColourLookup& col,
                                   const SearchBudget& budget, unsigned threads, std::uint64_t& checked) {
  const std::size_t arity = f.arity();
  std::vector<std::uint64_t> block;
  std::optional<Found> found;

  auto flush = [&]() {
    const std::size_t n = block.size() / arity;
    std::vector<std::size_t> first(threads, n);
    std::vector<unsigned> colour(threads, 0);
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          std::vector<std::uint64_t> scratch;
          for (std::size_t i = t; i < n; i += threads) {
            if (i > first[t]) break;
            std::span<const std::uint64_t> g(block.data() + i * arity, arity);
            if (auto c = monochromatic(f, g, col, scratch)) {
              first[t] = i;
              colour[t] = *c;
              break;
            }
          }
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    const auto it = std::min_element(first.begin(), first.end());
    if (*it < n) {
      const std::size_t i = *it;
      found = Found{{block.begin() + i * arity, block.begin() + (i + 1) * arity},
                    colour[it - first.begin()], checked + i + 1};
      checked += i + 1;
    } else {
      checked += n;
    }
    block.clear();
    budget.check_time();
  };

  f.for_each(
      bound,
      [&](std::span<const std::uint64_t> g) {
        block.insert(block.end(), g.begin(), g.end());
        if (block.size() / arity == kBlock * threads) flush();
        return !found;
      },
      budget);
  if (!found && !block.empty()) flush();
  return found;
}

// Class-wise check for schurplusexp; see the header.
std::optional<Found> scan_schur_plus_exp(std::uint64_t bound, const ColourLookup& col, unsigned k,
                                         const SearchBudget& budget, std::uint64_t& checked) {
  const auto exps = exp_pairs(bound);
  auto exp_value = [](std::uint64_t a, std::uint64_t b) {
    std::uint64_t v = 1;
    for (std::uint64_t i = 0; i < b; ++i) v *= a;
    return v;
  };
  constexpr std::uint64_t kNone = ~std::uint64_t{0};
  // Smallest Schur sum and exponential value per colour class.
  std::vector<std::uint64_t> best_s(k + 1, kNone), best_e(k + 1, kNone);
  std::uint64_t n_schur = 0;
  for (std::uint64_t s = 2; s <= bound; ++s) {
    if ((s & 0xff) == 0) budget.check_time();
    const unsigned cs = col(s);
    n_schur += s / 2;
    if (best_s[cs] != kNone) continue;
    for (std::uint64_t x = 1; 2 * x <= s; ++x) {
      if (col(x) == cs && col(s - x) == cs) {
        best_s[cs] = s;
        break;
      }
    }
  }
  for (auto [a, b] : exps) {
    const std::uint64_t v = exp_value(a, b);
    const unsigned c = col(v);
    if (best_e[c] == kNone && col(a) == c && col(b) == c) best_e[c] = v;
  }
  std::uint64_t top = kNone;
  for (unsigned c = 1; c <= k; ++c) {
    if (best_s[c] != kNone && best_e[c] != kNone) top = std::min(top, std::max(best_s[c], best_e[c]));
  }
  const std::uint64_t n_exp = exps.size();
  if (top == kNone) {
    checked = n_schur * n_exp;
    return std::nullopt;
  }

  // Lex-first instance with largest element top.
  std::optional<std::array<std::uint64_t, 4>> best;
  unsigned best_colour = 0;
  for (unsigned c = 1; c <= k; ++c) {
    if (best_s[c] == kNone || best_e[c] == kNone || std::max(best_s[c], best_e[c]) != top) continue;
    std::optional<std::pair<std::uint64_t, std::uint64_t>> s_pick, e_pick;
    for (std::uint64_t x = 1; 2 * x <= top && !s_pick; ++x) {
      if (col(x) != c) continue;
      for (std::uint64_t y = x; x + y <= top; ++y) {
        if (col(y) == c && col(x + y) == c) {
          s_pick = {x, y};
          break;
        }
      }
    }
    for (auto [a, b] : exps) {
      if (exp_value(a, b) > top || col(a) != c || col(b) != c || col(exp_value(a, b)) != c) continue;
      if (!e_pick || std::pair{a, b} < *e_pick) e_pick = {a, b};
    }
    const std::array<std::uint64_t, 4> cand{s_pick->first, s_pick->second, e_pick->first, e_pick->second};
    if (!best || cand < *best) {
      best = cand;
      best_colour = c;
    }
  }

  // Position of that instance in the enumeration order.
  std::uint64_t s_below = 0;  // Schur pairs with sum < top
  for (std::uint64_t s = 2; s < top; ++s) s_below += s / 2;
  std::uint64_t e_below = 0, e_at = 0;
  for (auto [a, b] : exps) {
    const std::uint64_t v = exp_value(a, b);
    e_below += v < top;
    e_at += v == top;
  }
  std::uint64_t pos = s_below * e_below;
  const auto& w = *best;
  // Schur pairs lex-before (w0, w1) among sums <= top.
  for (std::uint64_t x = 1; x <= w[0]; ++x) {
    const std::uint64_t y_end = x < w[0] ? top - x : w[1] - 1;  // inclusive
    for (std::uint64_t y = x; y <= y_end && x + y <= top; ++y) pos += (x + y == top) ? e_below + e_at : e_at;
  }
  // Exponential pairs lex-before (w2, w3) matched with the witness Schur pair.
  const bool schur_at_top = w[0] + w[1] == top;
  for (auto [a, b] : exps) {
    const std::uint64_t v = exp_value(a, b);
    if (v > top || std::pair{a, b} >= std::pair{w[2], w[3]}) continue;
    if (schur_at_top || v == top) ++pos;
  }
  checked = pos + 1;
  return Found{{w.begin(), w.end()}, best_colour, checked};
}

}  // namespace

Certificate find_monochromatic(const ColouringPtr& colouring, const FamilyPtr& family, std::uint64_t bound,
                               const SearchOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  Certificate cert;
  cert.family = family->descriptor();
  cert.colouring = colouring->descriptor();
  cert.bound = bound;
  cert.seed = options.seed;

  const ColourLookup col(*colouring, dense_limit(*family, bound));
  std::optional<Found> found;
  std::uint64_t checked = 0;
  if (family->descriptor() == "schurplusexp") {
    found = scan_schur_plus_exp(bound, col, colouring->k(), options.budget, checked);
  } else if (options.threads > 1) {
    found = scan_parallel(*family, bound, col, options.budget, options.threads, checked);
  } else {
    found = scan_serial(*family, bound, col, options.budget, checked);
  }
  cert.instances_checked = checked;
  if (found) cert.witness = make_witness(*family, found->gens, found->colour);
  if (options.timing) {
    cert.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return cert;
}

bool verify_certificate(const Certificate& cert, double sample_rate) {
  try {
    const ColouringPtr colouring = colourings::parse_colouring(cert.colouring);
    const FamilyPtr family = parse_family(cert.family);
    if (cert.witness) {
      const Witness& w = *cert.witness;
      if (!family->admits(w.generators, cert.bound)) return false;
      const Instance inst = family->instance(w.generators);
      if (inst.elements.size() != w.elements.size()) return false;
      for (std::size_t i = 0; i < inst.elements.size(); ++i) {
        if (inst.elements[i].to_string() != w.elements[i]) return false;
        if (colouring->colour(inst.elements[i]) != w.colour) return false;
      }
      return true;
    }
    if (cert.family == "schurplusexp") {
      const Certificate again = find_monochromatic(colouring, family, cert.bound);
      return again.avoidance_verified() && again.instances_checked == cert.instances_checked;
    }
    std::mt19937_64 rng(cert.seed);
    std::bernoulli_distribution pick(sample_rate);
    const ColourLookup col(*colouring, 0);
    std::vector<std::uint64_t> scratch;
    std::uint64_t seen = 0;
    bool ok = true;
    family->for_each(cert.bound, [&](std::span<const std::uint64_t> g) {
      ++seen;
      if (pick(rng) && monochromatic(*family, g, col, scratch)) ok = false;
      return ok;
    });
    return ok && seen == cert.instances_checked;
  } catch (const std::exception&) {
    return false;
  }
}

std::string Certificate::to_json() const {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["kind"] = "certificate";
  j["family"] = family;
  j["colouring"] = colouring;
  j["bound"] = bound;
  j["seed"] = seed;
  j["instances_checked"] = instances_checked;
  j["result"] = witness ? "counterexample" : "avoidance_verified";
  if (witness) {
    nlohmann::ordered_json w;
    w["generators"] = witness->generators;
    w["elements"] = witness->elements;
    w["roles"] = witness->roles;
    w["colour"] = witness->colour;
    j["witness"] = w;
  } else {
    j["witness"] = nullptr;
  }
  if (wall_time) j["wall_time_secs"] = *wall_time;
  return j.dump(2) + "\n";
}

Certificate Certificate::from_json(const std::string& text) {
  Certificate c;
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.at("kind").get<std::string>() != "certificate") throw Error(ErrorKind::Parse, "not a certificate");
    c.family = j.at("family").get<std::string>();
    c.colouring = j.at("colouring").get<std::string>();
    c.bound = j.at("bound").get<std::uint64_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.instances_checked = j.at("instances_checked").get<std::uint64_t>();
    const std::string result = j.at("result").get<std::string>();
    if (result == "counterexample") {
      const auto& w = j.at("witness");
      Witness wit;
      wit.generators = w.at("generators").get<std::vector<std::uint64_t>>();
      wit.elements = w.at("elements").get<std::vector<std::string>>();
      wit.roles = w.at("roles").get<std::vector<std::string>>();
      wit.colour = w.at("colour").get<unsigned>();
      c.witness = std::move(wit);
    } else if (result != "avoidance_verified") {
      throw Error(ErrorKind::Parse, "unknown result '" + result + "'");
    }
    if (j.contains("wall_time_secs")) c.wall_time = j["wall_time_secs"].get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("certificate: ") + e.what());
  }
  return c;
}

std::string Certificate::to_csv() const {
  auto quote = [](const std::string& s) {
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  };
  std::string out = "family,colouring,bound,seed,instances_checked,result,witness,colour\n";
  std::string wit;
  if (witness) {
    for (std::size_t i = 0; i < witness->elements.size(); ++i) wit += (i ? ";" : "") + witness->elements[i];
  }
  out += quote(family) + "," + quote(colouring) + "," + std::to_string(bound) + "," + std::to_string(seed) + "," +
         std::to_string(instances_checked) + "," + (witness ? "counterexample" : "avoidance_verified") + "," +
         quote(wit) + "," + (witness ? std::to_string(witness->colour) : "") + "\n";
  return out;
}

}  // namespace expramsey::search
