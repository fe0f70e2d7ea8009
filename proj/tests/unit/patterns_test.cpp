#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "expramsey/error.hpp"
#include "expramsey/patterns/pattern_set.hpp"
#include "expramsey/patterns/shape.hpp"
#include "expramsey/patterns/weight.hpp"
#include "expramsey/tower/eval.hpp"

using namespace expramsey;
using namespace expramsey::patterns;
using expramsey::tower::parse_term;

namespace {

ExpTerm lit(std::uint64_t v) { return ExpTerm::literal(v); }

std::vector<ExpTerm> lits(std::initializer_list<std::uint64_t> vs) {
  std::vector<ExpTerm> out;
  for (auto v : vs) out.push_back(lit(v));
  return out;
}

std::set<BigInt> values(const PatternSet& s) {
  std::set<BigInt> out;
  for (const auto& e : s.elements()) {
    auto v = tower::eval_exact(e.term, BigInt(1) << 4096);
    EXPECT_TRUE(v.is_exact()) << e.term.to_string();
    out.insert(v.value());
  }
  return out;
}

BigInt ipow(BigInt a, std::uint64_t e) { return boost::multiprecision::pow(a, static_cast<unsigned>(e)); }

// FE by direct recursion over values.
std::set<BigInt> fe_oracle(const std::vector<std::uint64_t>& xs, std::size_t from) {
  const std::size_t m = xs.size();
  if (from == m - 1) return {BigInt(xs[from])};
  std::set<BigInt> out = fe_oracle(xs, from + 1);
  std::vector<std::vector<BigInt>> choices;
  for (std::size_t j = from + 1; j < m; ++j) {
    auto s = fe_oracle(xs, j);
    std::vector<BigInt> c{1};
    c.insert(c.end(), s.begin(), s.end());
    choices.push_back(c);
  }
  std::function<void(std::size_t, BigInt)> rec = [&](std::size_t p, BigInt prod) {
    if (p == choices.size()) {
      out.insert(ipow(xs[from], prod.convert_to<std::uint64_t>()));
      return;
    }
    for (const auto& c : choices[p]) rec(p + 1, prod * c);
  };
  rec(0, 1);
  return out;
}

std::vector<std::string> recipes(const PatternSet& s) {
  std::vector<std::string> out;
  for (const auto& e : s.elements()) out.push_back(e.term.to_string());
  return out;
}

}  // namespace

TEST(FiniteSums, Examples) {
  EXPECT_EQ(values(finite_sums(lits({1, 2}))), (std::set<BigInt>{1, 2, 3}));
  EXPECT_EQ(values(finite_sums(lits({9}))), (std::set<BigInt>{9}));
  EXPECT_EQ(values(finite_sums(lits({2, 3, 5}))), (std::set<BigInt>{2, 3, 5, 7, 8, 10}));
  EXPECT_THROW(finite_sums({parse_term("2^3")}), Error);
  EXPECT_THROW(finite_sums({ExpTerm::symbol("x")}), Error);
}

TEST(FiniteProducts, Examples) {
  EXPECT_EQ(values(finite_products(lits({2, 3}))), (std::set<BigInt>{2, 3, 6}));
  EXPECT_EQ(values(finite_products(lits({2, 2}))), (std::set<BigInt>{2, 4}));
  EXPECT_EQ(values(finite_products(lits({2, 3, 5}))), (std::set<BigInt>{2, 3, 5, 6, 10, 15, 30}));
}

TEST(FiniteProducts, IndependentPrimesGiveFullSize) {
  const std::vector<std::uint64_t> primes{2, 3, 5, 7, 11};
  for (std::size_t m = 1; m <= 5; ++m) {
    std::vector<ExpTerm> xs;
    for (std::size_t i = 0; i < m; ++i) xs.push_back(lit(primes[i]));
    EXPECT_EQ(finite_products(xs).size(), (1u << m) - 1);
  }
  // Symbolic generators: distinct subsets give distinct products.
  std::vector<ExpTerm> sym;
  for (int i = 1; i <= 4; ++i) sym.push_back(ExpTerm::symbol("y" + std::to_string(i)));
  EXPECT_EQ(finite_products(sym).size(), 15u);
}

TEST(FiniteExponentials, Examples) {
  const auto a = ExpTerm::symbol("a"), b = ExpTerm::symbol("b"), c = ExpTerm::symbol("c");
  auto one = finite_exponentials({c});
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one.elements()[0].term, c);
  auto two = finite_exponentials({a, b});
  std::vector<std::string> r = recipes(two);
  std::sort(r.begin(), r.end());
  EXPECT_EQ(r, (std::vector<std::string>{"a", "a^b", "b"}));
  auto three = finite_exponentials({a, b, c});
  EXPECT_TRUE(three.contains(parse_term("a^b^c")));
  EXPECT_TRUE(three.contains(parse_term("a^(b^c*c)")));
  EXPECT_TRUE(three.contains(parse_term("a^(c*c)")));
}

TEST(FiniteExponentials, MatchesRecursiveOracle) {
  for (const auto& xs : std::vector<std::vector<std::uint64_t>>{{2, 3}, {2, 3, 2}, {3, 2, 2}, {2, 2, 2}, {2, 3, 5}}) {
    std::vector<ExpTerm> ts;
    for (auto x : xs) ts.push_back(lit(x));
    EXPECT_EQ(values(finite_exponentials(ts)), fe_oracle(xs, 0));
  }
}

TEST(FiniteExponentials, FollowsRecursionForSecondGenerator) {
  // b^(c^2) would need e_3 twice; the recursion only gives b and b^c.
  auto fe = finite_exponentials(lits({2, 3, 5}));
  EXPECT_FALSE(fe.contains(parse_term("3^(5^2)")));
  EXPECT_TRUE(fe.contains(parse_term("3^5")));
  EXPECT_TRUE(fe.contains(parse_term("2^(5^2)")));
  EXPECT_TRUE(fe.contains(parse_term("2^(3^5*5)")));
}

TEST(FiniteExponentials, RejectsOne) { EXPECT_THROW(finite_exponentials(lits({2, 1})), Error); }

TEST(WeightedProducts, PaperExample) {
  const auto xs = lits({2, 3, 5, 7});
  WeightFn w;
  w.set({3, 5, 7}, 15);
  w.set({5, 7}, 12);
  w.set({7}, 7);
  w.set({}, 10);
  auto all = weighted_products({1, 2, 3, 4}, w, xs);
  EXPECT_EQ(all.size(), 16u * 13u * 8u * 11u);
  EXPECT_TRUE(all.contains(1));
  EXPECT_TRUE(all.contains(parse_term("2^15*3^12*5^7*7^10")));
  EXPECT_FALSE(all.contains(parse_term("2^16")));
  EXPECT_FALSE(all.contains(parse_term("7^11")));

  auto some = weighted_products({2, 3}, w, xs);
  std::set<BigInt> expect;
  for (unsigned a = 0; a <= 12; ++a) {
    for (unsigned b = 0; b <= 7; ++b) expect.insert(ipow(3, a) * ipow(5, b));
  }
  EXPECT_EQ(values(some), expect);

  auto none = weighted_products({}, w, xs);
  EXPECT_EQ(values(none), (std::set<BigInt>{1}));
}

TEST(WeightedProducts, MissingWeight) {
  WeightFn w;
  w.set({3}, 2);
  EXPECT_THROW(weighted_products({2}, w, lits({2, 3})), Error);
  EXPECT_NO_THROW(weighted_products({1}, w, lits({2, 3})));
}

TEST(Weight, NormalizationIsMonotone) {
  WeightFn w;
  w.set({}, 4);
  w.set({2}, 1);
  w.set({3}, 7);
  w.set({2, 3}, 2);
  EXPECT_EQ(w({2, 3}), 2u);
  EXPECT_EQ(w.normalized({2, 3}), 7u);
  EXPECT_EQ(w.normalized({2}), 4u);
  EXPECT_EQ(w.normalized({}), 4u);
  const std::vector<WeightFn::Key> keys{{}, {2}, {3}, {2, 3}};
  for (const auto& a : keys) {
    for (const auto& b : keys) {
      if (std::includes(a.begin(), a.end(), b.begin(), b.end())) EXPECT_GE(w.normalized(a), w.normalized(b));
    }
  }
}

TEST(Weight, JsonRoundTrip) {
  auto w = WeightFn::from_json(R"({"[3,2]": 5, "[]": 10, "*": 1})");
  EXPECT_EQ(w({2, 3}), 5u);
  EXPECT_EQ(w({}), 10u);
  EXPECT_EQ(w({7}), 1u);
  auto w2 = WeightFn::from_json(w.to_json());
  EXPECT_EQ(w2.to_json(), w.to_json());
  EXPECT_THROW(WeightFn::from_json("[1]"), Error);
  EXPECT_THROW(WeightFn::from_json(R"({"[0]": 1})"), Error);
  EXPECT_THROW(WeightFn::from_json(R"({"[2]": -1})"), Error);
}

TEST(Fep, ContainsGeneratorsAndPaperElements) {
  const auto a = ExpTerm::symbol("a"), b = ExpTerm::symbol("b"), c = ExpTerm::symbol("c");
  auto sym = fep(WeightFn::constant(1), {a, b, c});
  for (const auto& g : {a, b, c}) EXPECT_TRUE(sym.contains(g));

  auto s = fep(WeightFn::constant(5), lits({2, 3, 5}));
  EXPECT_TRUE(s.contains(parse_term("2^3*5")));        // a^b c
  EXPECT_TRUE(s.contains(parse_term("2^(3^5)*5")));    // a^(b^c) c
  EXPECT_TRUE(s.contains(parse_term("(2*3)^5")));      // (ab)^c
  EXPECT_TRUE(s.contains(parse_term("2*3^5")));        // a(b^c)
  EXPECT_TRUE(s.contains(parse_term("2^(3^5*5)")));    // a^(b^c c)
  for (std::uint64_t v : {2, 3, 5, 6, 10, 15, 30}) EXPECT_TRUE(s.contains(v));
}

TEST(Fep, ExponentialProgression) {
  for (std::uint64_t k = 1; k <= 4; ++k) {
    auto s = fep(WeightFn::constant(k), lits({2, 3}));
    EXPECT_TRUE(s.contains(2));
    EXPECT_TRUE(s.contains(3));
    for (std::uint64_t j = 1; j <= k; ++j) {
      EXPECT_TRUE(s.contains(ExpTerm::power(lit(2), ExpTerm::power(lit(3), lit(j))))) << k << " " << j;
    }
  }
}

TEST(Fep, HeightOneExponentNotReusedAsBase) {
  for (std::uint64_t w = 0; w <= 5; ++w) {
    EXPECT_FALSE(fep(WeightFn::constant(w), lits({2, 3})).contains(24)) << w;
  }
}

TEST(Fep, HeightTwoExponentMayReappear) {
  // 3^2 needs exponent 2 on the middle generator, so W >= 2.
  for (std::uint64_t w = 2; w <= 4; ++w) {
    EXPECT_TRUE(fep(WeightFn::constant(w), lits({2, 3, 2})).contains(parse_term("2^(3^2)*2")));
  }
}

TEST(Fep, ContainsFiniteExponentials) {
  for (const auto& xs : std::vector<std::vector<std::uint64_t>>{{2, 3}, {2, 3, 2}, {3, 2, 2}, {2, 2, 3}}) {
    std::vector<ExpTerm> ts;
    for (auto x : xs) ts.push_back(lit(x));
    auto big = fep(WeightFn::constant(10), ts);
    const auto fe = finite_exponentials(ts);
    for (const auto& e : fe.elements()) EXPECT_TRUE(big.contains(e.term)) << e.term.to_string();
  }
}

TEST(Fep, ProductsOfCompatibleElements) {
  const auto xs = lits({2, 3, 5});
  auto s = fep(WeightFn::constant(2), xs);
  int checked = 0;
  for (const auto& e1 : s.elements()) {
    for (const auto& e2 : s.elements()) {
      const auto& p1 = e1.provenance;
      const auto& p2 = e2.provenance;
      std::set<unsigned> b1(p1.indices.begin(), p1.indices.end()), b2(p2.indices.begin(), p2.indices.end());
      bool ok = std::none_of(b1.begin(), b1.end(), [&](unsigned i) { return b2.count(i); });
      // Exponent supports must avoid the other element's bases.
      for (std::size_t k = 0; ok && k < p1.indices.size(); ++k) {
        for (unsigned j : b2) ok = ok && p1.exponents[k][j - 1] == 0;
      }
      for (std::size_t k = 0; ok && k < p2.indices.size(); ++k) {
        for (unsigned j : b1) ok = ok && p2.exponents[k][j - 1] == 0;
      }
      if (!ok) continue;
      ++checked;
      EXPECT_TRUE(s.contains(ExpTerm::product(e1.term, e2.term))) << e1.term.to_string() << " * " << e2.term.to_string();
    }
  }
  EXPECT_GT(checked, 10);
}

TEST(Fep, ElementCap) {
  EXPECT_THROW(fep(WeightFn::constant(1000), lits({2, 3, 5, 7}), 10'000), Error);
}

TEST(PatternSet, ProvenanceRecipesRebuildElements) {
  const auto xs = lits({2, 3, 5});
  std::vector<std::string> names{"x1", "x2", "x3"};
  for (const auto& set : {fep(WeightFn::constant(2), xs), finite_exponentials(xs), finite_products(xs)}) {
    for (const auto& e : set.elements()) {
      auto rebuilt = tower::substitute(parse_term(e.provenance.recipe), names, xs);
      EXPECT_TRUE(tower::same_value(rebuilt, e.term)) << e.provenance.recipe;
    }
  }
}

TEST(PatternSet, Json) {
  auto s = finite_exponentials(lits({2, 3}));
  const std::string j = s.to_json();
  EXPECT_NE(j.find("\"family\": \"fe\""), std::string::npos);
  EXPECT_NE(j.find("\"recipe\": \"x1^x2\""), std::string::npos);
  EXPECT_NE(j.find("\"value\": \"8\""), std::string::npos);
}

TEST(Shape, Examples) {
  std::vector<ExpTerm> xs;
  for (int i = 1; i <= 4; ++i) xs.push_back(ExpTerm::symbol("x" + std::to_string(i)));
  auto r = ShapeRelation::parse(4, "1-2,2-3,2-4");
  auto s = shape_pattern(r, xs);
  EXPECT_EQ(s.size(), 7u);
  EXPECT_TRUE(s.contains(parse_term("x1^x2")));
  EXPECT_TRUE(s.contains(parse_term("x2^x4")));
  EXPECT_FALSE(has_directed_cycle(r));

  EXPECT_EQ(shape_pattern(ShapeRelation(4), xs).size(), 4u);
  EXPECT_EQ(values(shape_pattern(ShapeRelation::parse(2, "1-2"), lits({2, 3}))), (std::set<BigInt>{2, 3, 8}));
  EXPECT_THROW(shape_pattern(r, lits({2, 3})), Error);
  EXPECT_THROW(ShapeRelation::parse(2, "1-3"), Error);
  EXPECT_THROW(ShapeRelation::parse(2, "1+2"), Error);
}

TEST(Shape, Cycles) {
  auto self = find_directed_cycle(ShapeRelation::parse(1, "1-1"));
  ASSERT_TRUE(self);
  EXPECT_EQ(*self, (std::vector<ShapeRelation::Edge>{{1, 1}}));
  auto tri = find_directed_cycle(ShapeRelation::parse(3, "1-2,2-3,3-1"));
  ASSERT_TRUE(tri);
  EXPECT_EQ(tri->size(), 3u);
}

TEST(Shape, CycleWitnessIsValidAndAgreesWithOracle) {
  // m = 3: all 2^9 relations against brute force over vertex sequences.
  const unsigned m = 3;
  for (unsigned mask = 0; mask < (1u << (m * m)); ++mask) {
    ShapeRelation r(m);
    for (unsigned k = 0; k < m * m; ++k) {
      if (mask >> k & 1) r.add(k / m + 1, k % m + 1);
    }
    bool oracle = false;
    std::vector<unsigned> perm{1, 2, 3};
    do {
      for (unsigned len = 1; len <= m && !oracle; ++len) {
        bool ok = true;
        for (unsigned t = 0; t < len; ++t) ok = ok && r.edges().count({perm[t], perm[(t + 1) % len]});
        oracle = ok;
      }
    } while (!oracle && std::next_permutation(perm.begin(), perm.end()));
    auto w = find_directed_cycle(r);
    ASSERT_EQ(w.has_value(), oracle) << r.to_string();
    if (w) {
      for (std::size_t t = 0; t < w->size(); ++t) {
        EXPECT_TRUE(r.edges().count((*w)[t]));
        EXPECT_EQ((*w)[t].second, (*w)[(t + 1) % w->size()].first);
      }
    }
  }
}

TEST(Shape, AcyclicRelabelledByTopologicalOrder) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const unsigned m = std::uniform_int_distribution<unsigned>(1, 6)(rng);
    std::vector<unsigned> order(m);
    std::iota(order.begin(), order.end(), 1u);
    std::shuffle(order.begin(), order.end(), rng);
    ShapeRelation r(m);
    for (unsigned i = 0; i < m; ++i) {
      for (unsigned j = i + 1; j < m; ++j) {
        if (rng() % 2) r.add(order[i], order[j]);
      }
    }
    ASSERT_FALSE(has_directed_cycle(r));
    // Kahn's algorithm gives a topological order; relabel by position.
    std::vector<unsigned> indeg(m + 1, 0), topo;
    for (auto [i, j] : r.edges()) ++indeg[j];
    std::vector<unsigned> ready;
    for (unsigned v = 1; v <= m; ++v) {
      if (!indeg[v]) ready.push_back(v);
    }
    while (!ready.empty()) {
      const unsigned v = ready.back();
      ready.pop_back();
      topo.push_back(v);
      for (auto [i, j] : r.edges()) {
        if (i == v && --indeg[j] == 0) ready.push_back(j);
      }
    }
    ASSERT_EQ(topo.size(), m);
    std::vector<unsigned> pos(m + 1);
    for (unsigned k = 0; k < m; ++k) pos[topo[k]] = k + 1;
    ShapeRelation relabelled(m);
    for (auto [i, j] : r.edges()) relabelled.add(pos[i], pos[j]);
    std::vector<ExpTerm> xs;
    for (unsigned i = 1; i <= m; ++i) xs.push_back(ExpTerm::symbol("x" + std::to_string(i)));
    const auto pattern = shape_pattern(relabelled, xs);
    for (const auto& e : pattern.elements()) {
      if (e.provenance.indices.size() == 2) EXPECT_LT(e.provenance.indices[0], e.provenance.indices[1]);
    }
  }
}
