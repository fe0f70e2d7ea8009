#include "expramsey/tower/log_star.hpp"

#include <initializer_list>
#include <optional>
#include <utility>

#include "expramsey/error.hpp"
#include "expramsey/tower/eval.hpp"
#include "tower/magnitude.hpp"

namespace expramsey::tower {

namespace {

using detail::DoubleBackend;
using detail::Magnitude;
using detail::MpfrBackend;
using detail::Undecided;

template <class Fn>
auto with_escalation(Fn&& fn, ErrorKind kind, const ExpTerm& what) {
  try {
    return fn.template operator()<DoubleBackend>();
  } catch (const Undecided&) {
  }
  for (mpfr_prec_t prec : {128, 256, 512, 1024, 2048}) {
    detail::MpfrPrecisionScope scope(prec);
    try {
      return fn.template operator()<MpfrBackend>();
    } catch (const Undecided&) {
    }
  }
  throw Error(kind, "interval bounds did not separate at 2048 bits: " + what.to_string());
}

void require_numeric(const ExpTerm& t) {
  if (t.has_symbol()) {
    throw Error(ErrorKind::SymbolicUnsupported, "term has no numeric value: " + t.to_string());
  }
}

// a^x <= b^y when a <= b and x <= y; strictly greater when one side
// dominates with a strict base or exponent. Bases are >= 2 in canonical form.
std::optional<bool> compare_by_dominance(const ExpTerm& a, const ExpTerm& b) {
  if (!a.is_power() || !b.is_power()) return std::nullopt;
  try {
    const bool base_le = compare_le(a.base(), b.base());
    const bool exp_le = compare_le(a.exponent(), b.exponent());
    if (base_le && exp_le) return true;
    if (!base_le && !exp_le) return false;
    if (!base_le && compare_le(b.exponent(), a.exponent())) return false;
    if (!exp_le && compare_le(b.base(), a.base())) return false;
  } catch (const Error&) {
  }
  return std::nullopt;
}

// L(e + k) for a numeric term e >= 1 and a small k >= 0.
std::optional<unsigned> log_star_plus(const ExpTerm& e, std::uint64_t k) {
  if (k == 0) return log_star(e);
  auto v = eval_exact(e);
  if (v.is_exact()) return log_star(BigInt(v.value() + k));
  // 2^g < 2^g + k <= 2^(g+1) with no threshold strictly inside.
  if (auto g = pow2_exponent(e)) {
    if (auto l = log_star_plus(*g, 1)) return *l + 1;
  }
  return std::nullopt;
}

// floor(log2 x) and whether x is a power of two.
std::pair<std::uint64_t, bool> split_log2(const BigInt& x) {
  const std::uint64_t m = bit_length(x) - 1;
  return {m, boost::multiprecision::lsb(x) == m};
}

// Exact L for c^(2^e) and c * 2^g with exact c. For integer E and 0 < f < 1,
// L(E + f) = L(E + 1), so only floor(log2 log2 c) resp. floor(log2 c) and
// whether it is attained matter.
std::optional<unsigned> log_star_structural(const ExpTerm& t) {
  if (t.is_power()) {
    const auto a = eval_exact(t.base());
    if (a.is_huge() || a.value() < 2) return std::nullopt;
    const auto e = pow2_exponent(t.exponent());
    if (!e) return std::nullopt;
    const auto [m, a_pow2] = split_log2(a.value());
    const auto [n, m_pow2] = split_log2(BigInt(m));
    if (auto l = log_star_plus(*e, a_pow2 && m_pow2 ? n : n + 1)) return *l + 2;
    return std::nullopt;
  }
  if (t.is_product()) {
    BigInt c = 1;
    std::optional<ExpTerm> g;
    for (const auto& f : t.factors()) {
      auto v = eval_exact(f);
      if (v.is_exact()) {
        c *= v.value();
        if (bit_length(c) > 62) return std::nullopt;
        continue;
      }
      if (g) return std::nullopt;
      g = pow2_exponent(f);
      if (!g) return std::nullopt;
    }
    if (!g || c < 2) return std::nullopt;
    const auto [n, c_pow2] = split_log2(c);
    if (auto l = log_star_plus(*g, c_pow2 ? n : n + 1)) return *l + 1;
  }
  return std::nullopt;
}

}  // namespace

unsigned log_star(const BigInt& v) {
  if (v <= 1) return 0;
  if (v <= 2) return 1;
  if (v <= 4) return 2;
  if (v <= 16) return 3;
  if (v <= 65536) return 4;
  // v <= 2^65536 iff v - 1 fits in 65536 bits.
  if (bit_length(BigInt(v - 1)) <= 65536) return 5;
  return 6;
}

std::optional<ExpTerm> pow2_exponent(const ExpTerm& t) {
  switch (t.kind()) {
    case ExpTerm::Kind::Literal: {
      const BigInt& v = t.value();
      const std::size_t bits = bit_length(v);
      if (bits < 2 || boost::multiprecision::lsb(v) != bits - 1) return std::nullopt;
      return ExpTerm::literal(static_cast<std::uint64_t>(bits - 1));
    }
    case ExpTerm::Kind::Power: {
      auto e = pow2_exponent(t.base());
      if (!e) return std::nullopt;
      return ExpTerm::product(*e, t.exponent());
    }
    case ExpTerm::Kind::Product: {
      BigInt sum = 0;
      for (const auto& f : t.factors()) {
        auto e = pow2_exponent(f);
        if (!e) return std::nullopt;
        auto v = eval_exact(*e);
        if (v.is_huge()) return std::nullopt;
        sum += v.value();
      }
      return ExpTerm::literal(sum);
    }
    case ExpTerm::Kind::Symbol:
      break;
  }
  return std::nullopt;
}

unsigned log_star_interval(const ExpTerm& t) {
  require_numeric(t);
  return with_escalation(
      [&]<class B>() { return Magnitude<B>::log_star(Magnitude<B>::of(t)); },
      ErrorKind::UncertifiableLogStar, t);
}

unsigned log_star(const ExpTerm& t) {
  require_numeric(t);
  auto v = eval_exact(t);
  if (v.is_exact()) return log_star(v.value());
  // L(2^y) = L(y) + 1 for y >= 1.
  if (auto e = pow2_exponent(t)) return log_star(*e) + 1;
  if (auto l = log_star_structural(t)) return *l;
  return log_star_interval(t);
}

bool compare_le(const ExpTerm& a, const ExpTerm& b) {
  require_numeric(a);
  require_numeric(b);
  auto va = eval_exact(a);
  auto vb = eval_exact(b);
  if (va.is_exact() && vb.is_exact()) return va.value() <= vb.value();
  if (va.is_exact()) return true;
  if (vb.is_exact()) return false;
  if (a == b) return true;
  auto ea = pow2_exponent(a);
  auto eb = pow2_exponent(b);
  if (ea && eb) return compare_le(*ea, *eb);
  try {
    return with_escalation(
        [&]<class B>() { return Magnitude<B>::le(Magnitude<B>::of(a), Magnitude<B>::of(b)); },
        ErrorKind::UncertifiableComparison, ExpTerm::product(a, b));
  } catch (const Error&) {
    if (auto d = compare_by_dominance(a, b)) return *d;
    throw;
  }
}

bool compare_iter_log(const ExpTerm& a, unsigned r, const ExpTerm& b) {
  if (a.is_literal(1)) throw Error(ErrorKind::InvalidArgument, "compare_iter_log requires a >= 2");
  ExpTerm bound = b;
  const ExpTerm two = ExpTerm::literal(std::uint64_t{2});
  for (unsigned i = 0; i < r; ++i) bound = ExpTerm::power(two, bound);
  return compare_le(a, bound);
}

RationalEnclosure iterated_log2_enclosure(const ExpTerm& t, unsigned times, unsigned precision_bits) {
  require_numeric(t);
  detail::MpfrPrecisionScope scope(precision_bits);
  using M = Magnitude<MpfrBackend>;
  try {
    auto m = M::of(t);
    for (unsigned i = 0; i < times; ++i) m = M::normalize(M::log2(m));
    if (m.h != 0) throw Undecided{};
    if (!mpfr_number_p(m.y.lo.get()) || !mpfr_number_p(m.y.hi.get())) throw Undecided{};
    return {m.y.lo.to_rational(), m.y.hi.to_rational()};
  } catch (const Undecided&) {
    throw Error(ErrorKind::UncertifiableComparison,
                "no finite enclosure for iterated log of " + t.to_string());
  }
}

}  // namespace expramsey::tower
