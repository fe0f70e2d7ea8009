#include "expramsey/colourings/lacunary.hpp"

#include <array>

#include "expramsey/error.hpp"
#include "expramsey/tower/arith.hpp"
#include "expramsey/tower/eval.hpp"
#include "expramsey/tower/log_star.hpp"

namespace expramsey::colourings {

namespace {

using boost::multiprecision::denominator;
using boost::multiprecision::numerator;

constexpr unsigned kMaxClasses = 12;  // 4^12 colours
constexpr std::array<unsigned, 5> kPrecisions{128, 256, 512, 1024, 2048};

BigInt floor_of(const BigRational& q) {
  BigInt n = numerator(q), d = denominator(q);
  BigInt f = n / d;
  if (n % d != 0 && n < 0) f -= 1;
  return f;
}

BigInt ceil_of(const BigRational& q) { return -floor_of(-q); }

// Quarter index 0..3 of {y}.
unsigned quarter_of(const BigRational& y) {
  BigInt f = floor_of(y * 4) % 4;
  if (f < 0) f += 4;
  return static_cast<unsigned>(f);
}

[[noreturn]] void not_lacunary(const std::string& why) {
  throw Error(ErrorKind::SequenceNotSufficientlyLacunary, why);
}

}  // namespace

std::vector<BigRational> sequence_terms(const std::string& seq, unsigned nmax) {
  const ExpTerm t = tower::parse_term(seq);
  const BigInt cutoff = BigInt(1) << 65536;
  const std::string names[] = {"n"};
  std::vector<BigRational> out;
  for (unsigned n = 1; n <= nmax; ++n) {
    const ExpTerm v = tower::substitute(t, names, std::array{ExpTerm::literal(std::uint64_t{n})});
    if (v.has_symbol()) throw Error(ErrorKind::Parse, "sequence may only use the symbol n: " + seq);
    auto e = tower::eval_exact(v, cutoff);
    if (e.is_huge()) throw Error(ErrorKind::ExactnessRequired, "sequence term too large: " + v.to_string());
    out.emplace_back(e.value());
  }
  return out;
}

LacunaryAlpha build_lacunary_alpha(const std::vector<BigRational>& b, const BigRational& margin) {
  if (b.empty()) throw Error(ErrorKind::InvalidArgument, "lacunary: empty sequence");
  if (margin < 0 || margin >= BigRational(1, 4)) throw Error(ErrorKind::InvalidArgument, "lacunary: bad margin");
  const BigRational low_edge = BigRational(1, 4) + margin;
  const BigRational high_edge = BigRational(3, 4) - margin;
  if (b[0] <= high_edge) throw Error(ErrorKind::InvalidArgument, "lacunary: first term must exceed 3/4");
  for (std::size_t n = 1; n < b.size(); ++n) {
    if (!(b[n] > 4 * b[n - 1])) {
      not_lacunary("term " + std::to_string(n + 1) + " is not more than 4 times term " + std::to_string(n));
    }
  }

  LacunaryAlpha out;
  out.terms = b;
  out.lo = low_edge / b[0];
  out.hi = high_edge / b[0];
  out.denominators.push_back(denominator(out.lo));
  for (std::size_t n = 1; n < b.size(); ++n) {
    const BigInt j = ceil_of(out.lo * b[n] - low_edge);
    const BigRational lo = (BigRational(j) + low_edge) / b[n];
    const BigRational hi = (BigRational(j) + high_edge) / b[n];
    if (hi > out.hi) not_lacunary("no admissible window for term " + std::to_string(n + 1));
    out.lo = lo;
    out.hi = hi;
    out.denominators.push_back(denominator(lo));
  }
  out.alpha = (out.lo + out.hi) / 2;
  for (const auto& t : b) {
    if (!alpha_avoids(out.alpha, t, t)) not_lacunary("constructed alpha fails exact verification");
  }
  return out;
}

bool alpha_avoids(const BigRational& alpha, const BigRational& lo, const BigRational& hi) {
  const BigRational y1 = alpha * lo, y2 = alpha * hi;
  const BigInt f = floor_of(y1);
  if (floor_of(y2) != f) return false;
  return y1 - BigRational(f) > BigRational(1, 4) && y2 - BigRational(f) < BigRational(3, 4);
}

LacunaryColouring::LacunaryColouring(std::vector<TermEnclosure> terms, std::string descriptor)
    : terms_(std::move(terms)), descriptor_(std::move(descriptor)) {
  if (terms_.empty()) throw Error(ErrorKind::InvalidArgument, "lacunary: empty sequence");
  bool exact = true;
  for (std::size_t n = 0; n < terms_.size(); ++n) {
    if (terms_[n].lo <= 0 || terms_[n].hi < terms_[n].lo) {
      throw Error(ErrorKind::InvalidArgument, "lacunary: terms must be positive");
    }
    exact = exact && terms_[n].lo == terms_[n].hi;
  }
  // Smallest certified ratio between consecutive terms.
  unsigned l = 1;
  if (terms_.size() > 1) {
    BigRational rho = terms_[1].lo / terms_[0].hi;
    for (std::size_t n = 2; n < terms_.size(); ++n) {
      rho = std::min(rho, BigRational(terms_[n].lo / terms_[n - 1].hi));
    }
    if (rho <= 1) not_lacunary("sequence is not increasing");
    BigRational p = rho;
    while (p <= 4) {
      if (++l > kMaxClasses) not_lacunary("ratio too close to 1");
      p *= rho;
    }
  }
  // Inexact terms need slack so the whole enclosure lands inside the window.
  const BigRational margin = exact ? BigRational(0) : BigRational(1, 16);
  for (unsigned i = 0; i < l && i < terms_.size(); ++i) {
    std::vector<BigRational> lows;
    for (std::size_t n = i; n < terms_.size(); n += l) lows.push_back(terms_[n].lo);
    LacunaryAlpha a = build_lacunary_alpha(lows, margin);
    for (std::size_t n = i; n < terms_.size(); n += l) {
      if (!alpha_avoids(a.alpha, terms_[n].lo, terms_[n].hi)) {
        throw Error(ErrorKind::UncertifiableComparison, "term enclosure too wide for term " + std::to_string(n + 1));
      }
    }
    alphas_.push_back(std::move(a));
  }
  k_ = 1;
  for (std::size_t i = 0; i < alphas_.size(); ++i) k_ *= 4;
}

std::string LacunaryColouring::label(unsigned c) const {
  if (alphas_.size() == 1) return std::to_string(c);
  std::string s = "(";
  unsigned rest = c - 1;
  for (std::size_t i = 0; i < alphas_.size(); ++i) {
    s += (i ? "," : "") + std::to_string(rest % 4 + 1);
    rest /= 4;
  }
  return s + ")";
}

unsigned LacunaryColouring::colour_integer(const BigInt& x) const {
  unsigned c = 0, scale = 1;
  for (const auto& a : alphas_) {
    c += quarter_of(a.alpha * x) * scale;
    scale *= 4;
  }
  return c + 1;
}

std::optional<unsigned> LacunaryColouring::colour_real(const BigRational& lo, const BigRational& hi) const {
  unsigned c = 0, scale = 1;
  for (const auto& a : alphas_) {
    // floor(4y) pins both the integer part and the quarter.
    const BigInt f = floor_of(a.alpha * lo * 4);
    if (floor_of(a.alpha * hi * 4) != f) return std::nullopt;
    BigInt q = f % 4;
    if (q < 0) q += 4;
    c += static_cast<unsigned>(q) * scale;
    scale *= 4;
  }
  return c + 1;
}

unsigned LacunaryColouring::colour(const ExpTerm& x) const {
  if (auto v = x.small_value()) return colour_integer(from_u128(*v));
  unsigned c = 0, scale = 1;
  for (const auto& a : alphas_) {
    // {alpha x} = (p * (x mod q) mod q) / q
    const BigInt q = denominator(a.alpha);
    BigInt r;
    if (auto q64 = to_u64(q)) {
      r = BigInt(tower::eval_mod(x, *q64));
    } else {
      auto e = tower::eval_exact(x);
      if (e.is_huge()) throw Error(ErrorKind::ExactnessRequired, "lacunary colour of a huge term: " + x.to_string());
      r = e.value() % q;
    }
    c += quarter_of(BigRational((numerator(a.alpha) * r) % q, q)) * scale;
    scale *= 4;
  }
  return c + 1;
}

std::shared_ptr<const LacunaryColouring> lacunary_colouring(const std::string& seq, unsigned nmax) {
  if (nmax < 1) throw Error(ErrorKind::InvalidArgument, "lacunary: nmax must be >= 1");
  std::vector<TermEnclosure> terms;
  for (auto& b : sequence_terms(seq, nmax)) terms.push_back({b, b});
  const std::string canon = tower::parse_term(seq).to_string();
  return std::make_shared<LacunaryColouring>(std::move(terms),
                                             "lacunary:seq=" + canon + ",nmax=" + std::to_string(nmax));
}

namespace {

class Pow2AbbColouring final : public Colouring {
 public:
  explicit Pow2AbbColouring(unsigned range) : range_(range), f_(lacunary_colouring("n*2^n", range)) {}
  unsigned k() const override { return f_->k() + 2; }
  unsigned colour(const ExpTerm& x) const override {
    if (x.is_literal(1)) return k();
    auto v = tower::valuation_term(x, 2);
    if (!v) return k() - 1;
    auto w = tower::valuation_term(*v, 2);
    if (!w) return f_->colour_integer(0);
    return f_->colour(*w);
  }
  unsigned colour(std::uint64_t x) const override {
    if (x == 0) throw Error(ErrorKind::OutOfDomain, "colourings are defined on positive integers");
    if (x == 1) return k();
    if (x & 1) return k() - 1;
    const unsigned s = static_cast<unsigned>(__builtin_ctzll(x));
    return f_->colour_integer(__builtin_ctz(s));
  }
  std::string descriptor() const override { return "pow2abb:range=" + std::to_string(range_); }
  std::string label(unsigned c) const override {
    if (c == k()) return "one";
    if (c == k() - 1) return "odd";
    return f_->label(c);
  }

 private:
  unsigned range_;
  std::shared_ptr<const LacunaryColouring> f_;
};

std::vector<TermEnclosure> abbb_terms(unsigned range) {
  std::vector<TermEnclosure> out;
  for (unsigned n = 2; n <= range; ++n) {
    BigInt nn = 1;
    for (unsigned i = 0; i < n; ++i) nn *= n;
    auto lg = tower::iterated_log2_enclosure(ExpTerm::literal(std::uint64_t{n}), 1, 256);
    out.push_back({lg.lo * nn, lg.hi * nn});
  }
  return out;
}

class AbbbColouring final : public Colouring {
 public:
  explicit AbbbColouring(unsigned range)
      : range_(range),
        f_(std::make_shared<LacunaryColouring>(abbb_terms(range), "abbb-base:range=" + std::to_string(range))) {}
  unsigned k() const override { return f_->k() + 2; }
  unsigned colour(const ExpTerm& x) const override {
    if (x.is_literal(2)) return k();
    if (x.is_literal(1)) return k() - 1;
    for (unsigned prec : kPrecisions) {
      auto e = tower::iterated_log2_enclosure(x, 2, prec);
      if (auto c = f_->colour_real(e.lo, e.hi)) return *c;
    }
    throw Error(ErrorKind::UncertifiableComparison, "cannot place log2 log2 of " + x.to_string() + " in a quarter");
  }
  std::string descriptor() const override { return "abbb:range=" + std::to_string(range_); }
  std::string label(unsigned c) const override {
    if (c == k()) return "two";
    if (c == k() - 1) return "one";
    return f_->label(c);
  }

 private:
  unsigned range_;
  std::shared_ptr<const LacunaryColouring> f_;
};

}  // namespace

ColouringPtr pow2_abb_colouring(unsigned range) {
  if (range < 1) throw Error(ErrorKind::InvalidArgument, "pow2abb: range must be >= 1");
  return std::make_shared<Pow2AbbColouring>(range);
}

ColouringPtr abbb_colouring(unsigned range) {
  if (range < 2) throw Error(ErrorKind::InvalidArgument, "abbb: range must be >= 2");
  return std::make_shared<AbbbColouring>(range);
}

}  // namespace expramsey::colourings
