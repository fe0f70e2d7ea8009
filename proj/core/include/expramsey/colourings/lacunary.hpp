#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "expramsey/bigint.hpp"
#include "expramsey/colourings/colouring.hpp"

namespace expramsey::colourings {

/// A rational alpha in (0,1) with {alpha * b} in (1/4, 3/4) for every term
/// b it was built for, plus the nested interval it was taken from.
struct LacunaryAlpha {
  BigRational alpha;
  BigRational lo;
  BigRational hi;
  std::vector<BigRational> terms;
  /// Denominator of each nested interval's endpoints, one per term.
  std::vector<BigInt> denominators;
};

/// Nested-interval construction: I_1 has length 1/(2 b_1) and each I_{n+1}
/// inside I_n is a window where {alpha b_{n+1}} stays in [1/4+margin,
/// 3/4-margin]. alpha is the midpoint of the last interval. Requires
/// b_{n+1} > 4 b_n (SequenceNotSufficientlyLacunary otherwise) and b_1 > 3/4.
LacunaryAlpha build_lacunary_alpha(const std::vector<BigRational>& b, const BigRational& margin = 0);

/// b_n = seq(n) for n = 1..nmax, seq in tower syntax over the symbol n.
std::vector<BigRational> sequence_terms(const std::string& seq, unsigned nmax);

/// True iff {alpha x} lies in (1/4, 3/4) for every x in [lo, hi] (exact).
bool alpha_avoids(const BigRational& alpha, const BigRational& lo, const BigRational& hi);

/// Enclosure of a sequence term; lo == hi for exact terms.
struct TermEnclosure {
  BigRational lo;
  BigRational hi;
};

/// Colouring of the reals with no monochromatic pair x, x + a_n for the
/// given terms. The terms are split into l residue classes by index, with
/// l the least integer such that rho^l > 4 for the smallest consecutive
/// ratio rho; each class gets its own alpha and contributes a factor 4.
class LacunaryColouring : public Colouring {
 public:
  LacunaryColouring(std::vector<TermEnclosure> terms, std::string descriptor);

  unsigned k() const override { return k_; }
  unsigned colour(const ExpTerm& x) const override;
  unsigned colour(std::uint64_t x) const override { return colour_integer(BigInt(x)); }
  std::string descriptor() const override { return descriptor_; }
  std::string label(unsigned c) const override;

  /// Any integer, including 0 and negatives.
  unsigned colour_integer(const BigInt& x) const;
  /// Colour of every real in [lo, hi], or nullopt if the enclosure straddles
  /// a quarter boundary for some class.
  std::optional<unsigned> colour_real(const BigRational& lo, const BigRational& hi) const;

  unsigned classes() const { return static_cast<unsigned>(alphas_.size()); }
  const std::vector<LacunaryAlpha>& alphas() const { return alphas_; }
  const std::vector<TermEnclosure>& terms() const { return terms_; }

 private:
  std::vector<TermEnclosure> terms_;
  std::vector<LacunaryAlpha> alphas_;
  std::string descriptor_;
  unsigned k_ = 1;
};

/// Terms b_n = seq(n) for n = 1..nmax, where seq is tower syntax in the
/// symbol n (e.g. "n*2^n"). Terms must evaluate exactly.
std::shared_ptr<const LacunaryColouring> lacunary_colouring(const std::string& seq, unsigned nmax);

/// c(x) = f(v2(v2(x))) with f the lacunary colouring for n*2^n, n <= range.
/// x = 1 gets colour k and odd x > 1 (where v2(v2(x)) is undefined) gets k-1.
ColouringPtr pow2_abb_colouring(unsigned range);

/// c(x) = f(log2 log2 x) with f the lacunary colouring of the reals for
/// n^n log2 n, 2 <= n <= range. x = 2 gets colour k and x = 1 gets k-1.
ColouringPtr abbb_colouring(unsigned range);

}  // namespace expramsey::colourings
