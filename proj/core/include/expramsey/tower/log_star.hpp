#pragma once

#include <optional>

#include "expramsey/bigint.hpp"
#include "expramsey/tower/exp_term.hpp"

namespace expramsey::tower {

/// L(x) = min{k : log_(k) x <= 1} with base-2 logarithms; L(1) = 0.
///
/// Exact values under the cutoff are handled by bit inspection. Terms 2^y
/// use L(2^y) = L(y) + 1. Everything else goes through interval bounds on
/// the tower magnitude, escalating from doubles to MPFR at 128..2048 bits;
/// throws UncertifiableLogStar if the bounds never separate.
unsigned log_star(const ExpTerm& t);

/// L of an exact integer >= 1.
unsigned log_star(const BigInt& v);

/// L computed only from interval bounds on the magnitude, skipping the
/// exact and 2^y shortcuts. Used to cross-check log_star.
unsigned log_star_interval(const ExpTerm& t);

/// a <= b, decided exactly when possible, otherwise by certified intervals.
/// Throws UncertifiableComparison when undecidable within the precision cap.
bool compare_le(const ExpTerm& a, const ExpTerm& b);

/// log_(r) a <= b, i.e. a <= exp2^r(b). Precondition: a denotes >= 2.
bool compare_iter_log(const ExpTerm& a, unsigned r, const ExpTerm& b);

/// When t is structurally 2^e (a literal power of two, a power of such, or
/// a product of literal powers of two), returns e.
std::optional<ExpTerm> pow2_exponent(const ExpTerm& t);

/// Closed rational enclosure [lo, hi] of log2 applied `times` times to t.
/// Endpoints are dyadic rationals produced with directed rounding at the
/// given MPFR precision. Throws UncertifiableComparison if an intermediate
/// value is not positive or the result is too large to represent.
struct RationalEnclosure {
  BigRational lo;
  BigRational hi;
};
RationalEnclosure iterated_log2_enclosure(const ExpTerm& t, unsigned times, unsigned precision_bits);

}  // namespace expramsey::tower
