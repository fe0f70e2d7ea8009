#pragma once

// Tower magnitudes: a value is represented as exp2^h(y) with y enclosed in
// an interval. Height grows only when y would otherwise leave the backend's
// comfortable range, so terms like 3^(5^(7^9)) stay cheap to bound.

#include "expramsey/error.hpp"
#include "expramsey/tower/eval.hpp"
#include "expramsey/tower/exp_term.hpp"
#include "tower/interval.hpp"

namespace expramsey::tower::detail {

/// Bounds too wide to decide; callers escalate precision.
struct Undecided {};

template <class B>
struct Mag {
  unsigned h = 0;
  typename B::I y;
};

template <class B>
struct Magnitude {
  using M = Mag<B>;

  static constexpr unsigned kMaxLogStar = 64;

  static M zero() { return {0, B::zero()}; }

  static M normalize(M m) {
    while (m.h >= 1 && B::hi_le(m.y, B::kLowerThreshold)) {
      m.y = B::exp2(m.y);
      --m.h;
    }
    return m;
  }

  static M raise(M m) {
    ++m.h;
    return normalize(std::move(m));
  }

  static M log2(M m) {
    if (m.h >= 1) {
      --m.h;
      return m;
    }
    m.y = B::log2(m.y);
    return m;
  }

  // Re-express m at a greater height; values <= 0 lift to -inf.
  static M lift(M m, unsigned h) {
    while (m.h < h) {
      m.y = B::log2(m.y);
      ++m.h;
    }
    return m;
  }

  static M sum(M a, M b) {
    if (a.h == 0 && B::is_zero(a.y)) return b;
    if (b.h == 0 && B::is_zero(b.y)) return a;
    if (a.h == 0 && b.h == 0) return {0, B::add(a.y, b.y)};
    const unsigned h = std::max(a.h, b.h);
    a = lift(std::move(a), h);
    b = lift(std::move(b), h);
    if (h == 1) return normalize({1, B::log2_sum_exp2(a.y, b.y)});
    // a + b = 2^X + 2^Y with X, Y at height h-1, and
    // log2(2^X + 2^Y) = max(X, Y) + theta, theta in [0, 1].
    auto top = B::hull_max(a.y, b.y);
    if (!B::lo_gt(top, 0)) throw Undecided{};
    return normalize({h, B::add_perturbation(top, h - 1, 1.0)});
  }

  static M of(const ExpTerm& t) {
    if (auto v = eval_small(t, ~u128{0} >> 2)) return {0, B::from_u128(*v)};
    switch (t.kind()) {
      case ExpTerm::Kind::Literal: {
        const BigInt& v = t.value();
        if (bit_length(v) <= B::kMaxExactBits) return {0, B::from_int(v)};
        return normalize({1, B::log2_of_int(v)});
      }
      case ExpTerm::Kind::Product: {
        M s = zero();
        for (const auto& f : t.factors()) s = sum(std::move(s), log2(of(f)));
        return raise(std::move(s));
      }
      case ExpTerm::Kind::Power: {
        // log2 log2 (a^b) = log2 b + log2 log2 a
        M lla = log2(log2(of(t.base())));
        M lb = log2(of(t.exponent()));
        return raise(raise(sum(std::move(lb), std::move(lla))));
      }
      case ExpTerm::Kind::Symbol:
        break;
    }
    throw Error(ErrorKind::SymbolicUnsupported, "term has no numeric value: " + t.to_string());
  }

  static unsigned log_star_real(typename B::I y) {
    for (unsigned k = 0; k < kMaxLogStar; ++k) {
      if (B::hi_le(y, 1.0)) return k;
      if (!B::lo_gt(y, 1.0)) throw Undecided{};
      y = B::log2(y);
    }
    throw Undecided{};
  }

  static unsigned log_star(const M& m) {
    if (m.h == 0) return log_star_real(m.y);
    if (!B::lo_gt(m.y, 0.0)) throw Undecided{};
    return m.h + log_star_real(m.y);
  }

  static bool le(M a, M b) {
    const unsigned h = std::max(a.h, b.h);
    a = lift(std::move(a), h);
    b = lift(std::move(b), h);
    if (B::same_point(a.y, b.y)) return true;
    if (B::certainly_le(a.y, b.y)) return true;
    if (B::certainly_gt(a.y, b.y)) return false;
    throw Undecided{};
  }
};

}  // namespace expramsey::tower::detail
