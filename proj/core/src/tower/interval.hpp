#pragma once

// Interval backends for certified comparisons on iterated logarithms.
//
// Both backends enclose the true real in [lo, hi]. DoubleBackend is the fast
// path: IEEE arithmetic with error-free transforms for + and *, and libm
// results widened by kLibmUlps ulps on each side. MpfrBackend uses directed
// rounding (RNDD for lo, RNDU for hi) at the thread's current precision.

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include <mpfr.h>

#include "expramsey/bigint.hpp"

namespace expramsey::tower::detail {

inline double next_up(double x) { return std::nextafter(x, std::numeric_limits<double>::infinity()); }
inline double next_down(double x) { return std::nextafter(x, -std::numeric_limits<double>::infinity()); }

struct DoubleInterval {
  double lo;
  double hi;
};

struct DoubleBackend {
  using I = DoubleInterval;
  static constexpr const char* kName = "double";
  static constexpr std::size_t kMaxExactBits = 1000;
  // A level-h magnitude with y.hi below this is lowered to level h-1.
  static constexpr double kLowerThreshold = 1000.0;
  static constexpr int kLibmUlps = 2;

  static I point(double x) { return {x, x}; }
  static I zero() { return {0.0, 0.0}; }
  static bool is_zero(const I& a) { return a.lo == 0.0 && a.hi == 0.0; }
  static bool is_point(const I& a) { return a.lo == a.hi; }

  static double widen_down(double x, int ulps) {
    for (int i = 0; i < ulps; ++i) x = next_down(x);
    return x;
  }
  static double widen_up(double x, int ulps) {
    for (int i = 0; i < ulps; ++i) x = next_up(x);
    return x;
  }

  static I from_u128(u128 v) {
    const double d = static_cast<double>(v);
    if (d == d && static_cast<u128>(d) == v) return {d, d};
    return {next_down(d), next_up(d)};
  }

  static I from_int(const BigInt& v) {
    if (auto s = to_u128(v)) return from_u128(*s);
    const double d = v.convert_to<double>();
    return {next_down(next_down(d)), next_up(next_up(d))};
  }

  // log2 of an integer too large for kMaxExactBits.
  static I log2_of_int(const BigInt& v) {
    const std::size_t bits = bit_length(v);
    const std::size_t shift = bits - 64;
    const BigInt top = v >> shift;
    const auto t = top.convert_to<std::uint64_t>();
    // v in [t * 2^shift, (t+1) * 2^shift)
    I lt = log2(from_u128(t));
    I lt1 = log2(from_u128(static_cast<u128>(t) + 1));
    const double s = static_cast<double>(shift);
    return add({lt.lo, lt1.hi}, {s, s});
  }

  static double add_down(double a, double b) {
    const double s = a + b;
    if (!std::isfinite(s)) return s;
    const double bb = s - a;
    const double err = (a - (s - bb)) + (b - bb);
    return err < 0 ? next_down(s) : s;
  }
  static double add_up(double a, double b) {
    const double s = a + b;
    if (!std::isfinite(s)) return s;
    const double bb = s - a;
    const double err = (a - (s - bb)) + (b - bb);
    return err > 0 ? next_up(s) : s;
  }

  static I add(const I& a, const I& b) { return {add_down(a.lo, b.lo), add_up(a.hi, b.hi)}; }

  static double log2_down(double x) {
    if (x <= 0) return -std::numeric_limits<double>::infinity();
    if (std::isinf(x)) return x;
    int e;
    const double m = std::frexp(x, &e);
    if (m == 0.5) return static_cast<double>(e - 1);
    return widen_down(std::log2(x), kLibmUlps);
  }
  static double log2_up(double x) {
    if (x <= 0) return -std::numeric_limits<double>::infinity();
    if (std::isinf(x)) return x;
    int e;
    const double m = std::frexp(x, &e);
    if (m == 0.5) return static_cast<double>(e - 1);
    return widen_up(std::log2(x), kLibmUlps);
  }
  static I log2(const I& a) { return {log2_down(a.lo), log2_up(a.hi)}; }

  static double exp2_down(double x) {
    if (x == std::floor(x) && std::fabs(x) < 1000) return std::ldexp(1.0, static_cast<int>(x));
    const double r = std::exp2(x);
    if (std::isinf(r)) return DBL_MAX;
    return std::max(0.0, widen_down(r, kLibmUlps));
  }
  static double exp2_up(double x) {
    if (x == std::floor(x) && std::fabs(x) < 1000) return std::ldexp(1.0, static_cast<int>(x));
    const double r = std::exp2(x);
    if (std::isinf(r)) return r;
    return widen_up(r, kLibmUlps);
  }
  static I exp2(const I& a) { return {exp2_down(a.lo), exp2_up(a.hi)}; }

  // log2(2^p + 2^q), increasing in both arguments.
  static double log2_sum_exp2_dir(double p, double q, bool up) {
    const double m = std::max(p, q);
    const double n = std::min(p, q);
    if (std::isinf(n) && n < 0) return m;
    if (n == m) return up ? add_up(m, 1.0) : add_down(m, 1.0);
    const double t = up ? add_up(n, -m) : add_down(n, -m);
    const double g = std::log1p(std::exp2(t)) / std::log(2.0);
    const double gg = up ? widen_up(g, 4) : std::max(0.0, widen_down(g, 4));
    return up ? add_up(m, gg) : add_down(m, gg);
  }
  static I log2_sum_exp2(const I& p, const I& q) {
    return {log2_sum_exp2_dir(p.lo, q.lo, false), log2_sum_exp2_dir(p.hi, q.hi, true)};
  }

  static I hull_max(const I& a, const I& b) { return {std::max(a.lo, b.lo), std::max(a.hi, b.hi)}; }

  // y' >= y with exp2^g(y') = exp2^g(y) + theta, theta in [0, theta_hi].
  static I add_perturbation(const I& y, unsigned g, double theta_hi) {
    double levels[64];
    double v = y.lo;
    for (unsigned j = 0; j < g && j < 64; ++j) {
      v = exp2_down(v);
      levels[j] = v;
    }
    double d = theta_hi;
    for (unsigned j = g; j-- > 0;) {
      const double denom = std::max(levels[j], 1e-300) * 0.6931471805599452;  // below ln 2
      d = widen_up(d / denom, 1);
    }
    return {y.lo, next_up(add_up(y.hi, d))};
  }

  static bool lo_gt(const I& a, double c) { return a.lo > c; }
  static bool hi_le(const I& a, double c) { return a.hi <= c; }
  static bool certainly_le(const I& a, const I& b) { return a.hi <= b.lo; }
  static bool certainly_gt(const I& a, const I& b) { return a.lo > b.hi; }
  static bool same_point(const I& a, const I& b) { return a.lo == a.hi && b.lo == b.hi && a.lo == b.lo; }
};

/// Thread-local working precision for MpReal.
inline thread_local mpfr_prec_t g_mpfr_precision = 128;

class MpfrPrecisionScope {
 public:
  explicit MpfrPrecisionScope(mpfr_prec_t prec) : saved_(g_mpfr_precision) { g_mpfr_precision = prec; }
  ~MpfrPrecisionScope() { g_mpfr_precision = saved_; }
  MpfrPrecisionScope(const MpfrPrecisionScope&) = delete;
  MpfrPrecisionScope& operator=(const MpfrPrecisionScope&) = delete;

 private:
  mpfr_prec_t saved_;
};

class MpReal {
 public:
  MpReal() { mpfr_init2(v_, g_mpfr_precision); mpfr_set_zero(v_, 1); }
  explicit MpReal(double d) { mpfr_init2(v_, g_mpfr_precision); mpfr_set_d(v_, d, MPFR_RNDN); }
  MpReal(const MpReal& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  MpReal(MpReal&& o) noexcept {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
  }
  MpReal& operator=(const MpReal& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  MpReal& operator=(MpReal&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~MpReal() { mpfr_clear(v_); }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }

  /// Exact dyadic value as a rational (finite values only).
  BigRational to_rational() const;
  static MpReal from_int(const BigInt& v, mpfr_rnd_t rnd);

 private:
  mpfr_t v_;
};

struct MpfrInterval {
  MpReal lo;
  MpReal hi;
};

struct MpfrBackend {
  using I = MpfrInterval;
  static constexpr const char* kName = "mpfr";
  static constexpr std::size_t kMaxExactBits = 1u << 16;
  static constexpr double kLowerThreshold = 1u << 20;

  static I point(double x) { return {MpReal(x), MpReal(x)}; }
  static I zero() { return point(0.0); }
  static bool is_zero(const I& a) { return mpfr_zero_p(a.lo.get()) && mpfr_zero_p(a.hi.get()); }
  static bool is_point(const I& a) { return mpfr_equal_p(a.lo.get(), a.hi.get()); }

  static I from_u128(u128 v) { return from_int(expramsey::from_u128(v)); }
  static I from_int(const BigInt& v) {
    return {MpReal::from_int(v, MPFR_RNDD), MpReal::from_int(v, MPFR_RNDU)};
  }
  static I log2_of_int(const BigInt& v) {
    const std::size_t bits = bit_length(v);
    const std::size_t shift = bits - 256;
    const BigInt top = v >> shift;
    I r = log2({MpReal::from_int(top, MPFR_RNDD), MpReal::from_int(top + 1, MPFR_RNDU)});
    const double s = static_cast<double>(shift);
    return add(r, point(s));
  }

  static I add(const I& a, const I& b) {
    I r;
    mpfr_add(r.lo.get(), a.lo.get(), b.lo.get(), MPFR_RNDD);
    mpfr_add(r.hi.get(), a.hi.get(), b.hi.get(), MPFR_RNDU);
    return r;
  }

  static void log2_dir(mpfr_ptr out, mpfr_srcptr x, mpfr_rnd_t rnd) {
    if (mpfr_sgn(x) <= 0) {
      mpfr_set_inf(out, -1);
      return;
    }
    mpfr_log2(out, x, rnd);
  }
  static I log2(const I& a) {
    I r;
    log2_dir(r.lo.get(), a.lo.get(), MPFR_RNDD);
    log2_dir(r.hi.get(), a.hi.get(), MPFR_RNDU);
    return r;
  }
  static I exp2(const I& a) {
    I r;
    mpfr_exp2(r.lo.get(), a.lo.get(), MPFR_RNDD);
    mpfr_exp2(r.hi.get(), a.hi.get(), MPFR_RNDU);
    return r;
  }

  static void log2_sum_exp2_dir(mpfr_ptr out, mpfr_srcptr p, mpfr_srcptr q, mpfr_rnd_t rnd) {
    const bool p_big = mpfr_greaterequal_p(p, q);
    mpfr_srcptr m = p_big ? p : q;
    mpfr_srcptr n = p_big ? q : p;
    if (mpfr_inf_p(n) && mpfr_sgn(n) < 0) {
      mpfr_set(out, m, rnd);
      return;
    }
    MpReal t, e;
    mpfr_sub(t.get(), n, m, rnd);
    mpfr_exp2(e.get(), t.get(), rnd);
    mpfr_add_ui(e.get(), e.get(), 1, rnd);
    mpfr_log2(e.get(), e.get(), rnd);
    mpfr_add(out, m, e.get(), rnd);
  }
  static I log2_sum_exp2(const I& p, const I& q) {
    I r;
    log2_sum_exp2_dir(r.lo.get(), p.lo.get(), q.lo.get(), MPFR_RNDD);
    log2_sum_exp2_dir(r.hi.get(), p.hi.get(), q.hi.get(), MPFR_RNDU);
    return r;
  }

  static I hull_max(const I& a, const I& b) {
    I r;
    mpfr_max(r.lo.get(), a.lo.get(), b.lo.get(), MPFR_RNDD);
    mpfr_max(r.hi.get(), a.hi.get(), b.hi.get(), MPFR_RNDU);
    return r;
  }

  static I add_perturbation(const I& y, unsigned g, double theta_hi) {
    std::vector<MpReal> levels;
    MpReal v = y.lo;
    for (unsigned j = 0; j < g; ++j) {
      mpfr_exp2(v.get(), v.get(), MPFR_RNDD);
      levels.push_back(v);
    }
    MpReal d(theta_hi);
    MpReal ln2;
    mpfr_const_log2(ln2.get(), MPFR_RNDD);
    for (unsigned j = g; j-- > 0;) {
      MpReal denom;
      mpfr_mul(denom.get(), levels[j].get(), ln2.get(), MPFR_RNDD);
      mpfr_div(d.get(), d.get(), denom.get(), MPFR_RNDU);
    }
    I r{y.lo, MpReal()};
    mpfr_add(r.hi.get(), y.hi.get(), d.get(), MPFR_RNDU);
    return r;
  }

  static bool lo_gt(const I& a, double c) { return mpfr_cmp_d(a.lo.get(), c) > 0; }
  static bool hi_le(const I& a, double c) { return mpfr_cmp_d(a.hi.get(), c) <= 0; }
  static bool certainly_le(const I& a, const I& b) { return mpfr_lessequal_p(a.hi.get(), b.lo.get()); }
  static bool certainly_gt(const I& a, const I& b) { return mpfr_greater_p(a.lo.get(), b.hi.get()); }
  static bool same_point(const I& a, const I& b) {
    return is_point(a) && is_point(b) && mpfr_equal_p(a.lo.get(), b.lo.get());
  }
};

}  // namespace expramsey::tower::detail
