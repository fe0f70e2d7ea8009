#include "tower/interval.hpp"

#include <cstring>

#include <gmp.h>

#include "expramsey/error.hpp"

namespace expramsey::tower::detail {

namespace {

struct Mpz {
  Mpz() { mpz_init(v); }
  ~Mpz() { mpz_clear(v); }
  Mpz(const Mpz&) = delete;
  Mpz& operator=(const Mpz&) = delete;
  mpz_t v;
};

BigInt to_bigint(const mpz_t z) {
  std::string s(mpz_sizeinbase(z, 16) + 2, '\0');
  mpz_get_str(s.data(), 16, z);
  s.resize(std::strlen(s.c_str()));
  const bool neg = !s.empty() && s[0] == '-';
  BigInt r("0x" + s.substr(neg ? 1 : 0));
  return neg ? BigInt(-r) : r;
}

}  // namespace

BigRational MpReal::to_rational() const {
  if (!mpfr_number_p(v_)) throw Error(ErrorKind::InvalidArgument, "non-finite MPFR value");
  if (mpfr_zero_p(v_)) return BigRational(0);
  Mpz z;
  const mpfr_exp_t e = mpfr_get_z_2exp(z.v, v_);
  const BigInt m = to_bigint(z.v);
  if (e >= 0) return BigRational(m << static_cast<unsigned>(e));
  return BigRational(m, BigInt(1) << static_cast<unsigned>(-e));
}

MpReal MpReal::from_int(const BigInt& v, mpfr_rnd_t rnd) {
  MpReal r;
  if (auto s = to_u64(v)) {
    mpfr_set_ui(r.v_, static_cast<unsigned long>(*s), rnd);
    return r;
  }
  Mpz z;
  mpz_set_str(z.v, v.str(0, std::ios_base::hex).c_str(), 16);
  mpfr_set_z(r.v_, z.v, rnd);
  return r;
}

}  // namespace expramsey::tower::detail
