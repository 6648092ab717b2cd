#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace pisum {

using BigInt = mpz_class;

inline std::size_t bit_length(const BigInt& x) {
  return mpz_sgn(x.get_mpz_t()) == 0 ? 0 : mpz_sizeinbase(x.get_mpz_t(), 2);
}

inline BigInt pow(const BigInt& base, unsigned long exp) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
  return r;
}

inline BigInt binomial(unsigned long n, unsigned long k) {
  BigInt r;
  if (k > n) return r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

inline BigInt factorial(unsigned long n) {
  BigInt r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return r;
}

inline BigInt shift_left(const BigInt& x, std::int64_t bits) {
  BigInt r;
  if (bits >= 0)
    mpz_mul_2exp(r.get_mpz_t(), x.get_mpz_t(), static_cast<mp_bitcnt_t>(bits));
  else
    mpz_fdiv_q_2exp(r.get_mpz_t(), x.get_mpz_t(), static_cast<mp_bitcnt_t>(-bits));
  return r;
}

/// Divides by 2^bits rounding to nearest (ties away from zero).
inline BigInt shift_right_round(const BigInt& x, std::int64_t bits) {
  if (bits <= 0) return shift_left(x, -bits);
  BigInt r;
  BigInt half = shift_left(BigInt(1), bits - 1);
  if (sgn(x) >= 0) {
    BigInt t = x + half;
    mpz_fdiv_q_2exp(r.get_mpz_t(), t.get_mpz_t(), static_cast<mp_bitcnt_t>(bits));
  } else {
    BigInt t = -x + half;
    mpz_fdiv_q_2exp(r.get_mpz_t(), t.get_mpz_t(), static_cast<mp_bitcnt_t>(bits));
    r = -r;
  }
  return r;
}

/// num/den rounded to nearest; den must be nonzero.
inline BigInt div_round(const BigInt& num, const BigInt& den) {
  BigInt n2 = 2 * num;
  BigInt d2 = 2 * den;
  BigInt q;
  // floor((2n + d) / 2d) for positive denominators
  if (sgn(den) > 0) {
    BigInt t = n2 + den;
    mpz_fdiv_q(q.get_mpz_t(), t.get_mpz_t(), d2.get_mpz_t());
  } else {
    BigInt t = -n2 - den;
    BigInt pd = -d2;
    mpz_fdiv_q(q.get_mpz_t(), t.get_mpz_t(), pd.get_mpz_t());
  }
  return q;
}

inline BigInt gcd(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline BigInt lcm(const BigInt& a, const BigInt& b) {
  BigInt r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

inline bool is_squarefree(long m) {
  if (m < 1) return false;
  for (long p = 2; p * p <= m; ++p)
    if (m % (p * p) == 0) return false;
  return true;
}

inline std::string to_string(const BigInt& x) { return x.get_str(); }

}  // namespace pisum
