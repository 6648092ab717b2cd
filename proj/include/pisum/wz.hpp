#pragma once

#include <functional>

#include "pisum/hyperseries.hpp"

namespace pisum {

/// A WZ pair on the integer lattice: F(n,k+1) - F(n,k) = G(n-1,k) - G(n,k).
struct WZPair {
  std::function<Rational(long, long)> F;
  std::function<Rational(long, long)> G;
};

namespace detail {

/// (x)_n, stopping at the first zero factor.
inline Rational rising(const Rational& x, long n) {
  Rational r(1);
  for (long i = 0; i < n; ++i) {
    Rational f = x + Rational(i);
    if (f.is_zero()) return Rational(0);
    r *= f;
  }
  return r;
}

inline Rational wz_F(long n, long k) {
  if (n < 0 || k < 0) return Rational(0);
  // (-k)_n vanishes for n > k; test before touching any denominator
  Rational mk = rising(Rational(-k), n);
  if (mk.is_zero()) return mk;
  const Rational half(1, 2), three_halves(3, 2);
  Rational h = rising(half, n);
  Rational v = Rational(4 * n + 1) * h * h * mk / (Rational(factorial(static_cast<unsigned long>(n)) *
                                                              factorial(static_cast<unsigned long>(n))) *
                                                     rising(three_halves + Rational(k), n));
  if (n % 2) v = -v;
  // Gamma(3/2) Gamma(1+k) / Gamma(3/2+k) = k! / (3/2)_k
  return v * Rational(factorial(static_cast<unsigned long>(k))) / rising(three_halves, k);
}

inline std::function<Rational(long, long)> wz_G(long square_power) {
  return [square_power](long n, long k) {
    if (n < 0) return Rational(0);
    Rational c = Rational(2 * n + 1).pow(square_power) / Rational((2 * n + 2 * k + 3) * (4 * n + 1));
    return c * wz_F(n, k);
  };
}

}  // namespace detail

/// The pair behind the terminating identity sum_n F(n,k) = 1.
inline WZPair wz_pair() { return {detail::wz_F, detail::wz_G(2)}; }

/// G with (2n+1)^2 replaced by (2n+1); used as a negative control.
inline WZPair wz_pair_perturbed() { return {detail::wz_F, detail::wz_G(1)}; }

/// Exact check of F(n,k+1) - F(n,k) = G(n-1,k) - G(n,k) on the grid
/// 0 <= n <= n_max, 0 <= k <= k_max.
inline bool check_telescoping(const WZPair& p, long n_max, long k_max) {
  for (long n = 0; n <= n_max; ++n)
    for (long k = 0; k <= k_max; ++k)
      if (p.F(n, k + 1) - p.F(n, k) != p.G(n - 1, k) - p.G(n, k)) return false;
  return true;
}

inline bool check_telescoping(long n_max, long k_max) { return check_telescoping(wz_pair(), n_max, k_max); }

/// sum_{n=0}^{k} F(n,k) == 1 for every 0 <= k <= k_max.
inline bool check_sum_is_one(long k_max) {
  for (long k = 0; k <= k_max; ++k) {
    Rational s;
    for (long n = 0; n <= k; ++n) s += detail::wz_F(n, k);
    if (s != Rational(1)) return false;
  }
  return true;
}

/// Terminating left side sum_n (1/2)_n^2 (-k)_n / (n!^2 (3/2+k)_n) (4n+1)(-1)^n.
inline Rational e15_lhs(long k) {
  Rational s;
  for (long n = 0; n <= k; ++n) {
    Rational h = detail::rising(Rational(1, 2), n);
    BigInt f = factorial(static_cast<unsigned long>(n));
    Rational t = Rational(4 * n + 1) * h * h * detail::rising(Rational(-k), n) /
                 (Rational(f * f) * detail::rising(Rational(3, 2) + Rational(k), n));
    s += n % 2 ? -t : t;
  }
  return s;
}

/// e15 against its Gamma quotient (3/2)_k / k! for 0 <= k <= k_max.
inline bool check_e15(long k_max) {
  for (long k = 0; k <= k_max; ++k)
    if (e15_lhs(k) != detail::rising(Rational(3, 2), k) / Rational(factorial(static_cast<unsigned long>(k))))
      return false;
  return true;
}

/// The parametric series G(k) as a SeriesSpec; rhs left empty.
inline SeriesSpec guillera_series(const Rational& k) {
  const Rational h(1, 2);
  SeriesSpec s;
  s.id = "G(" + k.to_string() + ")";
  s.poch.upper.assign(5, h + k);
  s.poch.lower.assign(5, Rational(1) + k);
  // 820(n+k)^2 + 180(n+k) + 13 expanded in n
  s.weight = {QuadExt(Rational(820) * k * k + Rational(180) * k + Rational(13)), QuadExt(Rational(1640) * k + Rational(180)),
              QuadExt(820)};
  s.z = Rational(-1, 1024);
  return s;
}

/// G(k) to `digits` decimals by binary splitting; only the closed-form
/// points k = 0 (128/pi^2) and k = 1/2 (256 zeta(3)) are accepted.
inline FixedReal guillera_G(const Rational& k, long decimal_digits) {
  if (!(k == Rational(0) || k == Rational(1, 2)))
    throw UnsupportedError("G(k) is only evaluated at k = 0 and k = 1/2");
  if (decimal_digits < 1) throw Error("digits must be positive");
  SeriesSpec s = guillera_series(k);
  long n = terms_needed(s, decimal_digits);
  long guard = decimal_digits + 20 + static_cast<long>(std::ceil(std::log10(static_cast<double>(n) + 1)));
  return sum_binary_split_fixed(s, n, bits_for_digits(guard));
}

}  // namespace pisum
