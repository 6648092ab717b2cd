#pragma once

#include <string>
#include <vector>

#include "pisum/fixed.hpp"
#include "pisum/quadext.hpp"
#include "pisum/sequences.hpp"

namespace pisum {

/// Truncated power series c_0 + c_1 z + ... + c_N z^N over Q.
class PSeries {
 public:
  PSeries() = default;
  explicit PSeries(long order) : c_(static_cast<std::size_t>(order + 1)) {}
  PSeries(std::vector<Rational> coeffs, long order) : c_(std::move(coeffs)) {
    c_.resize(static_cast<std::size_t>(order + 1));
  }

  /// A polynomial given by integer coefficients, truncated at `order`.
  static PSeries poly(std::initializer_list<long> cs, long order) {
    std::vector<Rational> v;
    for (long x : cs) v.emplace_back(x);
    return PSeries(std::move(v), order);
  }
  static PSeries constant(const Rational& c, long order) { return PSeries({c}, order); }
  static PSeries variable(long order) { return PSeries({Rational(0), Rational(1)}, order); }

  long order() const { return static_cast<long>(c_.size()) - 1; }
  const Rational& operator[](long n) const { return c_[static_cast<std::size_t>(n)]; }
  Rational& operator[](long n) { return c_[static_cast<std::size_t>(n)]; }
  const std::vector<Rational>& coeffs() const { return c_; }

  friend PSeries operator+(const PSeries& a, const PSeries& b) {
    PSeries r(std::min(a.order(), b.order()));
    for (long n = 0; n <= r.order(); ++n) r[n] = a[n] + b[n];
    return r;
  }
  friend PSeries operator-(const PSeries& a, const PSeries& b) {
    PSeries r(std::min(a.order(), b.order()));
    for (long n = 0; n <= r.order(); ++n) r[n] = a[n] - b[n];
    return r;
  }
  PSeries operator-() const {
    PSeries r(order());
    for (long n = 0; n <= order(); ++n) r[n] = -(*this)[n];
    return r;
  }
  friend PSeries operator*(const PSeries& a, const PSeries& b) {
    PSeries r(std::min(a.order(), b.order()));
    for (long i = 0; i <= r.order(); ++i) {
      if (a[i].is_zero()) continue;
      for (long j = 0; i + j <= r.order(); ++j) r[i + j] += a[i] * b[j];
    }
    return r;
  }
  friend PSeries operator*(const Rational& k, const PSeries& a) {
    PSeries r(a.order());
    for (long n = 0; n <= a.order(); ++n) r[n] = k * a[n];
    return r;
  }
  friend PSeries operator/(const PSeries& a, const PSeries& b) { return a * b.reciprocal(); }

  PSeries reciprocal() const {
    if ((*this)[0].is_zero()) throw MathError("series reciprocal needs a nonzero constant term");
    PSeries r(order());
    Rational inv0 = (*this)[0].inverse();
    r[0] = inv0;
    for (long n = 1; n <= order(); ++n) {
      Rational s;
      for (long i = 1; i <= n; ++i) s += (*this)[i] * r[n - i];
      r[n] = -s * inv0;
    }
    return r;
  }

  PSeries pow(unsigned long e) const {
    PSeries r = constant(1, order()), b = *this;
    while (e) {
      if (e & 1) r = r * b;
      e >>= 1;
      if (e) b = b * b;
    }
    return r;
  }

  /// theta = z d/dz.
  PSeries theta() const {
    PSeries r(order());
    for (long n = 0; n <= order(); ++n) r[n] = Rational(n) * (*this)[n];
    return r;
  }

  /// Coefficientwise product.
  PSeries hadamard(const PSeries& b) const {
    PSeries r(std::min(order(), b.order()));
    for (long n = 0; n <= r.order(); ++n) r[n] = (*this)[n] * b[n];
    return r;
  }

  friend bool operator==(const PSeries&, const PSeries&) = default;

  std::string to_string(long terms = 6) const {
    std::string s;
    for (long n = 0; n <= std::min(order(), terms - 1); ++n) {
      if (n) s += " + ";
      s += "(" + (*this)[n].to_string() + ")";
      if (n) s += "z^" + std::to_string(n);
    }
    return s + " + ...";
  }

 private:
  std::vector<Rational> c_;
};

enum class SeriesOp { add, mul, div };

inline PSeries ps_arith(const PSeries& a, const PSeries& b, SeriesOp op) {
  switch (op) {
    case SeriesOp::add: return a + b;
    case SeriesOp::mul: return a * b;
    case SeriesOp::div: return a / b;
  }
  throw Error("unknown series op");
}

/// Square root with constant term 1 by Newton's iteration r <- (r + a/r)/2,
/// doubling the number of correct coefficients per step.
inline PSeries ps_sqrt(const PSeries& a) {
  if (a[0] != Rational(1)) throw MathError("series square root needs constant term 1");
  PSeries r = PSeries::constant(1, 0);
  for (long prec = 1; prec <= a.order();) {
    prec = std::min(2 * prec, a.order() + 1);
    const long ord = prec - 1;
    PSeries ra(r.coeffs(), ord), aa(a.coeffs(), ord);
    r = Rational(1, 2) * (ra + aa / ra);
    if (prec == a.order() + 1) break;
  }
  return PSeries(r.coeffs(), a.order());
}

/// g(h(z)) by Horner's rule; h must have zero constant term.
inline PSeries ps_compose(const PSeries& g, const PSeries& h) {
  if (!h[0].is_zero()) throw MathError("composition needs h(0) = 0");
  const long ord = std::min(g.order(), h.order());
  PSeries r(ord);
  for (long n = g.order(); n >= 0; --n) {
    r = r * h;
    r[0] += g[n];
  }
  return r;
}

inline constexpr long kYangOrderCap = 40;
inline constexpr long kE25OrderCap = 60;
inline constexpr long kE26OrderCap = 50;
inline constexpr long kSpecializationDigitCap = 100;

namespace detail {

inline void cap(long value, long limit, const char* what) {
  if (value < 0) throw Error(std::string(what) + " must be nonnegative");
  if (value > limit) throw UnsupportedError(std::string(what) + " is capped at " + std::to_string(limit));
}

inline Rational poch(const Rational& a, long n) {
  Rational r(1);
  for (long i = 0; i < n; ++i) r *= a + Rational(i);
  return r;
}

}  // namespace detail

/// t(z) from its closed form; `with_factor = false` drops (1+z) from the surd term.
inline PSeries yang_t(long order, bool with_factor = true) {
  const PSeries z = PSeries::variable(order);
  PSeries s = ps_sqrt(PSeries::poly({1, -34, 1}, order));
  PSeries surd_coeff = PSeries::poly({1, -1}, order).pow(2) * PSeries::poly({1, -18, 1}, order);
  if (with_factor) surd_coeff = PSeries::poly({1, 1}, order) * surd_coeff;
  PSeries inner = PSeries::poly({1, -36, 199, 184, 199, -36, 1}, order) + surd_coeff * s;
  return Rational(1, 2) * (z * inner) / PSeries::poly({1, 14, 1}, order).pow(4);
}

/// 1/(2+2z-sqrt(1-34z+z^2)) 3F2(1/4,1/2,3/4;1,1 | 256 t(z)) against the
/// Apery generating function, coefficientwise up to `order`.
inline bool check_yang_transform(long order, bool with_factor = true) {
  detail::cap(order, kYangOrderCap, "Yang transform order");
  PSeries s = ps_sqrt(PSeries::poly({1, -34, 1}, order));
  PSeries pre = (PSeries::poly({2, 2}, order) - s).reciprocal();
  PSeries f(order);
  for (long n = 0; n <= order; ++n)
    f[n] = detail::poch(Rational(1, 4), n) * detail::poch(Rational(1, 2), n) * detail::poch(Rational(3, 4), n) /
           Rational(pow(factorial(static_cast<unsigned long>(n)), 3)) * Rational(pow(BigInt(256), static_cast<unsigned long>(n)));
  PSeries lhs = pre * ps_compose(f, yang_t(order, with_factor));
  for (long n = 0; n <= order; ++n)
    if (lhs[n] != Rational(apery_u(n))) return false;
  return true;
}

struct FrobeniusPair {
  PSeries F, F1;
};

/// F = sum C(2n,n)^5 z^n and F1 = sum a_n h_n z^n with h_0 = 0,
/// h_{n+1} = h_n + 10/(2n+1) - 5/(n+1), so that F log z + F1 solves the
/// same fifth-order equation.
inline FrobeniusPair frobenius_pair(long order) {
  if (order < 1) throw Error("Frobenius order must be at least 1");
  FrobeniusPair p{PSeries(order), PSeries(order)};
  Rational a(1), h(0);
  for (long n = 0; n <= order; ++n) {
    p.F[n] = a;
    p.F1[n] = a * h;
    // (n+1)^5 a_{n+1} = 32 (2n+1)^5 a_n
    a = a * Rational(32) * Rational(2 * n + 1).pow(5) / Rational(n + 1).pow(5);
    h += Rational(10, 2 * n + 1) - Rational(5, n + 1);
  }
  return p;
}

/// F^2 + F theta(F1) - F1 theta(F): the Wronskian of F and F log z + F1 with
/// the logarithms cancelled.
inline PSeries frobenius_wronskian(long order) {
  auto p = frobenius_pair(order);
  return p.F * p.F + p.F * p.F1.theta() - p.F1 * p.F.theta();
}

/// sqrt(W (1-1024z)^e); e = -1 is the normalized function of e25.
inline PSeries tilde_f(long order, int normalization = -1) {
  PSeries w = frobenius_wronskian(order);
  PSeries n = PSeries::poly({1, -1024}, order);
  for (int i = 0; i < std::abs(normalization); ++i) w = normalization < 0 ? w / n : w * n;
  return ps_sqrt(w);
}

/// Coefficients of (theta^4 - 16z(128 theta^4+256 theta^3+304 theta^2+176 theta+39)
/// + 2^20 z^2 (theta+1)^4) Y.
inline PSeries e25_operator(const PSeries& y) {
  PSeries r(y.order());
  auto p = [](long m) { return Rational(128 * m * m * m * m + 256 * m * m * m + 304 * m * m + 176 * m + 39); };
  for (long n = 0; n <= y.order(); ++n) {
    Rational v = Rational(n).pow(4) * y[n];
    if (n >= 1) v -= Rational(16) * p(n - 1) * y[n - 1];
    if (n >= 2) v += Rational(1L << 20) * Rational(n - 1).pow(4) * y[n - 2];
    r[n] = v;
  }
  return r;
}

inline bool check_e25(long order, int normalization = -1) {
  detail::cap(order, kE25OrderCap, "e25 order");
  PSeries op = e25_operator(tilde_f(order, normalization));
  for (long n = 0; n <= order; ++n)
    if (!op[n].is_zero()) return false;
  return true;
}

/// t_n = sum_k 4^(n-k) C(2k,k)^2 C(2n-2k,n-k).
inline BigInt t_seq(long n) {
  const auto un = static_cast<unsigned long>(n);
  BigInt s;
  for (unsigned long k = 0; k <= un; ++k) {
    BigInt c = binomial(2 * k, k);
    s += pow(BigInt(4), un - k) * c * c * binomial(2 * un - 2 * k, un - k);
  }
  return s;
}

inline PSeries t_series(long order) {
  PSeries t(order);
  for (long n = 0; n <= order; ++n) t[n] = Rational(t_seq(n));
  return t;
}

/// 1/(1-16z) 2F1(1/2,1/2;1 | -16z/(1-16z)) == sum t_n z^n.
inline bool check_2f1_cross(long order) {
  PSeries f(order);
  for (long n = 0; n <= order; ++n) {
    BigInt c = binomial(2 * static_cast<unsigned long>(n), static_cast<unsigned long>(n));
    f[n] = Rational(c * c, pow(BigInt(16), static_cast<unsigned long>(n)));
  }
  PSeries geo = PSeries::poly({1, -16}, order).reciprocal();
  PSeries arg = Rational(-16) * PSeries::variable(order) * geo;
  return geo * ps_compose(f, arg) == t_series(order);
}

/// (1+s z)/(1-s z)^2 Ftilde(-z/(1-s z)^2), which should be the Hadamard
/// square of sum t_n z^n for s = 256.
inline PSeries e26_lhs(long order, long s = 256) {
  PSeries y = tilde_f(order);
  PSeries d = PSeries::poly({1, -s}, order).pow(2).reciprocal();
  PSeries h = -(PSeries::variable(order) * d);
  return PSeries::poly({1, s}, order) * d * ps_compose(y, h);
}

inline bool check_e26(long order, long s = 256) {
  detail::cap(order, kE26OrderCap, "e26 order");
  PSeries t = t_series(order);
  return e26_lhs(order, s) == t.hadamard(t) && check_2f1_cross(order);
}

/// ((5+4 sqrt2)/(7 sqrt3))^e against 256 t(x) at x = ((sqrt5-1)/2)^12, with
/// t from its closed form in fixed point; agreement to 10^-(digits-5).
inline bool check_specialization_point(long decimal_digits, unsigned long exponent = 4) {
  detail::cap(decimal_digits, kSpecializationDigitCap, "specialization digits");
  const std::int64_t s = bits_for_digits(decimal_digits + 30);
  auto I = [&](long v) { return FixedReal::from_integer(v, s); };
  FixedReal r2 = sqrt_int(2, s), r3 = sqrt_int(3, s), r5 = sqrt_int(5, s);
  FixedReal lhs = pow(div(I(5) + r2.mul_int(4), r3.mul_int(7), s), exponent, s);
  FixedReal x = pow((r5 - I(1)).div_int(2), 12, s);
  auto horner = [&](std::initializer_list<long> cs) {
    FixedReal acc = I(0);
    std::vector<long> v(cs);
    for (auto it = v.rbegin(); it != v.rend(); ++it) acc = mul(acc, x, s) + I(*it);
    return acc;
  };
  FixedReal root = fixed_sqrt(horner({1, -34, 1}), s);
  FixedReal surd_part = mul(mul(mul(I(1) + x, pow(I(1) - x, 2, s), s), horner({1, -18, 1}), s), root, s);
  FixedReal inner = horner({1, -36, 199, 184, 199, -36, 1}) + surd_part;
  FixedReal t = div(mul(x, inner, s), pow(horner({1, 14, 1}), 4, s).mul_int(2), s);
  return (lhs - t.mul_int(256)).floor_log10_abs() <= -(decimal_digits - 5);
}

/// ((sqrt5-1)/2)^12 == 161 - 72 sqrt5 in Q(sqrt5).
inline bool check_golden_power() {
  return QuadExt(Rational(-1, 2), Rational(1, 2), 5).pow(12) == QuadExt(161, -72, 5);
}

}  // namespace pisum
