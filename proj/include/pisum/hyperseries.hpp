#pragma once

#include <cmath>
#include <cstdint>
#include <future>
#include <string>
#include <vector>

#include "pisum/fixed.hpp"
#include "pisum/quadext.hpp"
#include "pisum/surd.hpp"

namespace pisum {

/// prod (a_i)_n / prod (b_j)_n; a factorial n! is the lower parameter 1.
struct PochhammerSpec {
  std::vector<Rational> upper;
  std::vector<Rational> lower;

  void validate() const {
    for (const auto& b : lower)
      if (b.is_integer() && b.sign() <= 0)
        throw Error("lower Pochhammer parameter " + b.to_string() + " is a pole");
  }

  Rational term_value(long n) const {
    Rational t(1);
    for (long k = 0; k < n; ++k) {
      for (const auto& a : upper) t *= a + Rational(k);
      for (const auto& b : lower) t /= b + Rational(k);
    }
    return t;
  }

  friend bool operator==(const PochhammerSpec&, const PochhammerSpec&) = default;
};

/// c0 + c1 n + c2 n^2 + c3 n^3.
using WeightPoly = std::vector<QuadExt>;

inline QuadExt eval_weight(const WeightPoly& w, long n) {
  QuadExt acc;
  for (auto it = w.rbegin(); it != w.rend(); ++it) acc = acc * QuadExt(n) + *it;
  return acc;
}

enum class Convergence { geometric, alternating_subgeometric, divergent };

/// prefactor * sum_{n>=0} poch(n) * weight(n) * z^n, claimed equal to rhs.
struct SeriesSpec {
  std::string id;
  PochhammerSpec poch;
  WeightPoly weight;
  QuadExt z;
  QuadExt prefactor{1};
  SurdSum rhs;

  /// Common radicand of z, weight and prefactor (1 when all rational).
  long radicand() const {
    QuadExt probe = z + prefactor;
    for (const auto& c : weight) probe = probe + c;
    return probe.is_rational() ? 1 : probe.d();
  }

  long weight_degree() const {
    long deg = static_cast<long>(weight.size()) - 1;
    while (deg > 0 && weight[static_cast<std::size_t>(deg)].is_zero()) --deg;
    return deg;
  }

  Convergence convergence() const {
    const int s = (QuadExt(1) - z.abs()).sign();
    if (s > 0) return poch.upper.size() <= poch.lower.size() ? Convergence::geometric
                                                              : Convergence::divergent;
    if (poch.upper.size() < poch.lower.size()) return Convergence::geometric;
    if (z == QuadExt(-1) && poch.upper.size() == poch.lower.size()) {
      Rational excess;
      for (const auto& b : poch.lower) excess += b;
      for (const auto& a : poch.upper) excess -= a;
      if (excess > Rational(weight_degree())) return Convergence::alternating_subgeometric;
    }
    return Convergence::divergent;
  }

  void validate() const {
    poch.validate();
    if (weight.empty() || weight.size() > 4) throw Error("weight must have 1..4 coefficients");
    (void)radicand();
    rhs.validate();
    if (convergence() == Convergence::divergent) throw Error("series '" + id + "' does not converge");
  }
};

/// t(n+1)/t(n) for t(n) = poch(n) z^n.
inline QuadExt term_ratio(const SeriesSpec& spec, long n) {
  Rational r(1);
  for (const auto& a : spec.poch.upper) r *= a + Rational(n);
  for (const auto& b : spec.poch.lower) r /= b + Rational(n);
  return spec.z * QuadExt(r);
}

/// Exact partial sum by direct accumulation (the oracle for binary splitting).
inline QuadExt sum_naive(const SeriesSpec& spec, long n_terms) {
  QuadExt sum, t(1);
  for (long n = 0; n < n_terms; ++n) {
    sum += t * eval_weight(spec.weight, n);
    t *= term_ratio(spec, n);
  }
  return spec.prefactor * sum;
}

/// All prefix sums sum_naive(spec, 1..n_max) in one pass.
inline std::vector<QuadExt> prefix_sums_naive(const SeriesSpec& spec, long n_max) {
  std::vector<QuadExt> out;
  out.reserve(static_cast<std::size_t>(n_max));
  QuadExt sum, t(1);
  for (long n = 0; n < n_max; ++n) {
    sum += t * eval_weight(spec.weight, n);
    t *= term_ratio(spec, n);
    out.push_back(spec.prefactor * sum);
  }
  return out;
}

struct BinarySplitOptions {
  /// Merge nodes divide out common content once Q exceeds this many bits.
  std::size_t gcd_threshold_bits = std::size_t{1} << 16;
  bool parallel = false;
};

namespace detail {

/// a + b sqrt(d) with integer parts.
struct QuadInt {
  BigInt a, b;
};

struct IntegerRing {
  using Elem = BigInt;
  Elem mul(const Elem& x, const Elem& y) const { return x * y; }
  Elem add(const Elem& x, const Elem& y) const { return x + y; }
  Elem scale(const Elem& x, const BigInt& k) const { return x * k; }
  BigInt content(const Elem& x) const { return ::abs(x); }
  Elem divexact(const Elem& x, const BigInt& g) const {
    BigInt r;
    mpz_divexact(r.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
    return r;
  }
  Elem make(const BigInt& a, const BigInt&) const { return a; }
};

struct QuadRing {
  using Elem = QuadInt;
  long d;
  Elem mul(const Elem& x, const Elem& y) const {
    return {x.a * y.a + d * (x.b * y.b), x.a * y.b + x.b * y.a};
  }
  Elem add(const Elem& x, const Elem& y) const { return {x.a + y.a, x.b + y.b}; }
  Elem scale(const Elem& x, const BigInt& k) const { return {x.a * k, x.b * k}; }
  BigInt content(const Elem& x) const { return gcd(x.a, x.b); }
  Elem divexact(const Elem& x, const BigInt& g) const {
    Elem r;
    mpz_divexact(r.a.get_mpz_t(), x.a.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(r.b.get_mpz_t(), x.b.get_mpz_t(), g.get_mpz_t());
    return r;
  }
  Elem make(const BigInt& a, const BigInt& b) const { return {a, b}; }
};

/// Integer form of a spec: ratio(n) = num(n)/den(n), weight(n) = w(n)/L.
struct IntegerForm {
  long d = 1;
  BigInt z_a, z_b;  // numerator of z in Z[sqrt d]
  BigInt num_const, den_const;
  std::vector<std::pair<BigInt, BigInt>> num_linear, den_linear;  // p + q n
  std::vector<BigInt> w_a, w_b;                                   // weight * L
  BigInt weight_den;
  bool irrational = false;

  explicit IntegerForm(const SeriesSpec& spec) : d(spec.radicand()) {
    BigInt zd = lcm(spec.z.a().den(), spec.z.b().den());
    z_a = spec.z.a().num() * (zd / spec.z.a().den());
    z_b = spec.z.b().num() * (zd / spec.z.b().den());
    num_const = 1;
    den_const = zd;
    for (const auto& a : spec.poch.upper) {
      num_linear.emplace_back(a.num(), a.den());
      den_const *= a.den();
    }
    for (const auto& b : spec.poch.lower) {
      den_linear.emplace_back(b.num(), b.den());
      num_const *= b.den();
    }
    weight_den = 1;
    for (const auto& c : spec.weight) weight_den = lcm(lcm(weight_den, c.a().den()), c.b().den());
    bool wb = false;
    for (const auto& c : spec.weight) {
      w_a.push_back(c.a().num() * (weight_den / c.a().den()));
      w_b.push_back(c.b().num() * (weight_den / c.b().den()));
      if (sgn(w_b.back()) != 0) wb = true;
    }
    irrational = wb || sgn(z_b) != 0;
  }

  BigInt num_int(long n) const {
    BigInt p = num_const;
    for (const auto& [pp, qq] : num_linear) p *= pp + qq * n;
    return p;
  }
  BigInt den_int(long n) const {
    BigInt p = den_const;
    for (const auto& [pp, qq] : den_linear) p *= pp + qq * n;
    return p;
  }
  static BigInt horner(const std::vector<BigInt>& c, long n) {
    BigInt acc;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * n + *it;
    return acc;
  }
};

template <class Ring>
struct Triple {
  typename Ring::Elem P;
  BigInt Q;
  typename Ring::Elem T;
};

template <class Ring>
Triple<Ring> split(const IntegerForm& f, const Ring& ring, long lo, long hi,
                   const BinarySplitOptions& opt, int depth) {
  if (hi - lo == 1) {
    Triple<Ring> leaf;
    BigInt ni = f.num_int(lo);
    leaf.P = ring.make(f.z_a * ni, f.z_b * ni);
    leaf.Q = f.den_int(lo);
    leaf.T = ring.scale(ring.make(IntegerForm::horner(f.w_a, lo), IntegerForm::horner(f.w_b, lo)),
                        leaf.Q);
    return leaf;
  }
  long mid = lo + (hi - lo) / 2;
  Triple<Ring> left, right;
  if (opt.parallel && depth < 3 && hi - lo > 256) {
    auto fut = std::async(std::launch::async,
                          [&] { return split(f, ring, lo, mid, opt, depth + 1); });
    right = split(f, ring, mid, hi, opt, depth + 1);
    left = fut.get();
  } else {
    left = split(f, ring, lo, mid, opt, depth + 1);
    right = split(f, ring, mid, hi, opt, depth + 1);
  }
  Triple<Ring> out;
  out.T = ring.add(ring.scale(left.T, right.Q), ring.mul(left.P, right.T));
  out.P = ring.mul(left.P, right.P);
  out.Q = left.Q * right.Q;
  if (bit_length(out.Q) > opt.gcd_threshold_bits) {
    BigInt g = gcd(gcd(out.Q, ring.content(out.P)), ring.content(out.T));
    if (g > 1) {
      out.P = ring.divexact(out.P, g);
      out.T = ring.divexact(out.T, g);
      BigInt q;
      mpz_divexact(q.get_mpz_t(), out.Q.get_mpz_t(), g.get_mpz_t());
      out.Q = q;
    }
  }
  return out;
}

/// Sum of the first n terms (without prefactor) as (A + B sqrt d) / D.
struct SplitResult {
  BigInt A, B, D;
  long d = 1;
};

inline SplitResult split_sum(const SeriesSpec& spec, long n_terms, const BinarySplitOptions& opt) {
  IntegerForm f(spec);
  SplitResult r;
  r.d = f.d;
  if (n_terms <= 0) {
    r.D = 1;
    return r;
  }
  if (f.irrational) {
    QuadRing ring{f.d};
    auto t = split(f, ring, 0, n_terms, opt, 0);
    r.A = t.T.a;
    r.B = t.T.b;
    r.D = t.Q * f.weight_den;
  } else {
    IntegerRing ring;
    auto t = split(f, ring, 0, n_terms, opt, 0);
    r.A = t.T;
    r.D = t.Q * f.weight_den;
  }
  if (sgn(r.D) < 0) {
    r.A = -r.A;
    r.B = -r.B;
    r.D = -r.D;
  }
  return r;
}

}  // namespace detail

/// Exact partial sum of the first n_terms terms by binary splitting.
inline QuadExt sum_binary_split(const SeriesSpec& spec, long n_terms,
                                const BinarySplitOptions& opt = {}) {
  auto r = detail::split_sum(spec, n_terms, opt);
  QuadExt s = r.d == 1 ? QuadExt(Rational(r.A, r.D))
                       : QuadExt(Rational(r.A, r.D), Rational(r.B, r.D), r.d);
  return spec.prefactor * s;
}

/// Same partial sum embedded at `scale` bits without forming the reduced fraction.
inline FixedReal sum_binary_split_fixed(const SeriesSpec& spec, long n_terms, std::int64_t scale,
                                        const BinarySplitOptions& opt = {}) {
  auto r = detail::split_sum(spec, n_terms, opt);
  const auto& p = spec.prefactor;
  BigInt pd = lcm(p.a().den(), p.b().den());
  BigInt pa = p.a().num() * (pd / p.a().den());
  BigInt pb = p.b().num() * (pd / p.b().den());
  const long d = r.d;
  // (A + B sqrt d)(pa + pb sqrt d) / (D pd)
  BigInt a = r.A * pa + BigInt(d) * (r.B * pb);
  BigInt b = r.A * pb + r.B * pa;
  BigInt den = r.D * pd;
  // a/den and b/den can both be far larger than the sum when z is a small
  // unit like 161 - 72 sqrt5; widen by their size so the cancellation is exact
  std::int64_t headroom = std::max<std::int64_t>(
      0, static_cast<std::int64_t>(bit_length(b)) - static_cast<std::int64_t>(bit_length(den)) + 4);
  const std::int64_t w = scale + 32 + headroom;
  FixedReal v = FixedReal::from_ratio(a, den, w);
  if (sgn(b) != 0) v += mul(FixedReal::from_ratio(b, den, w), sqrt_int(d, w), w);
  return v.rescaled(scale);
}

namespace detail {

inline double abs_double(const QuadExt& x) { return std::fabs(x.to_double()); }

inline double ratio_magnitude(const SeriesSpec& spec, long n) {
  double r = abs_double(spec.z);
  for (const auto& a : spec.poch.upper) r *= std::fabs(a.to_double() + static_cast<double>(n));
  for (const auto& b : spec.poch.lower) r /= std::fabs(b.to_double() + static_cast<double>(n));
  return r;
}

}  // namespace detail

/// Smallest N whose tail sum_{n>=N} |t(n) P(n)| is provably below
/// 10^-(digits+10), bounding the tail by a geometric series from N on.
inline long terms_needed(const SeriesSpec& spec, long decimal_digits) {
  if (spec.convergence() != Convergence::geometric)
    throw UnsupportedError("series '" + spec.id +
                           "' is not geometric; use sum_accelerated");
  const double limit = spec.poch.upper.size() == spec.poch.lower.size() ? detail::abs_double(spec.z) : 0.0;
  const long deg = spec.weight_degree();

  // monotone from n0 on: 10 consecutive ratio steps in one direction
  long n0 = 0;
  for (long n = 0, run = 0, dir = 0; run < 10; ++n) {
    double step = detail::ratio_magnitude(spec, n + 1) - detail::ratio_magnitude(spec, n);
    int d = step > 0 ? 1 : (step < 0 ? -1 : 0);
    if (d == 0 || d == dir) {
      ++run;
    } else {
      dir = d;
      run = 1;
      n0 = n;
    }
    if (n > 100000) throw UnsupportedError("term ratios of '" + spec.id + "' never settle");
  }

  double weight_abs_coeffs[4] = {0, 0, 0, 0};
  for (std::size_t k = 0; k < spec.weight.size() && k < 4; ++k)
    weight_abs_coeffs[k] = std::fabs(spec.weight[k].a().to_double()) +
                           std::fabs(spec.weight[k].b().to_double()) * std::sqrt(static_cast<double>(spec.weight[k].d()));
  auto majorant = [&](long n) {
    double acc = 0;
    for (int k = 3; k >= 0; --k) acc = acc * static_cast<double>(n) + weight_abs_coeffs[k];
    return acc;
  };

  const double target = -static_cast<double>(decimal_digits + 10);
  long double log_t = 0;  // log10 |t(N)| for t(N) = prod_{n<N} ratio(n)
  for (long N = 0;; ++N) {
    if (N >= std::max(1L, n0)) {
      double rho = std::max(detail::ratio_magnitude(spec, N), limit) *
                   std::pow(1.0 + 1.0 / static_cast<double>(N), static_cast<double>(deg));
      if (rho < 1.0) {
        long double bound = log_t + std::log10(std::max(majorant(N), 1e-300)) - std::log10(1.0 - rho);
        if (bound < target) return N;
      }
    }
    double r = detail::ratio_magnitude(spec, N);
    if (r == 0.0) return N + 1;  // terminating series
    log_t += std::log10(static_cast<long double>(r));
    if (N > 10'000'000) throw UnsupportedError("series '" + spec.id + "' converges too slowly");
  }
}

inline constexpr long kAccelerationDigitCap = 100;

/// Number of Cohen-Rodriguez Villegas-Zagier weights used for `digits`.
inline long cvz_terms_for(long digits) {
  return static_cast<long>(std::ceil(static_cast<double>(digits + 10) / std::log10(3.0 + std::sqrt(8.0)))) + 1;
}

/// Alternating series sum_{k>=0} (-1)^k a_k accelerated with Chebyshev
/// weights; exact rational arithmetic, result within 10^-digits.
inline FixedReal sum_accelerated(const SeriesSpec& spec, long decimal_digits) {
  if (spec.convergence() != Convergence::alternating_subgeometric)
    throw UnsupportedError("series '" + spec.id + "' is not alternating sub-geometric");
  if (decimal_digits > kAccelerationDigitCap)
    throw UnsupportedError("acceleration is capped at " + std::to_string(kAccelerationDigitCap) + " digits");
  if (spec.radicand() != 1) throw UnsupportedError("acceleration needs rational weights");
  const long n = cvz_terms_for(decimal_digits);
  // d = T_n(3) = ((3+sqrt8)^n + (3-sqrt8)^n) / 2
  BigInt t_prev = 1, t_cur = 3;
  for (long k = 1; k < n; ++k) {
    BigInt next = 6 * t_cur - t_prev;
    t_prev = t_cur;
    t_cur = next;
  }
  const Rational d = n == 0 ? Rational(1) : Rational(t_cur);
  Rational b(-1), c = -d, s;
  Rational a(1);  // poch(k)
  for (long k = 0; k < n; ++k) {
    c = b - c;
    s += c * a * eval_weight(spec.weight, k).a();
    b = b * Rational((k + n) * (k - n)) / (Rational(2 * k + 1, 2) * Rational(k + 1));
    Rational ratio(1);
    for (const auto& u : spec.poch.upper) ratio *= u + Rational(k);
    for (const auto& l : spec.poch.lower) ratio /= l + Rational(k);
    a *= ratio;
  }
  Rational value = spec.prefactor.a() * s / d;
  return FixedReal::from_rational(value, bits_for_digits(decimal_digits) + 32);
}

}  // namespace pisum
