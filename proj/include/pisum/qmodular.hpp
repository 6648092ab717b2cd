#pragma once

#include <chrono>
#include <cmath>
#include <utility>
#include <vector>

#include "pisum/catalog.hpp"

namespace pisum {

/// Modular checks are capped: q(tau0) ~ 0.3175 makes each digit cost ~2 terms
/// per q-series, and the chain multiplies a dozen of them.
inline constexpr long kModularDigitCap = 60;

/// tau = i t with the nome q = exp(-2 pi t) and q^(1/24), at `scale` bits.
struct ImaginaryPoint {
  FixedReal t;
  FixedReal q;
  FixedReal q24;
  std::int64_t scale = 0;

  /// Point i*t for t given to at least `scale` bits.
  static ImaginaryPoint make(const FixedReal& t, const FixedReal& pi, std::int64_t scale) {
    if (t.sign() <= 0) throw MathError("tau must lie on the positive imaginary axis");
    const std::int64_t w = scale + 16;
    FixedReal pt = mul(pi.rescaled(w), t.rescaled(w), w);
    ImaginaryPoint p;
    p.t = t.rescaled(scale);
    p.q24 = exp(-pt.div_int(12), w).rescaled(scale);
    p.q = exp(-pt.mul_int(2), w).rescaled(scale);
    p.scale = scale;
    return p;
  }

  /// The point m*tau, reusing this point's exponentials.
  ImaginaryPoint scaled(unsigned long m) const {
    ImaginaryPoint p;
    p.t = t.mul_int(static_cast<long>(m));
    p.q = pow(q, m, scale);
    p.q24 = pow(q24, m, scale);
    p.scale = scale;
    return p;
  }
};

/// prod eta(m tau)^e over (m, e).
struct EtaQuotient {
  std::vector<std::pair<unsigned long, int>> factors;
};

namespace detail {

inline double log10_fixed(const FixedReal& x) {
  return x.is_zero() ? -1e300 : std::log10(std::fabs(x.to_double()));
}

inline void require_scale(const ImaginaryPoint& p, long decimal_digits) {
  if (p.scale < bits_for_digits(decimal_digits + 10))
    throw PrecisionError("imaginary point carries too few bits for " + std::to_string(decimal_digits) + " digits");
}

}  // namespace detail

/// eta(tau) = q^(1/24) prod_{n>=1} (1 - q^n); the product stops once
/// q^(N+1)/(1-q), which bounds the relative tail, is below 10^-(digits+10).
inline FixedReal eta(const ImaginaryPoint& p, long decimal_digits) {
  detail::require_scale(p, decimal_digits);
  const std::int64_t s = p.scale;
  const double lq = detail::log10_fixed(p.q), l1q = std::log10(1 - p.q.to_double());
  const FixedReal one = FixedReal::from_integer(1, s);
  FixedReal prod = one, qn = p.q;
  for (long n = 1;; ++n) {
    prod = mul(prod, one - qn, s);
    if (static_cast<double>(n + 1) * lq - l1q < -static_cast<double>(decimal_digits + 10)) break;
    qn = mul(qn, p.q, s);
  }
  return mul(p.q24, prod, s);
}

/// E2 = 1 - 24 sum sigma_1(n) q^n, truncated where 24 N^2 q^N/(1-q)^3,
/// a bound for the tail with sigma_1(n) <= n^2, is below 10^-(digits+10).
inline FixedReal e2(const ImaginaryPoint& p, long decimal_digits) {
  detail::require_scale(p, decimal_digits);
  const std::int64_t s = p.scale;
  const double lq = detail::log10_fixed(p.q), l1q = std::log10(1 - p.q.to_double());
  long n_max = 1;
  while (std::log10(24.0) + 2 * std::log10(static_cast<double>(n_max)) + static_cast<double>(n_max) * lq - 3 * l1q >
         -static_cast<double>(decimal_digits + 10))
    ++n_max;
  std::vector<long> sigma(static_cast<std::size_t>(n_max + 1), 0);
  for (long d = 1; d <= n_max; ++d)
    for (long m = d; m <= n_max; m += d) sigma[static_cast<std::size_t>(m)] += d;
  FixedReal sum = FixedReal::from_integer(0, s), qn = p.q;
  for (long n = 1; n <= n_max; ++n) {
    sum += qn.mul_int(sigma[static_cast<std::size_t>(n)]);
    qn = mul(qn, p.q, s);
  }
  return FixedReal::from_integer(1, s) - sum.mul_int(24);
}

inline FixedReal eval(const EtaQuotient& eq, const ImaginaryPoint& p, long decimal_digits) {
  const std::int64_t s = p.scale;
  FixedReal num = FixedReal::from_integer(1, s), den = num;
  for (const auto& [m, e] : eq.factors) {
    FixedReal v = pow(eta(p.scaled(m), decimal_digits), static_cast<unsigned long>(std::abs(e)), s);
    if (e > 0) num = mul(num, v, s);
    else den = mul(den, v, s);
  }
  return div(num, den, s);
}

inline const EtaQuotient& f_quotient() {
  static const EtaQuotient q{{{2, 7}, {3, 7}, {1, -5}, {6, -5}}};
  return q;
}

inline const EtaQuotient& z_quotient() {
  static const EtaQuotient q{{{1, 12}, {6, 12}, {2, -12}, {3, -12}}};
  return q;
}

/// f = eta(2t)^7 eta(3t)^7 / (eta(t)^5 eta(6t)^5).
inline FixedReal f_of_tau(const ImaginaryPoint& p, long decimal_digits) { return eval(f_quotient(), p, decimal_digits); }

/// z = (eta(t) eta(6t) / (eta(2t) eta(3t)))^12.
inline FixedReal z_of_tau(const ImaginaryPoint& p, long decimal_digits) { return eval(z_quotient(), p, decimal_digits); }

/// Log-derivative of f: sum over factors of e m E2(m tau) / 24.
inline FixedReal g_of_tau(const ImaginaryPoint& p, long decimal_digits) {
  FixedReal acc = FixedReal::from_integer(0, p.scale);
  for (const auto& [m, e] : f_quotient().factors)
    acc += e2(p.scaled(m), decimal_digits).mul_int(static_cast<long>(m) * e);
  return acc.div_int(24);
}

/// Shared state for the tau0 = i/sqrt(30) chain at one precision.
struct ModularContext {
  long digits = 0;
  std::int64_t scale = 0;
  FixedReal pi;
  ImaginaryPoint tau0, tau5;

  explicit ModularContext(long decimal_digits) : digits(decimal_digits) {
    if (decimal_digits < 1) throw Error("digits must be positive");
    if (decimal_digits > kModularDigitCap)
      throw UnsupportedError("modular checks are capped at " + std::to_string(kModularDigitCap) + " digits");
    scale = bits_for_digits(decimal_digits + 30);
    pi = compute_pi(decimal_digits + 40).rescaled(scale + 32);
    FixedReal t0 = div(FixedReal::from_integer(1, scale + 32), sqrt_int(30, scale + 32), scale + 32);
    tau0 = ImaginaryPoint::make(t0, pi, scale);
    tau5 = ImaginaryPoint::make(t0.mul_int(5), pi, scale);
  }

  FixedReal surd(long q, long m) const { return FixedReal::from_integer(q, scale) * sqrt_int(m, scale); }
  /// a sqrt2 + b sqrt10
  FixedReal root_pair(long a, long b) const { return surd(a, 2) + surd(b, 10); }
  FixedReal sqrt30_over_pi() const { return div(sqrt_int(30, scale), pi, scale); }
};

namespace detail {

inline VerifyReport modular_report(const std::string& id, long digits, long terms, FixedReal residual,
                                   std::chrono::steady_clock::time_point t0) {
  VerifyReport r;
  r.id = id;
  r.digits_requested = digits;
  r.terms_used = terms;
  r.residual_exponent = residual.floor_log10_abs();
  r.status = r.residual_exponent <= -(digits - 10) ? Status::pass : Status::fail;
  r.elapsed_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline FixedReal worse(const FixedReal& a, const FixedReal& b) { return a.abs() > b.abs() ? a.abs() : b.abs(); }

}  // namespace detail

/// g(tau0) + c g(5 tau0) = sqrt(30)/pi, with c = 5.
inline VerifyReport check_e13(long decimal_digits, long coeff = 5) {
  auto t0 = std::chrono::steady_clock::now();
  ModularContext c(decimal_digits);
  FixedReal lhs = g_of_tau(c.tau0, c.digits + 20) + g_of_tau(c.tau5, c.digits + 20).mul_int(coeff);
  return detail::modular_report("e13", decimal_digits, 0, lhs - c.sqrt30_over_pi(), t0);
}

/// h = g(tau0) - 5 g(5 tau0) equals (900 sqrt2 - k sqrt10) f(5 tau0) and
/// (900 sqrt2 - k sqrt10)/5 f(tau0), with k = 402; the worse residual counts.
inline VerifyReport check_e14(long decimal_digits, long k402 = 402) {
  auto t0 = std::chrono::steady_clock::now();
  ModularContext c(decimal_digits);
  const long d = c.digits + 20;
  FixedReal h = g_of_tau(c.tau0, d) - g_of_tau(c.tau5, d).mul_int(5);
  FixedReal k = c.root_pair(900, -k402);
  FixedReal r1 = h - k * f_of_tau(c.tau5, d);
  FixedReal r2 = h - (k * f_of_tau(c.tau0, d)).div_int(5);
  return detail::modular_report("e14", decimal_digits, 0, detail::worse(r1, r2), t0);
}

/// f(tau0) / f(5 tau0) = 5, implied by the two forms of e14.
inline VerifyReport check_f_ratio(long decimal_digits) {
  auto t0 = std::chrono::steady_clock::now();
  ModularContext c(decimal_digits);
  FixedReal ratio = f_of_tau(c.tau0, c.digits + 20) / f_of_tau(c.tau5, c.digits + 20);
  return detail::modular_report("f_ratio", decimal_digits, 0, ratio - FixedReal::from_integer(5, c.scale), t0);
}

/// z(tau0) = z(5 tau0) = 161 - 72 sqrt5.
inline VerifyReport check_z_value(long decimal_digits) {
  auto t0 = std::chrono::steady_clock::now();
  ModularContext c(decimal_digits);
  FixedReal target = embed(QuadExt(161, -72, 5), c.scale);
  FixedReal r1 = z_of_tau(c.tau0, c.digits + 20) - target;
  FixedReal r2 = z_of_tau(c.tau5, c.digits + 20) - target;
  return detail::modular_report("z_tau0", decimal_digits, 0, detail::worse(r1, r2), t0);
}

namespace detail {

/// sum u_n z^n and sum n u_n z^n at a numerically given z.
struct AperySums {
  FixedReal plain, weighted;
  long terms = 0;
};

inline AperySums apery_sums(const FixedReal& z, long decimal_digits, std::int64_t scale) {
  // u_n z^n ~ (33.97 * 0.0031)^n; the margin covers the factor n
  const double rate = -std::log10(33.98 * z.to_double());
  const long n = static_cast<long>(std::ceil((decimal_digits + 14) / rate)) + 8;
  auto u = sequence_terms("apery_e09", n);
  const std::int64_t w = scale + static_cast<std::int64_t>(bit_length(u.back())) + 32;
  FixedReal zw = z.rescaled(w), zp = FixedReal::from_integer(1, w);
  AperySums out{FixedReal::from_integer(0, w), FixedReal::from_integer(0, w), n};
  for (long k = 0; k < n; ++k) {
    FixedReal t = zp.mul_int(u[static_cast<std::size_t>(k)]);
    out.plain += t;
    out.weighted += t.mul_int(k);
    zp = mul(zp, zw, w);
  }
  out.plain = out.plain.rescaled(scale);
  out.weighted = out.weighted.rescaled(scale);
  return out;
}

}  // namespace detail

/// g(5 tau0) = (108 sqrt2 - 48 sqrt10) sum n u_n z^n and f(5 tau0) = sum u_n z^n
/// at z = z(5 tau0) computed from eta.
inline VerifyReport check_g_expansion(long decimal_digits) {
  auto t0 = std::chrono::steady_clock::now();
  ModularContext c(decimal_digits);
  const long d = c.digits + 20;
  auto sums = detail::apery_sums(z_of_tau(c.tau5, d), d, c.scale);
  FixedReal r1 = g_of_tau(c.tau5, d) - c.root_pair(108, -48) * sums.weighted;
  FixedReal r2 = f_of_tau(c.tau5, d) - sums.plain;
  return detail::modular_report("g_expansion", decimal_digits, sums.terms, detail::worse(r1, r2), t0);
}

/// sqrt(30)/pi = (900 sqrt2 - 402 sqrt10) f(5 tau0) + 10 g(5 tau0).
inline VerifyReport check_assembled(long decimal_digits) {
  auto t0 = std::chrono::steady_clock::now();
  ModularContext c(decimal_digits);
  const long d = c.digits + 20;
  FixedReal rhs = c.root_pair(900, -402) * f_of_tau(c.tau5, d) + g_of_tau(c.tau5, d).mul_int(10);
  return detail::modular_report("assembled", decimal_digits, 0, c.sqrt30_over_pi() - rhs, t0);
}

/// e09's value rebuilt from the modular side: [(900 sqrt2 - 402 sqrt10) f +
/// 10 g](5 tau0) / (54 sqrt2 - 24 sqrt10), and the Apery series at the
/// numerically computed z(5 tau0), both against e09's right-hand side.
inline VerifyReport check_e09_modular(long decimal_digits) {
  auto t0 = std::chrono::steady_clock::now();
  ModularContext c(decimal_digits);
  const long d = c.digits + 20;
  FixedReal f5 = f_of_tau(c.tau5, d), g5 = g_of_tau(c.tau5, d);
  FixedReal from_q = (c.root_pair(900, -402) * f5 + g5.mul_int(10)) / c.root_pair(54, -24);
  auto sums = detail::apery_sums(z_of_tau(c.tau5, d), d, c.scale);
  FixedReal from_z = sums.weighted.mul_int(20) + (FixedReal::from_integer(10, c.scale) - c.surd(3, 5)) * sums.plain;
  const auto& e09 = find_entry(builtin_catalog(), "e09");
  FixedReal rhs = surd_eval(e09.rhs(), c.pi, c.scale);
  return detail::modular_report("e09_modular", decimal_digits, sums.terms,
                                detail::worse(from_q - rhs, from_z - rhs), t0);
}

/// Every modular check at `digits`.
inline std::vector<VerifyReport> modular_suite(long decimal_digits) {
  return {check_e13(decimal_digits),        check_e14(decimal_digits),       check_f_ratio(decimal_digits),
          check_z_value(decimal_digits),    check_g_expansion(decimal_digits), check_assembled(decimal_digits),
          check_e09_modular(decimal_digits)};
}

}  // namespace pisum
