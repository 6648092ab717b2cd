#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "pisum/fixed.hpp"
#include "pisum/rational.hpp"

namespace pisum {

/// lead(n) a_{n+1} = mid(n) a_n + back(n) a_{n-1}, polynomials in n given
/// by coefficient lists (constant term first).
struct Recurrence {
  std::vector<long long> lead, mid, back;
  BigInt a0, a1;

  static BigInt poly(const std::vector<long long>& c, long n) {
    BigInt acc;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * n + BigInt(static_cast<long>(*it));
    return acc;
  }

  /// a_0..a_{count-1}; throws if a step is not an exact integer division.
  std::vector<BigInt> integer_terms(long count, const std::string& id) const {
    std::vector<BigInt> out;
    if (count > 0) out.push_back(a0);
    if (count > 1) out.push_back(a1);
    for (long n = 1; static_cast<long>(out.size()) < count; ++n) {
      const auto i = static_cast<std::size_t>(n);
      BigInt rhs = poly(mid, n) * out[i] + poly(back, n) * out[i - 1];
      BigInt l = poly(lead, n);
      if (!mpz_divisible_p(rhs.get_mpz_t(), l.get_mpz_t()))
        throw MathError("recurrence for '" + id + "' left the integers at n=" + std::to_string(n + 1));
      BigInt q;
      mpz_divexact(q.get_mpz_t(), rhs.get_mpz_t(), l.get_mpz_t());
      out.push_back(q);
    }
    return out;
  }

  Rational step(long n, const Rational& cur, const Rational& prev) const {
    return (Rational(poly(mid, n)) * cur + Rational(poly(back, n)) * prev) / Rational(poly(lead, n));
  }
};

/// An integer sequence with a direct (binomial sum) rule and optionally a
/// recurrence; both are expected to agree.
struct SequenceDef {
  std::string id;
  std::function<BigInt(long)> direct;
  std::optional<Recurrence> recurrence;
  /// Exponential growth rate |a_{n+1}/a_n| -> growth, for tail estimates.
  double growth = 1;
  /// Known sign pattern: every value is nonnegative.
  bool nonnegative = true;
  /// Bulk generator faster than repeated `direct`, when the recurrence is absent.
  std::function<std::vector<BigInt>(long)> bulk;
};

namespace detail {

inline const Recurrence& apery_recurrence() {
  // (n+1)^3 u_{n+1} = (2n+1)(17n^2+17n+5) u_n - n^3 u_{n-1}
  static const Recurrence r{{1, 3, 3, 1}, {5, 27, 51, 34}, {0, 0, 0, -1}, 1, 5};
  return r;
}

inline const Recurrence& w_recurrence() {
  // (n+1)^3 w_{n+1} = 8(2n+1)(8n^2+8n+5) w_n - 4096 n^3 w_{n-1}
  static const Recurrence r{{1, 3, 3, 1}, {40, 144, 192, 128}, {0, 0, 0, -4096}, 1, 40};
  return r;
}

inline BigInt apery_direct(long n) {
  BigInt s;
  const auto un = static_cast<unsigned long>(n);
  for (unsigned long k = 0; k <= un; ++k) {
    BigInt t = binomial(un, k) * binomial(un + k, k);
    s += t * t;
  }
  return s;
}

inline BigInt domb_direct(long n) {
  BigInt s;
  const auto un = static_cast<unsigned long>(n);
  for (unsigned long k = 0; k <= un; ++k) {
    BigInt c = binomial(un, k);
    s += c * c * binomial(2 * k, k) * binomial(2 * un - 2 * k, un - k);
  }
  return s;
}

inline BigInt az_direct(long n) {
  BigInt s;
  const auto un = static_cast<unsigned long>(n);
  for (unsigned long k = 0; 3 * k <= un; ++k) {
    // (3k)!/k!^3 = C(3k,k) C(2k,k)
    BigInt t = pow(BigInt(3), un - 3 * k) * binomial(3 * k, k) * binomial(2 * k, k) *
               binomial(un, 3 * k) * binomial(un + k, k);
    if ((un - k) % 2) s -= t;
    else s += t;
  }
  return s;
}

inline BigInt yang_direct(long n) {
  BigInt s;
  const auto un = static_cast<unsigned long>(n);
  for (unsigned long k = 0; k <= un; ++k) {
    BigInt c = binomial(un, k);
    c *= c;
    s += c * c;
  }
  return s;
}

inline BigInt central_sq(unsigned long k) {
  BigInt c = binomial(2 * k, k);
  return c * c;
}

inline BigInt guillera_direct(long n) {
  const auto un = static_cast<unsigned long>(n);
  BigInt s;
  for (unsigned long k = 0; k <= un; ++k) s += central_sq(k) * central_sq(un - k);
  return central_sq(un) * s;
}

inline std::vector<BigInt> guillera_bulk(long count) {
  std::vector<BigInt> sq;
  for (long k = 0; k < count; ++k) sq.push_back(central_sq(static_cast<unsigned long>(k)));
  std::vector<BigInt> out;
  for (long n = 0; n < count; ++n) {
    // symmetric convolution of C(2k,k)^2
    BigInt s;
    for (long k = 0; 2 * k < n; ++k) s += sq[static_cast<std::size_t>(k)] * sq[static_cast<std::size_t>(n - k)];
    s *= 2;
    if (n % 2 == 0) s += sq[static_cast<std::size_t>(n / 2)] * sq[static_cast<std::size_t>(n / 2)];
    out.push_back(sq[static_cast<std::size_t>(n)] * s);
  }
  return out;
}

inline BigInt w_direct(long n) {
  const auto un = static_cast<unsigned long>(n);
  BigInt s;
  for (unsigned long k = 0; k <= un; ++k) {
    BigInt c = binomial(2 * k, k);
    s += c * c * c * binomial(2 * un - 2 * k, un - k) * pow(BigInt(2), 4 * (un - k));
  }
  return s;
}

/// (4n)!/(n!^2 (2n)!) = C(4n,2n) C(2n,n)
inline BigInt factor_4n(unsigned long n) { return binomial(4 * n, 2 * n) * binomial(2 * n, n); }
/// (3n)!/n!^3 = C(3n,n) C(2n,n)
inline BigInt factor_3n(unsigned long n) { return binomial(3 * n, n) * binomial(2 * n, n); }

inline std::vector<BigInt> w_times(long count, BigInt (*factor)(unsigned long)) {
  auto w = w_recurrence().integer_terms(count, "w");
  for (long n = 0; n < count; ++n) w[static_cast<std::size_t>(n)] *= factor(static_cast<unsigned long>(n));
  return w;
}

inline std::vector<SequenceDef> make_sequences() {
  std::vector<SequenceDef> v;
  v.push_back({"apery_e09", apery_direct, apery_recurrence(), 17 + 12 * std::sqrt(2.0), true, {}});
  // (n+1)^3 a_{n+1} = 2(2n+1)(5n^2+5n+2) a_n - 64 n^3 a_{n-1}
  v.push_back({"domb_e10", domb_direct,
               Recurrence{{1, 3, 3, 1}, {4, 18, 30, 20}, {0, 0, 0, -64}, 1, 4}, 16, true, {}});
  // (n+1)^3 a_{n+1} = -(2n+1)(7n^2+7n+3) a_n - 81 n^3 a_{n-1}
  v.push_back({"az_e11", az_direct,
               Recurrence{{1, 3, 3, 1}, {-3, -13, -21, -14}, {0, 0, 0, -81}, 1, -3}, 9, false, {}});
  // (n+1)^3 a_{n+1} = 2(2n+1)(3n^2+3n+1) a_n + 4n(4n-1)(4n+1) a_{n-1}
  v.push_back({"yang_e12", yang_direct,
               Recurrence{{1, 3, 3, 1}, {2, 10, 18, 12}, {0, -4, 0, 64}, 1, 2}, 16, true, {}});
  v.push_back({"guillera_e23", guillera_direct, std::nullopt, 256, true, guillera_bulk});
  v.push_back({"w_4n", [](long n) -> BigInt { return w_direct(n) * factor_4n(static_cast<unsigned long>(n)); },
               std::nullopt, 4096, true, [](long c) { return w_times(c, factor_4n); }});
  v.push_back({"w_3n", [](long n) -> BigInt { return w_direct(n) * factor_3n(static_cast<unsigned long>(n)); },
               std::nullopt, 1728, true, [](long c) { return w_times(c, factor_3n); }});
  return v;
}

}  // namespace detail

inline const std::vector<SequenceDef>& sequence_registry() {
  static const std::vector<SequenceDef> defs = detail::make_sequences();
  return defs;
}

inline const SequenceDef& find_sequence(const std::string& id) {
  for (const auto& d : sequence_registry())
    if (d.id == id) return d;
  throw UnsupportedError("unknown sequence '" + id + "'");
}

/// Apery numbers sum_k C(n,k)^2 C(n+k,k)^2.
inline BigInt apery_u(long n) { return detail::apery_direct(n); }

/// Apery numerators from the same recurrence with v_0 = 0, v_1 = 6.
inline Rational apery_v(long n) {
  const auto& rec = detail::apery_recurrence();
  Rational prev(0), cur(6);
  if (n == 0) return prev;
  for (long k = 1; k < n; ++k) {
    Rational next = rec.step(k, cur, prev);
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

inline BigInt sato_sequence(const std::string& id, long n) { return find_sequence(id).direct(n); }

inline BigInt w_seq(long n) { return detail::w_direct(n); }

/// a_0..a_{count-1} through the fastest available route. Results are
/// memoized per id; the cache is shared across threads.
inline std::vector<BigInt> sequence_terms(const std::string& id, long count) {
  static std::mutex mu;
  static std::map<std::string, std::vector<BigInt>> cache;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(id);
    if (it != cache.end() && static_cast<long>(it->second.size()) >= count)
      return {it->second.begin(), it->second.begin() + count};
  }
  const auto& def = find_sequence(id);
  std::vector<BigInt> terms;
  if (def.recurrence) terms = def.recurrence->integer_terms(count, id);
  else if (def.bulk) terms = def.bulk(count);
  else
    for (long n = 0; n < count; ++n) terms.push_back(def.direct(n));
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[id];
  if (slot.size() < terms.size()) slot = terms;
  return terms;
}

struct Zeta3Result {
  FixedReal value;
  long steps = 0;
};

/// zeta(3) as the limit of v_n/u_n: stops once three consecutive
/// convergents differ by less than 10^-(digits+10).
inline Zeta3Result zeta3_convergents(long decimal_digits) {
  const std::int64_t scale = bits_for_digits(decimal_digits + 20);
  const auto& rec = detail::apery_recurrence();
  BigInt u_prev = 1, u = 5;
  Rational v_prev(0), v(6);
  FixedReal q = FixedReal::from_ratio(v.num(), v.den() * u, scale);
  int agree = 0;
  long n = 1;
  while (agree < 3) {
    BigInt u_next = (Recurrence::poly(rec.mid, n) * u + Recurrence::poly(rec.back, n) * u_prev) /
                    Recurrence::poly(rec.lead, n);
    Rational v_next = rec.step(n, v, v_prev);
    u_prev = std::move(u);
    u = std::move(u_next);
    v_prev = std::move(v);
    v = std::move(v_next);
    ++n;
    FixedReal q_next = FixedReal::from_ratio(v.num(), v.den() * u, scale);
    if ((q_next - q).floor_log10_abs() < -(decimal_digits + 10)) ++agree;
    else agree = 0;
    q = std::move(q_next);
  }
  return {q, n};
}

inline FixedReal zeta3(long decimal_digits) { return zeta3_convergents(decimal_digits).value; }

}  // namespace pisum
