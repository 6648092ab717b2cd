#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <string>

#include "pisum/bigint.hpp"
#include "pisum/error.hpp"
#include "pisum/rational.hpp"

namespace pisum {

/// Bits needed to resolve `digits` decimal digits after the point.
inline std::int64_t bits_for_digits(std::int64_t digits) {
  // log2(10) = 3.32192809...; rounded up
  return (digits * 3321929 + 999999) / 1000000 + 1;
}

/// Decimal digits resolved by a binary scale.
inline std::int64_t digits_for_bits(std::int64_t bits) {
  return (bits * 301029) / 1000000;
}

/// Fixed-point real: value = mantissa * 2^(-scale_bits).
///
/// Addition and subtraction are exact at the larger of the two scales;
/// multiplication, division and square root round to the target scale
/// (nearest for mul/div, floor for sqrt).
class FixedReal {
 public:
  FixedReal() = default;
  FixedReal(BigInt mantissa, std::int64_t scale_bits)
      : m_(std::move(mantissa)), s_(scale_bits) {
    if (s_ < 0) throw Error("negative fixed-point scale");
  }

  static FixedReal from_integer(const BigInt& v, std::int64_t scale) {
    return FixedReal(shift_left(v, scale), scale);
  }
  static FixedReal from_ratio(const BigInt& num, const BigInt& den, std::int64_t scale) {
    if (sgn(den) == 0) throw MathError("fixed-point division by zero");
    return FixedReal(div_round(shift_left(num, scale), den), scale);
  }
  static FixedReal from_rational(const Rational& r, std::int64_t scale) {
    return from_ratio(r.num(), r.den(), scale);
  }
  /// Parses "[-]digits[.digits]", rounded to nearest at `scale`.
  static FixedReal from_decimal(const std::string& text, std::int64_t scale) {
    std::string digits;
    std::size_t frac = 0;
    bool seen_point = false, negative = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
      char c = text[i];
      if (i == 0 && c == '-') negative = true;
      else if (c == '.' && !seen_point) seen_point = true;
      else if (c >= '0' && c <= '9') {
        digits += c;
        if (seen_point) ++frac;
      } else {
        throw ParseError("not a decimal literal: '" + text + "'");
      }
    }
    if (digits.empty()) throw ParseError("not a decimal literal: '" + text + "'");
    BigInt num(digits, 10);
    if (negative) num = -num;
    return from_ratio(num, pow(BigInt(10), frac), scale);
  }

  const BigInt& mantissa() const { return m_; }
  std::int64_t scale_bits() const { return s_; }
  /// Decimal digits after the point resolved by this scale.
  std::int64_t precision_digits() const { return digits_for_bits(s_); }

  FixedReal rescaled(std::int64_t scale) const {
    if (scale >= s_) return FixedReal(shift_left(m_, scale - s_), scale);
    return FixedReal(shift_right_round(m_, s_ - scale), scale);
  }

  int sign() const { return sgn(m_); }
  bool is_zero() const { return sgn(m_) == 0; }
  FixedReal abs() const { return FixedReal(::abs(m_), s_); }
  FixedReal operator-() const { return FixedReal(-m_, s_); }

  friend FixedReal operator+(const FixedReal& x, const FixedReal& y) {
    auto s = std::max(x.s_, y.s_);
    return FixedReal(shift_left(x.m_, s - x.s_) + shift_left(y.m_, s - y.s_), s);
  }
  friend FixedReal operator-(const FixedReal& x, const FixedReal& y) {
    auto s = std::max(x.s_, y.s_);
    return FixedReal(shift_left(x.m_, s - x.s_) - shift_left(y.m_, s - y.s_), s);
  }
  friend FixedReal operator*(const FixedReal& x, const FixedReal& y) {
    return mul(x, y, std::max(x.s_, y.s_));
  }
  friend FixedReal operator/(const FixedReal& x, const FixedReal& y) {
    return div(x, y, std::max(x.s_, y.s_));
  }
  FixedReal& operator+=(const FixedReal& o) { return *this = *this + o; }
  FixedReal& operator-=(const FixedReal& o) { return *this = *this - o; }
  FixedReal& operator*=(const FixedReal& o) { return *this = *this * o; }
  FixedReal& operator/=(const FixedReal& o) { return *this = *this / o; }

  friend FixedReal mul(const FixedReal& x, const FixedReal& y, std::int64_t scale) {
    BigInt p = x.m_ * y.m_;
    return FixedReal(shift_right_round(p, x.s_ + y.s_ - scale), scale);
  }
  friend FixedReal div(const FixedReal& x, const FixedReal& y, std::int64_t scale) {
    if (y.is_zero()) throw MathError("fixed-point division by zero");
    // x/y * 2^scale = x.m * 2^(scale + y.s - x.s) / y.m
    std::int64_t sh = scale + y.s_ - x.s_;
    if (sh >= 0) return FixedReal(div_round(shift_left(x.m_, sh), y.m_), scale);
    return FixedReal(div_round(x.m_, shift_left(y.m_, -sh)), scale);
  }

  FixedReal mul_int(const BigInt& k) const { return FixedReal(m_ * k, s_); }
  FixedReal div_int(const BigInt& k) const {
    if (sgn(k) == 0) throw MathError("fixed-point division by zero");
    return FixedReal(div_round(m_, k), s_);
  }

  friend bool operator==(const FixedReal& x, const FixedReal& y) { return compare(x, y) == 0; }
  friend std::strong_ordering operator<=>(const FixedReal& x, const FixedReal& y) {
    int c = compare(x, y);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  double to_double() const {
    long e = 0;
    double d = mpz_get_d_2exp(&e, m_.get_mpz_t());
    return std::ldexp(d, static_cast<int>(e - s_));
  }

  /// floor(log10 |x|). Zero maps to one below the resolution of the scale.
  long floor_log10_abs() const {
    if (is_zero()) return -static_cast<long>(std::ceil(static_cast<double>(s_) * std::log10(2.0))) - 1;
    long e = 0;
    double d = std::fabs(mpz_get_d_2exp(&e, m_.get_mpz_t()));
    double l = std::log10(d) + static_cast<double>(e - s_) * std::log10(2.0);
    return static_cast<long>(std::floor(l));
  }

  /// Truncated (not rounded) decimal expansion with exactly `digits`
  /// digits after the point.
  std::string to_decimal(std::int64_t digits) const {
    BigInt a = ::abs(m_);
    BigInt scaled = a * pow(BigInt(10), static_cast<unsigned long>(digits));
    BigInt q = shift_left(scaled, -s_);
    std::string s = q.get_str();
    if (static_cast<std::int64_t>(s.size()) <= digits)
      s.insert(0, static_cast<std::size_t>(digits - static_cast<std::int64_t>(s.size()) + 1), '0');
    std::string out = s.substr(0, s.size() - static_cast<std::size_t>(digits));
    if (digits > 0) out += "." + s.substr(s.size() - static_cast<std::size_t>(digits));
    if (sign() < 0) out.insert(0, "-");
    return out;
  }

 private:
  static int compare(const FixedReal& x, const FixedReal& y) {
    auto s = std::max(x.s_, y.s_);
    return cmp(shift_left(x.m_, s - x.s_), shift_left(y.m_, s - y.s_));
  }

  BigInt m_;
  std::int64_t s_ = 0;
};

/// Floor square root at the requested scale (error < 1 ulp).
inline FixedReal fixed_sqrt(const FixedReal& x, std::int64_t scale) {
  if (x.sign() < 0) throw MathError("square root of a negative number");
  // sqrt(m 2^-s) 2^scale = sqrt(m 2^(2 scale - s))
  BigInt radicand = shift_left(x.mantissa(), 2 * scale - x.scale_bits());
  BigInt r;
  mpz_sqrt(r.get_mpz_t(), radicand.get_mpz_t());
  return FixedReal(r, scale);
}

inline FixedReal fixed_sqrt(const FixedReal& x) { return fixed_sqrt(x, x.scale_bits()); }

inline FixedReal sqrt_int(long m, std::int64_t scale) {
  return fixed_sqrt(FixedReal::from_integer(BigInt(m), scale), scale);
}

inline FixedReal pow(const FixedReal& x, unsigned long e, std::int64_t scale) {
  const std::int64_t guard = 32 + 2 * static_cast<std::int64_t>(std::log2(static_cast<double>(e) + 1));
  const std::int64_t w = scale + guard;
  FixedReal result = FixedReal::from_integer(1, w), base = x.rescaled(w);
  while (e) {
    if (e & 1) result = mul(result, base, w);
    e >>= 1;
    if (e) base = mul(base, base, w);
  }
  return result.rescaled(scale);
}

/// exp(x) by argument halving, Taylor series and repeated squaring.
inline FixedReal exp(const FixedReal& x, std::int64_t scale) {
  const double mag = std::fabs(x.to_double());
  const std::int64_t whole = mag < 1 ? 0 : static_cast<std::int64_t>(std::ceil(std::log2(mag + 1)));
  const std::int64_t halvings = whole + static_cast<std::int64_t>(std::sqrt(static_cast<double>(scale))) / 2 + 4;
  // e^x can be large: keep enough integer headroom on top of the fraction bits
  const std::int64_t w = scale + halvings + 64 + static_cast<std::int64_t>(mag * 1.5);
  FixedReal r(shift_right_round(shift_left(x.mantissa(), w - x.scale_bits()), halvings), w);
  FixedReal sum = FixedReal::from_integer(1, w), term = sum;
  for (long k = 1;; ++k) {
    term = mul(term, r, w).div_int(BigInt(k));
    if (term.is_zero()) break;
    sum += term;
  }
  for (std::int64_t i = 0; i < halvings; ++i) sum = mul(sum, sum, w);
  return sum.rescaled(scale);
}

}  // namespace pisum
