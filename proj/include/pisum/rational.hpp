#pragma once

#include <compare>
#include <ostream>
#include <string>
#include <string_view>

#include "pisum/bigint.hpp"
#include "pisum/error.hpp"

namespace pisum {

enum class ArithOp { add, sub, mul, div };

/// Exact fraction num/den, always stored with den > 0 and gcd(|num|, den) = 1.
class Rational {
 public:
  Rational() = default;
  Rational(long v) : v_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(const BigInt& v) : v_(v) {}  // NOLINT(google-explicit-constructor)
  Rational(const BigInt& num, const BigInt& den) {
    if (sgn(den) == 0) throw MathError("rational with zero denominator");
    v_ = mpq_class(num, den);
    v_.canonicalize();
  }

  /// Parses "p", "-p" or "p/q".
  static Rational parse(std::string_view text) {
    std::string s(text);
    auto slash = s.find('/');
    try {
      if (slash == std::string::npos) return Rational(BigInt(s, 10));
      return Rational(BigInt(s.substr(0, slash), 10), BigInt(s.substr(slash + 1), 10));
    } catch (const std::invalid_argument&) {
      throw ParseError("not a rational literal: '" + s + "'");
    }
  }

  BigInt num() const { return v_.get_num(); }
  BigInt den() const { return v_.get_den(); }
  const mpq_class& raw() const { return v_; }

  bool is_zero() const { return sgn(v_) == 0; }
  bool is_integer() const { return v_.get_den() == 1; }
  int sign() const { return sgn(v_); }
  Rational abs() const { return from_raw(::abs(v_)); }

  Rational operator-() const { return from_raw(-v_); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw MathError("rational division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    int c = cmp(a.v_, b.v_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  Rational inverse() const {
    if (is_zero()) throw MathError("inverse of zero");
    return from_raw(1 / v_);
  }

  Rational pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    Rational r(1);
    mpz_pow_ui(r.v_.get_num_mpz_t(), v_.get_num_mpz_t(), static_cast<unsigned long>(e));
    mpz_pow_ui(r.v_.get_den_mpz_t(), v_.get_den_mpz_t(), static_cast<unsigned long>(e));
    return r;
  }

  std::string to_string() const {
    if (is_integer()) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
  }

  double to_double() const { return v_.get_d(); }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.to_string();
  }

 private:
  static Rational from_raw(mpq_class v) {
    Rational r;
    r.v_ = std::move(v);
    return r;
  }

  mpq_class v_;
};

inline Rational rational_arith(const Rational& x, const Rational& y, ArithOp op) {
  switch (op) {
    case ArithOp::add: return x + y;
    case ArithOp::sub: return x - y;
    case ArithOp::mul: return x * y;
    case ArithOp::div: return x / y;
  }
  throw Error("unknown arithmetic op");
}

}  // namespace pisum
