#pragma once

#include <cmath>
#include <ostream>
#include <string>

#include "pisum/error.hpp"
#include "pisum/rational.hpp"

namespace pisum {

/// Exact element a + b*sqrt(d) of a real quadratic field, d squarefree.
///
/// A value with b = 0 is plain rational and combines with any radicand;
/// two irrational values must share d. d = 1 is folded into a.
class QuadExt {
 public:
  QuadExt() = default;
  QuadExt(long a) : a_(a) {}  // NOLINT(google-explicit-constructor)
  QuadExt(const Rational& a) : a_(a) {}  // NOLINT(google-explicit-constructor)
  QuadExt(Rational a, Rational b, long d) : a_(std::move(a)), b_(std::move(b)), d_(d) {
    if (!is_squarefree(d_)) throw MathError("radicand must be a positive squarefree integer");
    normalize();
  }

  const Rational& a() const { return a_; }
  const Rational& b() const { return b_; }
  long d() const { return d_; }

  bool is_rational() const { return b_.is_zero(); }
  bool is_zero() const { return a_.is_zero() && b_.is_zero(); }

  QuadExt conj() const { return raw(a_, -b_, d_); }
  Rational norm() const { return a_ * a_ - Rational(d_) * b_ * b_; }

  /// Exact sign of a + b*sqrt(d).
  int sign() const {
    int sa = a_.sign(), sb = b_.sign();
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // opposite signs: compare a^2 with d b^2
    Rational diff = a_ * a_ - Rational(d_) * b_ * b_;
    return diff.sign() * sa;
  }
  QuadExt abs() const { return sign() < 0 ? -*this : *this; }

  QuadExt operator-() const { return raw(-a_, -b_, d_); }

  friend QuadExt operator+(const QuadExt& x, const QuadExt& y) {
    long d = common(x, y);
    return raw(x.a_ + y.a_, x.b_ + y.b_, d);
  }
  friend QuadExt operator-(const QuadExt& x, const QuadExt& y) {
    long d = common(x, y);
    return raw(x.a_ - y.a_, x.b_ - y.b_, d);
  }
  friend QuadExt operator*(const QuadExt& x, const QuadExt& y) {
    long d = common(x, y);
    if (x.is_rational()) return raw(x.a_ * y.a_, x.a_ * y.b_, d);
    if (y.is_rational()) return raw(x.a_ * y.a_, x.b_ * y.a_, d);
    return raw(x.a_ * y.a_ + Rational(d) * x.b_ * y.b_, x.a_ * y.b_ + x.b_ * y.a_, d);
  }
  friend QuadExt operator/(const QuadExt& x, const QuadExt& y) {
    common(x, y);
    if (y.is_rational()) {
      if (y.a_.is_zero()) throw MathError("quadratic division by zero");
      return raw(x.a_ / y.a_, x.b_ / y.a_, x.d_ == 1 ? y.d_ : x.d_);
    }
    Rational n = y.norm();
    if (n.is_zero()) throw MathError("quadratic division by zero-norm element");
    QuadExt p = x * y.conj();
    return raw(p.a_ / n, p.b_ / n, p.d_);
  }
  QuadExt& operator+=(const QuadExt& o) { return *this = *this + o; }
  QuadExt& operator-=(const QuadExt& o) { return *this = *this - o; }
  QuadExt& operator*=(const QuadExt& o) { return *this = *this * o; }
  QuadExt& operator/=(const QuadExt& o) { return *this = *this / o; }

  QuadExt pow(unsigned long e) const {
    QuadExt result(1), base = *this;
    while (e) {
      if (e & 1) result *= base;
      base *= base;
      e >>= 1;
    }
    return result;
  }

  friend bool operator==(const QuadExt& x, const QuadExt& y) {
    if (x.a_ != y.a_ || x.b_ != y.b_) return false;
    return x.is_rational() || x.d_ == y.d_;
  }

  std::string to_string() const {
    if (is_rational()) return a_.to_string();
    return a_.to_string() + (b_.sign() < 0 ? " - " : " + ") + b_.abs().to_string() + "*sqrt(" +
           std::to_string(d_) + ")";
  }
  friend std::ostream& operator<<(std::ostream& os, const QuadExt& q) { return os << q.to_string(); }

  double to_double() const;

 private:
  static QuadExt raw(Rational a, Rational b, long d) {
    QuadExt q;
    q.a_ = std::move(a);
    q.b_ = std::move(b);
    q.d_ = d;
    q.normalize();
    return q;
  }
  void normalize() {
    if (d_ == 1) {
      a_ += b_;
      b_ = Rational(0);
    }
    if (b_.is_zero()) d_ = 1;
  }
  static long common(const QuadExt& x, const QuadExt& y) {
    if (x.is_rational()) return y.d_;
    if (y.is_rational()) return x.d_;
    if (x.d_ != y.d_)
      throw RadicandMismatch("radicand mismatch: sqrt(" + std::to_string(x.d_) + ") vs sqrt(" +
                             std::to_string(y.d_) + ")");
    return x.d_;
  }

  Rational a_;
  Rational b_;
  long d_ = 1;
};

inline double QuadExt::to_double() const {
  return a_.to_double() + b_.to_double() * std::sqrt(static_cast<double>(d_));
}

inline QuadExt quad_arith(const QuadExt& x, const QuadExt& y, ArithOp op) {
  switch (op) {
    case ArithOp::add: return x + y;
    case ArithOp::sub: return x - y;
    case ArithOp::mul: return x * y;
    case ArithOp::div: return x / y;
  }
  throw Error("unknown arithmetic op");
}

}  // namespace pisum
