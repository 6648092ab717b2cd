#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pisum/fixed.hpp"
#include "pisum/quadext.hpp"

namespace pisum {

struct SurdTerm {
  Rational q;
  long m = 1;
  friend bool operator==(const SurdTerm&, const SurdTerm&) = default;
};

/// (sum_i q_i sqrt(m_i)) * zeta(3)^zeta3_power / pi^pi_power.
struct SurdSum {
  std::vector<SurdTerm> terms;
  int pi_power = 0;
  int zeta3_power = 0;

  void validate() const {
    if (pi_power < 0 || pi_power > 3) throw Error("pi_power must be in 0..3");
    if (zeta3_power < 0 || zeta3_power > 1) throw Error("zeta3_power must be 0 or 1");
    std::set<long> seen;
    for (const auto& t : terms) {
      if (!is_squarefree(t.m)) throw Error("surd radicand " + std::to_string(t.m) + " is not squarefree");
      if (!seen.insert(t.m).second) throw Error("duplicate surd radicand " + std::to_string(t.m));
    }
  }

  std::string to_string() const {
    std::string s;
    for (const auto& t : terms) {
      if (!s.empty()) s += " + ";
      s += "(" + t.q.to_string() + ")";
      if (t.m != 1) s += "*sqrt(" + std::to_string(t.m) + ")";
    }
    if (s.empty()) s = "0";
    if (zeta3_power) s = "(" + s + ")*zeta(3)";
    if (pi_power) s = "(" + s + ")/pi^" + std::to_string(pi_power);
    return s;
  }

  friend bool operator==(const SurdSum&, const SurdSum&) = default;
};

/// Constants a right-hand side may refer to.
struct TranscendentalRefs {
  std::optional<FixedReal> pi;
  std::optional<FixedReal> zeta3;
};

/// Embeds a + b sqrt(d) with < 1 ulp total error at `scale`. Large |b|
/// (typical when a and b nearly cancel) widens the working precision.
inline FixedReal embed(const QuadExt& x, std::int64_t scale) {
  std::int64_t headroom = 0;
  if (!x.is_rational())
    headroom = std::max<std::int64_t>(0, static_cast<std::int64_t>(bit_length(x.b().num())) -
                                             static_cast<std::int64_t>(bit_length(x.b().den())) + 4);
  const std::int64_t w = scale + 32 + headroom;
  FixedReal v = FixedReal::from_rational(x.a(), w);
  if (!x.is_rational()) v += mul(FixedReal::from_rational(x.b(), w), sqrt_int(x.d(), w), w);
  return v.rescaled(scale);
}

inline FixedReal embed(const Rational& x, std::int64_t scale) {
  return FixedReal::from_rational(x, scale);
}

/// Numeric value of a right-hand side. References must resolve at least
/// `scale + 16` bits when used.
inline FixedReal surd_eval(const SurdSum& s, const TranscendentalRefs& refs, std::int64_t scale) {
  const std::int64_t w = scale + 32;
  FixedReal v = FixedReal::from_integer(0, w);
  for (const auto& t : s.terms) {
    FixedReal q = FixedReal::from_rational(t.q, w);
    v += t.m == 1 ? q : mul(q, sqrt_int(t.m, w), w);
  }
  auto need = [&](const std::optional<FixedReal>& ref, const char* name) -> const FixedReal& {
    if (!ref) throw PrecisionError(std::string("right-hand side needs a ") + name + " reference");
    if (ref->scale_bits() < scale + 16)
      throw PrecisionError(std::string(name) + " reference carries too few bits");
    return *ref;
  };
  if (s.zeta3_power) v = mul(v, need(refs.zeta3, "zeta(3)").rescaled(w), w);
  if (s.pi_power) {
    FixedReal p = need(refs.pi, "pi").rescaled(w);
    FixedReal pp = pow(p, static_cast<unsigned long>(s.pi_power), w);
    v = div(v, pp, w);
  }
  return v.rescaled(scale);
}

inline FixedReal surd_eval(const SurdSum& s, const FixedReal& pi_ref, std::int64_t scale) {
  return surd_eval(s, TranscendentalRefs{pi_ref, std::nullopt}, scale);
}

}  // namespace pisum
