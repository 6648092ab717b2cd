// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Tolerances and time budgets are fixed here and not configurable.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "pisum/pisum.hpp"

using namespace pisum;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool ok = true;
  std::ostringstream detail;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << " [" << what << "]";
    }
  }
};

QuadExt bump_numerator(const QuadExt& x) {
  Rational a(x.a().num() + 1, x.a().den());
  return x.is_rational() ? QuadExt(a) : QuadExt(a, x.b(), x.d());
}

// ---------------------------------------------------------------------------

void ac1(Outcome& o) {
  auto t0 = Clock::now();
  FixedReal a = compute_pi(10000, "e06"), b = compute_pi(10000, "e04");
  double dt = seconds_since(t0);
  long agree = (a - b).floor_log10_abs();
  o.require(agree <= -9990, "e06/e04 agreement 1e" + std::to_string(agree));
  o.require(a.to_decimal(15) == "3.141592653589793", "leading digits");
  o.require(dt < 10, "runtime");
  o.detail << " agreement=1e" << agree << " time=" << dt << "s";
}

void ac2(Outcome& o) {
  auto t0 = Clock::now();
  const auto& cat = builtin_catalog();
  auto refs = make_references(1000);
  auto rs = verify_all(cat, 1000, refs);
  double dt = seconds_since(t0);
  o.require(cat.size() >= 25, "catalog size " + std::to_string(cat.size()));
  long worst = -100000;
  for (const auto& r : rs) {
    if (r.id == "e02") {
      o.require(r.digits_requested == kAccelerationDigitCap && r.residual_exponent <= -90 && r.status == Status::pass,
                "e02 at cap: 1e" + std::to_string(r.residual_exponent));
      continue;
    }
    worst = std::max(worst, r.residual_exponent);
    o.require(r.status == Status::pass && r.residual_exponent <= -990,
              r.id + " residual 1e" + std::to_string(r.residual_exponent) + (r.message.empty() ? "" : " " + r.message));
  }
  o.require(dt < 120, "runtime");
  o.detail << " entries=" << rs.size() << " worst=1e" << worst << " time=" << dt << "s";
}

bool rewrites_exact() {
  const Rational h(1, 2);
  std::vector<Rational> ones(3, Rational(1));
  PochhammerSpec central{{h}, {Rational(1)}};
  PochhammerSpec quarter{{Rational(1, 4), h, Rational(3, 4)}, ones};
  PochhammerSpec third{{Rational(1, 3), h, Rational(2, 3)}, ones};
  PochhammerSpec sixth{{Rational(1, 6), h, Rational(5, 6)}, ones};
  for (unsigned long n = 0; n <= 100; ++n) {
    const long ln = static_cast<long>(n);
    BigInt fn = factorial(n), c = binomial(2 * n, n);
    if (central.term_value(ln) != Rational(c, pow(BigInt(4), n))) return false;
    if (quarter.term_value(ln) != Rational(factorial(4 * n), pow(fn, 4) * pow(BigInt(256), n))) return false;
    if (third.term_value(ln) != Rational(c * factorial(3 * n), pow(fn, 3) * pow(BigInt(108), n))) return false;
    if (sixth.term_value(ln) != Rational(factorial(6 * n), factorial(3 * n) * pow(fn, 3) * pow(BigInt(1728), n)))
      return false;
  }
  return true;
}

bool split_matches_naive(const CatalogEntry& e, long n_max) {
  if (e.kind == EntryKind::hypergeometric) {
    auto naive = prefix_sums_naive(e.series, n_max);
    for (long n = 1; n <= n_max; ++n)
      if (sum_binary_split(e.series, n) != naive[static_cast<std::size_t>(n - 1)]) return false;
    return true;
  }
  auto a = sequence_terms(e.sequence, n_max);
  QuadExt sum, zp(1);
  for (long n = 1; n <= n_max; ++n) {
    sum += QuadExt(Rational(a[static_cast<std::size_t>(n - 1)])) * eval_weight(e.series.weight, n - 1) * zp;
    zp *= e.series.z;
    if (sato_sum_exact(e, n) != e.series.prefactor * sum) return false;
  }
  return true;
}

void ac3(Outcome& o) {
  o.require(check_telescoping(40, 40), "telescoping 40x40");
  o.require(check_sum_is_one(25), "sum is one");
  o.require(check_e15(10), "e15");
  auto u = detail::apery_recurrence().integer_terms(501, "apery");
  bool u_ok = true;
  for (long n = 0; n <= 500; ++n) u_ok = u_ok && u[static_cast<std::size_t>(n)] == apery_u(n);
  o.require(u_ok, "u_n recurrence");
  auto w = detail::w_recurrence().integer_terms(201, "w");
  bool w_ok = true;
  for (long n = 0; n <= 200; ++n) w_ok = w_ok && w[static_cast<std::size_t>(n)] == w_seq(n);
  o.require(w_ok, "w_n recurrence");
  for (const auto& e : builtin_catalog()) o.require(split_matches_naive(e, 200), "split vs naive " + e.id);
  o.require(rewrites_exact(), "Pochhammer rewrites");
}

void ac4(Outcome& o) {
  auto t0 = Clock::now();
  auto e13 = check_e13(50), e14 = check_e14(50), z = check_z_value(50), e09 = check_e09_modular(50);
  double dt = seconds_since(t0);
  o.require(e13.status == Status::pass, "e13 1e" + std::to_string(e13.residual_exponent));
  o.require(e14.status == Status::pass, "e14 1e" + std::to_string(e14.residual_exponent));
  o.require(z.status == Status::pass && z.residual_exponent <= -50, "z(tau0) 1e" + std::to_string(z.residual_exponent));
  o.require(e09.status == Status::pass && e09.residual_exponent <= -30, "e09 1e" + std::to_string(e09.residual_exponent));
  o.require(dt < 30, "runtime");
  o.detail << " e13=1e" << e13.residual_exponent << " z=1e" << z.residual_exponent << " e09=1e"
           << e09.residual_exponent << " time=" << dt << "s";
}

void ac5(Outcome& o) {
  auto t0 = Clock::now();
  o.require(check_yang_transform(20), "yang 20");
  o.require(check_e25(30), "e25 30");
  o.require(check_e26(25) && check_2f1_cross(25), "e26 25");
  o.require(check_specialization_point(50), "specialization 50");
  double dt = seconds_since(t0);
  o.require(dt < 60, "runtime");
  o.detail << " time=" << dt << "s";
}

void ac6(Outcome& o) {
  FixedReal z = zeta3(500);
  FixedReal g = guillera_G(Rational(1, 2), 500).div_int(256);
  long agree = (z.rescaled(g.scale_bits()) - g).floor_log10_abs();
  o.require(agree <= -490, "agreement 1e" + std::to_string(agree));
  o.detail << " agreement=1e" << agree;
}

void ac7(Outcome& o) {
  auto refs = make_references(60);
  long flipped = 0, total = 0;
  for (const auto& base : builtin_catalog()) {
    std::vector<CatalogEntry> v(3, base);
    v[0].series.weight[0] += QuadExt(1);
    v[1].series.z = bump_numerator(base.series.z);
    v[2].series.rhs.terms[0].q += Rational(1);
    auto rs = verify_all(v, 60, refs);
    const char* what[] = {"weight", "z", "rhs"};
    for (int i = 0; i < 3; ++i) {
      ++total;
      if (rs[static_cast<std::size_t>(i)].status == Status::fail) ++flipped;
      else o.require(false, base.id + " " + what[i] + " perturbation passed");
    }
  }
  o.require(!check_telescoping(wz_pair_perturbed(), 40, 40), "perturbed G passed");
  o.require(!check_e25(30, +1), "e25 normalization +1/2 passed");
  o.require(!check_e26(25, 1), "e26 scale 1 passed");
  o.require(!check_yang_transform(20, false), "yang without (1+z) passed");
  o.require(!check_specialization_point(50, 3), "specialization exponent 3 passed");
  o.require(check_e13(50, 4).status == Status::fail, "e13 coefficient 4 passed");
  o.require(check_e14(50, 403).status == Status::fail, "e14 coefficient 403 passed");
  o.detail << " catalog perturbations failing=" << flipped << "/" << total;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<void(Outcome&)> run;
  };
  const Criterion all[] = {
      {"AC1 pi 10000 digits, e06 vs e04", ac1},
      {"AC2 catalog at 1000 digits", ac2},
      {"AC3 exact suites", ac3},
      {"AC4 modular chain at 50 digits", ac4},
      {"AC5 transformation suites", ac5},
      {"AC6 zeta(3) vs G(1/2)/256 at 500 digits", ac6},
      {"AC7 negative controls", ac7},
  };
  int failures = 0;
  for (const auto& c : all) {
    Outcome o;
    auto t0 = Clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail << " exception: " << e.what();
    }
    std::printf("%s  %-42s (%.2fs)%s\n", o.ok ? "PASS" : "FAIL", c.name, seconds_since(t0), o.detail.str().c_str());
    std::fflush(stdout);
    failures += o.ok ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(all)) - failures, std::size(all));
  return failures ? 1 : 0;
}
