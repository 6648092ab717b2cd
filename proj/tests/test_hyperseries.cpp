#include <gtest/gtest.h>

#include "pisum/hyperseries.hpp"

using namespace pisum;

namespace {

const char* kTwoOverPi =
    "0.63661977236758134307553505349005744813783858296182579499066937623558719053690614036045521106501234382429137090703183214757165";

std::vector<Rational> halves(int k) { return std::vector<Rational>(static_cast<std::size_t>(k), Rational(1, 2)); }
std::vector<Rational> ones(int k) { return std::vector<Rational>(static_cast<std::size_t>(k), Rational(1)); }

SeriesSpec ramanujan_2_over_pi() {
  return {"e02", {halves(3), ones(3)}, {1, 4}, -1, 1, {{{2, 1}}, 1}};
}

SeriesSpec ramanujan_99() {
  return {"e04",
          {{Rational(1, 4), Rational(1, 2), Rational(3, 4)}, ones(3)},
          {1103, 26390},
          Rational(1, 96059601),
          Rational(1, 9801),
          {{{Rational(1, 4), 2}}, 1}};
}

SeriesSpec chudnovsky() {
  BigInt c = 53360;
  return {"e06",
          {{Rational(1, 6), Rational(1, 2), Rational(5, 6)}, ones(3)},
          {13591409, 545140134},
          Rational(BigInt(-1), c * c * c),
          Rational(BigInt(1), c * c),
          {{{Rational(3, 20010), 10005}}, 1}};
}

SeriesSpec guillera_128() {
  return {"e17", {halves(5), ones(5)}, {13, 180, 820}, Rational(-1, 1024), 1, {{{128, 1}}, 2}};
}

SeriesSpec quadratic_point() {
  // irrational z and weight, to drive the Z[sqrt5] splitting path
  return {"quad",
          {halves(3), ones(3)},
          {QuadExt(10, -3, 5), 20},
          QuadExt(161, -72, 5),
          QuadExt(Rational(1, 3), Rational(1, 7), 5),
          {}};
}

BigInt central(unsigned long n) { return binomial(2 * n, n); }

}  // namespace

TEST(Pochhammer, TermRatios) {
  EXPECT_EQ(term_ratio(ramanujan_2_over_pi(), 0), QuadExt(Rational(-1, 8)));
  EXPECT_EQ(term_ratio(guillera_128(), 0), QuadExt(Rational(-1, 32768)));
  EXPECT_EQ(term_ratio(ramanujan_2_over_pi(), 1), QuadExt(Rational(-27, 64)));
}

TEST(Pochhammer, PolesAreRejected) {
  PochhammerSpec p{{Rational(1, 2)}, {Rational(0)}};
  EXPECT_THROW(p.validate(), Error);
  PochhammerSpec q{{Rational(1, 2)}, {Rational(-3)}};
  EXPECT_THROW(q.validate(), Error);
  PochhammerSpec ok{{Rational(1, 2)}, {Rational(-1, 2)}};
  EXPECT_NO_THROW(ok.validate());
}

TEST(Pochhammer, FactorialRewrites) {
  PochhammerSpec central_p{{Rational(1, 2)}, {Rational(1)}};
  PochhammerSpec quarter{{Rational(1, 4), Rational(1, 2), Rational(3, 4)}, ones(3)};
  PochhammerSpec third{{Rational(1, 3), Rational(1, 2), Rational(2, 3)}, ones(3)};
  PochhammerSpec sixth{{Rational(1, 6), Rational(1, 2), Rational(5, 6)}, ones(3)};
  for (unsigned long n = 0; n <= 100; ++n) {
    const long ln = static_cast<long>(n);
    BigInt fn = factorial(n);
    EXPECT_EQ(central_p.term_value(ln), Rational(central(n), pow(BigInt(4), n))) << n;
    EXPECT_EQ(quarter.term_value(ln), Rational(factorial(4 * n), pow(fn, 4) * pow(BigInt(256), n))) << n;
    EXPECT_EQ(third.term_value(ln),
              Rational(central(n) * factorial(3 * n), pow(fn, 3) * pow(BigInt(108), n))) << n;
    EXPECT_EQ(sixth.term_value(ln),
              Rational(factorial(6 * n), factorial(3 * n) * pow(fn, 3) * pow(BigInt(1728), n))) << n;
  }
}

TEST(NaiveSum, TwoTermsOfRamanujan99) {
  Rational t1 = Rational(1, 4) * Rational(1, 2) * Rational(3, 4) * Rational(27493) / Rational(96059601);
  Rational expected = (Rational(1103) + t1) / Rational(9801);
  EXPECT_EQ(sum_naive(ramanujan_99(), 2), QuadExt(expected));
  EXPECT_EQ(sum_naive(ramanujan_99(), 0), QuadExt(0));
}

TEST(BinarySplit, MatchesNaiveForEveryPrefix) {
  for (const auto& spec : {ramanujan_99(), chudnovsky(), guillera_128(), quadratic_point()}) {
    auto naive = prefix_sums_naive(spec, 200);
    for (long n = 1; n <= 200; ++n)
      ASSERT_EQ(sum_binary_split(spec, n), naive[static_cast<std::size_t>(n - 1)]) << spec.id << " n=" << n;
  }
}

TEST(BinarySplit, ContentReductionAndThreadsDoNotChangeTheSum) {
  BinarySplitOptions small{8, false}, threaded{64, true};
  for (const auto& spec : {chudnovsky(), quadratic_point()}) {
    QuadExt plain = sum_binary_split(spec, 700);
    EXPECT_EQ(sum_binary_split(spec, 700, small), plain) << spec.id;
    EXPECT_EQ(sum_binary_split(spec, 700, threaded), plain) << spec.id;
  }
}

TEST(BinarySplit, FixedEmbeddingAgreesWithExactSum) {
  const std::int64_t scale = 800;
  for (const auto& spec : {chudnovsky(), quadratic_point()}) {
    FixedReal a = sum_binary_split_fixed(spec, 150, scale);
    FixedReal b = embed(sum_binary_split(spec, 150), scale);
    EXPECT_LE(abs((a - b).mantissa()), 2) << spec.id;
  }
}

TEST(Convergence, Classification) {
  EXPECT_EQ(ramanujan_2_over_pi().convergence(), Convergence::alternating_subgeometric);
  EXPECT_EQ(chudnovsky().convergence(), Convergence::geometric);
  SeriesSpec bad = ramanujan_99();
  bad.z = Rational(2);
  EXPECT_EQ(bad.convergence(), Convergence::divergent);
  EXPECT_THROW(bad.validate(), Error);
  SeriesSpec heavy = ramanujan_2_over_pi();
  heavy.weight = {1, 4, 1};  // excess 3/2 no longer beats the weight degree
  EXPECT_EQ(heavy.convergence(), Convergence::divergent);
}

TEST(TermsNeeded, ChudnovskyAtThousandDigits) {
  long n = terms_needed(chudnovsky(), 1000);
  EXPECT_LE(n, 72);
  EXPECT_GE(n, 70);
}

TEST(TermsNeeded, GuilleraHalfDigitRate) {
  long n = terms_needed(guillera_128(), 1000);
  EXPECT_GE(n, 330);
  EXPECT_LE(n, 350);
}

TEST(TermsNeeded, TailReallyIsSmall) {
  // |t(N) w(N)| at the returned N must sit below the target
  for (long digits : {50L, 200L}) {
    auto spec = ramanujan_99();
    long n = terms_needed(spec, digits);
    auto diff = sum_naive(spec, n + 1) - sum_naive(spec, n);
    EXPECT_LT(embed(diff, bits_for_digits(digits + 40)).floor_log10_abs(), -(digits + 10));
  }
}

TEST(TermsNeeded, RejectsNonGeometric) {
  EXPECT_THROW(terms_needed(ramanujan_2_over_pi(), 20), UnsupportedError);
}

TEST(Acceleration, TwoOverPiTo30Digits) {
  FixedReal v = sum_accelerated(ramanujan_2_over_pi(), 30);
  FixedReal expected = FixedReal::from_decimal(kTwoOverPi, v.scale_bits());
  EXPECT_LT((v - expected).floor_log10_abs(), -30);
}

TEST(Acceleration, TwoOverPiTo80Digits) {
  FixedReal v = sum_accelerated(ramanujan_2_over_pi(), 80);
  FixedReal expected = FixedReal::from_decimal(kTwoOverPi, v.scale_bits());
  EXPECT_LT((v - expected).floor_log10_abs(), -80);
}

TEST(Acceleration, RejectsOtherShapes) {
  EXPECT_THROW(sum_accelerated(chudnovsky(), 30), UnsupportedError);
  EXPECT_THROW(sum_accelerated(ramanujan_2_over_pi(), 101), UnsupportedError);
  EXPECT_EQ(cvz_terms_for(30), 54);
}
