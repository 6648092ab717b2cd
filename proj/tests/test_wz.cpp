#include <gtest/gtest.h>

#include "pisum/catalog.hpp"
#include "pisum/wz.hpp"

using namespace pisum;

TEST(WZ, HandExpandedCorner) {
  // F(0,k) = k!/(3/2)_k: F(0,0) = 1, F(0,1) = 2/3; G(0,0) = 1/3 F(0,0)
  auto p = wz_pair();
  EXPECT_EQ(p.F(0, 0), Rational(1));
  EXPECT_EQ(p.F(0, 1), Rational(2, 3));
  EXPECT_EQ(p.G(0, 0), Rational(1, 3));
  EXPECT_EQ(p.G(-1, 0), Rational(0));
  EXPECT_EQ(p.F(0, 1) - p.F(0, 0), p.G(-1, 0) - p.G(0, 0));
  // the opposite orientation G(n,k) - G(n-1,k) would give +1/3 here
  EXPECT_NE(p.F(0, 1) - p.F(0, 0), p.G(0, 0) - p.G(-1, 0));
}

TEST(WZ, VanishesBeyondTheDiagonal) {
  auto p = wz_pair();
  for (long k = 0; k < 10; ++k)
    for (long n = k + 1; n < 15; ++n) EXPECT_TRUE(p.F(n, k).is_zero());
}

// Dividing the relation by F(n,k) and clearing the denominator
// (4n+1)(k-n+1)(2k+2n+3) leaves a polynomial identity of degree <= 3 in n
// and <= 2 in k. It therefore follows from any 4 x 3 block of valid points
// (F(n,k) != 0, k != n-1), e.g. n in 0..3, k in 10..12, all inside the grid.
TEST(WZ, TelescopingOn40x40Grid) {
  EXPECT_TRUE(check_telescoping(40, 40));
}

TEST(WZ, PerturbedCertificateFails) {
  EXPECT_FALSE(check_telescoping(wz_pair_perturbed(), 40, 40));
  EXPECT_FALSE(check_telescoping(wz_pair_perturbed(), 1, 1));
}

TEST(WZ, SumIsOne) {
  EXPECT_EQ(detail::wz_F(0, 0), Rational(1));
  EXPECT_TRUE(check_sum_is_one(3));
  EXPECT_TRUE(check_sum_is_one(25));
}

TEST(WZ, TerminatingGammaIdentity) {
  EXPECT_EQ(e15_lhs(0), Rational(1));
  EXPECT_EQ(e15_lhs(1), Rational(3, 2));
  EXPECT_TRUE(check_e15(10));
}

TEST(Guillera, SeriesAtHalfMatchesCatalogWeight) {
  SeriesSpec s = guillera_series(Rational(1, 2));
  EXPECT_EQ(s.weight, (WeightPoly{308, 1000, 820}));
  SeriesSpec s0 = guillera_series(Rational(0));
  EXPECT_EQ(s0.weight, (WeightPoly{13, 180, 820}));
}

TEST(Guillera, ClosedFormPoints) {
  const long digits = 200;
  auto refs = make_references(digits);
  const std::int64_t s = bits_for_digits(digits + 10);
  FixedReal g0 = guillera_G(Rational(0), digits);
  FixedReal pi2 = mul(*refs.pi, *refs.pi, s);
  FixedReal expected0 = div(FixedReal::from_integer(128, s), pi2, s);
  EXPECT_LT((g0 - expected0).floor_log10_abs(), -(digits - 10));
  FixedReal gh = guillera_G(Rational(1, 2), digits);
  EXPECT_LT((gh - refs.zeta3->mul_int(256)).floor_log10_abs(), -(digits - 10));
}

TEST(Guillera, ZeroAgreesWithCatalogEntry) {
  const long digits = 300;
  auto lhs = evaluate_lhs(find_entry(builtin_catalog(), "e17"), digits);
  FixedReal g0 = guillera_G(Rational(0), digits);
  EXPECT_LT((g0 - lhs.value).floor_log10_abs(), -(digits + 5));
}

TEST(Guillera, OtherPointsUnsupported) {
  EXPECT_THROW(guillera_G(Rational(1, 3), 10), UnsupportedError);
  EXPECT_THROW(guillera_G(Rational(1), 10), UnsupportedError);
}
