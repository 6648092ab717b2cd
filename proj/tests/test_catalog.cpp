#include <gtest/gtest.h>

#include <set>

#include "pisum/catalog.hpp"

using namespace pisum;

namespace {

const char* kPi =
    "3.14159265358979323846264338327950288419716939937510582097494459230781640628620899862803482534211706798214808651328230664709384460955058223172535940812848111745028410270193852110555964462294895493038196442881097566593344612847564823378678317";
const char* kZeta3 =
    "1.20205690315959428539973816151144999076498629234049888179227155534183820578631309018645587360933525814619915779526071941849199599867328321377639683720790016145394178294936006671919157552224249424396156390966410329115909578096551465127991841";

const TranscendentalRefs& refs() {
  static const TranscendentalRefs r{FixedReal::from_decimal(kPi, 700), FixedReal::from_decimal(kZeta3, 600)};
  return r;
}

const TranscendentalRefs& long_refs() {
  static const TranscendentalRefs r = make_references(500);
  return r;
}

QuadExt bump_numerator(const QuadExt& x) {
  Rational a(x.a().num() + 1, x.a().den());
  return x.is_rational() ? QuadExt(a) : QuadExt(a, x.b(), x.d());
}

}  // namespace

TEST(Catalog, BuiltinHas25UniqueEntries) {
  const auto& c = builtin_catalog();
  EXPECT_EQ(c.size(), 25u);
  std::set<std::string> ids;
  int alternating = 0;
  for (const auto& e : c) {
    EXPECT_TRUE(ids.insert(e.id).second) << e.id;
    EXPECT_FALSE(e.source.empty()) << e.id;
    if (e.kind == EntryKind::hypergeometric && e.series.convergence() == Convergence::alternating_subgeometric)
      ++alternating;
  }
  EXPECT_EQ(alternating, 1);
  EXPECT_EQ(load_catalog().size(), 25u);
}

TEST(Catalog, JsonRoundTrip) {
  auto doc = catalog_to_json(builtin_catalog());
  auto back = catalog_from_json(doc);
  ASSERT_EQ(back.size(), builtin_catalog().size());
  EXPECT_EQ(catalog_to_json(back), doc);
  for (std::size_t i = 0; i < back.size(); ++i) EXPECT_EQ(formula_text(back[i]), formula_text(builtin_catalog()[i]));
  auto reparsed = load_catalog(doc.dump());
  EXPECT_EQ(reparsed.size(), 25u);
}

TEST(Catalog, DuplicateIdIsRejected) {
  auto doc = catalog_to_json({find_entry(builtin_catalog(), "e04"), find_entry(builtin_catalog(), "e04")});
  EXPECT_THROW(catalog_from_json(doc), ParseError);
}

TEST(Catalog, DivergentGeometricEntryIsRejected) {
  auto doc = catalog_to_json({find_entry(builtin_catalog(), "e04")});
  doc[0]["z"] = {{"a", "1"}, {"b", "0"}, {"d", 1}};
  EXPECT_THROW(catalog_from_json(doc), ParseError);
  doc[0]["z"] = {{"a", "3/2"}, {"b", "0"}, {"d", 1}};
  EXPECT_THROW(catalog_from_json(doc), ParseError);
}

TEST(Catalog, ErrorsNameEntryAndField) {
  auto doc = catalog_to_json({find_entry(builtin_catalog(), "e17")});
  doc[0]["weight"][1]["a"] = "18o";
  try {
    catalog_from_json(doc);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    std::string msg = e.what();
    EXPECT_NE(msg.find("e17"), std::string::npos) << msg;
    EXPECT_NE(msg.find("weight[1].a"), std::string::npos) << msg;
  }
  doc = catalog_to_json({find_entry(builtin_catalog(), "e10")});
  doc[0]["sequence"] = "missing_seq";
  EXPECT_THROW(catalog_from_json(doc), ParseError);
  EXPECT_THROW(load_catalog(std::string("[{")), ParseError);
}

TEST(Verify, WholeCatalogAt50Digits) {
  auto reports = verify_all(builtin_catalog(), 50, refs());
  ASSERT_EQ(reports.size(), 25u);
  for (const auto& r : reports) {
    EXPECT_EQ(r.status, Status::pass) << r.id << " residual " << r.residual_exponent << " " << r.message;
    EXPECT_LE(r.residual_exponent, -40) << r.id;
  }
}

TEST(Verify, ChudnovskyAt500Digits) {
  auto r = verify_entry(find_entry(builtin_catalog(), "e06"), 500, long_refs());
  EXPECT_EQ(r.status, Status::pass);
  EXPECT_LE(r.terms_used, 37);
  EXPECT_LE(r.residual_exponent, -500);
}

TEST(Verify, AlternatingEntryUsesAcceleration) {
  auto r = verify_entry(find_entry(builtin_catalog(), "e02"), 30, refs());
  EXPECT_EQ(r.status, Status::pass);
  EXPECT_EQ(r.terms_used, cvz_terms_for(30));
  auto capped = verify_entry(find_entry(builtin_catalog(), "e02"), 400, long_refs());
  EXPECT_EQ(capped.digits_requested, 100);
  EXPECT_EQ(capped.status, Status::pass);
  EXPECT_LE(capped.residual_exponent, -90);
}

TEST(Verify, PerturbedRhsFails) {
  CatalogEntry e = find_entry(builtin_catalog(), "e09");
  e.series.rhs.terms.back().q += Rational(1, 1000000);
  EXPECT_EQ(verify_entry(e, 50, refs()).status, Status::fail);
}

TEST(Verify, SingleConstantPerturbationsFlipEveryEntry) {
  for (const auto& base : builtin_catalog()) {
    std::vector<CatalogEntry> variants(3, base);
    variants[0].series.weight[0] += QuadExt(1);
    variants[1].series.z = bump_numerator(base.series.z);
    variants[2].series.rhs.terms[0].q += Rational(1);
    auto reports = verify_all(variants, 60, refs());
    const char* what[] = {"weight", "z", "rhs"};
    for (int i = 0; i < 3; ++i)
      EXPECT_EQ(reports[static_cast<std::size_t>(i)].status, Status::fail) << base.id << " " << what[i];
  }
}

TEST(Verify, ShortReferencesAreAnError) {
  TranscendentalRefs shortref{FixedReal::from_decimal(kPi, 100), std::nullopt};
  EXPECT_THROW(verify_entry(find_entry(builtin_catalog(), "e04"), 100, shortref), PrecisionError);
  EXPECT_THROW(verify_entry(find_entry(builtin_catalog(), "e24_half"), 20, shortref), PrecisionError);
  EXPECT_THROW(verify_all(builtin_catalog(), 100, shortref), PrecisionError);
}

TEST(Verify, EmptyListAndDeterministicOrder) {
  EXPECT_TRUE(verify_all({}, 50, refs()).empty());
  auto serial = verify_all(builtin_catalog(), 40, refs(), false);
  auto threaded = verify_all(builtin_catalog(), 40, refs(), true);
  ASSERT_EQ(serial.size(), threaded.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    threaded[i].elapsed_ms = serial[i].elapsed_ms;
    EXPECT_EQ(serial[i], threaded[i]);
  }
}

TEST(Sato, ExactAndFixedPipelinesAgree) {
  for (const char* id : {"e09", "e10", "e11", "e23", "chudnovsky_squared"}) {
    const auto& e = find_entry(builtin_catalog(), id);
    long n = sato_terms_needed(e, 120);
    const std::int64_t scale = bits_for_digits(140);
    FixedReal exact = embed(sato_sum_exact(e, n), scale);
    FixedReal fixed = sato_sum_fixed(e, n, scale);
    EXPECT_LE(abs((exact - fixed).mantissa()), 2) << id;
  }
}

TEST(Sato, TermCountsFollowTheGrowthRate) {
  // e09: growth (1+sqrt2)^4 = 33.97..., z = 0.0031..., about 0.98 digits per term
  long n = sato_terms_needed(find_entry(builtin_catalog(), "e09"), 100);
  EXPECT_GE(n, 105);
  EXPECT_LE(n, 125);
}

TEST(Pi, EverySeriesGivesPi) {
  FixedReal ref = FixedReal::from_decimal(kPi, 400);
  for (const char* id : {"e04", "e06", "e03", "e17", "e09", "w_series_41", "chudnovsky_squared"}) {
    FixedReal p = compute_pi(100, id);
    EXPECT_LT((p - ref).floor_log10_abs(), -100) << id;
  }
  EXPECT_THROW(compute_pi(50, "gourevich"), UnsupportedError);
  EXPECT_THROW(compute_pi(200, "e02"), UnsupportedError);
}

TEST(Pi, ReferencesAgree) {
  auto r = make_references(200);
  ASSERT_TRUE(r.pi && r.zeta3);
  EXPECT_LT((*r.pi - FixedReal::from_decimal(kPi, 700)).floor_log10_abs(), -200);
  EXPECT_LT((*r.zeta3 - FixedReal::from_decimal(kZeta3, 600)).floor_log10_abs(), -170);
}

TEST(Reports, JsonRoundTripAndTabularForms) {
  std::vector<VerifyReport> rs{{"e04", 100, 15, -110, 3, Status::pass, ""},
                               {"x", 50, 0, 0, 1, Status::fail, "does not converge"}};
  EXPECT_EQ(reports_from_json(nlohmann::json::parse(reports_to_json(rs).dump())), rs);
  std::string csv = reports_to_csv(rs);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  EXPECT_NE(csv.find("e04,100,15,-110,3,pass"), std::string::npos);
  EXPECT_NE(reports_to_text(rs).find("does not converge"), std::string::npos);
  EXPECT_THROW(reports_from_json(nlohmann::json::parse("[{\"id\":1}]")), ParseError);
}
