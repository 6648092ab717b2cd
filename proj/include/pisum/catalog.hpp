#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "pisum/hyperseries.hpp"
#include "pisum/sequences.hpp"

namespace pisum {

enum class EntryKind { hypergeometric, sato };

inline std::string to_string(EntryKind k) { return k == EntryKind::sato ? "sato" : "hypergeometric"; }

/// One formula: prefactor * sum_n c_n weight(n) z^n = rhs, where c_n is the
/// Pochhammer quotient (hypergeometric) or a sequence value (sato).
struct CatalogEntry {
  std::string id;
  EntryKind kind = EntryKind::hypergeometric;
  SeriesSpec series;
  std::string sequence;  // sato only
  std::string source;

  const SurdSum& rhs() const { return series.rhs; }

  /// growth * |z| for sato entries.
  double sato_ratio() const { return find_sequence(sequence).growth * std::fabs(series.z.to_double()); }

  void validate() const {
    if (id.empty()) throw Error("catalog entry without id");
    if (kind == EntryKind::hypergeometric) {
      series.validate();
      return;
    }
    if (!series.poch.upper.empty() || !series.poch.lower.empty())
      throw Error("sato entry '" + id + "' carries Pochhammer parameters");
    if (series.weight.empty() || series.weight.size() > 4) throw Error("weight must have 1..4 coefficients");
    (void)series.radicand();
    series.rhs.validate();
    if (!(sato_ratio() < 1.0)) throw Error("sato series '" + id + "' does not converge");
  }
};

namespace detail {

inline Rational q(long p, long r = 1) { return Rational(BigInt(p), BigInt(r)); }
inline std::vector<Rational> rep(const Rational& x, int k) { return std::vector<Rational>(static_cast<std::size_t>(k), x); }
inline std::vector<Rational> unit(int k) { return rep(Rational(1), k); }
inline Rational inv_pow(long base, unsigned long e) { return Rational(BigInt(1), pow(BigInt(base), e)); }

inline CatalogEntry hyp(std::string id, std::vector<Rational> up, std::vector<Rational> low, WeightPoly w,
                        QuadExt z, QuadExt pref, SurdSum rhs, std::string source) {
  CatalogEntry e;
  e.id = id;
  e.series = {std::move(id), {std::move(up), std::move(low)}, std::move(w), std::move(z), std::move(pref), std::move(rhs)};
  e.source = std::move(source);
  return e;
}

inline CatalogEntry sato(std::string id, std::string seq, WeightPoly w, QuadExt z, QuadExt pref, SurdSum rhs,
                         std::string source) {
  CatalogEntry e;
  e.id = id;
  e.kind = EntryKind::sato;
  e.series = {std::move(id), {}, std::move(w), std::move(z), std::move(pref), std::move(rhs)};
  e.sequence = std::move(seq);
  e.source = std::move(source);
  return e;
}

inline QuadExt big(const char* digits) { return QuadExt(Rational(BigInt(digits))); }

inline std::vector<CatalogEntry> make_builtin() {
  const Rational h = q(1, 2);
  std::vector<CatalogEntry> c;
  c.push_back(hyp("e02", rep(h, 3), unit(3), {1, 4}, -1, 1, {{{2, 1}}, 1}, "Ramanujan 1914"));
  c.push_back(hyp("e03", {q(1, 4), h, q(3, 4)}, unit(3), {1123, 21460}, -Rational(inv_pow(882, 2)),
                  Rational(q(1, 882)), {{{4, 1}}, 1}, "Ramanujan 1914"));
  c.push_back(hyp("e04", {q(1, 4), h, q(3, 4)}, unit(3), {1103, 26390}, inv_pow(99, 4), inv_pow(99, 2),
                  {{{q(1, 4), 2}}, 1}, "Ramanujan 1914"));
  c.push_back(hyp("e05", {q(1, 3), h, q(2, 3)}, unit(3), {827, 14151}, -Rational(inv_pow(500, 2)),
                  Rational(q(1, 500)), {{{3, 3}}, 1}, "Ramanujan 1914"));
  c.push_back(hyp("e06", {q(1, 6), h, q(5, 6)}, unit(3), {13591409, 545140134}, -Rational(inv_pow(53360, 3)),
                  inv_pow(53360, 2), {{{q(3, 20010), 10005}}, 1}, "D. V. and G. V. Chudnovsky 1987"));

  c.push_back(sato("e09", "apery_e09", {QuadExt(10, -3, 5), 20}, QuadExt(161, -72, 5), 1,
                   {{{q(10, 3), 3}, {q(3, 2), 15}}, 1}, "T. Sato 2002"));
  c.push_back(sato("e10", "domb_e10", {1, 5}, Rational(q(1, 64)), 1, {{{q(8, 3), 3}}, 1},
                   "H. H. Chan, S. H. Chan and Z.-G. Liu 2004"));
  c.push_back(sato("e11", "az_e11", {1, 4}, Rational(q(1, 81)), 1, {{{q(3, 2), 3}}, 1},
                   "H. H. Chan and H. Verrill 2005"));
  c.push_back(sato("e12", "yang_e12", {1, 4}, Rational(q(1, 36)), 1, {{{q(6, 5), 15}}, 1}, "Y. Yang 2005"));

  c.push_back(hyp("e16", rep(h, 5), unit(5), {1, 8, 20}, Rational(q(-1, 4)), 1, {{{8, 1}}, 2}, "J. Guillera 2003"));
  c.push_back(hyp("e17", rep(h, 5), unit(5), {13, 180, 820}, Rational(q(-1, 1024)), 1, {{{128, 1}}, 2},
                  "J. Guillera 2003"));
  c.push_back(hyp("e18", {h, h, h, q(1, 4), q(3, 4)}, unit(5), {3, 34, 120}, Rational(q(1, 16)), 1,
                  {{{32, 1}}, 2}, "J. Guillera 2003"));
  c.push_back(hyp("e19", {h, q(1, 4), q(3, 4), q(1, 6), q(5, 6)}, unit(5), {15, 278, 1640},
                  Rational(q(-1, 1024)), 1, {{{q(256, 3), 3}}, 2}, "J. Guillera 2003"));
  c.push_back(hyp("e20", {h, q(1, 4), q(3, 4), q(1, 3), q(2, 3)}, unit(5), {5, 63, 252}, Rational(q(-1, 48)), 1,
                  {{{48, 1}}, 2}, "J. Guillera 2003"));
  c.push_back(hyp("e21", {h, q(1, 3), q(2, 3), q(1, 6), q(5, 6)}, unit(5), {29, 693, 5418},
                  -Rational(inv_pow(80, 3)), 1, {{{128, 5}}, 2}, "J. Guillera 2003"));
  c.push_back(hyp("e22", {h, q(1, 8), q(3, 8), q(5, 8), q(7, 8)}, unit(5), {15, 304, 1920}, inv_pow(7, 4), 1,
                  {{{56, 7}}, 2}, "J. Guillera 2006"));
  c.push_back(hyp("gourevich", rep(h, 7), unit(7), {1, 14, 76, 168}, Rational(q(1, 64)), 1, {{{32, 1}}, 3},
                  "B. Gourevich 2002"));
  c.push_back(sato("e23", "guillera_e23", {1, 12, 36}, Rational(q(1, 1024)), 1, {{{32, 1}}, 2},
                   "J. Guillera 2003"));
  c.push_back(hyp("e24_half", unit(5), rep(q(3, 2), 5), {308, 1000, 820}, Rational(q(-1, 1024)), 1,
                  {{{256, 1}}, 0, 1}, "J. Guillera, G(1/2)"));

  c.push_back(hyp("companion_28", {h, q(1, 4), q(3, 4)}, unit(3), {3, 28}, Rational(q(-1, 48)), 1,
                  {{{q(16, 3), 3}}, 1}, "Ramanujan 1914"));
  c.push_back(hyp("companion_5418", {h, q(1, 6), q(5, 6)}, unit(3), {263, 5418}, -Rational(inv_pow(80, 3)), 1,
                  {{{q(640, 3), 15}}, 1}, "Ramanujan-type, level 3"));
  c.push_back(hyp("companion_40", {h, q(1, 4), q(3, 4)}, unit(3), {3, 40}, inv_pow(7, 4), 1,
                  {{{q(49, 9), 3}}, 1}, "Ramanujan 1914"));
  c.push_back(sato("w_series_6400", "w_4n", {-3, -10, 18}, Rational(q(1, 6400)), 1, {{{10, 5}}, 2},
                   "w_n series, level 2"));
  c.push_back(sato("w_series_41", "w_4n", {16032, 227104, 1046529}, Rational(BigInt(1), BigInt(625 * 1681)), 1,
                   {{{25625, 41}}, 2}, "w_n series, level 2"));
  c.push_back(sato("chudnovsky_squared", "w_3n",
                   {big("415634396862086"), big("16670750677895547"), big("222883324273153467")},
                   -Rational(inv_pow(640320, 3)), inv_pow(640320, 3), {{{q(1, 64), 1}}, 2},
                   "Chudnovsky formula, squared"));
  return c;
}

}  // namespace detail

/// The built-in catalog (25 entries), validated once.
inline const std::vector<CatalogEntry>& builtin_catalog() {
  static const std::vector<CatalogEntry> entries = [] {
    auto v = detail::make_builtin();
    for (const auto& e : v) e.validate();
    return v;
  }();
  return entries;
}

inline const CatalogEntry& find_entry(const std::vector<CatalogEntry>& entries, const std::string& id) {
  for (const auto& e : entries)
    if (e.id == id) return e;
  throw UnsupportedError("unknown series id '" + id + "'");
}

// ---------------------------------------------------------------- JSON

namespace detail {

using nlohmann::json;

struct FieldError : ParseError {
  using ParseError::ParseError;
};

inline const json& field(const json& j, const std::string& name, const std::string& path) {
  if (!j.is_object() || !j.contains(name)) throw FieldError(path + "." + name + ": missing");
  return j.at(name);
}

inline Rational rational_field(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(BigInt(std::to_string(j.get<long long>())));
  if (!j.is_string()) throw FieldError(path + ": expected a \"p/q\" string");
  try {
    return Rational::parse(j.get<std::string>());
  } catch (const Error& e) {
    throw FieldError(path + ": " + e.what());
  }
}

inline long integer_field(const json& j, const std::string& path) {
  if (j.is_number_integer()) return j.get<long>();
  if (j.is_string()) {
    try {
      std::size_t used = 0;
      long v = std::stol(j.get<std::string>(), &used);
      if (used == j.get<std::string>().size()) return v;
    } catch (const std::exception&) {
    }
  }
  throw FieldError(path + ": expected an integer");
}

inline QuadExt quad_field(const json& j, const std::string& path) {
  if (j.is_string() || j.is_number_integer()) return QuadExt(rational_field(j, path));
  Rational a = rational_field(field(j, "a", path), path + ".a");
  Rational b = j.contains("b") ? rational_field(j.at("b"), path + ".b") : Rational(0);
  long d = j.contains("d") ? integer_field(j.at("d"), path + ".d") : 1;
  try {
    return QuadExt(a, b, d);
  } catch (const Error& e) {
    throw FieldError(path + ": " + e.what());
  }
}

inline std::vector<Rational> rational_list(const json& j, const std::string& path) {
  if (!j.is_array()) throw FieldError(path + ": expected an array");
  std::vector<Rational> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(rational_field(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

inline json rational_json(const Rational& r) { return r.to_string(); }

inline json quad_json(const QuadExt& x) {
  return {{"a", rational_json(x.a())}, {"b", rational_json(x.b())}, {"d", x.d()}};
}

inline CatalogEntry entry_from_json(const json& j, std::size_t index) {
  std::string path = "[" + std::to_string(index) + "]";
  if (!j.is_object()) throw FieldError(path + ": expected an object");
  CatalogEntry e;
  const json& id = field(j, "id", path);
  if (!id.is_string()) throw FieldError(path + ".id: expected a string");
  e.id = id.get<std::string>();
  path = "entry '" + e.id + "'";
  std::string kind = j.value("kind", std::string("hypergeometric"));
  if (kind == "sato") e.kind = EntryKind::sato;
  else if (kind != "hypergeometric") throw FieldError(path + ".kind: unknown kind '" + kind + "'");

  if (e.kind == EntryKind::hypergeometric) {
    e.series.poch.upper = rational_list(field(j, "poch_upper", path), path + ".poch_upper");
    e.series.poch.lower = rational_list(field(j, "poch_lower", path), path + ".poch_lower");
  } else {
    const json& s = field(j, "sequence", path);
    if (!s.is_string()) throw FieldError(path + ".sequence: expected a string");
    e.sequence = s.get<std::string>();
    try {
      (void)find_sequence(e.sequence);
    } catch (const Error& err) {
      throw FieldError(path + ".sequence: " + err.what());
    }
  }
  const json& w = field(j, "weight", path);
  if (!w.is_array() || w.empty() || w.size() > 4) throw FieldError(path + ".weight: expected 1..4 coefficients");
  for (std::size_t i = 0; i < w.size(); ++i)
    e.series.weight.push_back(quad_field(w[i], path + ".weight[" + std::to_string(i) + "]"));
  e.series.z = quad_field(field(j, "z", path), path + ".z");
  e.series.prefactor = j.contains("prefactor") ? quad_field(j.at("prefactor"), path + ".prefactor") : QuadExt(1);

  const json& rhs = field(j, "rhs", path);
  const json& terms = field(rhs, "terms", path + ".rhs");
  if (!terms.is_array()) throw FieldError(path + ".rhs.terms: expected an array");
  for (std::size_t i = 0; i < terms.size(); ++i) {
    std::string tp = path + ".rhs.terms[" + std::to_string(i) + "]";
    SurdTerm t{rational_field(field(terms[i], "q", tp), tp + ".q"),
               terms[i].contains("m") ? integer_field(terms[i].at("m"), tp + ".m") : 1};
    e.series.rhs.terms.push_back(t);
  }
  e.series.rhs.pi_power =
      rhs.contains("pi_power") ? static_cast<int>(integer_field(rhs.at("pi_power"), path + ".rhs.pi_power")) : 0;
  e.series.rhs.zeta3_power =
      rhs.contains("zeta3_power") ? static_cast<int>(integer_field(rhs.at("zeta3_power"), path + ".rhs.zeta3_power"))
                                  : 0;
  e.source = j.value("source", std::string());
  e.series.id = e.id;
  try {
    e.validate();
  } catch (const FieldError&) {
    throw;
  } catch (const Error& err) {
    throw FieldError(path + ": " + err.what());
  }
  return e;
}

}  // namespace detail

inline nlohmann::json entry_to_json(const CatalogEntry& e) {
  using detail::json;
  json j;
  j["id"] = e.id;
  j["kind"] = to_string(e.kind);
  if (e.kind == EntryKind::sato) {
    j["sequence"] = e.sequence;
  } else {
    json up = json::array(), low = json::array();
    for (const auto& a : e.series.poch.upper) up.push_back(a.to_string());
    for (const auto& b : e.series.poch.lower) low.push_back(b.to_string());
    j["poch_upper"] = up;
    j["poch_lower"] = low;
  }
  json w = json::array();
  for (const auto& c : e.series.weight) w.push_back(detail::quad_json(c));
  j["weight"] = w;
  j["z"] = detail::quad_json(e.series.z);
  j["prefactor"] = detail::quad_json(e.series.prefactor);
  json terms = json::array();
  for (const auto& t : e.rhs().terms) terms.push_back({{"q", t.q.to_string()}, {"m", t.m}});
  j["rhs"] = {{"terms", terms}, {"pi_power", e.rhs().pi_power}};
  if (e.rhs().zeta3_power) j["rhs"]["zeta3_power"] = e.rhs().zeta3_power;
  j["source"] = e.source;
  return j;
}

inline nlohmann::json catalog_to_json(const std::vector<CatalogEntry>& entries) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& e : entries) arr.push_back(entry_to_json(e));
  return arr;
}

/// Parses a catalog document; errors name the offending entry and field.
inline std::vector<CatalogEntry> catalog_from_json(const nlohmann::json& doc) {
  if (!doc.is_array()) throw ParseError("catalog document must be a JSON array");
  std::vector<CatalogEntry> out;
  std::set<std::string> ids;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    out.push_back(detail::entry_from_json(doc[i], i));
    if (!ids.insert(out.back().id).second) throw ParseError("entry '" + out.back().id + "': duplicate id");
  }
  return out;
}

/// Built-in catalog when `source` is empty, else the parsed document.
inline std::vector<CatalogEntry> load_catalog(const std::optional<std::string>& source = std::nullopt) {
  if (!source) return builtin_catalog();
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(*source);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("catalog is not valid JSON: ") + e.what());
  }
  return catalog_from_json(doc);
}

/// Human-readable form of an entry's identity.
inline std::string formula_text(const CatalogEntry& e) {
  std::ostringstream os;
  const auto& s = e.series;
  if (!(s.prefactor == QuadExt(1))) os << "(" << s.prefactor << ") * ";
  os << "sum_n ";
  if (e.kind == EntryKind::sato) {
    os << e.sequence << "(n)";
  } else {
    os << "[";
    for (std::size_t i = 0; i < s.poch.upper.size(); ++i) os << (i ? "," : "") << s.poch.upper[i];
    os << "]_n/[";
    for (std::size_t i = 0; i < s.poch.lower.size(); ++i) os << (i ? "," : "") << s.poch.lower[i];
    os << "]_n";
  }
  os << " (";
  bool first = true;
  for (std::size_t k = s.weight.size(); k-- > 0;) {
    if (s.weight[k].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << (s.weight[k].is_rational() ? s.weight[k].to_string() : "(" + s.weight[k].to_string() + ")");
    if (k > 0) os << "*n" << (k > 1 ? "^" + std::to_string(k) : "");
  }
  os << ") (" << s.z << ")^n = " << s.rhs.to_string();
  return os.str();
}

// ---------------------------------------------------------------- evaluation

enum class Status { pass, fail, skipped };

inline std::string to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::skipped: return "skipped";
  }
  return "?";
}

inline Status status_from_string(const std::string& s) {
  if (s == "pass") return Status::pass;
  if (s == "fail") return Status::fail;
  if (s == "skipped") return Status::skipped;
  throw ParseError("unknown status '" + s + "'");
}

struct VerifyReport {
  std::string id;
  long digits_requested = 0;
  long terms_used = 0;
  long residual_exponent = 0;
  long elapsed_ms = 0;
  Status status = Status::skipped;
  std::string message;  // set when evaluation raised an error

  friend bool operator==(const VerifyReport&, const VerifyReport&) = default;
};

struct VerifyOptions {
  /// Extra decimal digits carried beyond the request.
  long guard_digits = 20;
};

namespace detail {

inline double log10_abs(const BigInt& x) {
  if (sgn(x) == 0) return -1e300;
  long e = 0;
  double m = std::fabs(mpz_get_d_2exp(&e, x.get_mpz_t()));
  return std::log10(m) + static_cast<double>(e) * std::log10(2.0);
}

inline double weight_majorant(const WeightPoly& w, double n) {
  double acc = 0;
  for (auto it = w.rbegin(); it != w.rend(); ++it)
    acc = acc * n + std::fabs(it->a().to_double()) + std::fabs(it->b().to_double()) * std::sqrt(static_cast<double>(it->d()));
  return acc;
}

inline long ceil_log10(long n) { return n <= 1 ? 0 : static_cast<long>(std::ceil(std::log10(static_cast<double>(n)))); }

}  // namespace detail

/// Number of sato terms N so that the tail from N on stays below
/// 10^-(digits+10). The tail is bounded geometrically with ratio
/// growth*|z|*(1+3/N), starting from the largest of the last few terms
/// scaled forward by the growth rate.
inline long sato_terms_needed(const CatalogEntry& e, long decimal_digits) {
  const auto& def = find_sequence(e.sequence);
  const double zabs = std::fabs(e.series.z.to_double());
  const double lz = std::log10(zabs), lg = std::log10(def.growth);
  const double target = -static_cast<double>(decimal_digits + 10);
  long count = static_cast<long>(std::ceil(-target / -(lg + lz) * 1.1)) + 32;
  for (;;) {
    auto a = sequence_terms(e.sequence, count);
    for (long N = 8; N < count; ++N) {
      double rho = def.growth * zabs * (1.0 + 3.0 / static_cast<double>(N));
      if (rho >= 1.0) continue;
      double lead = -1e300;
      for (long k = N - 4; k <= N; ++k)
        lead = std::max(lead, detail::log10_abs(a[static_cast<std::size_t>(k)]) + static_cast<double>(N - k) * lg);
      double bound = lead + std::log10(std::max(detail::weight_majorant(e.series.weight, static_cast<double>(N)), 1e-300)) +
                     static_cast<double>(N) * lz - std::log10(1.0 - rho);
      if (bound < target) return N;
    }
    if (count > 2'000'000) throw UnsupportedError("sato series '" + e.id + "' converges too slowly");
    count *= 2;
  }
}

/// prefactor * sum_{n<N} a_n weight(n) z^n at `scale`, term by term in
/// fixed point with headroom for the size of a_n.
inline FixedReal sato_sum_fixed(const CatalogEntry& e, long n_terms, std::int64_t scale) {
  auto a = sequence_terms(e.sequence, n_terms);
  std::size_t top = 0;
  for (const auto& v : a) top = std::max(top, bit_length(v));
  const std::int64_t w = scale + 64 + static_cast<std::int64_t>(top) + static_cast<std::int64_t>(std::log2(n_terms + 1.0));
  const FixedReal z = embed(e.series.z, w);
  FixedReal zp = FixedReal::from_integer(1, w), sum = FixedReal::from_integer(0, w);
  for (long n = 0; n < n_terms; ++n) {
    FixedReal wn = embed(eval_weight(e.series.weight, n), w);
    sum += mul(zp.mul_int(a[static_cast<std::size_t>(n)]), wn, w);
    zp = mul(zp, z, w);
  }
  return mul(sum, embed(e.series.prefactor, w), w).rescaled(scale);
}

namespace detail {

struct SatoNode {
  QuadInt S, Zp;
  BigInt Dp;
};

struct SatoForm {
  QuadRing ring;
  BigInt za, zb, zden;
  std::vector<BigInt> w_a, w_b;
  BigInt weight_den;
  const std::vector<BigInt>* a;
};

inline SatoNode sato_split(const SatoForm& f, long lo, long hi) {
  if (hi - lo == 1) {
    const BigInt& an = (*f.a)[static_cast<std::size_t>(lo)];
    return {{an * IntegerForm::horner(f.w_a, lo), an * IntegerForm::horner(f.w_b, lo)}, {f.za, f.zb}, f.zden};
  }
  long mid = lo + (hi - lo) / 2;
  SatoNode l = sato_split(f, lo, mid), r = sato_split(f, mid, hi);
  return {f.ring.add(f.ring.scale(l.S, r.Dp), f.ring.mul(l.Zp, r.S)), f.ring.mul(l.Zp, r.Zp), l.Dp * r.Dp};
}

}  // namespace detail

/// Exact partial sum in Q(sqrt d) by divide and conquer over
/// S(lo,hi) = sum a_n w(n) Z^(n-lo) D^(hi-1-n), z = Z/D.
inline QuadExt sato_sum_exact(const CatalogEntry& e, long n_terms) {
  if (n_terms <= 0) return QuadExt(0);
  auto a = sequence_terms(e.sequence, n_terms);
  const auto& s = e.series;
  detail::SatoForm f{{s.radicand()}, {}, {}, {}, {}, {}, {}, &a};
  f.zden = lcm(s.z.a().den(), s.z.b().den());
  f.za = s.z.a().num() * (f.zden / s.z.a().den());
  f.zb = s.z.b().num() * (f.zden / s.z.b().den());
  f.weight_den = 1;
  for (const auto& c : s.weight) f.weight_den = lcm(lcm(f.weight_den, c.a().den()), c.b().den());
  for (const auto& c : s.weight) {
    f.w_a.push_back(c.a().num() * (f.weight_den / c.a().den()));
    f.w_b.push_back(c.b().num() * (f.weight_den / c.b().den()));
  }
  auto root = detail::sato_split(f, 0, n_terms);
  BigInt den = root.Dp / f.zden * f.weight_den;
  QuadExt sum = f.ring.d == 1 ? QuadExt(Rational(root.S.a, den))
                              : QuadExt(Rational(root.S.a, den), Rational(root.S.b, den), f.ring.d);
  return s.prefactor * sum;
}

struct LhsValue {
  FixedReal value;
  long terms = 0;
  long digits = 0;  // decimal digits the value is good to
};

/// Left-hand side of an entry to `digits` decimal digits (capped for the
/// accelerated alternating series).
inline LhsValue evaluate_lhs(const CatalogEntry& e, long decimal_digits, const VerifyOptions& opt = {}) {
  LhsValue out;
  if (e.kind == EntryKind::sato) {
    out.terms = sato_terms_needed(e, decimal_digits);
    out.digits = decimal_digits;
    const long guard = decimal_digits + opt.guard_digits + detail::ceil_log10(out.terms);
    out.value = sato_sum_fixed(e, out.terms, bits_for_digits(guard));
    return out;
  }
  switch (e.series.convergence()) {
    case Convergence::alternating_subgeometric:
      out.digits = std::min(decimal_digits, kAccelerationDigitCap);
      out.terms = cvz_terms_for(out.digits);
      out.value = sum_accelerated(e.series, out.digits);
      return out;
    case Convergence::geometric: {
      out.terms = terms_needed(e.series, decimal_digits);
      out.digits = decimal_digits;
      const long guard = decimal_digits + opt.guard_digits + detail::ceil_log10(out.terms);
      out.value = sum_binary_split_fixed(e.series, out.terms, bits_for_digits(guard));
      return out;
    }
    case Convergence::divergent: break;
  }
  throw Error("series '" + e.id + "' does not converge");
}

/// Compares LHS against RHS; status pass iff residual <= -(digits-10).
/// Throws PrecisionError when a reference constant is too short.
inline VerifyReport verify_entry(const CatalogEntry& e, long decimal_digits, const TranscendentalRefs& refs,
                                 const VerifyOptions& opt = {}) {
  if (decimal_digits < 1) throw Error("digits must be positive");
  auto t0 = std::chrono::steady_clock::now();
  auto check_ref = [&](const std::optional<FixedReal>& r, const char* name) {
    if (!r || r->precision_digits() < decimal_digits + opt.guard_digits)
      throw PrecisionError(std::string(name) + " reference carries fewer than digits+" +
                           std::to_string(opt.guard_digits) + " digits");
  };
  if (e.rhs().pi_power) check_ref(refs.pi, "pi");
  if (e.rhs().zeta3_power) check_ref(refs.zeta3, "zeta(3)");

  VerifyReport r;
  r.id = e.id;
  LhsValue lhs = evaluate_lhs(e, decimal_digits, opt);
  r.digits_requested = lhs.digits;
  r.terms_used = lhs.terms;
  const std::int64_t scale = lhs.value.scale_bits();
  TranscendentalRefs trimmed;
  // references may be longer than needed; only scale + 16 bits are used
  if (refs.pi) trimmed.pi = refs.pi->rescaled(std::min(refs.pi->scale_bits(), scale + 64));
  if (refs.zeta3) trimmed.zeta3 = refs.zeta3->rescaled(std::min(refs.zeta3->scale_bits(), scale + 64));
  FixedReal rhs = surd_eval(e.rhs(), trimmed, scale);
  r.residual_exponent = (lhs.value - rhs).floor_log10_abs();
  r.status = r.residual_exponent <= -(r.digits_requested - 10) ? Status::pass : Status::fail;
  r.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

/// One report per entry, in input order. Evaluation errors become failed
/// reports; reference shortfalls propagate.
inline std::vector<VerifyReport> verify_all(const std::vector<CatalogEntry>& entries, long decimal_digits,
                                            const TranscendentalRefs& refs, bool parallel = false,
                                            const VerifyOptions& opt = {}) {
  std::vector<VerifyReport> out(entries.size());
  std::vector<std::exception_ptr> precision(entries.size());
  auto one = [&](std::size_t i) {
    try {
      out[i] = verify_entry(entries[i], decimal_digits, refs, opt);
    } catch (const PrecisionError&) {
      precision[i] = std::current_exception();
    } catch (const std::exception& ex) {
      out[i].id = entries[i].id;
      out[i].digits_requested = decimal_digits;
      out[i].status = Status::fail;
      out[i].message = ex.what();
    }
  };
  if (parallel && entries.size() > 1) {
    std::atomic<std::size_t> next{0};
    unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                       static_cast<unsigned>(entries.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t)
      pool.emplace_back([&] {
        for (std::size_t i; (i = next++) < entries.size();) one(i);
      });
    for (auto& th : pool) th.join();
  } else {
    for (std::size_t i = 0; i < entries.size(); ++i) one(i);
  }
  for (auto& p : precision)
    if (p) std::rethrow_exception(p);
  return out;
}

/// pi from one entry with rhs of the form s/pi or s/pi^2; result at
/// bits_for_digits(digits + guard).
inline FixedReal compute_pi(long decimal_digits, const CatalogEntry& e, const VerifyOptions& opt = {}) {
  const int p = e.rhs().pi_power;
  if ((p != 1 && p != 2) || e.rhs().zeta3_power)
    throw UnsupportedError("entry '" + e.id + "' does not determine pi");
  const long work = decimal_digits + opt.guard_digits;
  LhsValue lhs = evaluate_lhs(e, work, opt);
  if (lhs.digits < work) throw UnsupportedError("entry '" + e.id + "' is capped at " + std::to_string(lhs.digits) + " digits");
  const std::int64_t scale = bits_for_digits(work);
  const std::int64_t w = lhs.value.scale_bits();
  SurdSum s = e.rhs();
  s.pi_power = 0;
  FixedReal pp = div(surd_eval(s, TranscendentalRefs{}, w), lhs.value, w);
  if (p == 2) pp = fixed_sqrt(pp, w);
  return pp.rescaled(scale);
}

inline FixedReal compute_pi(long decimal_digits, const std::string& id = "e06", const VerifyOptions& opt = {}) {
  return compute_pi(decimal_digits, find_entry(builtin_catalog(), id), opt);
}

/// pi from e06 checked against e04 to digits+15, and zeta(3) from the Apery
/// recurrence, both long enough for verify_entry at `digits`.
inline TranscendentalRefs make_references(long decimal_digits, const VerifyOptions& opt = {}) {
  const long work = decimal_digits + opt.guard_digits + 30;
  TranscendentalRefs refs;
  FixedReal p6 = compute_pi(work, "e06", opt), p4 = compute_pi(work, "e04", opt);
  if ((p6 - p4).floor_log10_abs() >= -(decimal_digits + 15))
    throw Error("pi references from e06 and e04 disagree");
  refs.pi = p6;
  refs.zeta3 = zeta3(work);
  return refs;
}

// ---------------------------------------------------------------- reports

inline nlohmann::json report_to_json(const VerifyReport& r) {
  nlohmann::json j{{"id", r.id},
                   {"digits_requested", r.digits_requested},
                   {"terms_used", r.terms_used},
                   {"residual_exponent", r.residual_exponent},
                   {"elapsed_ms", r.elapsed_ms},
                   {"status", to_string(r.status)}};
  if (!r.message.empty()) j["message"] = r.message;
  return j;
}

inline nlohmann::json reports_to_json(const std::vector<VerifyReport>& rs) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rs) arr.push_back(report_to_json(r));
  return arr;
}

inline std::vector<VerifyReport> reports_from_json(const nlohmann::json& doc) {
  if (!doc.is_array()) throw ParseError("report document must be a JSON array");
  std::vector<VerifyReport> out;
  for (const auto& j : doc) {
    try {
      VerifyReport r;
      r.id = j.at("id").get<std::string>();
      r.digits_requested = j.at("digits_requested").get<long>();
      r.terms_used = j.at("terms_used").get<long>();
      r.residual_exponent = j.at("residual_exponent").get<long>();
      r.elapsed_ms = j.at("elapsed_ms").get<long>();
      r.status = status_from_string(j.at("status").get<std::string>());
      r.message = j.value("message", std::string());
      out.push_back(r);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("malformed report: ") + e.what());
    }
  }
  return out;
}

inline std::string reports_to_text(const std::vector<VerifyReport>& rs) {
  std::ostringstream os;
  os << std::left << std::setw(20) << "id" << std::right << std::setw(8) << "digits" << std::setw(8) << "terms"
     << std::setw(11) << "residual" << std::setw(10) << "ms" << "  status\n";
  for (const auto& r : rs) {
    os << std::left << std::setw(20) << r.id << std::right << std::setw(8) << r.digits_requested << std::setw(8)
       << r.terms_used << std::setw(11)
       << (r.digits_requested == 0 && r.residual_exponent == 0 ? std::string("exact")
                                                                : "1e" + std::to_string(r.residual_exponent))
       << std::setw(10)
       << r.elapsed_ms << "  " << to_string(r.status);
    if (!r.message.empty()) os << "  (" << r.message << ")";
    os << "\n";
  }
  return os.str();
}

inline std::string reports_to_csv(const std::vector<VerifyReport>& rs) {
  std::ostringstream os;
  os << "id,digits_requested,terms_used,residual_exponent,elapsed_ms,status\n";
  for (const auto& r : rs)
    os << r.id << "," << r.digits_requested << "," << r.terms_used << "," << r.residual_exponent << ","
       << r.elapsed_ms << "," << to_string(r.status) << "\n";
  return os.str();
}

}  // namespace pisum
