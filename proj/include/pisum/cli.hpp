#pragma once

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pisum/catalog.hpp"
#include "pisum/pseries.hpp"
#include "pisum/qmodular.hpp"
#include "pisum/wz.hpp"

namespace pisum::cli {

enum class Subcommand { pi, zeta3, verify, catalog, bench, wz_check, modular_check, transform_check };
enum class Format { text, json, csv };

enum ExitCode : int { kPass = 0, kFail = 1, kUsage = 2, kPrecision = 3 };

class UsageError : public Error {
 public:
  using Error::Error;
};

struct CliConfig {
  Subcommand subcommand = Subcommand::pi;
  long digits = 100;
  std::optional<std::string> series_id;
  std::optional<std::string> output_path;
  Format format = Format::text;
  bool parallel = false;
  std::optional<std::string> catalog_path;
  long guard_digits = 20;
};

inline const std::map<std::string, Subcommand>& subcommand_names() {
  static const std::map<std::string, Subcommand> m{
      {"pi", Subcommand::pi},           {"zeta3", Subcommand::zeta3},
      {"verify", Subcommand::verify},   {"catalog", Subcommand::catalog},
      {"bench", Subcommand::bench},     {"wz-check", Subcommand::wz_check},
      {"modular-check", Subcommand::modular_check}, {"transform-check", Subcommand::transform_check}};
  return m;
}

/// PISUM_GUARD_DIGITS, if set, replaces the default guard of 20 digits.
inline long guard_from_env(long fallback = 20) {
  const char* v = std::getenv("PISUM_GUARD_DIGITS");
  if (!v || !*v) return fallback;
  char* end = nullptr;
  long g = std::strtol(v, &end, 10);
  if (*end || g < 0 || g > 10000) throw UsageError(std::string("PISUM_GUARD_DIGITS must be an integer in [0, 10000], got '") + v + "'");
  return g;
}

/// Parses argv into a config. Throws UsageError on bad input; returns
/// nullopt after printing help.
inline std::optional<CliConfig> parse_args(int argc, const char* const* argv, std::ostream& out) {
  CliConfig cfg;
  cfg.guard_digits = guard_from_env();
  CLI::App app{"Arbitrary-precision verification of series for 1/pi", "pisum"};
  app.require_subcommand(1, 1);
  std::string format = "text";
  std::map<std::string, Format> formats{{"text", Format::text}, {"json", Format::json}, {"csv", Format::csv}};

  for (const auto& [name, sub] : subcommand_names()) {
    auto* s = app.add_subcommand(name);
    s->add_option("--digits,-d", cfg.digits, "decimal digits")->check(CLI::PositiveNumber);
    if (sub == Subcommand::pi || sub == Subcommand::verify)
      s->add_option("--id", cfg.series_id, "catalog entry id");
    if (sub == Subcommand::verify || sub == Subcommand::catalog || sub == Subcommand::bench || sub == Subcommand::pi)
      s->add_option("--catalog", cfg.catalog_path, "catalog JSON file");
    if (sub == Subcommand::verify || sub == Subcommand::bench) s->add_flag("--parallel", cfg.parallel, "evaluate entries concurrently");
    s->add_option("--output,-o", cfg.output_path, "write to file instead of stdout");
    s->add_option("--format,-f", format, "text, json or csv")->check(CLI::IsMember({"text", "json", "csv"}));
    s->add_option("--guard", cfg.guard_digits, "guard digits (default 20 or PISUM_GUARD_DIGITS)")->check(CLI::Range(0, 10000));
    s->callback([&cfg, sub] { cfg.subcommand = sub; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }
  cfg.format = formats.at(format);
  if (cfg.subcommand == Subcommand::modular_check && cfg.digits > kModularDigitCap)
    throw UsageError("modular-check supports at most " + std::to_string(kModularDigitCap) + " digits");
  if (cfg.subcommand == Subcommand::transform_check && cfg.digits > kSpecializationDigitCap)
    throw UsageError("transform-check supports at most " + std::to_string(kSpecializationDigitCap) + " digits");
  return cfg;
}

namespace detail {

struct Digits {
  std::string text;  // "3.1415..."
  bool near_roll = false;
};

/// Truncates x to `digits` decimals. near_roll is set when the discarded
/// part lies within 10^-(guard/2) of a unit in the last kept digit, i.e.
/// when the working error could have changed the truncation.
inline Digits truncate_digits(const FixedReal& x, long digits, long guard) {
  Digits d;
  d.text = x.to_decimal(digits);
  const std::int64_t s = x.scale_bits();
  BigInt scaled = ::abs(x.mantissa()) * pow(BigInt(10), static_cast<unsigned long>(digits));
  BigInt one = shift_left(BigInt(1), s);
  BigInt rem = scaled - shift_left(shift_left(scaled, -s), s);
  BigInt margin = one / pow(BigInt(10), static_cast<unsigned long>(std::max(1L, guard / 2)));
  d.near_roll = rem < margin || one - rem < margin;
  return d;
}

/// Runs compute at increasing guards until the truncated result is stable.
template <class F>
Digits stable_digits(long digits, long guard, F compute) {
  for (int attempt = 0; attempt < 4; ++attempt, guard *= 2) {
    Digits d = truncate_digits(compute(digits + guard), digits, guard);
    if (!d.near_roll) return d;
  }
  throw PrecisionError("digit string stays next to a rounding boundary");
}

inline std::string wrap(const std::string& s, std::size_t width = 80) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); i += width) out += s.substr(i, width) + "\n";
  return out;
}

inline VerifyReport exact_report(const std::string& id, bool ok, long terms = 0) {
  VerifyReport r;
  r.id = id;
  r.terms_used = terms;
  r.status = ok ? Status::pass : Status::fail;
  return r;
}

template <class F>
VerifyReport timed(F f) {
  auto t0 = std::chrono::steady_clock::now();
  VerifyReport r = f();
  r.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline std::string render_reports(const std::vector<VerifyReport>& rs, Format f) {
  switch (f) {
    case Format::json: return reports_to_json(rs).dump(2) + "\n";
    case Format::csv: return reports_to_csv(rs);
    case Format::text: break;
  }
  return reports_to_text(rs);
}

inline int reports_exit(const std::vector<VerifyReport>& rs) {
  for (const auto& r : rs)
    if (r.status != Status::pass) return kFail;
  return kPass;
}

struct ConstantResult {
  std::string name, value, source, cross_source;
  long digits = 0;
  long check_digits = 0;
  long agreement_exponent = 0;
  bool agrees = false;
};

inline std::string render_constant(const ConstantResult& c, Format f) {
  switch (f) {
    case Format::json: {
      nlohmann::json j{{"constant", c.name},         {"digits", c.digits},
                       {"value", c.value},           {"source", c.source},
                       {"cross_check", c.cross_source}, {"cross_check_digits", c.check_digits},
                       {"agreement_exponent", c.agreement_exponent}, {"status", c.agrees ? "pass" : "fail"}};
      return j.dump(2) + "\n";
    }
    case Format::csv:
      return "constant,digits,source,cross_check,agreement_exponent,status,value\n" + c.name + "," +
             std::to_string(c.digits) + "," + c.source + "," + c.cross_source + "," +
             std::to_string(c.agreement_exponent) + "," + (c.agrees ? "pass" : "fail") + "," + c.value + "\n";
    case Format::text: break;
  }
  return wrap(c.value);
}

inline ConstantResult run_pi(const CliConfig& cfg, const std::vector<CatalogEntry>& entries) {
  VerifyOptions opt{cfg.guard_digits};
  const CatalogEntry& main = find_entry(entries, cfg.series_id.value_or("e06"));
  const CatalogEntry& other = find_entry(builtin_catalog(), main.id == "e04" ? "e06" : "e04");
  ConstantResult c{"pi", "", main.id, other.id, cfg.digits, cfg.digits + 15};
  FixedReal value;
  Digits d = stable_digits(cfg.digits, std::max(20L, cfg.guard_digits), [&](long work) {
    value = compute_pi(work, main, VerifyOptions{0});
    return value;
  });
  FixedReal check = compute_pi(cfg.digits + 25, other, opt);
  c.value = d.text;
  c.agreement_exponent = (value.rescaled(check.scale_bits()) - check).floor_log10_abs();
  c.agrees = c.agreement_exponent < -c.check_digits;
  return c;
}

inline ConstantResult run_zeta3(const CliConfig& cfg) {
  ConstantResult c{"zeta3", "", "apery", "G(1/2)/256", cfg.digits, std::min(cfg.digits, 500L)};
  FixedReal value;
  Digits d = stable_digits(cfg.digits, std::max(20L, cfg.guard_digits), [&](long work) {
    value = zeta3(work);
    return value;
  });
  FixedReal g = guillera_G(Rational(1, 2), c.check_digits + 10).div_int(256);
  c.value = d.text;
  c.agreement_exponent = (value.rescaled(g.scale_bits()) - g).floor_log10_abs();
  c.agrees = c.agreement_exponent < -c.check_digits;
  return c;
}

inline std::string catalog_text(const std::vector<CatalogEntry>& entries, Format f) {
  std::ostringstream os;
  switch (f) {
    case Format::json: return catalog_to_json(entries).dump(2) + "\n";
    case Format::csv:
      os << "id,kind,source\n";
      for (const auto& e : entries) os << e.id << "," << to_string(e.kind) << ",\"" << e.source << "\"\n";
      return os.str();
    case Format::text: break;
  }
  for (const auto& e : entries)
    os << std::left << std::setw(20) << e.id << std::setw(16) << to_string(e.kind) << e.source << "\n    "
       << formula_text(e) << "\n";
  return os.str();
}

struct BenchRow {
  std::string id;
  long digits = 0;
  long terms = 0;
  double digits_per_term = 0;
  long elapsed_ms = 0;
  std::string message;
};

inline std::vector<BenchRow> bench(const std::vector<CatalogEntry>& entries, long digits, bool parallel,
                                   const VerifyOptions& opt) {
  std::vector<BenchRow> rows(entries.size());
  auto one = [&](std::size_t i) {
    BenchRow& r = rows[i];
    r.id = entries[i].id;
    auto t0 = std::chrono::steady_clock::now();
    try {
      LhsValue v = evaluate_lhs(entries[i], digits, opt);
      r.digits = v.digits;
      r.terms = v.terms;
      r.digits_per_term = v.terms ? static_cast<double>(v.digits) / static_cast<double>(v.terms) : 0;
    } catch (const std::exception& ex) {
      r.message = ex.what();
    }
    r.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0).count();
  };
  if (parallel) {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    unsigned n = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), static_cast<unsigned>(entries.size())));
    for (unsigned t = 0; t < n; ++t)
      pool.emplace_back([&] {
        for (std::size_t i; (i = next++) < entries.size();) one(i);
      });
    for (auto& th : pool) th.join();
  } else {
    for (std::size_t i = 0; i < entries.size(); ++i) one(i);
  }
  return rows;
}

inline std::string render_bench(const std::vector<BenchRow>& rows, Format f) {
  std::ostringstream os;
  if (f == Format::json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
      nlohmann::json j{{"id", r.id}, {"digits", r.digits}, {"terms", r.terms},
                       {"digits_per_term", r.digits_per_term}, {"elapsed_ms", r.elapsed_ms}};
      if (!r.message.empty()) j["message"] = r.message;
      arr.push_back(j);
    }
    return arr.dump(2) + "\n";
  }
  if (f == Format::csv) {
    os << "id,digits,terms,digits_per_term,elapsed_ms\n";
    for (const auto& r : rows)
      os << r.id << "," << r.digits << "," << r.terms << "," << std::fixed << std::setprecision(3) << r.digits_per_term
         << "," << r.elapsed_ms << "\n";
    return os.str();
  }
  os << std::left << std::setw(20) << "id" << std::right << std::setw(8) << "digits" << std::setw(8) << "terms"
     << std::setw(12) << "digits/term" << std::setw(10) << "ms" << "\n";
  for (const auto& r : rows) {
    os << std::left << std::setw(20) << r.id << std::right << std::setw(8) << r.digits << std::setw(8) << r.terms
       << std::setw(12) << std::fixed << std::setprecision(3) << r.digits_per_term << std::setw(10) << r.elapsed_ms;
    if (!r.message.empty()) os << "  (" << r.message << ")";
    os << "\n";
  }
  return os.str();
}

inline std::vector<VerifyReport> wz_suite(long digits) {
  std::vector<VerifyReport> rs;
  rs.push_back(timed([] { return exact_report("wz_telescoping_40x40", check_telescoping(40, 40)); }));
  rs.push_back(timed([] { return exact_report("wz_sum_is_one_25", check_sum_is_one(25)); }));
  rs.push_back(timed([] { return exact_report("e15_k10", check_e15(10)); }));
  rs.push_back(timed([] { return exact_report("wz_perturbed_rejected", !check_telescoping(wz_pair_perturbed(), 40, 40)); }));
  rs.push_back(timed([&] {
    auto refs = make_references(digits);
    const std::int64_t s = bits_for_digits(digits + 10);
    FixedReal g = guillera_G(Rational(1, 2), digits);
    VerifyReport r;
    r.id = "G(1/2)=256zeta3";
    r.digits_requested = digits;
    r.residual_exponent = (g - refs.zeta3->rescaled(s).mul_int(256)).floor_log10_abs();
    r.status = r.residual_exponent <= -(digits - 10) ? Status::pass : Status::fail;
    return r;
  }));
  return rs;
}

inline std::vector<VerifyReport> transform_suite(long digits) {
  std::vector<VerifyReport> rs;
  rs.push_back(timed([] { return exact_report("yang_transform_20", check_yang_transform(20), 20); }));
  rs.push_back(timed([] { return exact_report("e25_30", check_e25(30), 30); }));
  rs.push_back(timed([] { return exact_report("e26_25", check_e26(25), 25); }));
  rs.push_back(timed([&] {
    VerifyReport r = exact_report("specialization_point", check_golden_power() && check_specialization_point(digits));
    r.digits_requested = digits;
    return r;
  }));
  return rs;
}

}  // namespace detail

/// Executes one subcommand, writing its result to `out` (or the configured
/// file) and diagnostics to `err`. Returns the process exit code.
inline int run(const CliConfig& cfg, std::ostream& out, std::ostream& err = std::cerr) {
  try {
    if (cfg.digits < 1) throw UsageError("--digits must be at least 1");
    VerifyOptions opt{cfg.guard_digits};
    std::vector<CatalogEntry> entries;
    if (cfg.catalog_path || cfg.series_id) {
      std::optional<std::string> doc;
      if (cfg.catalog_path) {
        std::ifstream f(*cfg.catalog_path);
        if (!f) throw UsageError("cannot read catalog '" + *cfg.catalog_path + "'");
        std::ostringstream buf;
        buf << f.rdbuf();
        doc = buf.str();
      }
      try {
        entries = load_catalog(doc);
      } catch (const ParseError& e) {
        throw UsageError(e.what());
      }
    } else {
      entries = builtin_catalog();
    }
    if (cfg.series_id) {
      bool found = false;
      for (const auto& e : entries) found = found || e.id == *cfg.series_id;
      if (!found) throw UsageError("unknown series id '" + *cfg.series_id + "'");
    }

    std::string text;
    int code = kPass;
    switch (cfg.subcommand) {
      case Subcommand::pi:
      case Subcommand::zeta3: {
        auto c = cfg.subcommand == Subcommand::pi ? detail::run_pi(cfg, entries) : detail::run_zeta3(cfg);
        text = detail::render_constant(c, cfg.format);
        if (!c.agrees) {
          err << c.name << ": cross-check against " << c.cross_source << " failed (agreement 1e"
              << c.agreement_exponent << ")\n";
          code = kFail;
        }
        break;
      }
      case Subcommand::verify: {
        std::vector<CatalogEntry> chosen;
        if (cfg.series_id) chosen.push_back(find_entry(entries, *cfg.series_id));
        else chosen = entries;
        auto refs = make_references(cfg.digits, opt);
        auto rs = verify_all(chosen, cfg.digits, refs, cfg.parallel, opt);
        text = detail::render_reports(rs, cfg.format);
        code = detail::reports_exit(rs);
        break;
      }
      case Subcommand::catalog: text = detail::catalog_text(entries, cfg.format); break;
      case Subcommand::bench:
        text = detail::render_bench(detail::bench(entries, cfg.digits, cfg.parallel, opt), cfg.format);
        break;
      case Subcommand::wz_check:
      case Subcommand::modular_check:
      case Subcommand::transform_check: {
        std::vector<VerifyReport> rs = cfg.subcommand == Subcommand::wz_check ? detail::wz_suite(cfg.digits)
                                       : cfg.subcommand == Subcommand::modular_check
                                           ? modular_suite(cfg.digits)
                                           : detail::transform_suite(cfg.digits);
        text = detail::render_reports(rs, cfg.format);
        code = detail::reports_exit(rs);
        break;
      }
    }
    if (cfg.output_path) {
      std::ofstream f(*cfg.output_path);
      if (!f) throw UsageError("cannot open '" + *cfg.output_path + "' for writing");
      f << text;
    } else {
      out << text;
    }
    return code;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const PrecisionError& e) {
    err << "precision error: " << e.what() << "\n";
    return kPrecision;
  } catch (const UnsupportedError& e) {
    err << "unsupported: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFail;
  }
}

/// parse_args followed by run.
inline int main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  try {
    auto cfg = parse_args(argc, argv, out);
    if (!cfg) return kPass;
    return run(*cfg, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace pisum::cli
