// Verifies the entries of a catalog file and prints pi from the first one
// whose right side is a multiple of 1/pi.
//
//   verify_custom [catalog.json] [digits]

#include <fstream>
#include <iostream>
#include <sstream>

#include "pisum/pisum.hpp"

int main(int argc, char** argv) {
  const std::string path = argc > 1 ? argv[1] : PISUM_SAMPLE_CATALOG;
  const long digits = argc > 2 ? std::stol(argv[2]) : 200;

  std::ifstream in(path);
  if (!in) {
    std::cerr << "cannot open " << path << "\n";
    return 2;
  }
  std::stringstream doc;
  doc << in.rdbuf();

  try {
    auto entries = pisum::load_catalog(doc.str());
    auto refs = pisum::make_references(digits);
    auto reports = pisum::verify_all(entries, digits, refs);
    std::cout << pisum::reports_to_text(reports);

    for (const auto& e : entries) {
      if (e.rhs().pi_power != 1 || e.rhs().zeta3_power) continue;
      pisum::FixedReal pi = pisum::compute_pi(50, e);
      std::cout << "\npi from " << e.id << ": " << pi.to_decimal(50) << "\n";
      break;
    }
    for (const auto& r : reports)
      if (r.status != pisum::Status::pass) return 1;
    return 0;
  } catch (const pisum::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
}
