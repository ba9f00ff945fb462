#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lipfree_cli/io.hpp"

namespace lipfree::cli {

struct VerifyConfig {
  std::uint64_t seed = 20240611;
  double tolerance = 1e-9;
  ArithmeticMode mode = ArithmeticMode::exact;
  /// Empty runs every suite.
  std::vector<std::string> suites;
};

struct SuiteResult {
  std::string name;
  std::size_t checks = 0;
  /// One line per failed check, with the seed that reproduces it.
  std::vector<std::string> failures;

  bool passed() const { return failures.empty(); }
};

/// metric, norm, lip, operators, constructions, roundtrip.
const std::vector<std::string>& suite_names();

/// Throws InputError for an unknown name.
SuiteResult run_suite(const std::string& name, const VerifyConfig& config);

/// Negative-control inputs. A space fixture must validate; a map fixture
/// {"domain", "codomain", "map", "claims": {"injective": bool}} must have its
/// claim confirmed by the exact rank and by a collision scan.
SuiteResult check_space_fixture(const json& doc);
SuiteResult check_map_fixture(const json& doc);

/// Built-in fixtures: a 3-point space with d(a,b) = 5 > d(a,c) + d(c,b) and
/// a map collapsing two points while claiming to be injective.
json fault_fixture(const std::string& fault);

json verify_report(const VerifyConfig& config, const std::vector<SuiteResult>& results);

}  // namespace lipfree::cli
