#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "lipfree/constructions.hpp"
#include "lipfree_cli/io.hpp"

namespace lipfree::cli {

/// One stage of a witness family. Exact columns are closed forms; the
/// solver columns come from the dual LP, and the gap compares it with the
/// transport route on both molecules.
struct WitnessRow {
  int stage = 0;
  std::optional<Rational> norm_mu_exact;
  double norm_mu_lp = 0;
  Rational norm_image_exact;
  double norm_image_lp = 0;
  double ratio = 0;
  double duality_gap = 0;
  /// Solver values agree with the closed forms (rationally when the solver
  /// ran exactly) and ||mu|| clears its lower bound.
  bool matches = true;
};

struct WitnessReport {
  std::string family;
  std::vector<WitnessRow> rows;
  json summary = json::object();
};

inline const char* kWitnessCsvHeader = "stage,norm_mu_exact,norm_mu_lp,norm_image_exact,norm_image_lp,ratio,duality_gap";

std::string witness_csv(const WitnessReport& report);
json witness_json(const WitnessReport& report);

/// Solver row for one instance. `exact` runs both routes over the rationals;
/// otherwise the instance is converted to binary64 first.
WitnessRow witness_row(const WitnessInstance<Rational>& instance, bool exact, double tolerance);
/// Floating domain, exact image side (snowflake).
WitnessRow witness_row(const SnowflakeWitness& witness, double tolerance);

/// Space, map, molecule and image files for one instance under `dir`.
template <Scalar S>
void write_artifacts(const std::filesystem::path& dir, const WitnessInstance<S>& instance);

}  // namespace lipfree::cli
