#include "lipfree_cli/report.hpp"

#include <algorithm>
#include <sstream>

#include "lipfree/norm.hpp"

namespace lipfree::cli {

namespace {

bool agrees(double value, const Rational& expected, double tolerance) {
  return approx_equal(value, expected.get_d(), tolerance);
}

// Line oracle when the space sits on the line; nullopt otherwise.
std::optional<Rational> line_value(const Molecule<Rational>& mu) {
  if (!infer_line_positions(*mu.space())) return std::nullopt;
  return norm_line(mu).value;
}

}  // namespace

std::string witness_csv(const WitnessReport& report) {
  std::ostringstream out;
  out << kWitnessCsvHeader << "\n";
  for (const auto& row : report.rows) {
    out << row.stage << "," << (row.norm_mu_exact ? format_rational(*row.norm_mu_exact) : "") << ","
        << format_double(row.norm_mu_lp) << "," << format_rational(row.norm_image_exact) << ","
        << format_double(row.norm_image_lp) << "," << format_double(row.ratio) << ","
        << format_double(row.duality_gap) << "\n";
  }
  return out.str();
}

json witness_json(const WitnessReport& report) {
  json rows = json::array();
  for (const auto& row : report.rows) {
    rows.push_back({{"stage", row.stage},
                    {"norm_mu_exact", row.norm_mu_exact ? json(format_rational(*row.norm_mu_exact)) : json(nullptr)},
                    {"norm_mu_lp", row.norm_mu_lp},
                    {"norm_image_exact", format_rational(row.norm_image_exact)},
                    {"norm_image_lp", row.norm_image_lp},
                    {"ratio", row.ratio},
                    {"duality_gap", row.duality_gap},
                    {"matches", row.matches}});
  }
  return json{{"family", report.family}, {"rows", rows}, {"summary", report.summary}};
}

WitnessRow witness_row(const WitnessInstance<Rational>& instance, bool exact, double tolerance) {
  WitnessRow row;
  row.stage = instance.stage;
  row.norm_mu_exact = instance.expected_mu;
  row.norm_image_exact = instance.expected_image;

  if (exact) {
    const Rational mu_lp = norm_dual_lp(instance.mu).value;
    const Rational mu_flow = norm_flow(instance.mu).value;
    const Rational image_lp = norm_dual_lp(instance.image).value;
    const Rational image_flow = norm_flow(instance.image).value;
    row.norm_mu_lp = mu_lp.get_d();
    row.norm_image_lp = image_lp.get_d();
    row.duality_gap = std::max(relative_gap(mu_lp.get_d(), mu_flow.get_d()),
                               relative_gap(image_lp.get_d(), image_flow.get_d()));
    row.matches = mu_lp == mu_flow && image_lp == image_flow && image_lp == instance.expected_image &&
                  !(mu_lp < instance.mu_lower_bound);
    if (instance.expected_mu) row.matches = row.matches && mu_lp == *instance.expected_mu;
  } else {
    auto mu = to_floating(instance.mu, to_floating(instance.domain));
    auto image = to_floating(instance.image, to_floating(instance.codomain));
    const double mu_lp = norm_dual_lp(mu).value;
    const double mu_flow = norm_flow(mu).value;
    const double image_lp = norm_dual_lp(image).value;
    const double image_flow = norm_flow(image).value;
    row.norm_mu_lp = mu_lp;
    row.norm_image_lp = image_lp;
    row.duality_gap = std::max(relative_gap(mu_lp, mu_flow), relative_gap(image_lp, image_flow));
    row.matches = row.duality_gap <= tolerance && agrees(image_lp, instance.expected_image, tolerance) &&
                  mu_lp >= instance.mu_lower_bound.get_d() - tolerance;
    if (instance.expected_mu) row.matches = row.matches && agrees(mu_lp, *instance.expected_mu, tolerance);
  }

  // The closed forms also have to hold on the line, rationally.
  if (auto v = line_value(instance.image)) row.matches = row.matches && *v == instance.expected_image;
  if (instance.expected_mu) {
    if (auto v = line_value(instance.mu)) row.matches = row.matches && *v == *instance.expected_mu;
  }

  const double mu_norm = row.norm_mu_exact ? row.norm_mu_exact->get_d() : row.norm_mu_lp;
  row.ratio = row.norm_image_exact.get_d() / mu_norm;
  return row;
}

WitnessRow witness_row(const SnowflakeWitness& witness, double tolerance) {
  const auto& w = witness.snowflaked;
  WitnessRow row;
  row.stage = w.stage;
  row.norm_image_exact = w.expected_image;
  const double mu_lp = norm_dual_lp(w.mu).value;
  const double mu_flow = norm_flow(w.mu).value;
  const double image_lp = norm_dual_lp(w.image).value;
  const double image_flow = norm_flow(w.image).value;
  row.norm_mu_lp = mu_lp;
  row.norm_image_lp = image_lp;
  row.duality_gap = std::max(relative_gap(mu_lp, mu_flow), relative_gap(image_lp, image_flow));
  row.matches = row.duality_gap <= tolerance && mu_lp >= w.mu_lower_bound.get_d() - tolerance &&
                agrees(image_lp, w.expected_image, tolerance) &&
                norm_line(witness.line.image).value == w.expected_image;
  row.ratio = w.expected_image.get_d() / mu_lp;
  return row;
}

template <Scalar S>
void write_artifacts(const std::filesystem::path& dir, const WitnessInstance<S>& instance) {
  write_json(dir / "domain.json", space_json(*instance.domain));
  write_json(dir / "codomain.json", space_json(*instance.codomain));
  write_json(dir / "map.json", map_json(instance.map));
  write_json(dir / "mu.json", molecule_json(instance.mu));
  write_json(dir / "image.json", molecule_json(instance.image));
  json expected{{"mu_lower_bound", format_rational(instance.mu_lower_bound)},
                {"image", format_rational(instance.expected_image)}};
  if (instance.expected_mu) expected["mu"] = format_rational(*instance.expected_mu);
  write_json(dir / "expected.json", expected);
}

template void write_artifacts<Rational>(const std::filesystem::path&, const WitnessInstance<Rational>&);
template void write_artifacts<double>(const std::filesystem::path&, const WitnessInstance<double>&);

}  // namespace lipfree::cli
