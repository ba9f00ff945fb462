#include <filesystem>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "lipfree/constructions.hpp"
#include "lipfree/norm.hpp"
#include "lipfree/operators.hpp"
#include "lipfree_cli/io.hpp"
#include "lipfree_cli/report.hpp"
#include "lipfree_cli/verify.hpp"

namespace fs = std::filesystem;
using namespace lipfree;
using namespace lipfree::cli;

namespace {

constexpr int kOk = 0;
constexpr int kDomainFailure = 1;
constexpr int kInputError = 2;

struct Global {
  std::string mode = "exact";
  double tolerance = 1e-9;
  std::uint64_t seed = VerifyConfig{}.seed;
  std::string out;
};

void emit(const json& doc, const std::string& out, const std::string& file) {
  std::cout << doc.dump(2) << "\n";
  if (!out.empty()) write_json(fs::path(out) / file, doc);
}

json error_json(const Error& e) {
  return json{{"error", std::string(to_string(e.code()))}, {"message", e.what()}, {"witness", e.witness()}};
}

// --- validate ---------------------------------------------------------------

template <Scalar S>
int run_validate(const std::string& path, const Global& g) {
  auto space = validate_space(parse_raw_space<S>(read_json(path)));
  emit(json{{"valid", true}, {"name", space->name()}, {"points", space->size()}, {"base", space->base_label()},
            {"diameter", scalar_json(space->diameter())}},
       g.out, "validate.json");
  return kOk;
}

// --- norm -------------------------------------------------------------------

template <Scalar S>
int run_norm(const std::string& space_path, const std::string& molecule_path, const std::string& method,
             const Global& g) {
  auto space = validate_space(parse_raw_space<S>(read_json(space_path)));
  auto mu = parse_molecule<S>(read_json(molecule_path), space);
  json result{{"method", method}, {"support", mu.support().size()}};
  auto put = [&](const char* key, const S& v) {
    result[key] = to_double(v);
    if constexpr (ScalarTraits<S>::is_exact) result[std::string(key) + "_exact"] = format_rational(v);
  };

  if (mu.is_zero()) {
    put("norm", S(0));
    result["gap"] = 0.0;
    emit(result, g.out, "norm.json");
    return kOk;
  }

  int status = kOk;
  if (method == "lp") {
    auto r = norm_dual_lp(mu);
    put("norm", r.value);
    result["rounds"] = r.rounds;
    result["constraints"] = r.constraints;
  } else if (method == "flow") {
    auto r = norm_flow(mu);
    put("norm", r.value);
    result["arcs"] = r.plan.arcs.size();
  } else if (method == "line") {
    put("norm", norm_line(mu).value);
  } else {
    auto cert = certify_norm(mu, g.tolerance);
    put("norm", cert.primal);
    put("flow", cert.primal);
    put("lp", cert.dual);
    result["gap"] = to_double(cert.gap);
    result["potential_feasible"] = cert.potential_feasible;
    result["plan_balanced"] = cert.plan_balanced;
    if (infer_line_positions(*space)) put("line", norm_line(mu).value);
    const bool certified = cert.potential_feasible && cert.plan_balanced && to_double(cert.gap) <= g.tolerance;
    result["certified"] = certified;
    if (!certified) status = kDomainFailure;
  }
  emit(result, g.out, "norm.json");
  return status;
}

// --- operator ---------------------------------------------------------------

struct OperatorArgs {
  std::string domain, codomain, map;
  std::vector<std::string> checks;
  std::vector<std::string> molecules;
  std::string radius = "1";
};

template <Scalar S>
int run_operator(const OperatorArgs& args, const Global& g) {
  auto domain = validate_space(parse_raw_space<S>(read_json(args.domain)));
  auto codomain = args.codomain == args.domain ? domain
                                                : validate_space(parse_raw_space<S>(read_json(args.codomain)));
  auto f = parse_map<S>(read_json(args.map), domain, codomain);
  auto op = linearize(f);
  auto wants = [&](const char* name) {
    return args.checks.empty() || std::find(args.checks.begin(), args.checks.end(), name) != args.checks.end();
  };

  json out{{"domain", domain->name()}, {"codomain", codomain->name()}};
  if (wants("rank")) {
    auto k = kernel_basis(op);
    json kernel = json::array();
    for (const auto& v : k.basis) kernel.push_back(molecule_json(v));
    out["rank"] = k.rank;
    out["injective"] = k.injective;
    out["kernel"] = kernel;
    if (auto hit = f.collision()) out["collision"] = {domain->label(hit->first), domain->label(hit->second)};
  }
  if (wants("bilip")) {
    auto b = bilip_constants(f);
    out["bilip"] = {{"a", scalar_json(b.a)},
                    {"b", scalar_json(b.b)},
                    {"a_pair", {domain->label(b.a_pair.first), domain->label(b.a_pair.second)}},
                    {"b_pair", {domain->label(b.b_pair.first), domain->label(b.b_pair.second)}},
                    {"collapsing", b.collapsing}};
  }
  if (wants("support")) {
    json reports = json::array();
    for (const auto& path : args.molecules) {
      auto mu = parse_molecule<S>(read_json(path), domain);
      auto r = check_support_preservation(f, mu);
      auto names = [&](const std::vector<std::size_t>& idx) {
        std::vector<std::string> v;
        for (auto i : idx) v.push_back(codomain->label(i));
        return v;
      };
      reports.push_back({{"molecule", path},
                         {"supp_image", names(r.lhs)},
                         {"image_of_supp", names(r.rhs)},
                         {"inclusion", r.inclusion_holds},
                         {"equality", r.equality_holds}});
    }
    out["support"] = reports;
  }
  if (wants("nonreturning")) {
    const S r = parse_scalar<S>(json(args.radius), "--radius");
    json sweep = json::array();
    for (std::size_t x = 0; x < domain->size(); ++x) {
      auto rep = check_nonreturning(f, x, r);
      sweep.push_back({{"point", domain->label(x)},
                       {"supremum", rep.supremum ? scalar_json(*rep.supremum) : json("inf")},
                       {"nearest", rep.nearest ? json(domain->label(*rep.nearest)) : json(nullptr)}});
    }
    out["nonreturning"] = {{"radius", scalar_json(r)}, {"sweep", sweep}};
  }
  if (wants("modulus")) {
    auto m = embedding_modulus(op);
    out["modulus"] = {{"lower", m.lower ? scalar_json(*m.lower) : json(nullptr)},
                      {"upper", scalar_json(m.upper)},
                      {"method", to_string(m.method)},
                      {"candidates", m.candidates},
                      {"fell_back", m.fell_back}};
  }
  emit(out, g.out, "operator.json");
  return kOk;
}

// --- construct --------------------------------------------------------------

struct ConstructArgs {
  std::string family;
  int stages = 3;
  std::string alpha = "1/2";
  std::string variant = "unbounded";
  int n = 20;
  std::string p = "1";
  std::string eps = "1/1000";
};

int finish_report(const WitnessReport& report, const Global& g) {
  const auto csv = witness_csv(report);
  std::cout << csv;
  if (!g.out.empty()) {
    write_text(fs::path(g.out) / (report.family + ".csv"), csv);
    write_json(fs::path(g.out) / (report.family + ".json"), witness_json(report));
  }
  for (const auto& row : report.rows) {
    if (!row.matches) {
      std::cerr << report.family << ": stage " << row.stage << " disagrees with its closed form\n";
      return kDomainFailure;
    }
  }
  return kOk;
}

template <class Instance>
void artifacts(const Global& g, const Instance& w, const std::string& family) {
  if (!g.out.empty()) write_artifacts(fs::path(g.out) / family / ("stage" + std::to_string(w.stage)), w);
}

int run_construct(const ConstructArgs& a, const Global& g) {
  const bool exact = g.mode == "exact";
  WitnessReport report;
  report.family = a.family;
  // Fail before building the early stages rather than after.
  const bool dust = a.family == "dust";
  if (a.family == "svc" || a.family == "discrete" || dust) {
    const int cap = dust ? kMaxDustStage : kMaxLineStage;
    if (a.stages > cap) {
      throw Error(ErrorCode::stage_too_large,
                  "stage must lie in 1.." + std::to_string(cap) + ", got " + std::to_string(a.stages));
    }
  }

  if (a.family == "svc" || a.family == "discrete") {
    const auto variant = parse_discrete_variant(a.variant);
    if (a.family == "discrete") report.family = "discrete-" + to_string(variant);
    for (int k = 1; k <= a.stages; ++k) {
      auto w = a.family == "svc" ? svc_witness(k) : discrete_witness(variant, k);
      report.rows.push_back(witness_row(w, exact, g.tolerance));
      artifacts(g, w, report.family);
    }
  } else if (a.family == "snowflake") {
    const Rational alpha = parse_rational(a.alpha);
    report.family = "snowflake";
    report.summary["alpha"] = format_rational(alpha);
    report.summary["ratio"] = format_rational(snowflake_ratio(alpha));
    for (int n = 1; n <= a.stages; ++n) {
      auto w = snowflake_witness(alpha, n);
      report.rows.push_back(witness_row(w, g.tolerance));
      artifacts(g, w.snowflaked, "snowflake");
    }
  } else if (a.family == "rtree") {
    auto ex = rtree_example(a.n);
    report.rows.push_back(witness_row(ex.instance, exact, g.tolerance));
    auto k = kernel_basis(linearize(ex.instance.map));
    bool identities = true;
    for (std::size_t i = 0; i < ex.branch_molecules.size(); ++i)
      identities = identities && pushforward(ex.instance.map, ex.branch_molecules[i]) == ex.expected_images[i];
    const std::size_t dim = ex.instance.codomain->size() - 1;
    report.summary = {{"n_max", a.n},
                      {"rank", k.rank},
                      {"codomain_dimension", dim},
                      {"rank_deficiency", dim - k.rank},
                      {"branch_identities", identities},
                      {"missed_norm", format_rational(norm_line(ex.missed).value)}};
    std::cerr << "rtree: rank " << k.rank << " of " << dim << " (deficiency " << dim - k.rank << ")\n";
    artifacts(g, ex.instance, "rtree");
    if (!identities) report.rows.back().matches = false;
  } else if (a.family == "xsquared") {
    auto w = xsquared_grid(a.n);
    report.rows.push_back(witness_row(w, exact, g.tolerance));
    auto b = bilip_constants(w.map);
    auto k = kernel_basis(linearize(w.map));
    report.summary = {{"n", a.n}, {"rank", k.rank}, {"injective", k.injective},
                      {"a", format_rational(b.a)}, {"lip", format_rational(b.b)}};
    if (w.domain->size() - 1 <= kExactModulusDimension) {
      auto m = embedding_modulus(linearize(w.map));
      report.summary["embedding_modulus"] = format_rational(m.upper);
    }
    artifacts(g, w, "xsquared");
  } else if (a.family == "dust") {
    const auto norm = a.p == "inf" ? ProductNorm::linf : ProductNorm::l1;
    const Rational eps = parse_rational(a.eps);
    // The dust has no witness molecule; its report is the distance-set contrast.
    std::ostringstream csv;
    csv << "stage,p,points,eps,distance_set_measure\n";
    json rows = json::array();
    for (int k = 1; k <= a.stages; ++k) {
      auto space = cantor_dust<Rational>(k, norm);
      const Rational m = distance_set_measure(*space, space->base(), eps);
      csv << k << "," << a.p << "," << space->size() << "," << format_rational(eps) << "," << format_rational(m)
          << "\n";
      rows.push_back({{"stage", k}, {"points", space->size()}, {"measure", format_rational(m)}, {"decimal", m.get_d()}});
      if (!g.out.empty()) write_json(fs::path(g.out) / "dust" / ("stage" + std::to_string(k) + ".json"), space_json(*space));
    }
    std::cout << csv.str();
    if (!g.out.empty()) {
      write_text(fs::path(g.out) / "dust.csv", csv.str());
      write_json(fs::path(g.out) / "dust.json", json{{"family", "dust"}, {"p", a.p}, {"rows", rows}});
    }
    return kOk;
  } else {
    throw InputError("unknown family '" + a.family + "'");
  }
  if (!report.summary.empty()) std::cerr << report.summary.dump() << "\n";
  return finish_report(report, g);
}

// --- verify -----------------------------------------------------------------

struct VerifyArgs {
  std::vector<std::string> suites;
  std::vector<std::string> faults;
  std::vector<std::string> space_fixtures;
  std::vector<std::string> map_fixtures;
};

int run_verify(const VerifyArgs& a, const Global& g) {
  VerifyConfig config;
  config.seed = g.seed;
  config.tolerance = g.tolerance;
  config.mode = parse_mode(g.mode);
  config.suites = a.suites;

  std::vector<SuiteResult> results;
  const bool fixtures_only = a.suites.empty() && (!a.faults.empty() || !a.space_fixtures.empty() || !a.map_fixtures.empty());
  if (!fixtures_only) {
    for (const auto& name : a.suites.empty() ? suite_names() : a.suites) {
      std::cerr << "suite " << name << " ..." << std::flush;
      results.push_back(run_suite(name, config));
      std::cerr << (results.back().passed() ? " ok" : " FAILED") << "\n";
    }
  }
  for (const auto& fault : a.faults) {
    const json fixture = fault_fixture(fault);
    results.push_back(fault == "triangle" ? check_space_fixture(fixture) : check_map_fixture(fixture));
  }
  for (const auto& path : a.space_fixtures) results.push_back(check_space_fixture(read_json(path)));
  for (const auto& path : a.map_fixtures) results.push_back(check_map_fixture(read_json(path)));

  const json report = verify_report(config, results);
  emit(report, g.out, "verify.json");
  return report.at("passed").get<bool>() ? kOk : kDomainFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lipfree: Lipschitz-free spaces over finite pointed metric spaces"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  Global g;
  app.add_option("--mode", g.mode, "exact | float")->check(CLI::IsMember({"exact", "float"}));
  app.add_option("--tol", g.tolerance, "relative tolerance")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "seed for the verification suites");
  app.add_option("--out", g.out, "directory for emitted files");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "check a space file against the metric axioms");
  validate->add_option("space", validate_path)->required();

  std::string space_path, molecule_path, method = "all";
  auto* norm_cmd = app.add_subcommand("norm", "norm of a molecule");
  norm_cmd->add_option("--space", space_path)->required();
  norm_cmd->add_option("--molecule", molecule_path)->required();
  norm_cmd->add_option("--method", method)->check(CLI::IsMember({"lp", "flow", "line", "all"}));

  OperatorArgs op;
  auto* op_cmd = app.add_subcommand("operator", "diagnostics for the linearization of a map");
  op_cmd->add_option("--domain", op.domain)->required();
  op_cmd->add_option("--codomain", op.codomain)->required();
  op_cmd->add_option("--map", op.map)->required();
  op_cmd->add_option("--check", op.checks, "rank, bilip, support, nonreturning, modulus (default all)")
      ->delimiter(',')
      ->check(CLI::IsMember({"rank", "bilip", "support", "nonreturning", "modulus"}));
  op_cmd->add_option("--molecule", op.molecules, "molecules for the support check");
  op_cmd->add_option("--radius", op.radius, "ball radius for the non-returning sweep");

  ConstructArgs ca;
  auto* construct = app.add_subcommand("construct", "generate a witness family and its report");
  construct->add_option("family", ca.family, "svc | snowflake | discrete | dust | rtree | xsquared")
      ->required()
      ->check(CLI::IsMember({"svc", "snowflake", "discrete", "dust", "rtree", "xsquared"}));
  construct->add_option("--stages", ca.stages, "rows 1..stages")->check(CLI::PositiveNumber);
  construct->add_option("--alpha", ca.alpha, "snowflake exponent");
  construct->add_option("--variant", ca.variant, "discrete: unbounded | bounded");
  construct->add_option("--n", ca.n, "rtree n_max / xsquared grid size");
  construct->add_option("--p", ca.p, "dust: 1 | inf")->check(CLI::IsMember({"1", "inf"}));
  construct->add_option("--eps", ca.eps, "dust: neighbourhood radius");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "run the property suites");
  verify->add_option("--suite", va.suites, "subset of suites")->delimiter(',');
  verify->add_option("--inject-fault", va.faults, "triangle | collapse")
      ->check(CLI::IsMember({"triangle", "collapse"}));
  verify->add_option("--space-fixture", va.space_fixtures, "space file that must validate");
  verify->add_option("--map-fixture", va.map_fixtures, "map file whose claims must hold");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  const bool exact = g.mode == "exact";
  try {
    if (*validate) return exact ? run_validate<Rational>(validate_path, g) : run_validate<double>(validate_path, g);
    if (*norm_cmd) {
      return exact ? run_norm<Rational>(space_path, molecule_path, method, g)
                   : run_norm<double>(space_path, molecule_path, method, g);
    }
    if (*op_cmd) return exact ? run_operator<Rational>(op, g) : run_operator<double>(op, g);
    if (*construct) return run_construct(ca, g);
    if (*verify) return run_verify(va, g);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const Error& e) {
    std::cout << error_json(e).dump(2) << "\n";
    std::cerr << e.what() << "\n";
    return kDomainFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
