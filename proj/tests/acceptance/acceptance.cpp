// Acceptance gate: one PASS/FAIL line per criterion. Exit status is nonzero
// when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "lipfree/constructions.hpp"
#include "lipfree/lip_function.hpp"
#include "lipfree/modulus.hpp"
#include "lipfree/norm.hpp"
#include "lipfree/operators.hpp"
#include "lipfree/psi.hpp"
#include "lipfree/random.hpp"
#include "lipfree_cli/generators.hpp"
#include "lipfree_cli/verify.hpp"

using namespace lipfree;
using lipfree::cli::grid_coefficient;
using lipfree::cli::random_map;
using lipfree::cli::random_molecule;

namespace {

constexpr double kTol = 1e-9;
constexpr std::uint64_t kSeed = 20240611;

bool rel_close(double a, double b) { return std::fabs(a - b) <= kTol * std::max(1.0, std::fabs(b)); }

// Collects the first few failure messages of one criterion.
struct Outcome {
  std::size_t checks = 0;
  std::size_t failed = 0;
  std::vector<std::string> notes;
  std::string summary;

  void check(bool ok, const std::string& what) {
    ++checks;
    if (!ok) {
      ++failed;
      if (notes.size() < 3) notes.push_back(what);
    }
  }
};

struct Criterion {
  int id;
  const char* name;
  std::function<void(Outcome&)> body;
};

std::string str(const Rational& q) { return format_rational(q); }

std::string num(double x) {
  std::ostringstream out;
  out.precision(6);
  out << x;
  return out.str();
}

// 1. Kernel degeneration along the fat Cantor stages.
void svc_degeneration(Outcome& o) {
  const auto start = std::chrono::steady_clock::now();
  for (int k = 1; k <= 8; ++k) {
    auto w = svc_witness(k);
    const Rational want_mu = make_rational(1, 2) + dyadic(k + 1);
    const Rational want_image = dyadic(k + 1);
    const std::string at = "k=" + std::to_string(k);
    o.check(norm_line(w.mu).value == want_mu, at + " line ||mu||");
    o.check(norm_line(w.image).value == want_image, at + " line ||f^mu||");
    auto mu = to_floating(w.mu, to_floating(w.domain));
    auto image = to_floating(w.image, to_floating(w.codomain));
    o.check(rel_close(norm_dual_lp(mu).value, want_mu.get_d()), at + " lp ||mu||");
    o.check(rel_close(norm_flow(mu).value, want_mu.get_d()), at + " flow ||mu||");
    o.check(rel_close(norm_dual_lp(image).value, want_image.get_d()), at + " lp ||f^mu||");
    o.check(rel_close(norm_flow(image).value, want_image.get_d()), at + " flow ||f^mu||");
    if (k == 1) o.check(want_mu == make_rational(3, 4) && want_image == make_rational(1, 4), "k=1 is 3/4, 1/4");
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.check(seconds < 30.0, "runtime " + num(seconds) + " s");
  o.summary = "k=1..8, " + num(seconds) + " s";
}

// 2. Snowflake of the middle-eighths Cantor set, alpha = 1/2.
void snowflake_counterexample(Outcome& o) {
  const Rational alpha = make_rational(1, 2);
  double ratio2 = 1;
  double lowest = 1e9;
  for (int n = 1; n <= 6; ++n) {
    auto w = snowflake_witness(alpha, n);
    const std::string at = "N=" + std::to_string(n);
    const double mu = norm_dual_lp(w.snowflaked.mu).value;
    lowest = std::min(lowest, mu);
    o.check(mu >= 0.5 - kTol, at + " lp ||mu|| = " + num(mu));
    const Rational want = make_rational(1, 14) * pow_rational(make_rational(1, 8), n);
    o.check(norm_line(w.line.image).value == want, at + " line ||f^mu||");
    if (n == 2) ratio2 = want.get_d() / mu;
  }
  o.check(ratio2 < 0.02, "ratio at N=2 is " + num(ratio2));
  o.summary = "min ||mu|| " + num(lowest) + ", ratio(N=2) " + num(ratio2);
}

// 3. Primal flow against the dual LP.
void duality(Outcome& o) {
  Rng rng(kSeed ^ 0x3);
  double worst = 0;
  for (std::size_t t = 0; t < 500; ++t) {
    const std::size_t n = 3 + rng.index(48);
    const auto gen = t % 2 == 0 ? RandomGenerator::euclidean2d : RandomGenerator::shortestpath;
    auto m = random_space<double>(kSeed + t, n, gen);
    auto mu = random_molecule<double>(rng, m, 20);
    auto cert = certify_norm(mu, kTol);
    worst = std::max(worst, cert.gap);
    o.check(cert.gap <= kTol, "case " + std::to_string(t) + " gap " + num(cert.gap));
    o.check(cert.potential_feasible, "case " + std::to_string(t) + " potential infeasible");
  }
  o.summary = "500 cases, worst gap " + num(worst);
}

// 4. Line oracle against the LP.
void line_oracle(Outcome& o) {
  Rng rng(kSeed ^ 0x4);
  std::size_t exact = 0;
  for (std::size_t t = 0; t < 500; ++t) {
    const std::size_t n = 2 + rng.index(40);
    auto m = random_space<Rational>(kSeed + 7000 + t, n, RandomGenerator::line);
    auto mu = random_molecule<Rational>(rng, m, 30);
    const Rational line = norm_line(mu).value;
    auto fm = to_floating(m);
    auto fmu = to_floating(mu, fm);
    o.check(rel_close(norm_line(fmu).value, norm_dual_lp(fmu).value), "case " + std::to_string(t) + " float");
    if (t % 5 == 0) {
      o.check(line == norm_dual_lp(mu).value, "case " + std::to_string(t) + " rational");
      ++exact;
    }
  }
  o.summary = "500 floating cases, " + std::to_string(exact) + " also rational";
}

// 5. rank f^ = |M| - 1 iff f injective.
void rank_law(Outcome& o) {
  Rng rng(kSeed ^ 0x5);
  std::size_t injective = 0;
  for (std::size_t t = 0; t < 200; ++t) {
    auto m = random_space<Rational>(kSeed + 300 + t, 2 + rng.index(10), RandomGenerator::shortestpath);
    auto n = random_space<Rational>(kSeed + 600 + t, m->size() + rng.index(4), RandomGenerator::shortestpath);
    auto f = random_map<Rational>(rng, m, n, rng.coin());
    auto k = kernel_basis(linearize(f));
    const bool full = k.rank == m->size() - 1;
    o.check(full == f.is_injective(), "map " + std::to_string(t));
    injective += f.is_injective();
  }
  o.summary = "200 maps, " + std::to_string(injective) + " injective, 0 exceptions required";
}

// 6. supp f^mu against f(supp mu).
void support_laws(Outcome& o) {
  Rng rng(kSeed ^ 0x6);
  std::size_t equalities = 0;
  for (std::size_t t = 0; t < 200; ++t) {
    auto m = random_space<Rational>(kSeed + 900 + t, 3 + rng.index(9), RandomGenerator::shortestpath);
    auto n = random_space<Rational>(kSeed + 1200 + t, m->size() + rng.index(3), RandomGenerator::shortestpath);
    auto f = random_map<Rational>(rng, m, n, rng.coin());
    auto mu = random_molecule<Rational>(rng, m, 6);
    auto r = check_support_preservation(f, mu);
    o.check(r.inclusion_holds, "pair " + std::to_string(t) + " inclusion");
    if (f.is_injective()) {
      o.check(r.equality_holds, "pair " + std::to_string(t) + " equality");
      ++equalities;
    }
  }
  // Two points folded onto one: delta(a) - delta(b) maps to zero.
  auto m = make_line_space<Rational>("fold-domain", {"0", "a", "b"}, {0, 1, 2}, 0);
  auto n = make_line_space<Rational>("fold-codomain", {"0", "c"}, {0, 1}, 0);
  auto f = PointMap<Rational>::from_labels(m, n, {{"0", "0"}, {"a", "c"}, {"b", "c"}});
  auto r = check_support_preservation(f, delta(m, 1) - delta(m, 2));
  o.check(r.inclusion_holds && !r.equality_holds && r.lhs.empty() && r.rhs.size() == 1, "collapsing instance");
  o.summary = "200 pairs, " + std::to_string(equalities) + " injective, strict inclusion on the fold";
}

// 7. ||f^|| = Lip(f).
void operator_norm(Outcome& o) {
  Rng rng(kSeed ^ 0x7);
  for (std::size_t t = 0; t < 100; ++t) {
    auto m = random_space<double>(kSeed + 1500 + t, 3 + rng.index(8), RandomGenerator::euclidean2d);
    auto n = random_space<double>(kSeed + 1600 + t, 3 + rng.index(8), RandomGenerator::euclidean2d);
    auto f = random_map<double>(rng, m, n, false);
    const double lip = lip_constant(f).value;
    double best = 0;
    for (std::size_t x = 0; x < m->size(); ++x)
      for (std::size_t y = x + 1; y < m->size(); ++y) best = std::max(best, norm(pushforward(f, elementary(m, x, y))));
    o.check(std::fabs(best - lip) <= kTol, "map " + std::to_string(t));
    auto mu = random_molecule<double>(rng, m, 6);
    o.check(norm(pushforward(f, mu)) <= lip * norm(mu) + kTol, "molecule " + std::to_string(t));
  }
  o.summary = "100 maps, 100 molecules";
}

// 8. Plateau, McShane, inf-convolution and psi.
void lip_machinery(Outcome& o) {
  Rng rng(kSeed ^ 0x8);
  for (std::size_t t = 0; t < 100; ++t) {
    auto s = random_space<Rational>(kSeed + 1800 + t, 3 + rng.index(10), RandomGenerator::shortestpath);
    const std::size_t x = rng.index(s->size());
    const Rational r = make_rational(rng.uniform_int(1, 40), 8);
    auto p = plateau<Rational>(s, x, r);
    bool triple = true;
    for (std::size_t z = 0; z < s->size(); ++z) {
      if (!(r < s->distance(x, z))) triple = triple && p(z) == 1;
      if (2 * r < s->distance(x, z)) triple = triple && p(z) == 0;
      triple = triple && !(p(z) < 0) && !(1 < p(z));
    }
    o.check(triple, "plateau " + std::to_string(t));
    o.check(!(1 / r < lip_constant(p)), "plateau Lip " + std::to_string(t));
  }

  for (std::size_t t = 0; t < 50; ++t) {
    auto s = random_space<Rational>(kSeed + 1900 + t, 10, RandomGenerator::shortestpath);
    std::vector<std::size_t> subset{s->base()};
    std::vector<Rational> partial{0};
    for (std::size_t i = 0; i < s->size(); ++i) {
      if (i != s->base() && rng.coin()) {
        subset.push_back(i);
        partial.push_back(grid_coefficient<Rational>(rng));
      }
    }
    Rational lip = 0;
    for (std::size_t a = 0; a < subset.size(); ++a)
      for (std::size_t b = a + 1; b < subset.size(); ++b)
        lip = std::max(lip, Rational(abs(partial[a] - partial[b]) / s->distance(subset[a], subset[b])));
    auto ext = mcshane_extend<Rational>(s, subset, partial, lip);
    bool restricts = true;
    for (std::size_t a = 0; a < subset.size(); ++a) restricts = restricts && ext(subset[a]) == partial[a];
    o.check(restricts, "mcshane restricts " + std::to_string(t));
    o.check(!(lip < lip_constant(ext)), "mcshane respects L " + std::to_string(t));
  }

  auto pwl = ModulusFunction<Rational>::pwl({0, make_rational(1, 8), make_rational(1, 2), 1},
                                            {0, make_rational(1, 2), make_rational(3, 4), make_rational(7, 8)}, 0,
                                            Rational(2));
  std::vector<Rational> grid;
  for (long k = 0; k <= 32; ++k) grid.push_back(make_rational(k, 16));
  for (long n = 1; n <= 8; ++n) o.check(check_inf_convolution(pwl, Rational(n), grid).ok(), "pwl n=" + std::to_string(n));
  auto root = ModulusFunction<double>::power(make_rational(1, 2));
  std::vector<double> fine;
  for (int k = 0; k <= 64; ++k) fine.push_back(k / 32.0);
  for (double n : {1.0, 2.0, 8.0, 32.0}) o.check(check_inf_convolution(root, n, fine).ok(), "t^(1/2) n=" + num(n));

  for (int k = 1; k <= 6; ++k) {
    auto stage = svc_stage(k);
    auto family = cantor_gap_family(stage, true);
    for (std::size_t n = 0; n <= family.depth(); ++n) {
      auto psi = psi_n(family, n);
      bool lipschitz = true, close = true;
      for (std::size_t i = 0; i < stage.endpoints.size(); ++i) {
        const Rational v = psi(stage.endpoints[i]);
        close = close && !(family.tail_length(n) < abs(Rational(stage.endpoints[i] - v)));
        for (std::size_t j = 0; j < i; ++j) {
          const Rational rise = abs(Rational(v - psi(stage.endpoints[j])));
          lipschitz = lipschitz && !(abs(Rational(stage.endpoints[i] - stage.endpoints[j])) < rise);
        }
      }
      o.check(lipschitz, "psi_" + std::to_string(n) + " stage " + std::to_string(k) + " Lipschitz");
      o.check(close, "psi_" + std::to_string(n) + " stage " + std::to_string(k) + " error");
    }
  }
  o.summary = "100 plateaus, 50 extensions, 12 moduli, psi on stages 1..6";
}

// 9. Distance sets of the stage-5 dust under the two product norms.
void dust_contrast(Outcome& o) {
  const Rational eps = make_rational(1, 1000);
  auto l1 = cantor_dust<Rational>(5, ProductNorm::l1);
  auto linf = cantor_dust<Rational>(5, ProductNorm::linf);
  const double m1 = distance_set_measure(*l1, l1->base(), eps).get_d();
  const double minf = distance_set_measure(*linf, linf->base(), eps).get_d();
  o.check(m1 >= 1.9, "l1 measure " + num(m1) + " < 1.9");
  o.check(minf <= 0.2, "linf measure " + num(minf) + " > 0.2");
  // Not part of the verdict: one stage finer the grid spacing drops below 2 eps.
  auto finer = cantor_dust<Rational>(6, ProductNorm::l1);
  const double m6 = distance_set_measure(*finer, finer->base(), eps).get_d();
  o.summary = "l1 " + num(m1) + " (need >= 1.9), linf " + num(minf) + " (need <= 0.2); l1 at stage 6 " + num(m6);
}

// 10. Star tree with one missed direction.
void rtree(Outcome& o) {
  auto ex = rtree_example(20);
  for (std::size_t i = 0; i < ex.branch_molecules.size(); ++i) {
    o.check(pushforward(ex.instance.map, ex.branch_molecules[i]) == ex.expected_images[i],
            "branch " + std::to_string(i));
  }
  auto k = kernel_basis(linearize(ex.instance.map));
  const std::size_t dim = ex.instance.codomain->size() - 1;
  o.check(dim - k.rank == 1, "deficiency " + std::to_string(dim - k.rank));
  const Rational missed = norm(ex.missed);
  o.check(missed == make_rational(1, 20), "missed norm " + str(missed));
  o.check(norm_dual_lp(ex.missed).value == missed, "missed norm lp");
  o.summary = "rank " + std::to_string(k.rank) + " of " + std::to_string(dim) + ", missed norm " + str(missed);
}

// 11. Injective maps whose lower constant degenerates.
void xsquared(Outcome& o) {
  std::string seen;
  for (long n : {10L, 100L, 1000L}) {
    auto w = xsquared_grid(n);
    auto k = kernel_basis(linearize(w.map));
    o.check(k.injective && k.rank == w.domain->size() - 1, "n=" + std::to_string(n) + " rank");
    auto b = bilip_constants(w.map);
    o.check(b.a == make_rational(1, n), "n=" + std::to_string(n) + " a = " + str(b.a));
    seen += (seen.empty() ? "" : ", ") + str(b.a);
  }
  auto small = xsquared_grid(4);
  o.check(small.domain->size() == 5, "5-point instance");
  auto m = embedding_modulus(linearize(small.map));
  const Rational a = bilip_constants(small.map).a;
  o.check(m.method == ModulusMethod::exact_vertex, "modulus route " + to_string(m.method));
  o.check(!(a < m.upper), "modulus " + str(m.upper) + " > a " + str(a));
  o.summary = "a = " + seen + "; 5 points: modulus " + str(m.upper) + " <= a " + str(a);
}

// 12. The verifier must reject both fault fixtures, identically on reruns.
void negative_controls(Outcome& o) {
  auto triangle = cli::fault_fixture("triangle");
  auto collapse = cli::fault_fixture("collapse");
  auto t1 = cli::check_space_fixture(triangle);
  auto t2 = cli::check_space_fixture(triangle);
  auto c1 = cli::check_map_fixture(collapse);
  auto c2 = cli::check_map_fixture(collapse);
  o.check(!t1.passed(), "triangle fixture accepted");
  o.check(!c1.passed(), "collapsing map accepted");
  o.check(t1.failures == t2.failures && c1.failures == c2.failures, "reruns differ");
  o.summary = std::to_string(t1.failures.size()) + " + " + std::to_string(c1.failures.size()) + " rejections";
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "svc kernel degeneration", svc_degeneration},
      {2, "snowflake counterexample", snowflake_counterexample},
      {3, "duality certification", duality},
      {4, "line oracle equivalence", line_oracle},
      {5, "finite rank law", rank_law},
      {6, "support laws", support_laws},
      {7, "operator norm identity", operator_norm},
      {8, "lipschitz machinery", lip_machinery},
      {9, "cantor dust contrast", dust_contrast},
      {10, "r-tree surjectivity shadow", rtree},
      {11, "bidual shadow", xsquared},
      {12, "negative controls", negative_controls},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.check(false, std::string("threw: ") + e.what());
    }
    const bool ok = o.failed == 0 && o.checks > 0;
    failures += !ok;
    std::printf("%s %2d %s: %s", ok ? "PASS" : "FAIL", c.id, c.name, o.summary.c_str());
    if (!ok) {
      std::printf(" [%zu/%zu failed", o.failed, o.checks);
      for (const auto& n : o.notes) std::printf("; %s", n.c_str());
      std::printf("]");
    }
    std::printf("\n");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
