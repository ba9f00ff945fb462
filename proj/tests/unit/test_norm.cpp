#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "lipfree/norm.hpp"

using namespace lipfree;
using testing::Q;

namespace {

SpacePtr<Rational> unit_interval_points() {
  return make_line_space<Rational>("line", {"0", "3/8", "1/2", "5/8", "1"}, {0, Q("3/8"), Q("1/2"), Q("5/8"), 1}, 0);
}

}  // namespace

TEST_SUITE("norm") {
  TEST_CASE("canonical form") {
    auto m = testing::path3();
    auto merged = canonicalize<Rational>(m, {{"a", 1}, {"a", 2}});
    CHECK(merged.terms().size() == 1);
    CHECK(merged.coefficient(m->index("a")) == 3);
    CHECK(canonicalize<Rational>(m, {{"0", 5}}).is_zero());
    auto dropped = canonicalize<Rational>(m, {{"a", 1}, {"b", -1}});
    CHECK(dropped.support() == std::vector<std::size_t>{1, 2});
    CHECK(canonicalize<Rational>(m, {{"a", 1}, {"a", -1}, {"b", 2}}).support() == std::vector<std::size_t>{2});
    CHECK(Molecule<Rational>(m).support().empty());
    try {
      canonicalize<Rational>(m, {{"zz", 1}});
      FAIL("unknown label accepted");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::unknown_label);
    }
  }

  TEST_CASE("elementary molecules") {
    auto m = testing::path3();
    CHECK(elementary(m, 1, 2) == elementary(m, 2, 1).scaled(Rational(-1)));
    CHECK(elementary(m, 1, 0) == delta(m, 1).scaled(Rational(1) / (*m)(1, 0)));
    CHECK_THROWS_AS(elementary(m, 1, 1), Error);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      auto s = random_space<Rational>(seed, 7, RandomGenerator::shortestpath);
      for (std::size_t x = 0; x < s->size(); ++x)
        for (std::size_t y = 0; y < s->size(); ++y) {
          if (x == y) continue;
          CHECK(norm_flow(elementary(s, x, y)).value == 1);
          CHECK(norm_dual_lp(elementary(s, x, y)).value == 1);
          CHECK(norm(Molecule<Rational>(delta(s, x) - delta(s, y))) == (*s)(x, y));
        }
    }
  }

  TEST_CASE("pairing") {
    auto m = testing::path3();
    LipFunction<Rational> f(m, {0, 1, -1});
    CHECK(eval(f, delta(m, 1)) == 1);
    CHECK(eval(f, Molecule<Rational>(m)) == 0);
    CHECK(eval(f, elementary(m, 1, 2)) <= lip_constant(f));
    auto other = testing::path3();
    CHECK_THROWS_AS(eval(LipFunction<Rational>::zero(other), delta(m, 1)), Error);
  }

  TEST_CASE("dirac norms equal distance to base") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      auto s = random_space<Rational>(seed, 9, RandomGenerator::shortestpath);
      for (std::size_t x = 0; x < s->size(); ++x) {
        const Rational d = (*s)(x, s->base());
        CHECK(norm_dual_lp(delta(s, x)).value == d);
        CHECK(norm_flow(delta(s, x)).value == d);
      }
    }
  }

  TEST_CASE("path space example and zero molecule") {
    auto m = testing::path3();
    auto mu = canonicalize<Rational>(m, {{"a", 1}, {"b", 1}});
    CHECK(norm_dual_lp(mu).value == 2);
    CHECK(norm_flow(mu).value == 2);
    CHECK(testing::vertex_oracle_norm(mu) == 2);
    auto zero = Molecule<Rational>(m);
    CHECK(norm_flow(zero).value == 0);
    CHECK(norm_flow(zero).pivots == 0);
    CHECK(norm_dual_lp(zero).value == 0);
  }

  TEST_CASE("exact routes agree with vertex enumeration") {
    Rng rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
      auto s = random_space<Rational>(100 + trial, 8, RandomGenerator::shortestpath);
      auto mu = testing::random_molecule(rng, s, 5);
      const Rational oracle = testing::vertex_oracle_norm(mu);
      auto dual = norm_dual_lp(mu);
      auto flow = norm_flow(mu);
      CHECK(dual.value == oracle);
      CHECK(flow.value == oracle);
      CHECK(eval(*dual.potential, mu) == oracle);
      CHECK(lipschitz_violation(*dual.potential) <= 0);
      CHECK(flow.plan.cost(*s) == oracle);
      CHECK(flow.plan.balances(mu));
    }
  }

  TEST_CASE("floating duality on euclidean spaces") {
    Rng rng(77);
    for (int trial = 0; trial < 40; ++trial) {
      auto s = random_space<double>(500 + trial, 40, RandomGenerator::euclidean2d);
      auto mu = testing::random_molecule(rng, s, 25);
      auto cert = certify_norm(mu);
      CHECK(cert.gap <= 1e-9);
      CHECK(cert.potential_feasible);
      CHECK(cert.plan_balanced);
    }
  }

  TEST_CASE("line oracle") {
    auto m = unit_interval_points();
    auto one = norm_line(delta(m, m->index("1")));
    CHECK(one.value == 1);
    CHECK(one.phi.values == std::vector<Rational>{1});
    auto half = norm_line(canonicalize<Rational>(m, {{"1", 1}, {"1/2", -1}}));
    CHECK(half.value == Q("1/2"));
    auto svc1 = canonicalize<Rational>(m, {{"1", 1}, {"5/8", -1}, {"3/8", 1}});
    auto line = norm_line(svc1);
    CHECK(line.value == Q("3/4"));
    CHECK(line.phi(Q("1/4")) == 1);
    CHECK(line.phi(Q("1/2")) == 0);
    CHECK(line.phi(Q("3/4")) == 1);
    CHECK(norm_dual_lp(svc1).value == Q("3/4"));
    CHECK(norm_flow(svc1).value == Q("3/4"));
  }

  TEST_CASE("line oracle on points left of the base") {
    auto m = make_line_space<Rational>("l", {"a", "0", "b"}, {-2, 1, 3}, 1);
    auto mu = canonicalize<Rational>(m, {{"a", 1}, {"b", 1}});
    // Phi = -1 on (-3, 0) and +1 on (0, 2) after translating the base to 0.
    CHECK(norm_line(mu).value == 5);
    CHECK(norm_flow(mu).value == 5);
  }

  TEST_CASE("line oracle needs a line") {
    auto m = testing::dense_space("tri", {"0", "a", "b"}, "0", {{"0", "1", "1"}, {"1", "0", "1"}, {"1", "1", "0"}});
    try {
      norm_line(delta(m, 1));
      FAIL("equilateral triangle accepted as a line");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::not_a_line_space);
    }
    auto path = testing::path3();
    CHECK(norm_line(delta(path, 1)).value == 1);
    std::vector<Rational> wrong{0, 1, 3};
    CHECK_THROWS_AS(norm_line<Rational>(delta(path, 1), wrong), Error);
    std::vector<Rational> right{0, 1, -1};
    CHECK(norm_line<Rational>(delta(path, 1), right).value == 1);
  }

  TEST_CASE("line oracle equals both solvers on random line spaces") {
    Rng rng(9);
    for (int trial = 0; trial < 40; ++trial) {
      auto s = random_space<Rational>(900 + trial, 20, RandomGenerator::line);
      auto mu = testing::random_molecule(rng, s, 12);
      const Rational line = norm_line(mu).value;
      CHECK(norm_dual_lp(mu).value == line);
      CHECK(norm_flow(mu).value == line);
    }
  }

  TEST_CASE("norm axioms") {
    Rng rng(5);
    for (int trial = 0; trial < 30; ++trial) {
      auto s = random_space<Rational>(300 + trial, 10, RandomGenerator::shortestpath);
      auto a = testing::random_molecule(rng, s, 6);
      auto b = testing::random_molecule(rng, s, 6);
      const Rational c = testing::grid_coefficient<Rational>(rng);
      CHECK(norm(a.scaled(c)) == abs(c) * norm(a));
      CHECK(norm(a + b) <= norm(a) + norm(b));
      CHECK(norm(a) <= a.mass_bound());
    }
  }

  TEST_CASE("restriction invariance") {
    Rng rng(31);
    for (int trial = 0; trial < 20; ++trial) {
      auto s = random_space<Rational>(700 + trial, 12, RandomGenerator::shortestpath);
      auto mu = testing::random_molecule(rng, s, 5);
      // The same molecule on the subspace supp + base.
      std::vector<std::size_t> keep{s->base()};
      for (auto p : mu.support()) keep.push_back(p);
      RawSpace<Rational> raw{"sub", s->base_label(), {}, {}};
      for (auto i : keep) raw.labels.push_back(s->label(i));
      for (auto i : keep) {
        std::vector<Rational> row;
        for (auto j : keep) row.push_back((*s)(i, j));
        raw.matrix.push_back(std::move(row));
      }
      auto sub = validate_space(raw);
      std::vector<std::pair<std::string, Rational>> terms;
      for (const auto& [p, a] : mu.terms()) terms.emplace_back(s->label(p), a);
      CHECK(norm(canonicalize(sub, terms)) == norm(mu));
    }
  }

  TEST_CASE("step function reading") {
    StepFunction<Rational> phi{{0, 1, 3}, {2, -1}};
    CHECK(phi.integral_abs() == 4);
    CHECK(phi(Q("1/2")) == 2);
    CHECK(phi(Rational(2)) == -1);
    CHECK(phi(Rational(5)) == 0);
  }
}
