#include <algorithm>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "lipfree/norm.hpp"
#include "lipfree/operators.hpp"

using namespace lipfree;
using testing::Q;

namespace {

// Grid {0, 1/n, ..., 1} and the map t -> t^2 onto its image.
std::pair<PointMap<Rational>, std::size_t> square_map(int n) {
  std::vector<std::string> labels;
  std::vector<Rational> pos, img;
  for (int k = 0; k <= n; ++k) {
    labels.push_back("t" + std::to_string(k));
    pos.push_back(make_rational(k, n));
    img.push_back(make_rational(k * k, n * n));
  }
  auto dom = make_line_space<Rational>("grid", labels, pos, 0);
  auto cod = make_line_space<Rational>("squares", labels, img, 0);
  return {PointMap<Rational>::same_labels(dom, cod), static_cast<std::size_t>(n)};
}

std::size_t image_count_without_base(const PointMap<Rational>& f) {
  std::set<std::size_t> seen;
  for (auto y : f.assignment())
    if (y != f.codomain()->base()) seen.insert(y);
  return seen.size();
}

}  // namespace

TEST_SUITE("operators") {
  TEST_CASE("point maps") {
    auto m = testing::path3();
    CHECK_THROWS_AS(PointMap<Rational>(m, m, {1, 0, 2}), Error);
    try {
      PointMap<Rational>(m, m, {1, 0, 2});
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::base_not_preserved);
    }
    auto f = PointMap<Rational>::from_labels(m, m, {{"0", "0"}, {"a", "b"}, {"b", "b"}});
    CHECK_FALSE(f.is_injective());
    CHECK(f.collision() == std::pair<std::size_t, std::size_t>{1, 2});
    CHECK(f.image() == std::vector<std::size_t>{0, 2});
    CHECK_THROWS_AS(PointMap<Rational>::from_labels(m, m, {{"0", "0"}, {"a", "b"}}), Error);
    auto other = testing::path3();
    try {
      compose(f, PointMap<Rational>::identity(other));
      FAIL("composed across spaces");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::not_composable);
    }
  }

  TEST_CASE("linearization of simple maps") {
    auto s = random_space<Rational>(3, 6, RandomGenerator::shortestpath);
    auto id = linearize(PointMap<Rational>::identity(s));
    auto dense = id.dense();
    for (std::size_t i = 0; i < dense.size(); ++i)
      for (std::size_t j = 0; j < dense.size(); ++j) CHECK(dense[i][j] == (i == j ? 1 : 0));
    auto to_base = linearize(PointMap<Rational>(s, s, std::vector<std::size_t>(6, s->base())));
    for (const auto& row : to_base.dense())
      for (int v : row) CHECK(v == 0);
    CHECK(apply(to_base, delta(s, 2)).is_zero());
  }

  TEST_CASE("elementary molecules scale under f^") {
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
      auto m = random_space<Rational>(10 + trial, 6, RandomGenerator::shortestpath);
      auto n = random_space<Rational>(90 + trial, 7, RandomGenerator::shortestpath);
      auto f = testing::random_map(rng, m, n, false);
      auto op = linearize(f);
      for (std::size_t x = 0; x < 6; ++x)
        for (std::size_t y = 0; y < 6; ++y) {
          if (x == y) continue;
          auto image = apply(op, elementary(m, x, y));
          if (f(x) == f(y)) {
            CHECK(image.is_zero());
          } else {
            CHECK(image == elementary(n, f(x), f(y)).scaled((*n)(f(x), f(y)) / (*m)(x, y)));
            CHECK(norm(image) == (*n)(f(x), f(y)) / (*m)(x, y));
          }
        }
    }
  }

  TEST_CASE("apply and pushforward agree; norm bound") {
    Rng rng(5);
    for (int trial = 0; trial < 40; ++trial) {
      auto m = random_space<Rational>(300 + trial, 7, RandomGenerator::shortestpath);
      auto n = random_space<Rational>(400 + trial, 6, RandomGenerator::shortestpath);
      auto f = testing::random_map(rng, m, n, false);
      auto mu = testing::random_molecule(rng, m, 5);
      auto image = apply(linearize(f), mu);
      CHECK(image == pushforward(f, mu));
      CHECK(norm(image) <= lip_constant(f).value * norm(mu));
    }
    auto m = testing::path3();
    auto collapse = PointMap<Rational>(m, m, {0, 1, 1});
    CHECK(apply(linearize(collapse), Molecule<Rational>(delta(m, 1) - delta(m, 2))).is_zero());
    auto swap = PointMap<Rational>(m, m, {0, 2, 1});
    CHECK(apply(linearize(swap), delta(m, 1)) == delta(m, 2));
    CHECK_THROWS_AS(apply(linearize(swap), delta(testing::path3(), 1)), Error);
  }

  TEST_CASE("composition operator is the adjoint") {
    Rng rng(6);
    for (int trial = 0; trial < 40; ++trial) {
      auto m = random_space<Rational>(500 + trial, 6, RandomGenerator::shortestpath);
      auto n = random_space<Rational>(550 + trial, 8, RandomGenerator::shortestpath);
      auto f = testing::random_map(rng, m, n, rng.coin());
      std::vector<Rational> gv(8);
      for (std::size_t i = 0; i < 8; ++i) gv[i] = i == n->base() ? Rational(0) : testing::grid_coefficient<Rational>(rng);
      LipFunction<Rational> g(n, gv);
      auto cg = compose_Cf(f, g);
      auto mu = testing::random_molecule(rng, m, 5);
      CHECK(eval(cg, mu) == eval(g, apply(linearize(f), mu)));
      CHECK(lip_constant(cg) <= lip_constant(g) * lip_constant(f).value);
      CHECK(compose_Cf(f, LipFunction<Rational>::zero(n)).values() == std::vector<Rational>(6, 0));
    }
    auto m = testing::path3();
    CHECK_THROWS_AS(compose_Cf(PointMap<Rational>::identity(m), LipFunction<Rational>::zero(testing::path3())), Error);
  }

  TEST_CASE("operator norm equals Lip(f) on elementary molecules") {
    Rng rng(7);
    for (int trial = 0; trial < 30; ++trial) {
      auto m = random_space<Rational>(700 + trial, 6, RandomGenerator::shortestpath);
      auto n = random_space<Rational>(750 + trial, 6, RandomGenerator::shortestpath);
      auto f = testing::random_map(rng, m, n, false);
      auto op = linearize(f);
      Rational best = 0;
      for (std::size_t x = 0; x < 6; ++x)
        for (std::size_t y = x + 1; y < 6; ++y) best = std::max(best, norm(apply(op, elementary(m, x, y))));
      CHECK(best == lip_constant(f).value);
    }
  }

  TEST_CASE("functoriality") {
    Rng rng(9);
    for (int trial = 0; trial < 30; ++trial) {
      auto a = random_space<Rational>(800 + trial, 5, RandomGenerator::shortestpath);
      auto b = random_space<Rational>(850 + trial, 6, RandomGenerator::shortestpath);
      auto c = random_space<Rational>(900 + trial, 4, RandomGenerator::shortestpath);
      auto f = testing::random_map(rng, a, b, false);
      auto g = testing::random_map(rng, b, c, false);
      CHECK(linearize(compose(g, f)) == multiply(linearize(g), linearize(f)));
      auto mu = testing::random_molecule(rng, a, 4);
      CHECK(apply(linearize(compose(g, f)), mu) == apply(linearize(g), apply(linearize(f), mu)));
    }
  }

  TEST_CASE("rank law and kernel") {
    Rng rng(11);
    int injective_seen = 0;
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t size = 2 + rng.index(7);
      auto m = random_space<Rational>(1000 + trial, size, RandomGenerator::shortestpath);
      auto n = random_space<Rational>(2000 + trial, size + rng.index(3), RandomGenerator::shortestpath);
      auto f = testing::random_map(rng, m, n, rng.index(3) == 0);
      auto op = linearize(f);
      auto kernel = kernel_basis(op);
      CHECK(kernel.rank == image_count_without_base(f));
      CHECK(kernel.injective == f.is_injective());
      CHECK(kernel.basis.size() == op.cols() - kernel.rank);
      for (const auto& k : kernel.basis) CHECK(apply(op, k).is_zero());
      // Rank from a dense elimination of the same matrix.
      std::vector<std::vector<Rational>> dense;
      for (const auto& row : op.dense()) dense.emplace_back(row.begin(), row.end());
      CHECK(exact_rank(dense) == kernel.rank);
      injective_seen += f.is_injective();
    }
    CHECK(injective_seen > 20);

    auto m = testing::path3();
    auto collapse = PointMap<Rational>(m, m, {0, 1, 1});
    auto kernel = kernel_basis(linearize(collapse));
    REQUIRE(kernel.basis.size() == 1);
    auto diff = Molecule<Rational>(delta(m, 1) - delta(m, 2));
    CHECK((kernel.basis[0] == diff || kernel.basis[0] == diff.scaled(Rational(-1))));
    CHECK(exact_rank({{1, 2}, {2, 4}}) == 1);
    CHECK(exact_rank({{0, 1, 0}, {1, 0, 1}, {1, 1, 1}}) == 2);
  }

  TEST_CASE("support preservation") {
    Rng rng(13);
    for (int trial = 0; trial < 60; ++trial) {
      auto m = random_space<Rational>(3000 + trial, 7, RandomGenerator::shortestpath);
      auto n = random_space<Rational>(3100 + trial, 9, RandomGenerator::shortestpath);
      const bool inj = trial % 2 == 0;
      auto f = testing::random_map(rng, m, n, inj);
      auto mu = testing::random_molecule(rng, m, 6);
      auto report = check_support_preservation(f, mu);
      CHECK(report.inclusion_holds);
      if (inj) CHECK(report.equality_holds);
    }
    auto m = testing::path3();
    auto collapse = PointMap<Rational>(m, m, {0, 1, 1});
    auto report = check_support_preservation(collapse, Molecule<Rational>(delta(m, 1) - delta(m, 2)));
    CHECK(report.lhs.empty());
    CHECK(report.rhs == std::vector<std::size_t>{1});
    CHECK(report.inclusion_holds);
    CHECK_FALSE(report.equality_holds);
    auto zero = check_support_preservation(collapse, Molecule<Rational>(m));
    CHECK(zero.lhs.empty());
    CHECK(zero.rhs.empty());
    CHECK(zero.equality_holds);
  }

  TEST_CASE("non-returning sweep") {
    auto line = make_line_space<Rational>("l", {"0", "a", "b", "c"}, {0, 1, 2, 4}, 0);
    auto id = PointMap<Rational>::identity(line);
    auto report = check_nonreturning(id, 1, Rational(1), std::optional<Rational>(Rational(1)));
    REQUIRE(report.supremum);
    CHECK(*report.supremum == 3);
    CHECK(report.holds);
    // A far point sent next to f(a).
    auto target = make_line_space<Rational>("t", {"0", "a", "b", "c"}, {0, 1, 2, Q("11/10")}, 0);
    auto fold = PointMap<Rational>::same_labels(line, target);
    auto bad = check_nonreturning(fold, 1, Rational(1), std::optional<Rational>(Q("1/2")));
    CHECK_FALSE(bad.holds);
    CHECK(bad.witness == std::optional<std::size_t>(3));
    CHECK(*bad.supremum == Q("1/10"));
    // Nothing outside the ball.
    CHECK_FALSE(check_nonreturning(id, 0, Rational(10)).supremum.has_value());

    Rng rng(14);
    for (int trial = 0; trial < 40; ++trial) {
      auto m = random_space<Rational>(4000 + trial, 7, RandomGenerator::shortestpath);
      auto n = random_space<Rational>(4100 + trial, 8, RandomGenerator::shortestpath);
      auto f = testing::random_map(rng, m, n, true);
      const std::size_t x = rng.index(7);
      auto r = check_nonreturning(f, x, Q("1/2"));
      if (r.supremum) {
        CHECK(*r.supremum > 0);
        // Recompute: f^{-1}(B(f(x), rho)) inside B(x, 1/2) for rho just below.
        const Rational rho = *r.supremum * Q("99/100");
        for (std::size_t z = 0; z < 7; ++z)
          if ((*n)(f(z), f(x)) <= rho) CHECK((*m)(z, x) <= Q("1/2"));
      }
    }
  }

  TEST_CASE("bi-Lipschitz constants") {
    auto s = random_space<Rational>(21, 7, RandomGenerator::shortestpath);
    auto iso = bilip_constants(PointMap<Rational>::identity(s));
    CHECK(iso.a == 1);
    CHECK(iso.b == 1);
    for (int n : {3, 10, 25}) {
      auto [f, size] = square_map(n);
      auto c = bilip_constants(f);
      CHECK(c.a == make_rational(1, n));
      CHECK(c.b == make_rational(2 * n - 1, n));
      CHECK(c.a_pair == std::pair<std::size_t, std::size_t>{0, 1});
      CHECK(c.b_pair == std::pair<std::size_t, std::size_t>{size - 1, size});
    }
    auto m = testing::path3();
    auto collapse = bilip_constants(PointMap<Rational>(m, m, {0, 1, 1}));
    CHECK(collapse.a == 0);
    CHECK(collapse.collapsing);
    CHECK(collapse.a_pair == std::pair<std::size_t, std::size_t>{1, 2});
  }

  TEST_CASE("embedding modulus") {
    auto s = random_space<Rational>(22, 6, RandomGenerator::shortestpath);
    auto iso = embedding_modulus(linearize(PointMap<Rational>::identity(s)));
    CHECK(iso.method == ModulusMethod::exact_vertex);
    CHECK(iso.upper == 1);
    CHECK(iso.lower == Rational(1));
    auto m = testing::path3();
    auto zero = embedding_modulus(linearize(PointMap<Rational>(m, m, {0, 1, 1})));
    CHECK(zero.upper == 0);

    Rng rng(15);
    for (int trial = 0; trial < 25; ++trial) {
      const std::size_t size = 3 + rng.index(5);
      auto a = random_space<Rational>(5000 + trial, size, RandomGenerator::shortestpath);
      auto b = random_space<Rational>(5100 + trial, size + 1, RandomGenerator::shortestpath);
      auto f = testing::random_map(rng, a, b, true);
      auto op = linearize(f);
      auto bracket = embedding_modulus(op);
      auto c = bilip_constants(f);
      REQUIRE(bracket.lower);
      CHECK(*bracket.lower == bracket.upper);
      CHECK(c.a <= bracket.upper);
      CHECK(bracket.upper <= c.b);
      // No molecule does better than the exact value.
      for (int k = 0; k < 10; ++k) {
        auto mu = testing::random_molecule(rng, a, size - 1);
        CHECK(norm(apply(op, mu)) >= bracket.upper * norm(mu));
      }
    }
    auto [sq, size] = square_map(12);
    auto big = embedding_modulus(linearize(sq));
    CHECK(big.fell_back);
    CHECK_FALSE(big.lower.has_value());
    CHECK(big.upper == Q("1/12"));
  }

  TEST_CASE("composition support laws") {
    Rng rng(16);
    for (int trial = 0; trial < 20; ++trial) {
      auto a = random_space<Rational>(6000 + trial, 5, RandomGenerator::shortestpath);
      auto b = random_space<Rational>(6100 + trial, 6, RandomGenerator::shortestpath);
      auto c = random_space<Rational>(6200 + trial, 7, RandomGenerator::shortestpath);
      auto f = testing::random_map(rng, a, b, true);
      auto g = testing::random_map(rng, b, c, true);
      std::vector<Molecule<Rational>> samples;
      for (int k = 0; k < 8; ++k) samples.push_back(testing::random_molecule(rng, a, 4));
      auto report = composition_support_laws(f, g, samples);
      CHECK(report.ok());
      CHECK(report.preserving_compose.applicable == samples.size());
      CHECK(std::all_of(report.composite_preserves.begin(), report.composite_preserves.end(), [](bool v) { return v; }));

      // f collapses, g injective: g o f fails exactly where f does.
      auto f2 = testing::random_map(rng, a, b, false);
      auto collapsed = composition_support_laws(f2, g, samples);
      CHECK(collapsed.ok());
      for (std::size_t i = 0; i < samples.size(); ++i) {
        CHECK(collapsed.composite_preserves[i] == check_support_preservation(f2, samples[i]).equality_holds);
      }

      // Identity f: law (c) is g's own report.
      auto h = testing::random_map(rng, b, c, false);
      std::vector<Molecule<Rational>> on_b;
      for (int k = 0; k < 8; ++k) on_b.push_back(testing::random_molecule(rng, b, 4));
      auto ident = composition_support_laws(PointMap<Rational>::identity(b), h, on_b);
      CHECK(ident.f_hat_onto);
      CHECK(ident.ok());
      for (std::size_t i = 0; i < on_b.size(); ++i)
        CHECK(ident.composite_preserves[i] == check_support_preservation(h, on_b[i]).equality_holds);
    }
    auto m = testing::path3();
    CHECK_THROWS_AS(composition_support_laws(PointMap<Rational>::identity(m), PointMap<Rational>::identity(testing::path3()), {}), Error);
  }
}
