#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "lipfree/constructions.hpp"
#include "lipfree/norm.hpp"
#include "lipfree/operators.hpp"

using namespace lipfree;
using testing::Q;

namespace {

Rational pow2(int e) { return pow_rational(Rational(2), static_cast<unsigned long>(e)); }

std::size_t label_index(const CantorStage& stage, const std::string& label) {
  auto it = std::find(stage.labels.begin(), stage.labels.end(), label);
  REQUIRE(it != stage.labels.end());
  return static_cast<std::size_t>(it - stage.labels.begin());
}

}  // namespace

TEST_SUITE("constructions") {
  TEST_CASE("svc stages") {
    auto s1 = svc_stage(1);
    REQUIRE(s1.removed.size() == 1);
    CHECK(s1.removed[0] == std::pair{Q("3/8"), Q("5/8")});
    CHECK(s1.stage_measure == Q("3/4"));

    auto s2 = svc_stage(2);
    REQUIRE(s2.removed.size() == 3);
    CHECK(s2.removed[1] == std::pair{Q("5/32"), Q("7/32")});
    CHECK(s2.removed[2] == std::pair{Q("25/32"), Q("27/32")});
    CHECK(s2.stage_measure == Q("5/8"));
    CHECK(s2.limit_measure == Q("1/2"));

    Rational previous = 1;
    for (int k = 1; k <= kMaxLineStage; ++k) {
      auto s = svc_stage(k);
      CHECK(s.removed.size() == (std::size_t{1} << k) - 1);
      CHECK(s.endpoints.size() == (std::size_t{2} << k));
      CHECK(std::is_sorted(s.endpoints.begin(), s.endpoints.end()));
      CHECK(s.stage_measure == Q("1/2") + 1 / pow2(k + 1));
      CHECK(s.stage_measure < previous);
      previous = s.stage_measure;
      const Rational piece = 1 / pow2(k + 1) + 1 / pow2(2 * k + 1);
      for (const auto& [a, b] : s.pieces) CHECK(b - a == piece);
      for (std::size_t n = 1; n <= s.removed.size(); ++n) {
        const auto& [x, y] = s.removed[n - 1];
        CHECK(y - x == 1 / pow2(2 * CantorStage::stage_of(n)));
      }
    }
    CHECK_THROWS_AS(svc_stage(0), Error);
    try {
      svc_stage(13);
      FAIL("expected stage_too_large");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::stage_too_large);
    }
  }

  TEST_CASE("geometric cantor guards") {
    try {
      geometric_cantor(Q("2/5"), 3);
      FAIL("expected width_overflow");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::width_overflow);
    }
    auto thirds = middle_thirds_stage(3);
    CHECK(thirds.limit_measure == 0);
    CHECK(thirds.stage_measure == Q("8/27"));
    // lambda(C) = 0: the map is the identity.
    CHECK(cantor_map(thirds) == thirds.endpoints);
  }

  TEST_CASE("svc map values") {
    auto values = svc_map(1);
    REQUIRE(values.size() == 4);
    CHECK(values[0] == std::pair{Q("0"), Q("0")});
    CHECK(values[1] == std::pair{Q("3/8"), Q("1/8")});
    CHECK(values[2] == std::pair{Q("5/8"), Q("3/8")});
    CHECK(values[3] == std::pair{Q("1"), Q("1/2")});

    for (int k = 1; k <= 8; ++k) {
      auto stage = svc_stage(k);
      auto f = cantor_map(stage);
      CHECK(f.back() == Q("1/2"));
      for (std::size_t i = 1; i < f.size(); ++i) CHECK(f[i - 1] < f[i]);
      for (std::size_t n = 1; n <= stage.removed.size(); ++n) {
        const auto& [x, y] = stage.removed[n - 1];
        const auto ix = label_index(stage, "x" + std::to_string(n));
        const auto iy = label_index(stage, "y" + std::to_string(n));
        CHECK(f[iy] - f[ix] == y - x);
      }
      // lambda(f(C_k)) = f(1) - removed widths.
      Rational image_measure = f.back();
      for (const auto& [x, y] : stage.removed) image_measure -= y - x;
      CHECK(image_measure == 1 / pow2(k + 1));

      // The map does not depend on the stage it is read from.
      auto finer = svc_stage(k + 1);
      auto g = cantor_map(finer);
      for (std::size_t i = 0; i < stage.endpoints.size(); ++i) {
        CHECK(g[label_index(finer, stage.labels[i])] == f[i]);
      }
    }
  }

  TEST_CASE("svc witness norms") {
    for (int k = 1; k <= 8; ++k) {
      auto w = svc_witness(k);
      CHECK(w.expected_mu == Q("1/2") + 1 / pow2(k + 1));
      CHECK(w.expected_image == 1 / pow2(k + 1));
      CHECK(norm_line(w.mu).value == *w.expected_mu);
      CHECK(norm_line(w.image).value == w.expected_image);
      CHECK(w.map.is_injective());
      CHECK(check_support_preservation(w.map, w.mu).equality_holds);
      if (k <= 4) {
        CHECK(norm(w.mu) == *w.expected_mu);
        CHECK(norm(w.image) == w.expected_image);
        CHECK(norm_dual_lp(w.mu).value == *w.expected_mu);
      }
    }
    auto w1 = svc_witness(1);
    CHECK(*w1.expected_mu == Q("3/4"));
    CHECK(w1.expected_image == Q("1/4"));
  }

  TEST_CASE("snowflake ratio") {
    CHECK(snowflake_ratio(Q("1/2")) == Q("1/16"));
    CHECK(snowflake_ratio(Q("2/3")) == Q("1/8"));
    CHECK(snowflake_ratio(Q("3/5")) == Q("1/16"));
    CHECK(snowflake_ratio(Q("1/3")) == Q("1/64"));
    for (const char* a : {"1/2", "2/3", "3/5", "1/3", "7/10", "9/10"}) {
      const double r = snowflake_ratio(Q(a)).get_d();
      CHECK(std::pow(r, Q(a).get_d()) <= 0.25 + 1e-15);
    }
    CHECK_THROWS_AS(snowflake_ratio(Q("1")), Error);
    CHECK_THROWS_AS(snowflake_ratio(Q("0")), Error);
  }

  TEST_CASE("snowflake witness") {
    for (int n = 1; n <= 6; ++n) {
      auto w = snowflake_witness(Q("1/2"), n);
      // sum_{s > n} 2^{s-1} 16^{-s}
      const Rational tail = Q("1/14") / pow_rational(Rational(8), static_cast<unsigned long>(n));
      CHECK(w.line.expected_image == tail);
      CHECK(norm_line(w.line.image).value == tail);
      CHECK(w.snowflaked.image.terms().size() == w.line.image.terms().size());

      double pair_sum = 0;
      for (std::size_t i = 1; i < (std::size_t{1} << n); ++i) {
        auto& d = *w.snowflaked.domain;
        pair_sum += d.distance(d.index("x" + std::to_string(i)), d.index("y" + std::to_string(i)));
      }
      CHECK(pair_sum == doctest::Approx(0.5 - std::pow(0.5, n + 1)).epsilon(1e-12));
      if (n <= 3) CHECK(norm_dual_lp(w.snowflaked.mu).value >= 0.5 - 1e-9);
    }
  }

  TEST_CASE("discrete witnesses") {
    for (auto variant : {DiscreteVariant::unbounded, DiscreteVariant::bounded}) {
      for (int k = 1; k <= 4; ++k) {
        auto w = discrete_witness(variant, k);
        auto svc = svc_witness(k);
        REQUIRE(w.first_step);
        CHECK(w.first_step->is_injective());
        CHECK(w.map.is_injective());
        CHECK(w.image.terms() == svc.image.terms());
        CHECK(w.codomain->labels() == svc.codomain->labels());
        CHECK(pushforward(*w.first_step, w.mu).terms() == svc.mu.terms());
        CHECK(norm_line(w.image).value == w.expected_image);
        CHECK(norm(w.mu) == *w.expected_mu);
        CHECK(*w.expected_mu >= w.mu_lower_bound);
        if (variant == DiscreteVariant::unbounded) CHECK(norm_line(w.mu).value == *w.expected_mu);
        CHECK(check_support_preservation(w.map, w.mu).equality_holds);
      }
    }
    auto b = discrete_witness(DiscreteVariant::bounded, 3);
    CHECK(b.domain->distance(b.domain->index("x4"), b.domain->index("y4")) == Q("1/64"));
    CHECK(b.domain->distance(b.domain->index("x4"), b.domain->index("y5")) == 1);
    CHECK(parse_discrete_variant("bounded") == DiscreteVariant::bounded);
    CHECK_THROWS_AS(parse_discrete_variant("other"), Error);
  }

  TEST_CASE("cantor dust") {
    auto l1 = cantor_dust<Rational>(1, ProductNorm::l1);
    auto linf = cantor_dust<Rational>(2, ProductNorm::linf);
    CHECK(l1->size() == 16);
    CHECK(l1->base_label() == "(0,0)");

    // From the base, l1 distances at stage 1 are the sums of {0,1/3,2/3,1}.
    std::set<Rational> sums;
    for (std::size_t i = 0; i < l1->size(); ++i) sums.insert(l1->distance(l1->base(), i));
    CHECK(sums == std::set<Rational>{Q("0"), Q("1/3"), Q("2/3"), Q("1"), Q("4/3"), Q("5/3"), Q("2")});

    auto axis = middle_thirds_stage(2);
    std::set<Rational> points(axis.endpoints.begin(), axis.endpoints.end());
    for (std::size_t i = 0; i < linf->size(); ++i) CHECK(points.count(linf->distance(linf->base(), i)) == 1);

    CHECK_THROWS_AS(cantor_dust<double>(7, ProductNorm::l1), Error);
  }

  TEST_CASE("rtree example") {
    for (int n_max : {2, 5, 20}) {
      auto ex = rtree_example(n_max);
      const auto& f = ex.instance.map;
      REQUIRE(ex.branch_molecules.size() == static_cast<std::size_t>(n_max - 1));
      for (std::size_t i = 0; i < ex.branch_molecules.size(); ++i) {
        CHECK(pushforward(f, ex.branch_molecules[i]) == ex.expected_images[i]);
        CHECK(norm(ex.branch_molecules[i]) == 1);
      }
      auto image = f.image();
      CHECK(std::find(image.begin(), image.end(), ex.y_infinity) == image.end());
      auto report = kernel_basis(linearize(f));
      CHECK(report.rank == ex.instance.codomain->size() - 2);
      CHECK(norm_line(ex.missed).value == ex.missed_norm);
      CHECK(ex.missed_norm == 1 / Rational(n_max));
      CHECK(lip_constant(f).value == 1);
    }
    CHECK_THROWS_AS(rtree_example(1), Error);
  }

  TEST_CASE("xsquared grid") {
    for (int n : {2, 3, 10, 40}) {
      auto w = xsquared_grid(n);
      auto bl = bilip_constants(w.map);
      CHECK(bl.a == make_rational(1, n));
      CHECK(bl.b == make_rational(2 * n - 1, n));
      CHECK(kernel_basis(linearize(w.map)).injective);
      CHECK(norm_line(w.image).value == w.expected_image);
      CHECK(norm(w.mu) == 1);
    }
    auto small = xsquared_grid(4);
    auto bracket = embedding_modulus(linearize(small.map));
    REQUIRE(bracket.lower);
    CHECK(*bracket.lower == bracket.upper);
    CHECK(bracket.upper <= Q("1/4"));
  }

  TEST_CASE("psi on the svc gaps") {
    for (int k = 1; k <= 5; ++k) {
      auto stage = svc_stage(k);
      auto family = cantor_gap_family(stage, true);
      CHECK(family.depth() == stage.removed.size() + stage.pieces.size());
      for (std::size_t n = 0; n <= family.depth(); ++n) {
        auto psi = psi_n(family, n);
        std::vector<Rational> values;
        for (const auto& e : stage.endpoints) values.push_back(psi(e));
        for (std::size_t i = 1; i < values.size(); ++i) {
          CHECK(values[i] >= values[i - 1]);
          CHECK(values[i] - values[i - 1] <= stage.endpoints[i] - stage.endpoints[i - 1]);
        }
        for (std::size_t i = 0; i < values.size(); ++i) {
          CHECK(stage.endpoints[i] - values[i] <= family.tail_length(n));
        }
      }
    }
  }
}
