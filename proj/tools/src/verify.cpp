#include "lipfree_cli/verify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "lipfree/constructions.hpp"
#include "lipfree/modulus.hpp"
#include "lipfree/norm.hpp"
#include "lipfree/operators.hpp"
#include "lipfree/psi.hpp"
#include "lipfree_cli/generators.hpp"
#include "lipfree_cli/report.hpp"

namespace lipfree::cli {

namespace {

class Checker {
 public:
  Checker(std::string name, std::uint64_t seed) : seed_(seed) { result_.name = std::move(name); }

  void check(bool ok, const std::string& what) {
    ++result_.checks;
    if (!ok) result_.failures.push_back(what + " (seed " + std::to_string(seed_) + ")");
  }

  /// Runs `body`, turning an unexpected exception into a failure.
  void guarded(const std::string& what, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      check(false, what + " threw: " + e.what());
    }
  }

  std::uint64_t seed() const { return seed_; }
  SuiteResult take() { return std::move(result_); }

 private:
  std::uint64_t seed_;
  SuiteResult result_;
};

template <Scalar S>
bool near(const S& a, const S& b, double tolerance) {
  if constexpr (ScalarTraits<S>::is_exact) {
    return a == b;
  } else {
    return approx_equal(a, b, tolerance);
  }
}

template <Scalar S>
bool at_most(const S& a, const S& b, double tolerance) {
  if constexpr (ScalarTraits<S>::is_exact) {
    return !(b < a);
  } else {
    return a <= b + tolerance * std::max(1.0, std::fabs(b));
  }
}

std::string tag(const char* what, std::size_t i) { return std::string(what) + " #" + std::to_string(i); }

// Brute scan of the three axioms.
bool is_metric(const RawSpace<Rational>& raw) {
  const std::size_t n = raw.matrix.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (raw.matrix[i][i] != 0) return false;
    for (std::size_t j = 0; j < n; ++j) {
      if (raw.matrix[i][j] != raw.matrix[j][i]) return false;
      if (i != j && !(raw.matrix[i][j] > 0)) return false;
      for (std::size_t k = 0; k < n; ++k) {
        if (raw.matrix[i][j] > raw.matrix[i][k] + raw.matrix[k][j]) return false;
      }
    }
  }
  return true;
}

// Distinct 4-bit codes, leaves of a binary tree: d = 16^{depth of the split}, so every
// square and fourth root is rational.
SpacePtr<Rational> random_ultrametric(Rng& rng, std::size_t n) {
  std::vector<unsigned> codes(16);
  for (unsigned i = 0; i < 16; ++i) codes[i] = i;
  for (std::size_t i = 0; i < n; ++i) std::swap(codes[i], codes[i + rng.index(16 - i)]);
  RawSpace<Rational> raw{"ultra", "u0", {}, {}};
  for (std::size_t i = 0; i < n; ++i) raw.labels.push_back("u" + std::to_string(i));
  raw.matrix.assign(n, std::vector<Rational>(n, 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const auto level = static_cast<unsigned long>(std::bit_width(codes[i] ^ codes[j]));
      raw.matrix[i][j] = pow_rational(Rational(16), level);
    }
  }
  return validate_space(raw);
}

SuiteResult metric_suite(const VerifyConfig& config) {
  Checker c("metric", config.seed);
  Rng rng(config.seed ^ 0x6d657472ULL);

  c.guarded("validate_space vs axiom scan", [&] {
    for (std::size_t t = 0; t < 200; ++t) {
      const std::size_t n = 3 + rng.index(3);
      RawSpace<Rational> raw{"r", "p0", {}, {}};
      for (std::size_t i = 0; i < n; ++i) raw.labels.push_back("p" + std::to_string(i));
      raw.matrix.assign(n, std::vector<Rational>(n, 0));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) raw.matrix[i][j] = raw.matrix[j][i] = rng.uniform_int(0, 4);
      if (rng.index(8) == 0) raw.matrix[0][1] += 1;  // occasionally asymmetric
      bool accepted = true;
      try {
        validate_space(raw);
      } catch (const Error&) {
        accepted = false;
      }
      c.check(accepted == is_metric(raw), tag("validate agrees with scan", t));
    }
  });

  c.guarded("snowflake", [&] {
    for (std::size_t t = 0; t < 30; ++t) {
      auto m = random_ultrametric(rng, 3 + rng.index(6));
      auto twice = snowflake(snowflake(m, make_rational(1, 2)), make_rational(1, 2));
      auto once = snowflake(m, make_rational(1, 4));
      bool same = true;
      for (std::size_t i = 0; i < m->size(); ++i)
        for (std::size_t j = 0; j < m->size(); ++j) same = same && twice->distance(i, j) == once->distance(i, j);
      c.check(same, tag("snowflake composes", t));

      auto f = random_space<double>(config.seed + t, 12, RandomGenerator::euclidean2d);
      bool valid = true;
      try {
        validate_space(snowflake(f, make_rational(static_cast<long>(1 + rng.index(4)), 5))->to_raw());
      } catch (const Error&) {
        valid = false;
      }
      c.check(valid, tag("snowflake is a metric", t));
    }
  });

  c.guarded("truncate", [&] {
    for (std::size_t t = 0; t < 30; ++t) {
      auto m = random_space<Rational>(config.seed + 100 + t, 10, RandomGenerator::shortestpath);
      auto once = truncate_metric(m);
      auto twice = truncate_metric(once);
      bool idem = true, below = true;
      for (std::size_t i = 0; i < m->size(); ++i) {
        for (std::size_t j = 0; j < m->size(); ++j) {
          idem = idem && once->distance(i, j) == twice->distance(i, j);
          below = below && !(m->distance(i, j) < once->distance(i, j));
        }
      }
      c.check(idem, tag("truncate idempotent", t));
      c.check(below, tag("truncate below d", t));
    }
  });

  c.guarded("distance set measure", [&] {
    for (std::size_t t = 0; t < 30; ++t) {
      auto m = random_space<Rational>(config.seed + 200 + t, 10, RandomGenerator::shortestpath);
      const std::size_t x = rng.index(m->size());
      Rational previous = 0;
      for (long k = 1; k <= 6; ++k) {
        const Rational eps = make_rational(k, 16);
        const Rational v = distance_set_measure(*m, x, eps);
        Rational far = 0;
        for (std::size_t y = 0; y < m->size(); ++y) far = std::max(far, m->distance(x, y));
        c.check(!(v < previous), tag("measure monotone in eps", t));
        c.check(!(2 * eps * static_cast<long>(m->size()) + far < v), tag("measure bound", t));
        previous = v;
      }
    }
  });
  return c.take();
}

template <Scalar S>
SuiteResult norm_suite(const VerifyConfig& config) {
  Checker c("norm", config.seed);
  Rng rng(config.seed ^ 0x6e6f726dULL);
  const double tol = config.tolerance;

  c.guarded("duality certificate", [&] {
    for (std::size_t t = 0; t < 100; ++t) {
      auto m = random_space<S>(config.seed + t, 4 + rng.index(20), RandomGenerator::shortestpath);
      auto mu = random_molecule<S>(rng, m, 12);
      auto cert = certify_norm(mu, tol);
      c.check(near<S>(cert.primal, cert.dual, tol), tag("primal = dual", t));
      c.check(cert.potential_feasible, tag("potential feasible", t));
      c.check(cert.plan_balanced, tag("plan balanced", t));
    }
  });

  c.guarded("line oracle", [&] {
    for (std::size_t t = 0; t < 100; ++t) {
      auto m = random_space<S>(config.seed + 1000 + t, 5 + rng.index(30), RandomGenerator::line);
      auto mu = random_molecule<S>(rng, m, 30);
      const S line = norm_line(mu).value;
      c.check(near<S>(line, norm_dual_lp(mu).value, tol), tag("line = lp", t));
      c.check(near<S>(line, norm_flow(mu).value, tol), tag("line = flow", t));
    }
  });

  c.guarded("norm axioms", [&] {
    for (std::size_t t = 0; t < 60; ++t) {
      auto m = random_space<S>(config.seed + 2000 + t, 12, RandomGenerator::shortestpath);
      auto mu = random_molecule<S>(rng, m, 8);
      auto nu = random_molecule<S>(rng, m, 8);
      const S scale = grid_coefficient<S>(rng);
      c.check(near<S>(norm(mu.scaled(scale)), ScalarTraits<S>::abs(scale) * norm(mu), tol), tag("homogeneity", t));
      c.check(at_most<S>(norm(mu + nu), norm(mu) + norm(nu), tol), tag("triangle inequality", t));
    }
  });

  c.guarded("elementary molecules", [&] {
    for (std::size_t t = 0; t < 5; ++t) {
      auto m = random_space<S>(config.seed + 3000 + t, 8, RandomGenerator::shortestpath);
      for (std::size_t x = 0; x < m->size(); ++x) {
        for (std::size_t y = 0; y < m->size(); ++y) {
          if (x == y) continue;
          auto diff = delta(m, x) - delta(m, y);
          c.check(near<S>(norm(diff), m->distance(x, y), tol), "||delta(x) - delta(y)|| = d(x,y)");
          c.check(near<S>(norm(elementary(m, x, y)), ScalarTraits<S>::one(), tol), "||m_xy|| = 1");
        }
      }
    }
  });

  c.guarded("restriction invariance", [&] {
    for (std::size_t t = 0; t < 40; ++t) {
      auto m = random_space<S>(config.seed + 4000 + t, 15, RandomGenerator::shortestpath);
      auto mu = random_molecule<S>(rng, m, 6);
      std::vector<std::size_t> keep{m->base()};
      for (auto p : mu.support()) keep.push_back(p);
      std::sort(keep.begin(), keep.end());
      RawSpace<S> raw{"sub", m->base_label(), {}, {}};
      for (auto i : keep) {
        raw.labels.push_back(m->label(i));
        std::vector<S> row;
        for (auto j : keep) row.push_back(m->distance(i, j));
        raw.matrix.push_back(std::move(row));
      }
      auto sub = validate_space(raw);
      std::vector<std::pair<std::string, S>> terms;
      for (const auto& [p, a] : mu.terms()) terms.emplace_back(m->label(p), a);
      c.check(near<S>(norm(canonicalize(sub, terms)), norm(mu), tol), tag("norm over supp + base", t));
    }
  });
  return c.take();
}

SuiteResult lip_suite(const VerifyConfig& config) {
  Checker c("lip", config.seed);
  Rng rng(config.seed ^ 0x6c6970ULL);

  c.guarded("mcshane", [&] {
    for (std::size_t t = 0; t < 40; ++t) {
      auto s = random_space<Rational>(config.seed + t, 10, RandomGenerator::shortestpath);
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
      const Rational bound = lip + 1;
      auto ext = mcshane_extend<Rational>(s, subset, partial, bound);
      bool restricts = true;
      for (std::size_t a = 0; a < subset.size(); ++a) restricts = restricts && ext(subset[a]) == partial[a];
      c.check(restricts, tag("extension restricts", t));
      c.check(!(bound < lip_constant(ext)), tag("extension respects L", t));
      bool cones = true;
      for (std::size_t z = 0; z < s->size(); ++z) {
        bool attained = false;
        for (std::size_t a = 0; a < subset.size(); ++a) {
          const Rational cone = partial[a] + bound * s->distance(z, subset[a]);
          cones = cones && !(cone < ext(z));
          attained = attained || ext(z) == cone;
        }
        cones = cones && attained;
      }
      c.check(cones, tag("extension is the lower cone envelope", t));
    }
  });

  c.guarded("plateau", [&] {
    for (std::size_t t = 0; t < 100; ++t) {
      auto s = random_space<Rational>(config.seed + 500 + t, 8, RandomGenerator::shortestpath);
      const std::size_t x = rng.index(s->size());
      const Rational r = make_rational(rng.uniform_int(1, 40), 8);
      auto p = plateau<Rational>(s, x, r);
      bool triple = true;
      for (std::size_t z = 0; z < s->size(); ++z) {
        if (!(r < s->distance(x, z))) triple = triple && p(z) == 1;
        if (2 * r < s->distance(x, z)) triple = triple && p(z) == 0;
        triple = triple && !(p(z) < 0) && !(1 < p(z));
      }
      c.check(triple, tag("plateau conditions", t));
      c.check(!(1 / r < lip_constant(p)), tag("plateau Lip <= 1/r", t));
    }
  });

  c.guarded("inf-convolution", [&] {
    auto pwl = ModulusFunction<Rational>::pwl({0, make_rational(1, 8), make_rational(1, 2), 1},
                                              {0, make_rational(1, 2), make_rational(3, 4), make_rational(7, 8)}, 0,
                                              Rational(2));
    std::vector<Rational> grid;
    for (long k = 0; k <= 24; ++k) grid.push_back(make_rational(k, 16));
    for (long n = 1; n <= 6; ++n) c.check(check_inf_convolution(pwl, Rational(n), grid).ok(), "pwl inf-convolution");
    auto root = ModulusFunction<double>::power(make_rational(1, 2));
    std::vector<double> fine;
    for (int k = 0; k <= 40; ++k) fine.push_back(k / 16.0);
    for (double n : {1.0, 4.0, 16.0}) c.check(check_inf_convolution(root, n, fine).ok(), "t^(1/2) inf-convolution");
  });

  c.guarded("separation family", [&] {
    for (std::size_t t = 0; t < 20; ++t) {
      auto target = random_ultrametric(rng, 3 + rng.index(6));
      auto source = snowflake(target, make_rational(1, 2));
      auto f = PointMap<Rational>::same_labels(source, target);
      auto omega = ModulusFunction<Rational>::power(make_rational(1, 2));
      for (long n : {1L, 3L, 10L}) {
        auto fam = separation_family(f, omega, Rational(1), Rational(n), rng.index(source->size()));
        c.check(!(fam.bound < fam.pulled_lip), tag("Lip(g_n o f) <= C1/C2", t));
      }
    }
  });

  c.guarded("psi", [&] {
    for (int k = 1; k <= 5; ++k) {
      auto stage = svc_stage(k);
      auto family = cantor_gap_family(stage, true);
      for (std::size_t n = 0; n <= family.depth(); ++n) {
        auto psi = psi_n(family, n);
        bool lipschitz = true, close = true;
        for (std::size_t i = 0; i < stage.endpoints.size(); ++i) {
          const Rational v = psi(stage.endpoints[i]);
          close = close && !(family.tail_length(n) < abs(Rational(stage.endpoints[i] - v)));
          if (i > 0) {
            const Rational rise = v - psi(stage.endpoints[i - 1]);
            lipschitz = lipschitz && !(rise < 0) && !(stage.endpoints[i] - stage.endpoints[i - 1] < rise);
          }
        }
        c.check(lipschitz, "psi_n 1-Lipschitz on the endpoints");
        c.check(close, "psi_n within the tail length");
      }
    }
  });
  return c.take();
}

template <Scalar S>
SuiteResult operators_suite(const VerifyConfig& config) {
  Checker c("operators", config.seed);
  Rng rng(config.seed ^ 0x6f7073ULL);
  const double tol = config.tolerance;

  c.guarded("operator norm", [&] {
    for (std::size_t t = 0; t < 30; ++t) {
      auto m = random_space<S>(config.seed + t, 3 + rng.index(6), RandomGenerator::shortestpath);
      auto n = random_space<S>(config.seed + 50 + t, 3 + rng.index(6), RandomGenerator::shortestpath);
      auto f = random_map<S>(rng, m, n, false);
      const S lip = lip_constant(f).value;
      S best = ScalarTraits<S>::zero();
      for (std::size_t x = 0; x < m->size(); ++x)
        for (std::size_t y = x + 1; y < m->size(); ++y) best = std::max(best, norm(pushforward(f, elementary(m, x, y))));
      c.check(near<S>(best, lip, tol), tag("max ||f^ m_xy|| = Lip(f)", t));
      for (int k = 0; k < 3; ++k) {
        auto mu = random_molecule<S>(rng, m, 6);
        c.check(at_most<S>(norm(pushforward(f, mu)), lip * norm(mu), tol), tag("||f^ mu|| <= Lip ||mu||", t));
      }
    }
  });

  c.guarded("functoriality and adjoint", [&] {
    for (std::size_t t = 0; t < 30; ++t) {
      auto a = random_space<S>(config.seed + 100 + t, 6, RandomGenerator::shortestpath);
      auto b = random_space<S>(config.seed + 150 + t, 6, RandomGenerator::shortestpath);
      auto d = random_space<S>(config.seed + 200 + t, 6, RandomGenerator::shortestpath);
      auto f = random_map<S>(rng, a, b, false);
      auto g = random_map<S>(rng, b, d, false);
      c.check(linearize(compose(g, f)) == multiply(linearize(g), linearize(f)), tag("(g o f)^ = g^ f^", t));
      auto mu = random_molecule<S>(rng, a, 5);
      c.check(pushforward(compose(g, f), mu) == pushforward(g, pushforward(f, mu)), tag("(g o f)^ mu", t));
      c.check(apply(linearize(f), mu) == pushforward(f, mu), tag("matrix action", t));
      std::vector<S> values(d->size());
      for (std::size_t i = 0; i < d->size(); ++i) values[i] = i == d->base() ? S(0) : grid_coefficient<S>(rng);
      LipFunction<S> h(d, values);
      auto gf = pushforward(g, pushforward(f, mu));
      c.check(near<S>(eval(compose_Cf(compose(g, f), h), mu), eval(h, gf), tol), tag("<C_f h, mu> = <h, f^ mu>", t));
    }
  });

  c.guarded("rank law and support", [&] {
    for (std::size_t t = 0; t < 100; ++t) {
      auto m = random_space<S>(config.seed + 300 + t, 3 + rng.index(8), RandomGenerator::shortestpath);
      auto n = random_space<S>(config.seed + 400 + t, m->size() + rng.index(4), RandomGenerator::shortestpath);
      auto f = random_map<S>(rng, m, n, rng.coin());
      auto kernel = kernel_basis(linearize(f));
      c.check(kernel.injective == f.is_injective(), tag("f^ injective iff f injective", t));
      c.check(kernel.injective == (kernel.rank == m->size() - 1), tag("rank |M| - 1 iff injective", t));
      auto mu = random_molecule<S>(rng, m, 6);
      auto support = check_support_preservation(f, mu);
      c.check(support.inclusion_holds, tag("supp f^ mu in f(supp mu)", t));
      if (f.is_injective()) c.check(support.equality_holds, tag("equality for injective f", t));
    }
  });

  c.guarded("embedding modulus", [&] {
    for (std::size_t t = 0; t < 20; ++t) {
      auto m = random_space<S>(config.seed + 500 + t, 3 + rng.index(4), RandomGenerator::shortestpath);
      auto n = random_space<S>(config.seed + 600 + t, 7, RandomGenerator::shortestpath);
      auto f = random_map<S>(rng, m, n, true);
      auto bl = bilip_constants(f);
      auto bracket = embedding_modulus(linearize(f));
      c.check(at_most<S>(bl.a, bracket.upper, tol) && at_most<S>(bracket.upper, bl.b, tol), tag("a <= modulus <= b", t));
    }
  });
  return c.take();
}

SuiteResult constructions_suite(const VerifyConfig& config) {
  Checker c("constructions", config.seed);
  const bool exact = config.mode == ArithmeticMode::exact;
  const double tol = config.tolerance;

  c.guarded("svc", [&] {
    for (int k = 1; k <= 6; ++k) {
      auto w = svc_witness(k);
      c.check(witness_row(w, exact, tol).matches, tag("svc closed forms", static_cast<std::size_t>(k)));
      c.check(check_support_preservation(w.map, w.mu).equality_holds, "svc support equality");
      auto f = cantor_map(svc_stage(k));
      c.check(std::is_sorted(f.begin(), f.end()) && std::adjacent_find(f.begin(), f.end()) == f.end(),
              "svc map strictly increasing");
      Rational image = f.back();
      for (const auto& [x, y] : svc_stage(k).removed) image -= y - x;
      c.check(image == 1 / pow_rational(Rational(2), static_cast<unsigned long>(k + 1)), "lambda(f(C_k))");
    }
  });

  c.guarded("discrete", [&] {
    for (auto variant : {DiscreteVariant::unbounded, DiscreteVariant::bounded}) {
      for (int k = 1; k <= 3; ++k) {
        auto w = discrete_witness(variant, k);
        c.check(witness_row(w, exact, tol).matches, "discrete closed forms (" + to_string(variant) + ")");
        c.check(w.image.terms() == svc_witness(k).image.terms(), "discrete image is the svc image");
        c.check(check_support_preservation(w.map, w.mu).equality_holds, "discrete support equality");
      }
    }
  });

  c.guarded("snowflake", [&] {
    double previous = 1;
    for (int n = 1; n <= 3; ++n) {
      auto w = snowflake_witness(make_rational(1, 2), n);
      auto row = witness_row(w, tol);
      c.check(row.matches, tag("snowflake closed forms", static_cast<std::size_t>(n)));
      c.check(row.ratio < previous, "snowflake ratio decreasing");
      previous = row.ratio;
    }
  });

  c.guarded("rtree and xsquared", [&] {
    auto ex = rtree_example(10);
    bool identities = true;
    for (std::size_t i = 0; i < ex.branch_molecules.size(); ++i)
      identities = identities && pushforward(ex.instance.map, ex.branch_molecules[i]) == ex.expected_images[i];
    c.check(identities, "rtree branch identities");
    c.check(kernel_basis(linearize(ex.instance.map)).rank == ex.instance.codomain->size() - 2, "rtree rank");
    c.check(norm_line(ex.missed).value == ex.missed_norm, "rtree missed direction");
    for (int n : {5, 20}) {
      auto w = xsquared_grid(n);
      auto bl = bilip_constants(w.map);
      c.check(bl.a == make_rational(1, n) && bl.b == make_rational(2 * n - 1, n), "xsquared bilip constants");
      c.check(kernel_basis(linearize(w.map)).injective, "xsquared injective");
    }
  });

  c.guarded("width guard", [&] {
    bool thrown = false;
    try {
      geometric_cantor(make_rational(2, 5), 4);
    } catch (const Error& e) {
      thrown = e.code() == ErrorCode::width_overflow;
    }
    c.check(thrown, "widths past 1 rejected");
  });
  return c.take();
}

template <Scalar S>
bool same_space(const MetricSpace<S>& a, const MetricSpace<S>& b) {
  if (a.labels() != b.labels() || a.base() != b.base()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      if (a.distance(i, j) != b.distance(i, j)) return false;
  return true;
}

SuiteResult roundtrip_suite(const VerifyConfig& config) {
  Checker c("roundtrip", config.seed);
  c.guarded("svc artifacts", [&] {
    for (const auto& w : {svc_witness(3), discrete_witness(DiscreteVariant::bounded, 2), xsquared_grid(6)}) {
      auto domain = validate_space(parse_raw_space<Rational>(json::parse(space_json(*w.domain).dump())));
      auto codomain = validate_space(parse_raw_space<Rational>(json::parse(space_json(*w.codomain).dump())));
      c.check(same_space(*domain, *w.domain) && same_space(*codomain, *w.codomain), w.family + " spaces");
      auto mu = parse_molecule<Rational>(json::parse(molecule_json(w.mu).dump()), domain);
      c.check(norm(mu) == norm(w.mu), w.family + " molecule norm");
      auto map = parse_map<Rational>(json::parse(map_json(w.map).dump()), domain, codomain);
      c.check(map.assignment() == w.map.assignment(), w.family + " map");
      c.check(norm(pushforward(map, mu)) == w.expected_image, w.family + " image norm");
    }
  });
  c.guarded("floating spaces", [&] {
    auto m = random_space<double>(config.seed, 20, RandomGenerator::euclidean2d);
    auto back = validate_space(parse_raw_space<double>(json::parse(space_json(*m).dump())));
    c.check(same_space(*back, *m), "binary64 distances survive JSON");
  });
  return c.take();
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"metric", "norm", "lip", "operators", "constructions", "roundtrip"};
  return names;
}

SuiteResult run_suite(const std::string& name, const VerifyConfig& config) {
  const bool exact = config.mode == ArithmeticMode::exact;
  if (name == "metric") return metric_suite(config);
  if (name == "norm") return exact ? norm_suite<Rational>(config) : norm_suite<double>(config);
  if (name == "lip") return lip_suite(config);
  if (name == "operators") return exact ? operators_suite<Rational>(config) : operators_suite<double>(config);
  if (name == "constructions") return constructions_suite(config);
  if (name == "roundtrip") return roundtrip_suite(config);
  throw InputError("unknown suite '" + name + "'");
}

SuiteResult check_space_fixture(const json& doc) {
  SuiteResult result{"fixture.triangle", 1, {}};
  try {
    validate_space(parse_raw_space<Rational>(doc));
  } catch (const Error& e) {
    std::string who;
    for (const auto& w : e.witness()) who += (who.empty() ? "" : ",") + w;
    result.failures.push_back(std::string(e.what()) + (who.empty() ? "" : " [" + who + "]"));
  }
  return result;
}

SuiteResult check_map_fixture(const json& doc) {
  SuiteResult result{"fixture.injectivity", 0, {}};
  auto domain = validate_space(parse_raw_space<Rational>(doc.at("domain")));
  auto codomain = validate_space(parse_raw_space<Rational>(doc.at("codomain")));
  auto f = parse_map<Rational>(doc.at("map"), domain, codomain);
  const auto& claims = doc.contains("claims") ? doc.at("claims") : json::object();
  if (claims.contains("injective")) {
    const bool claimed = claims.at("injective").get<bool>();
    const auto kernel = kernel_basis(linearize(f));
    result.checks += 2;
    if (kernel.injective != claimed) {
      result.failures.push_back("claimed injective=" + std::string(claimed ? "true" : "false") + " but rank(f^) = " +
                                std::to_string(kernel.rank) + " of " + std::to_string(domain->size() - 1));
    }
    if (auto hit = f.collision(); hit && claimed) {
      result.failures.push_back("f(" + domain->label(hit->first) + ") = f(" + domain->label(hit->second) + ") = " +
                                codomain->label(f(hit->first)));
    }
  }
  return result;
}

json fault_fixture(const std::string& fault) {
  if (fault == "triangle") {
    return json{{"name", "bad-triangle"},
                {"base", "c"},
                {"points", {"a", "b", "c"}},
                {"matrix", {{"0", "5", "1"}, {"5", "0", "1"}, {"1", "1", "0"}}}};
  }
  if (fault == "collapse") {
    json m{{"name", "M3"}, {"base", "0"}, {"points", {"0", "a", "b"}},
           {"matrix", {{"0", "1", "1"}, {"1", "0", "2"}, {"1", "2", "0"}}}};
    // Two-element rows would read as key/value pairs, hence the explicit arrays.
    json n{{"name", "N2"},
           {"base", "0"},
           {"points", {"0", "p"}},
           {"matrix", json::array({json::array({"0", "1"}), json::array({"1", "0"})})}};
    json f{{"domain", "M3"}, {"codomain", "N2"}, {"assignment", {{"0", "0"}, {"a", "p"}, {"b", "p"}}}};
    return json{{"domain", m}, {"codomain", n}, {"map", f}, {"claims", {{"injective", true}}}};
  }
  throw InputError("unknown fault '" + fault + "' (triangle | collapse)");
}

json verify_report(const VerifyConfig& config, const std::vector<SuiteResult>& results) {
  json suites = json::array();
  bool all = true;
  for (const auto& r : results) {
    suites.push_back({{"name", r.name}, {"checks", r.checks}, {"passed", r.passed()}, {"failures", r.failures}});
    all = all && r.passed();
  }
  return json{{"seed", config.seed},
              {"mode", to_string(config.mode)},
              {"tolerance", config.tolerance},
              {"passed", all},
              {"suites", suites}};
}

}  // namespace lipfree::cli
