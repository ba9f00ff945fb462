#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lipfree/metric_space.hpp"
#include "lipfree/molecule.hpp"
#include "lipfree/point_map.hpp"
#include "lipfree/random.hpp"
#include "lipfree/rational.hpp"
#include "lipfree_cli/generators.hpp"

namespace testing {

using lipfree::Rational;
using lipfree::SpacePtr;

inline Rational Q(const char* text) { return lipfree::parse_rational(text); }

inline SpacePtr<Rational> dense_space(std::string name, std::vector<std::string> labels, std::string base,
                                      const std::vector<std::vector<const char*>>& rows) {
  lipfree::RawSpace<Rational> raw{std::move(name), std::move(base), std::move(labels), {}};
  for (const auto& row : rows) {
    std::vector<Rational> values;
    for (const char* v : row) values.push_back(Q(v));
    raw.matrix.push_back(std::move(values));
  }
  return lipfree::validate_space(raw);
}

// 0 -- a, 0 -- b at distance 1, a -- b at distance 2.
inline SpacePtr<Rational> path3() {
  return dense_space("path3", {"0", "a", "b"}, "0", {{"0", "1", "1"}, {"1", "0", "2"}, {"1", "2", "0"}});
}

using lipfree::cli::grid_coefficient;
using lipfree::cli::random_map;
using lipfree::cli::random_molecule;

/// Independent norm oracle: every vertex of the polytope of 1-Lipschitz
/// potentials on supp(mu) + base has a spanning tree of tight pairs, so
/// enumerating trees (Pruefer codes) and edge signs finds the optimum.
/// Exponential; meant for at most 6 points.
inline Rational vertex_oracle_norm(const lipfree::Molecule<Rational>& mu) {
  const auto& space = *mu.space();
  std::vector<std::size_t> pts{space.base()};
  std::vector<Rational> coeff{Rational(0)};
  for (const auto& [p, a] : mu.terms()) {
    pts.push_back(p);
    coeff.push_back(a);
  }
  const std::size_t k = pts.size();
  if (k == 1) return Rational(0);
  auto d = [&](std::size_t i, std::size_t j) { return space.distance(pts[i], pts[j]); };

  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> trees;
  if (k == 2) {
    trees.push_back({{0, 1}});
  } else {
    std::vector<std::size_t> code(k - 2, 0);
    while (true) {
      std::vector<std::size_t> degree(k, 1);
      for (auto c : code) ++degree[c];
      std::vector<std::pair<std::size_t, std::size_t>> edges;
      for (auto c : code) {
        for (std::size_t leaf = 0; leaf < k; ++leaf) {
          if (degree[leaf] == 1) {
            edges.emplace_back(leaf, c);
            --degree[leaf];
            --degree[c];
            break;
          }
        }
      }
      std::vector<std::size_t> last;
      for (std::size_t v = 0; v < k; ++v) {
        if (degree[v] == 1) last.push_back(v);
      }
      edges.emplace_back(last[0], last[1]);
      trees.push_back(std::move(edges));
      std::size_t pos = 0;
      while (pos < code.size() && ++code[pos] == k) code[pos++] = 0;
      if (pos == code.size()) break;
    }
  }

  bool have = false;
  Rational best;
  for (const auto& edges : trees) {
    for (std::size_t signs = 0; signs < (std::size_t{1} << edges.size()); ++signs) {
      std::vector<Rational> f(k);
      std::vector<char> known(k, 0);
      known[0] = 1;
      for (std::size_t pass = 0; pass < k; ++pass) {
        for (std::size_t e = 0; e < edges.size(); ++e) {
          const auto [u, v] = edges[e];
          const Rational step = ((signs >> e) & 1) ? d(u, v) : Rational(-d(u, v));
          if (known[u] && !known[v]) {
            f[v] = f[u] + step;
            known[v] = 1;
          } else if (known[v] && !known[u]) {
            f[u] = f[v] - step;
            known[u] = 1;
          }
        }
      }
      bool feasible = true;
      for (std::size_t i = 0; i < k && feasible; ++i) {
        for (std::size_t j = i + 1; j < k && feasible; ++j) feasible = abs(f[i] - f[j]) <= d(i, j);
      }
      if (!feasible) continue;
      Rational value(0);
      for (std::size_t i = 0; i < k; ++i) value += coeff[i] * f[i];
      if (!have || best < value) best = value;
      have = true;
    }
  }
  return best;
}

}  // namespace testing
