#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "lipfree/molecule.hpp"
#include "lipfree/point_map.hpp"
#include "lipfree/random.hpp"

namespace lipfree::cli {

template <Scalar S>
S grid_coefficient(Rng& rng) {
  std::int64_t k = 0;
  while (k == 0) k = rng.uniform_int(-12, 12);
  if constexpr (ScalarTraits<S>::is_exact) {
    return make_rational(k, 4);
  } else {
    return static_cast<double>(k) / 4.0;
  }
}

/// Molecule with up to `max_support` distinct non-base points and grid
/// coefficients k/4.
template <Scalar S>
Molecule<S> random_molecule(Rng& rng, const SpacePtr<S>& space, std::size_t max_support) {
  std::vector<typename Molecule<S>::Term> terms;
  const std::size_t want = 1 + rng.index(std::min(max_support, space->size() - 1));
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < space->size(); ++i) {
    if (i != space->base()) pool.push_back(i);
  }
  for (std::size_t t = 0; t < want; ++t) {
    const std::size_t pick = rng.index(pool.size() - t);
    std::swap(pool[pick], pool[pool.size() - 1 - t]);
    terms.emplace_back(pool[pool.size() - 1 - t], grid_coefficient<S>(rng));
  }
  return Molecule<S>::from_terms(space, std::move(terms));
}

/// Random base-preserving map; injective draws need |N| >= |M|.
template <Scalar S>
PointMap<S> random_map(Rng& rng, const SpacePtr<S>& domain, const SpacePtr<S>& codomain,
                                bool injective) {
  std::vector<std::size_t> table(domain->size());
  std::vector<std::size_t> pool;
  for (std::size_t y = 0; y < codomain->size(); ++y) {
    if (y != codomain->base()) pool.push_back(y);
  }
  for (std::size_t x = 0; x < domain->size(); ++x) {
    if (x == domain->base()) {
      table[x] = codomain->base();
    } else if (injective) {
      const std::size_t pick = rng.index(pool.size());
      table[x] = pool[pick];
      pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
    } else {
      table[x] = rng.index(codomain->size());
    }
  }
  return PointMap<S>(domain, codomain, std::move(table));
}

}  // namespace lipfree::cli
