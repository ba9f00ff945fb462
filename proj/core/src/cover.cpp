#include "lipfree/cover.hpp"

#include <algorithm>
#include <numeric>

namespace lipfree {

std::string to_string(CoverVariant variant) {
  return variant == CoverVariant::balls ? "b" : "b'";
}

std::string to_string(CoverVerdict verdict) {
  switch (verdict) {
    case CoverVerdict::satisfied: return "satisfied";
    case CoverVerdict::refuted: return "refuted";
    case CoverVerdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<std::size_t> parent_;
};

template <Scalar S>
struct LocalMetric {
  std::size_t n;
  std::vector<S> d;
  explicit LocalMetric(const MetricSpace<S>& space) : n(space.size()), d(n * n) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) d[i * n + j] = space.distance(i, j);
    }
  }
  const S& operator()(std::size_t i, std::size_t j) const { return d[i * n + j]; }
};

// Components of the graph joining every pair that lies in a common ball
// B(z, reach). Returns the blocks in order of their smallest member.
template <Scalar S>
std::vector<std::vector<std::size_t>> shared_reach_components(const LocalMetric<S>& m, const S& reach) {
  DisjointSets sets(m.n);
  for (std::size_t z = 0; z < m.n; ++z) {
    for (std::size_t a = 0; a < m.n; ++a) {
      if (m(z, a) <= reach) sets.unite(z, a);
    }
  }
  std::vector<std::vector<std::size_t>> blocks;
  std::vector<std::size_t> slot(m.n, m.n);
  for (std::size_t i = 0; i < m.n; ++i) {
    const std::size_t root = sets.find(i);
    if (slot[root] == m.n) {
      slot[root] = blocks.size();
      blocks.emplace_back();
    }
    blocks[slot[root]].push_back(i);
  }
  return blocks;
}

template <Scalar S>
S block_diameter(const LocalMetric<S>& m, const std::vector<std::size_t>& block) {
  S best = ScalarTraits<S>::zero();
  for (std::size_t a = 0; a < block.size(); ++a) {
    for (std::size_t b = a + 1; b < block.size(); ++b) {
      if (best < m(block[a], block[b])) best = m(block[a], block[b]);
    }
  }
  return best;
}

// Balls B(c, r) cover everything and no point is within rho r of two centers.
template <Scalar S>
bool balls_admissible(const LocalMetric<S>& m, const std::vector<std::size_t>& centers, const S& r, const S& reach) {
  for (std::size_t z = 0; z < m.n; ++z) {
    bool covered = false;
    int near = 0;
    for (auto c : centers) {
      if (m(z, c) <= r) covered = true;
      if (m(z, c) <= reach) ++near;
    }
    if (!covered || near > 1) return false;
  }
  return true;
}

template <Scalar S>
std::vector<std::vector<std::size_t>> ball_members(const LocalMetric<S>& m, const std::vector<std::size_t>& centers,
                                                   const S& r) {
  std::vector<std::vector<std::size_t>> blocks;
  for (auto c : centers) {
    std::vector<std::size_t> members;
    for (std::size_t z = 0; z < m.n; ++z) {
      if (m(z, c) <= r) members.push_back(z);
    }
    blocks.push_back(std::move(members));
  }
  return blocks;
}

// Radii at which the combinatorics of either variant can change, clipped to
// [lo, hi] and sorted in decreasing order.
template <Scalar S>
std::vector<S> candidate_radii(const LocalMetric<S>& m, const S& lo, const S& hi, const S& rho) {
  std::vector<S> out{lo, hi};
  for (std::size_t i = 0; i < m.n; ++i) {
    for (std::size_t j = i + 1; j < m.n; ++j) {
      out.push_back(m(i, j));
      out.push_back(m(i, j) / rho);
    }
  }
  std::erase_if(out, [&](const S& r) { return r < lo || hi < r; });
  std::sort(out.begin(), out.end(), [](const S& a, const S& b) { return b < a; });
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

template <Scalar S>
CoverReport<S> check_cover_condition(const MetricSpace<S>& space, const S& eps, const S& rho, CoverVariant variant,
                                     const S& min_radius, std::size_t exhaustive_limit) {
  if (ScalarTraits<S>::sign(eps) <= 0 || ScalarTraits<S>::sign(rho) <= 0) {
    throw Error(ErrorCode::invalid_argument, "eps and rho must be positive");
  }
  CoverReport<S> report;
  if (eps < min_radius) {
    report.verdict = CoverVerdict::refuted;
    report.detail = "resolution exceeds eps";
    return report;
  }
  const LocalMetric<S> m(space);
  if (m.n <= 1) {
    report.verdict = CoverVerdict::satisfied;
    report.radius = min_radius;
    if (m.n == 1) {
      report.blocks = {{0}};
      if (variant == CoverVariant::balls) report.centers = {0};
    }
    report.detail = "vacuous";
    return report;
  }
  const auto radii = candidate_radii(m, min_radius, eps, rho);

  if (variant == CoverVariant::closed_sets) {
    for (const auto& r : radii) {
      auto blocks = shared_reach_components(m, S(rho * r));
      const bool fits = std::all_of(blocks.begin(), blocks.end(),
                                    [&](const auto& b) { return block_diameter(m, b) <= r; });
      if (fits) {
        report.verdict = CoverVerdict::satisfied;
        report.radius = r;
        report.blocks = std::move(blocks);
        return report;
      }
    }
    report.verdict = CoverVerdict::refuted;
    report.detail = "every admissible radius merges points beyond diameter r";
    return report;
  }

  report.exhaustive = m.n <= exhaustive_limit;
  for (const auto& r : radii) {
    const S reach = rho * r;
    if (report.exhaustive) {
      const std::size_t limit = std::size_t{1} << m.n;
      for (std::size_t mask = 1; mask < limit; ++mask) {
        std::vector<std::size_t> centers;
        for (std::size_t i = 0; i < m.n; ++i) {
          if (mask & (std::size_t{1} << i)) centers.push_back(i);
        }
        if (balls_admissible(m, centers, r, reach)) {
          report.verdict = CoverVerdict::satisfied;
          report.radius = r;
          report.blocks = ball_members(m, centers, r);
          report.centers = std::move(centers);
          return report;
        }
      }
    } else {
      // Greedy: sweep points by distance from the base, opening a center at
      // each point not yet covered.
      std::vector<std::size_t> order(m.n);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(),
                       [&](auto a, auto b) { return m(space.base(), a) < m(space.base(), b); });
      std::vector<std::size_t> centers;
      for (auto z : order) {
        const bool covered = std::any_of(centers.begin(), centers.end(), [&](auto c) { return m(z, c) <= r; });
        if (!covered) centers.push_back(z);
      }
      if (balls_admissible(m, centers, r, reach)) {
        report.verdict = CoverVerdict::satisfied;
        report.radius = r;
        report.blocks = ball_members(m, centers, r);
        report.centers = std::move(centers);
        return report;
      }
    }
  }
  report.verdict = report.exhaustive ? CoverVerdict::refuted : CoverVerdict::inconclusive;
  report.detail = report.exhaustive ? "no center set admits a disjoint enlargement"
                                    : "greedy search found no cover; not a proof of failure";
  return report;
}

template <Scalar S>
bool verify_cover(const MetricSpace<S>& space, const std::vector<std::vector<std::size_t>>& blocks, const S& rho,
                  CoverVariant variant, const std::vector<std::size_t>& centers, const S& radius) {
  const LocalMetric<S> m(space);
  std::vector<int> hits(m.n, 0);
  for (const auto& b : blocks) {
    for (auto z : b) {
      if (z >= m.n) return false;
      ++hits[z];
    }
  }
  if (variant == CoverVariant::closed_sets) {
    if (std::any_of(hits.begin(), hits.end(), [](int h) { return h != 1; })) return false;
    S r = ScalarTraits<S>::zero();
    for (const auto& b : blocks) {
      S diam = block_diameter(m, b);
      if (r < diam) r = diam;
    }
    const S reach = rho * r;
    for (std::size_t z = 0; z < m.n; ++z) {
      int near = 0;
      for (const auto& b : blocks) {
        if (std::any_of(b.begin(), b.end(), [&](auto a) { return m(z, a) <= reach; })) ++near;
      }
      if (near > 1) return false;
    }
    return true;
  }
  if (centers.size() != blocks.size()) return false;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    for (auto z : blocks[i]) {
      if (radius < m(z, centers[i])) return false;
    }
  }
  return balls_admissible(m, centers, radius, S(rho * radius));
}

#define LIPFREE_INSTANTIATE(S)                                                                               \
  template CoverReport<S> check_cover_condition<S>(const MetricSpace<S>&, const S&, const S&, CoverVariant,  \
                                                   const S&, std::size_t);                                   \
  template bool verify_cover<S>(const MetricSpace<S>&, const std::vector<std::vector<std::size_t>>&, const S&, \
                                CoverVariant, const std::vector<std::size_t>&, const S&);

LIPFREE_INSTANTIATE(Rational)
LIPFREE_INSTANTIATE(double)

#undef LIPFREE_INSTANTIATE

}  // namespace lipfree
