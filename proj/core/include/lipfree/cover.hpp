#pragma once

#include <string>
#include <vector>

#include "lipfree/metric_space.hpp"

namespace lipfree {

/// balls: a cover by closed balls B(x_i, r) whose enlargements B(x_i, rho r)
/// are pairwise disjoint. closed_sets: a partition into sets of diameter
/// <= r whose rho r-neighbourhoods are pairwise disjoint.
enum class CoverVariant { balls, closed_sets };

enum class CoverVerdict { satisfied, refuted, inconclusive };

std::string to_string(CoverVariant variant);
std::string to_string(CoverVerdict verdict);

template <Scalar S>
struct CoverReport {
  CoverVerdict verdict = CoverVerdict::refuted;
  S radius{};
  std::vector<std::size_t> centers;             // balls variant only
  std::vector<std::vector<std::size_t>> blocks;  // members of each ball / set
  bool exhaustive = true;
  std::string detail;
};

/// Decides whether some radius r with min_radius <= r <= eps admits a cover
/// of the requested kind. A zero min_radius admits the singleton cover as
/// r -> 0+, so finite spaces then always pass; a positive resolution makes
/// the question non-trivial.
///
/// closed_sets is decided exactly at every size: blocks must be unions of
/// the components of the "shares a point within rho r" graph, so the finest
/// admissible partition is that graph's components. balls is exhaustive
/// over center subsets up to `exhaustive_limit` points and greedy beyond,
/// where a negative answer is reported as inconclusive.
template <Scalar S>
CoverReport<S> check_cover_condition(const MetricSpace<S>& space, const S& eps, const S& rho, CoverVariant variant,
                                     const S& min_radius = S(0), std::size_t exhaustive_limit = 12);

/// Checks a supplied cover: blocks partition the space, every block fits
/// (diameter <= r, or inside B(center, r)), and the rho r-enlargements are
/// pairwise disjoint. For closed_sets, r is the largest block diameter.
template <Scalar S>
bool verify_cover(const MetricSpace<S>& space, const std::vector<std::vector<std::size_t>>& blocks, const S& rho,
                  CoverVariant variant, const std::vector<std::size_t>& centers = {}, const S& radius = S(0));

}  // namespace lipfree
