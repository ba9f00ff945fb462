#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lipfree/lip_function.hpp"
#include "lipfree/metric_space.hpp"

namespace lipfree {

/// Base-preserving map between two finite pointed spaces, stored as an index
/// table domain -> codomain.
template <Scalar S>
class PointMap {
 public:
  /// Throws Error(base_not_preserved) unless base -> base, and
  /// Error(invalid_argument) on a wrong table size or an index out of range.
  PointMap(SpacePtr<S> domain, SpacePtr<S> codomain, std::vector<std::size_t> assignment);

  /// Every domain label must appear exactly once.
  static PointMap from_labels(SpacePtr<S> domain, SpacePtr<S> codomain,
                              const std::vector<std::pair<std::string, std::string>>& assignment);
  static PointMap identity(SpacePtr<S> space);
  /// x -> the codomain point with the same label (e.g. a snowflake onto its
  /// original metric).
  static PointMap same_labels(SpacePtr<S> domain, SpacePtr<S> codomain);

  const SpacePtr<S>& domain() const { return domain_; }
  const SpacePtr<S>& codomain() const { return codomain_; }
  const std::vector<std::size_t>& assignment() const { return assignment_; }
  std::size_t operator()(std::size_t x) const { return assignment_[x]; }

  /// Some pair x != y with f(x) == f(y), if any.
  std::optional<std::pair<std::size_t, std::size_t>> collision() const;
  bool is_injective() const { return !collision().has_value(); }
  /// f(M), sorted.
  std::vector<std::size_t> image() const;

 private:
  SpacePtr<S> domain_;
  SpacePtr<S> codomain_;
  std::vector<std::size_t> assignment_;
};

/// g o f. Throws Error(not_composable) unless f's codomain is g's domain.
template <Scalar S>
PointMap<S> compose(const PointMap<S>& g, const PointMap<S>& f);

/// max over pairs of d_N(f(x), f(y)) / d_M(x, y), with the maximizing pair.
template <Scalar S>
LipConstant<S> lip_constant(const PointMap<S>& f);

}  // namespace lipfree
