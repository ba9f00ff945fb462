#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "lipfree/error.hpp"
#include "lipfree/rational.hpp"

namespace lipfree {

/// Unvalidated input: a labeled square matrix and a base label.
template <Scalar S>
struct RawSpace {
  std::string name;
  std::string base;
  std::vector<std::string> labels;
  std::vector<std::vector<S>> matrix;
};

enum class ProductNorm { l1, linf };

template <Scalar S>
class MetricSpace;

template <Scalar S>
using SpacePtr = std::shared_ptr<const MetricSpace<S>>;

/// A finite pointed metric space. Immutable once built; the only ways to
/// obtain one are the validating factories below, so every instance
/// satisfies the metric axioms (exactly, or within 1e-12 in floating mode).
///
/// Distances are stored densely, as positions on the real line, or as an
/// l1/linf product of two factor spaces. The latter two keep large
/// structured spaces (grids, Cantor dust) cheap.
template <Scalar S>
class MetricSpace {
 public:
  using scalar_type = S;

  struct Dense {
    std::vector<S> dist;  // row-major n*n
  };
  struct Line {
    std::vector<S> positions;
  };
  struct Product {
    SpacePtr<S> first;
    SpacePtr<S> second;
    ProductNorm norm;
  };
  /// Every pair at distance `spread` except matched partners.
  struct Matched {
    S spread;
    std::vector<std::size_t> partner;  // partner[i] == i when unmatched
    std::vector<S> partner_distance;
  };

  std::size_t size() const { return labels_.size(); }
  const std::string& name() const { return name_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t i) const { return labels_.at(i); }
  std::size_t base() const { return base_; }
  const std::string& base_label() const { return labels_[base_]; }

  std::optional<std::size_t> find(std::string_view label) const;
  /// Throws Error(unknown_label).
  std::size_t index(std::string_view label) const;

  S distance(std::size_t i, std::size_t j) const;
  S operator()(std::size_t i, std::size_t j) const { return distance(i, j); }

  bool is_line() const { return std::holds_alternative<Line>(storage_); }
  /// Line coordinates when the space was built from positions.
  const std::vector<S>* positions() const;
  const std::variant<Dense, Line, Product, Matched>& storage() const { return storage_; }

  /// Closed ball B(center, radius) as sorted indices.
  std::vector<std::size_t> ball(std::size_t center, const S& radius) const;

  S diameter() const;
  /// Dense copy of the distance matrix (for serialization and re-validation).
  RawSpace<S> to_raw() const;

  /// Builds a space without re-checking axioms. Used by the factories after
  /// they have established validity by construction or by scan.
  static SpacePtr<S> make(std::string name, std::vector<std::string> labels, std::size_t base,
                          std::variant<Dense, Line, Product, Matched> storage);

 private:
  MetricSpace() = default;

  std::string name_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t base_ = 0;
  std::variant<Dense, Line, Product, Matched> storage_;
};

/// Checks square shape, distinct labels, known base, then the metric axioms
/// in the order symmetry, zero diagonal, positivity, triangle inequality.
/// The first violation is thrown as an Error whose witness names the labels
/// involved; TriangleViolation(i,j,k) means d(i,j) > d(i,k) + d(k,j).
template <Scalar S>
SpacePtr<S> validate_space(const RawSpace<S>& raw);

/// Floating-mode triangle slack.
inline constexpr double kTriangleSlack = 1e-12;

/// Subset of the real line with |x - y| distances. Positions must be
/// distinct; the base is the label at `base`.
template <Scalar S>
SpacePtr<S> make_line_space(std::string name, std::vector<std::string> labels,
                            std::vector<S> positions, std::size_t base);

/// Uniform space with some matched pairs closer together. Each partner
/// distance must lie in (0, 2 spread] so the triangle inequality holds.
template <Scalar S>
SpacePtr<S> make_matched_space(std::string name, std::vector<std::string> labels, std::size_t base, S spread,
                               const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                               const std::vector<S>& pair_distances);

/// d -> d^alpha for 0 < alpha <= 1. Exact mode requires every distance to
/// have a rational alpha-th power (Error inexact_power otherwise).
template <Scalar S>
SpacePtr<S> snowflake(const SpacePtr<S>& space, const Rational& alpha);

/// rho(x, y) = min(1, d(x, y)).
template <Scalar S>
SpacePtr<S> truncate_metric(const SpacePtr<S>& space);

/// Pairs (a, b) with base (base1, base2) and l1 or linf combination.
template <Scalar S>
SpacePtr<S> product_space(const SpacePtr<S>& first, const SpacePtr<S>& second, ProductNorm norm);

/// Lebesgue measure of the union over y != x of [d(x,y) - eps, d(x,y) + eps]
/// intersected with [0, inf), by sorting and sweeping the intervals.
template <Scalar S>
S distance_set_measure(const MetricSpace<S>& space, std::size_t x, const S& eps);

enum class RandomGenerator { euclidean2d, shortestpath, line };

RandomGenerator parse_generator(std::string_view text);

/// Deterministic in `seed`. euclidean2d is floating-only; shortestpath
/// closes a random symmetric matrix under all-pairs shortest paths; line
/// samples distinct grid positions with the base at 0.
template <Scalar S>
SpacePtr<S> random_space(std::uint64_t seed, std::size_t n, RandomGenerator generator);

/// Floyd-Warshall closure of a symmetric nonnegative matrix.
template <Scalar S>
std::vector<std::vector<S>> shortest_path_closure(std::vector<std::vector<S>> matrix);

SpacePtr<double> to_floating(const SpacePtr<Rational>& space);

/// Exact rational copy of a floating space (each double is exactly
/// representable as a rational).
SpacePtr<Rational> to_exact(const SpacePtr<double>& space);

}  // namespace lipfree
