#include "lipfree/metric_space.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_set>

#include "lipfree/random.hpp"

namespace lipfree {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::not_square: return "NotSquare";
    case ErrorCode::duplicate_label: return "DuplicateLabel";
    case ErrorCode::not_symmetric: return "NotSymmetric";
    case ErrorCode::nonzero_diagonal: return "NonzeroDiagonal";
    case ErrorCode::negative_or_zero_off_diagonal: return "NegativeOrZeroOffDiagonal";
    case ErrorCode::triangle_violation: return "TriangleViolation";
    case ErrorCode::unknown_base: return "UnknownBase";
    case ErrorCode::alpha_out_of_range: return "AlphaOutOfRange";
    case ErrorCode::inexact_power: return "InexactPower";
    case ErrorCode::unknown_label: return "UnknownLabel";
    case ErrorCode::equal_points: return "EqualPoints";
    case ErrorCode::space_mismatch: return "SpaceMismatch";
    case ErrorCode::solver_failure: return "SolverFailure";
    case ErrorCode::not_a_line_space: return "NotALineSpace";
    case ErrorCode::partial_constant_exceeds_l: return "PartialConstantExceedsL";
    case ErrorCode::not_monotone: return "NotMonotone";
    case ErrorCode::moduli_hypothesis_violated: return "ModuliHypothesisViolated";
    case ErrorCode::overlapping_intervals: return "OverlappingIntervals";
    case ErrorCode::base_not_preserved: return "BaseNotPreserved";
    case ErrorCode::not_composable: return "NotComposable";
    case ErrorCode::dimension_too_large_for_exact: return "DimensionTooLargeForExact";
    case ErrorCode::stage_too_large: return "StageTooLarge";
    case ErrorCode::width_overflow: return "WidthOverflow";
    case ErrorCode::invalid_argument: return "InvalidArgument";
  }
  return "Unknown";
}

template <Scalar S>
SpacePtr<S> MetricSpace<S>::make(std::string name, std::vector<std::string> labels, std::size_t base,
                                 std::variant<Dense, Line, Product, Matched> storage) {
  auto space = std::shared_ptr<MetricSpace<S>>(new MetricSpace<S>());
  space->name_ = std::move(name);
  space->labels_ = std::move(labels);
  space->base_ = base;
  space->storage_ = std::move(storage);
  space->index_.reserve(space->labels_.size());
  for (std::size_t i = 0; i < space->labels_.size(); ++i) {
    if (!space->index_.emplace(space->labels_[i], i).second) {
      throw Error(ErrorCode::duplicate_label, "label '" + space->labels_[i] + "' repeated",
                  {space->labels_[i]});
    }
  }
  if (base >= space->labels_.size()) throw Error(ErrorCode::unknown_base, "base index out of range");
  return space;
}

template <Scalar S>
std::optional<std::size_t> MetricSpace<S>::find(std::string_view label) const {
  const auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

template <Scalar S>
std::size_t MetricSpace<S>::index(std::string_view label) const {
  if (auto i = find(label)) return *i;
  throw Error(ErrorCode::unknown_label, "no point '" + std::string(label) + "' in space '" + name_ + "'",
              {std::string(label)});
}

template <Scalar S>
S MetricSpace<S>::distance(std::size_t i, std::size_t j) const {
  if (const auto* dense = std::get_if<Dense>(&storage_)) return dense->dist[i * size() + j];
  if (const auto* line = std::get_if<Line>(&storage_)) {
    S diff = line->positions[i] - line->positions[j];
    return ScalarTraits<S>::abs(diff);
  }
  if (const auto* matched = std::get_if<Matched>(&storage_)) {
    if (i == j) return ScalarTraits<S>::zero();
    if (matched->partner[i] == j) return matched->partner_distance[i];
    return matched->spread;
  }
  const auto& product = std::get<Product>(storage_);
  const std::size_t n2 = product.second->size();
  S a = product.first->distance(i / n2, j / n2);
  S b = product.second->distance(i % n2, j % n2);
  if (product.norm == ProductNorm::l1) return a + b;
  return a < b ? b : a;
}

template <Scalar S>
const std::vector<S>* MetricSpace<S>::positions() const {
  if (const auto* line = std::get_if<Line>(&storage_)) return &line->positions;
  return nullptr;
}

template <Scalar S>
std::vector<std::size_t> MetricSpace<S>::ball(std::size_t center, const S& radius) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < size(); ++i) {
    if (distance(center, i) <= radius) out.push_back(i);
  }
  return out;
}

template <Scalar S>
S MetricSpace<S>::diameter() const {
  S best = ScalarTraits<S>::zero();
  if (const auto* line = std::get_if<Line>(&storage_)) {
    if (line->positions.empty()) return best;
    auto [lo, hi] = std::minmax_element(line->positions.begin(), line->positions.end());
    return *hi - *lo;
  }
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = i + 1; j < size(); ++j) {
      S d = distance(i, j);
      if (best < d) best = d;
    }
  }
  return best;
}

template <Scalar S>
RawSpace<S> MetricSpace<S>::to_raw() const {
  RawSpace<S> raw;
  raw.name = name_;
  raw.base = labels_[base_];
  raw.labels = labels_;
  raw.matrix.assign(size(), std::vector<S>(size(), ScalarTraits<S>::zero()));
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t j = 0; j < size(); ++j) raw.matrix[i][j] = distance(i, j);
  }
  return raw;
}

namespace {

template <Scalar S>
bool exceeds(const S& lhs, const S& rhs) {
  if constexpr (ScalarTraits<S>::is_exact) {
    return lhs > rhs;
  } else {
    return lhs > rhs + kTriangleSlack;
  }
}

}  // namespace

template <Scalar S>
SpacePtr<S> validate_space(const RawSpace<S>& raw) {
  const std::size_t n = raw.labels.size();
  if (raw.matrix.size() != n) {
    throw Error(ErrorCode::not_square, "matrix has " + std::to_string(raw.matrix.size()) + " rows for " +
                                           std::to_string(n) + " labels");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (raw.matrix[i].size() != n) {
      throw Error(ErrorCode::not_square, "row " + std::to_string(i) + " has " +
                                             std::to_string(raw.matrix[i].size()) + " entries",
                  {raw.labels[i]});
    }
  }
  std::unordered_set<std::string> seen;
  for (const auto& l : raw.labels) {
    if (!seen.insert(l).second) throw Error(ErrorCode::duplicate_label, "label '" + l + "' repeated", {l});
  }
  const auto base_it = std::find(raw.labels.begin(), raw.labels.end(), raw.base);
  if (base_it == raw.labels.end()) {
    throw Error(ErrorCode::unknown_base, "base '" + raw.base + "' is not a point label", {raw.base});
  }
  const auto& d = raw.matrix;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (d[i][j] != d[j][i]) {
        throw Error(ErrorCode::not_symmetric, "d(" + raw.labels[i] + "," + raw.labels[j] + ") != d(" +
                                                  raw.labels[j] + "," + raw.labels[i] + ")",
                    {raw.labels[i], raw.labels[j]});
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_zero(d[i][i])) {
      throw Error(ErrorCode::nonzero_diagonal, "d(" + raw.labels[i] + "," + raw.labels[i] + ") != 0",
                  {raw.labels[i]});
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (ScalarTraits<S>::sign(d[i][j]) <= 0) {
        throw Error(ErrorCode::negative_or_zero_off_diagonal,
                    "d(" + raw.labels[i] + "," + raw.labels[j] + ") must be positive",
                    {raw.labels[i], raw.labels[j]});
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        if (exceeds<S>(d[i][j], S(d[i][k] + d[k][j]))) {
          throw Error(ErrorCode::triangle_violation,
                      "d(" + raw.labels[i] + "," + raw.labels[j] + ") > d(" + raw.labels[i] + "," +
                          raw.labels[k] + ") + d(" + raw.labels[k] + "," + raw.labels[j] + ")",
                      {raw.labels[i], raw.labels[j], raw.labels[k]});
        }
      }
    }
  }
  typename MetricSpace<S>::Dense dense;
  dense.dist.reserve(n * n);
  for (const auto& row : d) dense.dist.insert(dense.dist.end(), row.begin(), row.end());
  return MetricSpace<S>::make(raw.name, raw.labels, static_cast<std::size_t>(base_it - raw.labels.begin()),
                              std::move(dense));
}

template <Scalar S>
SpacePtr<S> make_line_space(std::string name, std::vector<std::string> labels, std::vector<S> positions,
                            std::size_t base) {
  if (labels.size() != positions.size()) {
    throw Error(ErrorCode::not_square, "labels and positions differ in length");
  }
  if (base >= labels.size()) throw Error(ErrorCode::unknown_base, "base index out of range");
  std::vector<std::size_t> order(positions.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return positions[a] < positions[b]; });
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (positions[order[k]] == positions[order[k - 1]]) {
      throw Error(ErrorCode::negative_or_zero_off_diagonal, "two labels share a position",
                  {labels[order[k - 1]], labels[order[k]]});
    }
  }
  return MetricSpace<S>::make(std::move(name), std::move(labels), base,
                              typename MetricSpace<S>::Line{std::move(positions)});
}

template <Scalar S>
SpacePtr<S> snowflake(const SpacePtr<S>& space, const Rational& alpha) {
  if (sgn(alpha) <= 0 || alpha > 1) {
    throw Error(ErrorCode::alpha_out_of_range, "alpha must lie in (0,1], got " + format_rational(alpha));
  }
  if (alpha == 1) return space;
  const std::size_t n = space->size();
  typename MetricSpace<S>::Dense dense;
  dense.dist.assign(n * n, ScalarTraits<S>::zero());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      S value;
      if constexpr (ScalarTraits<S>::is_exact) {
        auto p = exact_power(space->distance(i, j), alpha);
        if (!p) {
          throw Error(ErrorCode::inexact_power,
                      "d(" + space->label(i) + "," + space->label(j) + ")^" + format_rational(alpha) +
                          " is irrational; use floating mode",
                      {space->label(i), space->label(j)});
        }
        value = *p;
      } else {
        value = std::pow(space->distance(i, j), alpha.get_d());
      }
      dense.dist[i * n + j] = value;
      dense.dist[j * n + i] = value;
    }
  }
  return MetricSpace<S>::make(space->name() + "^" + format_rational(alpha), space->labels(), space->base(),
                              std::move(dense));
}

template <Scalar S>
SpacePtr<S> truncate_metric(const SpacePtr<S>& space) {
  const std::size_t n = space->size();
  const S one = ScalarTraits<S>::one();
  typename MetricSpace<S>::Dense dense;
  dense.dist.assign(n * n, ScalarTraits<S>::zero());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      S d = space->distance(i, j);
      dense.dist[i * n + j] = d < one ? d : one;
    }
  }
  std::string name = space->name();
  if (name.rfind("min(1,", 0) != 0) name = "min(1," + name + ")";
  return MetricSpace<S>::make(std::move(name), space->labels(), space->base(), std::move(dense));
}

template <Scalar S>
SpacePtr<S> product_space(const SpacePtr<S>& first, const SpacePtr<S>& second, ProductNorm norm) {
  std::vector<std::string> labels;
  labels.reserve(first->size() * second->size());
  for (const auto& a : first->labels()) {
    for (const auto& b : second->labels()) labels.push_back("(" + a + "," + b + ")");
  }
  const std::size_t base = first->base() * second->size() + second->base();
  std::string name = first->name() + (norm == ProductNorm::l1 ? "x1" : "xinf") + second->name();
  return MetricSpace<S>::make(std::move(name), std::move(labels), base,
                              typename MetricSpace<S>::Product{first, second, norm});
}

template <Scalar S>
S distance_set_measure(const MetricSpace<S>& space, std::size_t x, const S& eps) {
  std::vector<S> values;
  values.reserve(space.size());
  for (std::size_t y = 0; y < space.size(); ++y) {
    if (y != x) values.push_back(space.distance(x, y));
  }
  std::sort(values.begin(), values.end());
  S total = ScalarTraits<S>::zero();
  const S zero = ScalarTraits<S>::zero();
  bool open = false;
  S lo = zero, hi = zero;
  for (const auto& v : values) {
    S a = v - eps;
    if (a < zero) a = zero;
    S b = v + eps;
    if (open && a <= hi) {
      if (hi < b) hi = b;
      continue;
    }
    if (open) total += hi - lo;
    lo = a;
    hi = b;
    open = true;
  }
  if (open) total += hi - lo;
  return total;
}

RandomGenerator parse_generator(std::string_view text) {
  if (text == "euclidean2d") return RandomGenerator::euclidean2d;
  if (text == "shortestpath") return RandomGenerator::shortestpath;
  if (text == "line") return RandomGenerator::line;
  throw Error(ErrorCode::invalid_argument, "unknown generator '" + std::string(text) + "'");
}

template <Scalar S>
std::vector<std::vector<S>> shortest_path_closure(std::vector<std::vector<S>> d) {
  const std::size_t n = d.size();
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        S via = d[i][k] + d[k][j];
        if (via < d[i][j]) d[i][j] = via;
      }
    }
  }
  return d;
}

namespace {

std::vector<std::string> numbered_labels(std::size_t n) {
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = "p" + std::to_string(i);
  return labels;
}

template <Scalar S>
S random_grid_value(Rng& rng, std::int64_t lo, std::int64_t hi, std::int64_t denominator) {
  const auto k = rng.uniform_int(lo, hi);
  if constexpr (ScalarTraits<S>::is_exact) {
    return make_rational(k, denominator);
  } else {
    return static_cast<double>(k) / static_cast<double>(denominator);
  }
}

}  // namespace

template <Scalar S>
SpacePtr<S> random_space(std::uint64_t seed, std::size_t n, RandomGenerator generator) {
  if (n < 2) throw Error(ErrorCode::invalid_argument, "random spaces need at least 2 points");
  Rng rng(seed);
  const std::string name = "random-" + std::to_string(seed) + "-" + std::to_string(n);
  switch (generator) {
    case RandomGenerator::euclidean2d: {
      if constexpr (ScalarTraits<S>::is_exact) {
        throw Error(ErrorCode::invalid_argument, "euclidean2d distances are irrational; use floating mode");
      } else {
        std::vector<std::pair<double, double>> pts(n);
        for (auto& p : pts) p = {rng.uniform01(), rng.uniform01()};
        RawSpace<double> raw{name, "p0", numbered_labels(n), {}};
        raw.matrix.assign(n, std::vector<double>(n, 0.0));
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = i + 1; j < n; ++j) {
            const double d = std::hypot(pts[i].first - pts[j].first, pts[i].second - pts[j].second);
            raw.matrix[i][j] = raw.matrix[j][i] = d;
          }
        }
        return validate_space(raw);
      }
    }
    case RandomGenerator::shortestpath: {
      RawSpace<S> raw{name, "p0", numbered_labels(n), {}};
      raw.matrix.assign(n, std::vector<S>(n, ScalarTraits<S>::zero()));
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          S v = random_grid_value<S>(rng, 1, 64, 8);
          raw.matrix[i][j] = v;
          raw.matrix[j][i] = v;
        }
      }
      raw.matrix = shortest_path_closure(std::move(raw.matrix));
      return validate_space(raw);
    }
    case RandomGenerator::line: {
      // Distinct positions on a 1/64 grid in [-4, 4]; base pinned at 0.
      if (n > 513) throw Error(ErrorCode::invalid_argument, "line generator has only 513 grid positions");
      std::vector<S> positions{ScalarTraits<S>::zero()};
      std::unordered_set<std::int64_t> used{0};
      while (positions.size() < n) {
        const auto k = rng.uniform_int(-256, 256);
        if (!used.insert(k).second) continue;
        if constexpr (ScalarTraits<S>::is_exact) {
          positions.emplace_back(make_rational(k, 64));
        } else {
          positions.push_back(static_cast<double>(k) / 64.0);
        }
      }
      return make_line_space<S>(name, numbered_labels(n), std::move(positions), 0);
    }
  }
  throw Error(ErrorCode::invalid_argument, "unknown generator");
}

template <Scalar S>
SpacePtr<S> make_matched_space(std::string name, std::vector<std::string> labels, std::size_t base, S spread,
                               const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                               const std::vector<S>& pair_distances) {
  const std::size_t n = labels.size();
  if (ScalarTraits<S>::sign(spread) <= 0) {
    throw Error(ErrorCode::negative_or_zero_off_diagonal, "spread must be positive");
  }
  if (pairs.size() != pair_distances.size()) throw Error(ErrorCode::invalid_argument, "one distance per pair");
  typename MetricSpace<S>::Matched storage{spread, std::vector<std::size_t>(n), std::vector<S>(n, spread)};
  std::iota(storage.partner.begin(), storage.partner.end(), std::size_t{0});
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto [a, b] = pairs[p];
    if (a >= n || b >= n || a == b || storage.partner[a] != a || storage.partner[b] != b) {
      throw Error(ErrorCode::invalid_argument, "pairs must be disjoint pairs of distinct points");
    }
    const S& d = pair_distances[p];
    if (ScalarTraits<S>::sign(d) <= 0) {
      throw Error(ErrorCode::negative_or_zero_off_diagonal, "pair distance must be positive", {labels[a], labels[b]});
    }
    if (S(spread + spread) < d) {
      throw Error(ErrorCode::triangle_violation, "pair distance exceeds twice the spread", {labels[a], labels[b]});
    }
    storage.partner[a] = b;
    storage.partner[b] = a;
    storage.partner_distance[a] = d;
    storage.partner_distance[b] = d;
  }
  return MetricSpace<S>::make(std::move(name), std::move(labels), base, std::move(storage));
}

SpacePtr<double> to_floating(const SpacePtr<Rational>& space) {
  const auto& storage = space->storage();
  if (const auto* line = std::get_if<MetricSpace<Rational>::Line>(&storage)) {
    std::vector<double> positions;
    positions.reserve(line->positions.size());
    for (const auto& p : line->positions) positions.push_back(p.get_d());
    return MetricSpace<double>::make(space->name(), space->labels(), space->base(),
                                     MetricSpace<double>::Line{std::move(positions)});
  }
  if (const auto* product = std::get_if<MetricSpace<Rational>::Product>(&storage)) {
    return MetricSpace<double>::make(
        space->name(), space->labels(), space->base(),
        MetricSpace<double>::Product{to_floating(product->first), to_floating(product->second), product->norm});
  }
  if (const auto* matched = std::get_if<MetricSpace<Rational>::Matched>(&storage)) {
    MetricSpace<double>::Matched out{matched->spread.get_d(), matched->partner, {}};
    for (const auto& v : matched->partner_distance) out.partner_distance.push_back(v.get_d());
    return MetricSpace<double>::make(space->name(), space->labels(), space->base(), std::move(out));
  }
  const auto& dense = std::get<MetricSpace<Rational>::Dense>(storage);
  MetricSpace<double>::Dense out;
  out.dist.reserve(dense.dist.size());
  for (const auto& v : dense.dist) out.dist.push_back(v.get_d());
  return MetricSpace<double>::make(space->name(), space->labels(), space->base(), std::move(out));
}

SpacePtr<Rational> to_exact(const SpacePtr<double>& space) {
  const auto& storage = space->storage();
  if (const auto* line = std::get_if<MetricSpace<double>::Line>(&storage)) {
    std::vector<Rational> positions(line->positions.begin(), line->positions.end());
    return MetricSpace<Rational>::make(space->name(), space->labels(), space->base(),
                                       MetricSpace<Rational>::Line{std::move(positions)});
  }
  if (const auto* product = std::get_if<MetricSpace<double>::Product>(&storage)) {
    return MetricSpace<Rational>::make(
        space->name(), space->labels(), space->base(),
        MetricSpace<Rational>::Product{to_exact(product->first), to_exact(product->second), product->norm});
  }
  if (const auto* matched = std::get_if<MetricSpace<double>::Matched>(&storage)) {
    MetricSpace<Rational>::Matched out{Rational(matched->spread), matched->partner, {}};
    out.partner_distance.assign(matched->partner_distance.begin(), matched->partner_distance.end());
    return MetricSpace<Rational>::make(space->name(), space->labels(), space->base(), std::move(out));
  }
  const auto& dense = std::get<MetricSpace<double>::Dense>(storage);
  MetricSpace<Rational>::Dense out;
  out.dist.assign(dense.dist.begin(), dense.dist.end());
  return MetricSpace<Rational>::make(space->name(), space->labels(), space->base(), std::move(out));
}

#define LIPFREE_INSTANTIATE(S)                                                                         \
  template class MetricSpace<S>;                                                                       \
  template SpacePtr<S> validate_space<S>(const RawSpace<S>&);                                          \
  template SpacePtr<S> make_line_space<S>(std::string, std::vector<std::string>, std::vector<S>,       \
                                          std::size_t);                                                \
  template SpacePtr<S> make_matched_space<S>(std::string, std::vector<std::string>, std::size_t, S,        \
                                             const std::vector<std::pair<std::size_t, std::size_t>>&,       \
                                             const std::vector<S>&);                                         \
  template SpacePtr<S> snowflake<S>(const SpacePtr<S>&, const Rational&);                              \
  template SpacePtr<S> truncate_metric<S>(const SpacePtr<S>&);                                         \
  template SpacePtr<S> product_space<S>(const SpacePtr<S>&, const SpacePtr<S>&, ProductNorm);          \
  template S distance_set_measure<S>(const MetricSpace<S>&, std::size_t, const S&);                    \
  template SpacePtr<S> random_space<S>(std::uint64_t, std::size_t, RandomGenerator);                   \
  template std::vector<std::vector<S>> shortest_path_closure<S>(std::vector<std::vector<S>>);

LIPFREE_INSTANTIATE(Rational)
LIPFREE_INSTANTIATE(double)

#undef LIPFREE_INSTANTIATE

}  // namespace lipfree
