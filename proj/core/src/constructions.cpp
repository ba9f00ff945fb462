#include "lipfree/constructions.hpp"

#include <algorithm>
#include <bit>
#include <map>

#include "lipfree/error.hpp"
#include "lipfree/operators.hpp"

namespace lipfree {

namespace {

void check_stage(int k, int cap) {
  if (k < 1 || k > cap) {
    throw Error(ErrorCode::stage_too_large,
                "stage must lie in 1.." + std::to_string(cap) + ", got " + std::to_string(k));
  }
}

Rational quarter_power(int s) { return dyadic(2L * s); }  // 4^{-s}

SpacePtr<Rational> endpoint_line(const std::string& name, const CantorStage& stage,
                                 const std::vector<Rational>& positions) {
  return make_line_space<Rational>(name, stage.labels, positions, 0);
}

/// delta(1) - sum_n (delta(y_n) - delta(x_n)) over the labels of `space`.
Molecule<Rational> cantor_molecule(const SpacePtr<Rational>& space, std::size_t removed) {
  std::vector<Molecule<Rational>::Term> terms;
  terms.emplace_back(space->index("1"), Rational(1));
  for (std::size_t n = 1; n <= removed; ++n) {
    terms.emplace_back(space->index("y" + std::to_string(n)), Rational(-1));
    terms.emplace_back(space->index("x" + std::to_string(n)), Rational(1));
  }
  return Molecule<Rational>::from_terms(space, std::move(terms));
}

WitnessInstance<Rational> line_witness(std::string family, const CantorStage& stage) {
  const auto values = cantor_map(stage);
  auto domain = endpoint_line(family + "-stage" + std::to_string(stage.k), stage, stage.endpoints);
  auto codomain = endpoint_line(family + "-image" + std::to_string(stage.k), stage, values);
  auto map = PointMap<Rational>::same_labels(domain, codomain);
  auto mu = cantor_molecule(domain, stage.removed.size());
  auto image = pushforward(map, mu);

  // ||f^ mu|| = f(1) minus the images of the removed gaps, which keep their widths.
  Rational expected_image = values.back();
  for (const auto& [x, y] : stage.removed) expected_image -= y - x;

  return WitnessInstance<Rational>{std::move(family), stage.k,         domain,
                                   codomain,          map,             std::nullopt,
                                   mu,                image,           stage.stage_measure,
                                   stage.limit_measure, expected_image};
}

}  // namespace

int CantorStage::stage_of(std::size_t n) { return std::bit_width(n); }

CantorStage geometric_cantor(const Rational& ratio, int k) {
  check_stage(k, kMaxLineStage);
  if (sgn(ratio) <= 0) throw Error(ErrorCode::invalid_argument, "ratio must be positive");
  // sum_s 2^{s-1} r^s = r / (1 - 2r) <= 1 iff r <= 1/3.
  if (ratio > make_rational(1, 3)) {
    throw Error(ErrorCode::width_overflow,
                "removed widths sum past 1 for ratio " + format_rational(ratio) + " (need ratio <= 1/3)");
  }

  CantorStage stage;
  stage.k = k;
  stage.ratio = ratio;
  stage.pieces = {{Rational(0), Rational(1)}};
  Rational width = 1;
  Rational removed_total = 0;
  for (int s = 1; s <= k; ++s) {
    width *= ratio;
    std::vector<std::pair<Rational, Rational>> next;
    next.reserve(2 * stage.pieces.size());
    for (const auto& [a, b] : stage.pieces) {
      if (!(width < b - a)) {
        throw Error(ErrorCode::width_overflow, "stage " + std::to_string(s) + " width " + format_rational(width) +
                                                   " does not fit in a piece of length " + format_rational(b - a));
      }
      Rational x = a + (b - a - width) / 2;
      Rational y = x + width;
      stage.removed.emplace_back(x, y);
      next.emplace_back(a, x);
      next.emplace_back(y, b);
      removed_total += width;
    }
    stage.pieces = std::move(next);
  }
  stage.stage_measure = 1 - removed_total;
  stage.limit_measure = 1 - ratio / (1 - 2 * ratio);

  std::map<Rational, std::string> by_position{{Rational(0), "0"}, {Rational(1), "1"}};
  for (std::size_t n = 1; n <= stage.removed.size(); ++n) {
    by_position.emplace(stage.removed[n - 1].first, "x" + std::to_string(n));
    by_position.emplace(stage.removed[n - 1].second, "y" + std::to_string(n));
  }
  for (auto& [position, label] : by_position) {
    stage.endpoints.push_back(position);
    stage.labels.push_back(label);
  }
  return stage;
}

CantorStage svc_stage(int k) { return geometric_cantor(make_rational(1, 4), k); }

CantorStage middle_thirds_stage(int k) { return geometric_cantor(make_rational(1, 3), k); }

std::vector<Rational> cantor_map(const CantorStage& stage) {
  const Rational piece_mass = stage.limit_measure / pow_rational(Rational(2), static_cast<unsigned long>(stage.k));
  std::vector<Rational> values;
  values.reserve(stage.endpoints.size());
  std::size_t closed = 0;  // pieces ending at or before the current endpoint
  for (const auto& e : stage.endpoints) {
    while (closed < stage.pieces.size() && stage.pieces[closed].second <= e) ++closed;
    values.push_back(e - piece_mass * static_cast<long>(closed));
  }
  return values;
}

std::vector<std::pair<Rational, Rational>> svc_map(int k) {
  const auto stage = svc_stage(k);
  const auto values = cantor_map(stage);
  std::vector<std::pair<Rational, Rational>> out;
  out.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) out.emplace_back(stage.endpoints[i], values[i]);
  return out;
}

IntervalFamily<Rational> cantor_gap_family(const CantorStage& stage, bool with_pieces) {
  std::vector<OpenInterval<Rational>> intervals;
  for (const auto& [x, y] : stage.removed) intervals.push_back({x, y, Side::positive});
  if (with_pieces) {
    for (const auto& [a, b] : stage.pieces) intervals.push_back({a, b, Side::positive});
  }
  return IntervalFamily<Rational>(std::move(intervals));
}

WitnessInstance<Rational> svc_witness(int k) { return line_witness("svc", svc_stage(k)); }

Rational snowflake_ratio(const Rational& alpha) {
  if (sgn(alpha) <= 0 || alpha >= 1) {
    throw Error(ErrorCode::alpha_out_of_range, "alpha must lie in (0,1), got " + format_rational(alpha));
  }
  if (auto exact = exact_power(make_rational(1, 4), 1 / alpha)) return *exact;
  // 2^{-m} with m = ceil(2/alpha): then (2^{-m s})^alpha <= 4^{-s}.
  const Rational two_over = 2 / alpha;
  mpz_class m = two_over.get_num() / two_over.get_den();
  if (m * two_over.get_den() != two_over.get_num()) m += 1;
  return dyadic(m.get_si());
}

SnowflakeWitness snowflake_witness(const Rational& alpha, int stages) {
  const Rational ratio = snowflake_ratio(alpha);
  const auto stage = geometric_cantor(ratio, stages);
  auto line = line_witness("snowflake", stage);

  auto domain = snowflake(to_floating(line.domain), alpha);
  auto codomain = to_floating(line.codomain);
  PointMap<double> map(domain, codomain, line.map.assignment());
  auto mu = to_floating(line.mu, domain);
  auto image = pushforward(map, mu);
  // Under rho the witness keeps delta(1) at norm 1 while the pairs add at
  // most sum 2^{s-1} 4^{-s} < 1/2.
  WitnessInstance<double> snowflaked{"snowflake",         stages, domain,         codomain,
                                     map,                 std::nullopt, mu,       image,
                                     std::nullopt,        make_rational(1, 2),    line.expected_image};
  return SnowflakeWitness{alpha, ratio, std::move(snowflaked), std::move(line)};
}

std::string to_string(DiscreteVariant variant) {
  return variant == DiscreteVariant::unbounded ? "unbounded" : "bounded";
}

DiscreteVariant parse_discrete_variant(std::string_view text) {
  if (text == "unbounded") return DiscreteVariant::unbounded;
  if (text == "bounded") return DiscreteVariant::bounded;
  throw Error(ErrorCode::invalid_argument, "unknown discrete variant '" + std::string(text) + "'");
}

WitnessInstance<Rational> discrete_witness(DiscreteVariant variant, int k) {
  check_stage(k, kMaxLineStage);
  auto svc = svc_witness(k);
  const std::size_t removed = (std::size_t{1} << k) - 1;

  std::vector<std::string> labels{"0", "1"};
  std::vector<Rational> gaps;  // d(x_n, y_n)
  for (std::size_t n = 1; n <= removed; ++n) {
    labels.push_back("x" + std::to_string(n));
    labels.push_back("y" + std::to_string(n));
    gaps.push_back(quarter_power(CantorStage::stage_of(n)));
  }

  const std::string name = "discrete-" + to_string(variant) + std::to_string(k);
  SpacePtr<Rational> domain;
  if (variant == DiscreteVariant::unbounded) {
    std::vector<Rational> positions{Rational(0), Rational(1)};
    for (std::size_t n = 1; n <= removed; ++n) {
      Rational x = static_cast<long>(n + 1);
      positions.push_back(x);
      positions.push_back(x + gaps[n - 1]);
    }
    domain = make_line_space<Rational>(name, labels, positions, 0);
  } else {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t n = 1; n <= removed; ++n) pairs.emplace_back(2 * n, 2 * n + 1);
    domain = make_matched_space<Rational>(name, labels, 0, Rational(1), pairs, gaps);
  }

  auto h = PointMap<Rational>::same_labels(domain, svc.domain);
  auto map = compose(svc.map, h);
  auto mu = cantor_molecule(domain, removed);
  auto image = pushforward(map, mu);

  // delta(1) costs 1 and each pair its own distance, in both variants.
  Rational expected_mu = 1;
  for (const auto& g : gaps) expected_mu += g;

  return WitnessInstance<Rational>{"discrete-" + to_string(variant),
                                   k,
                                   domain,
                                   svc.codomain,
                                   map,
                                   h,
                                   mu,
                                   image,
                                   expected_mu,
                                   make_rational(1, 2),
                                   svc.expected_image};
}

template <Scalar S>
SpacePtr<S> cantor_dust(int k, ProductNorm norm) {
  check_stage(k, kMaxDustStage);
  const auto stage = middle_thirds_stage(k);
  std::vector<S> positions;
  positions.reserve(stage.endpoints.size());
  for (const auto& e : stage.endpoints) positions.push_back(ScalarTraits<S>::from_rational(e));
  auto axis = make_line_space<S>("thirds" + std::to_string(k), stage.labels, positions, 0);
  return product_space(axis, axis, norm);
}

template SpacePtr<Rational> cantor_dust<Rational>(int, ProductNorm);
template SpacePtr<double> cantor_dust<double>(int, ProductNorm);

RTreeExample rtree_example(int n_max) {
  if (n_max < 2) throw Error(ErrorCode::invalid_argument, "n_max must be at least 2");
  const auto nm = static_cast<std::size_t>(n_max);

  std::vector<std::string> y_labels;
  std::vector<Rational> y_positions;
  for (std::size_t n = 1; n <= nm; ++n) {
    y_labels.push_back("y" + std::to_string(n));
    y_positions.push_back(1 - Rational(1, static_cast<unsigned long>(n)));
  }
  y_labels.push_back("yinf");
  y_positions.push_back(Rational(1));
  auto codomain = make_line_space<Rational>("rtree-N" + std::to_string(n_max), y_labels, y_positions, 0);

  // Points as (branch, height); the centre 0 has no branch.
  struct TreePoint {
    std::size_t branch;
    Rational height;
  };
  std::vector<std::string> labels{"0"};
  std::vector<TreePoint> points{{0, Rational(0)}};
  std::vector<std::size_t> assignment{0};
  for (std::size_t n = 1; n < nm; ++n) {
    labels.push_back("x'" + std::to_string(n));
    points.push_back({n, Rational(1)});
    assignment.push_back(n - 1);
    labels.push_back("x" + std::to_string(n + 1));
    points.push_back({n, 1 + y_positions[n] - y_positions[n - 1]});
    assignment.push_back(n);
  }
  RawSpace<Rational> raw{"rtree-M" + std::to_string(n_max), "0", labels, {}};
  raw.matrix.assign(points.size(), std::vector<Rational>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (i == j) continue;
      const auto& p = points[i];
      const auto& q = points[j];
      const bool same_branch = p.branch != 0 && p.branch == q.branch;
      raw.matrix[i][j] = same_branch ? abs(Rational(p.height - q.height)) : Rational(p.height + q.height);
    }
  }
  auto domain = validate_space(raw);
  PointMap<Rational> map(domain, codomain, assignment);

  std::vector<Molecule<Rational>> branch, expected;
  for (std::size_t n = 1; n < nm; ++n) {
    branch.push_back(elementary(domain, 2 * n, 2 * n - 1));
    expected.push_back(elementary(codomain, n, n - 1));
  }
  const std::size_t y_inf = nm;
  auto missed = Molecule<Rational>::from_terms(codomain, {{y_inf, Rational(1)}, {nm - 1, Rational(-1)}});

  auto mu = branch.back();
  auto image = pushforward(map, mu);
  WitnessInstance<Rational> instance{"rtree", n_max, domain,       codomain,  map,      std::nullopt,
                                     mu,      image, Rational(1),  Rational(1), Rational(1)};
  return RTreeExample{std::move(instance), std::move(branch), std::move(expected),
                      y_inf,               std::move(missed), Rational(1, static_cast<unsigned long>(n_max))};
}

WitnessInstance<Rational> xsquared_grid(int n) {
  if (n < 2) throw Error(ErrorCode::invalid_argument, "xsquared grid needs n >= 2");
  std::vector<std::string> labels;
  std::vector<Rational> xs, squares;
  for (int k = 0; k <= n; ++k) {
    Rational x = make_rational(k, n);
    labels.push_back(format_rational(x));
    squares.push_back(x * x);
    xs.push_back(std::move(x));
  }
  auto domain = make_line_space<Rational>("grid" + std::to_string(n), labels, xs, 0);
  auto codomain = make_line_space<Rational>("squares" + std::to_string(n), labels, squares, 0);
  auto map = PointMap<Rational>::same_labels(domain, codomain);
  auto mu = elementary(domain, 1, 0);
  auto image = pushforward(map, mu);
  return WitnessInstance<Rational>{"xsquared", n,           domain,      codomain,   map,
                                   std::nullopt, mu,        image,       Rational(1), Rational(1),
                                   make_rational(1, n)};
}

}  // namespace lipfree
