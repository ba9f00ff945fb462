#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lipfree/molecule.hpp"
#include "lipfree/point_map.hpp"
#include "lipfree/psi.hpp"

namespace lipfree {

inline constexpr int kMaxLineStage = 12;
inline constexpr int kMaxDustStage = 6;

/// Stage k of a Cantor set in [0,1] built by removing, at stage s, the
/// middle open interval of width ratio^s from each of the 2^{s-1} remaining
/// intervals. ratio = 1/4 is the Smith-Volterra-Cantor set, 1/3 the middle
/// thirds set.
struct CantorStage {
  int k = 0;
  Rational ratio;
  /// (x_n, y_n) for n = 1..2^k - 1: stage by stage, left to right within a
  /// stage, so stage s occupies n = 2^{s-1}..2^s - 1.
  std::vector<std::pair<Rational, Rational>> removed;
  /// Remaining stage-k intervals, left to right.
  std::vector<std::pair<Rational, Rational>> pieces;
  /// {0, 1} ∪ {x_n} ∪ {y_n}, ascending, with labels "0", "1", "x<n>", "y<n>".
  std::vector<Rational> endpoints;
  std::vector<std::string> labels;
  Rational stage_measure;  // lambda(C_k)
  Rational limit_measure;  // lambda(C) = 1 - ratio / (1 - 2 ratio)

  /// Stage of the removed interval n (1-based).
  static int stage_of(std::size_t n);
};

/// Throws Error(stage_too_large) unless 1 <= k <= kMaxLineStage and
/// Error(width_overflow) when the widths sum to more than 1 (ratio > 1/3).
CantorStage geometric_cantor(const Rational& ratio, int k);

CantorStage svc_stage(int k);
CantorStage middle_thirds_stage(int k);

/// h(x) = lambda([0,x] \ C) at every endpoint, aligned with `endpoints`.
/// Each stage-k piece carries C-measure lambda(C) / 2^k.
std::vector<Rational> cantor_map(const CantorStage& stage);

/// (x, f(x)) for the Smith-Volterra-Cantor map at stage k.
std::vector<std::pair<Rational, Rational>> svc_map(int k);

/// Gaps of the stage as a positive interval family for psi_n, followed by
/// the remaining stage-k pieces when `with_pieces` is set (so that the
/// complement of the family is the finite endpoint set).
IntervalFamily<Rational> cantor_gap_family(const CantorStage& stage, bool with_pieces);

/// A map with a witness molecule and closed-form norms.
template <Scalar S>
struct WitnessInstance {
  std::string family;
  int stage = 0;
  SpacePtr<S> domain;
  SpacePtr<S> codomain;
  PointMap<S> map;
  /// Set when `map` factors through a named first step (discrete witness: h).
  std::optional<PointMap<S>> first_step;
  Molecule<S> mu;
  Molecule<S> image;                  // f^ mu
  std::optional<Rational> expected_mu;  // exact ||mu|| when a closed form exists
  Rational mu_lower_bound;
  Rational expected_image;  // exact ||f^ mu||
};

/// Domain: stage-k endpoints on the line, base 0. Codomain: their images
/// under the SVC map on the line. mu_k = delta(1) - sum (delta(y_n) - delta(x_n)).
WitnessInstance<Rational> svc_witness(int k);

/// Snowflake counterexample. The snowflaked distances are irrational in
/// general, so the domain instance is floating; `line` is the same map and
/// molecule on the unsnowflaked endpoints, exact, for the image norm.
struct SnowflakeWitness {
  Rational alpha;
  Rational ratio;  // removed widths t_s = ratio^s
  WitnessInstance<double> snowflaked;
  WitnessInstance<Rational> line;
};

/// Widths t_s = 4^{-s/alpha} when rational, else 2^{-ceil(2/alpha)} per
/// stage, so that t_s^alpha <= 4^{-s} either way.
Rational snowflake_ratio(const Rational& alpha);

/// Throws Error(alpha_out_of_range) unless 0 < alpha < 1.
SnowflakeWitness snowflake_witness(const Rational& alpha, int stages);

enum class DiscreteVariant { unbounded, bounded };

std::string to_string(DiscreteVariant variant);
DiscreteVariant parse_discrete_variant(std::string_view text);

/// Uniformly discrete copy of the stage-k SVC endpoints. Unbounded: points on
/// the line, x_n = n + 1, y_n = x_n + 4^{-s}. Bounded: all distances 1 except
/// d(x_n, y_n) = 4^{-s}. `first_step` is h onto the SVC endpoints and `map`
/// is the SVC map after h, landing in the svc_witness(k) codomain object.
WitnessInstance<Rational> discrete_witness(DiscreteVariant variant, int k);

/// Stage-k middle-thirds endpoints squared under l1 or linf, base (0,0).
/// Throws Error(stage_too_large) unless 1 <= k <= kMaxDustStage.
template <Scalar S>
SpacePtr<S> cantor_dust(int k, ProductNorm norm);

struct RTreeExample {
  WitnessInstance<Rational> instance;  // mu: the last branch molecule
  std::vector<Molecule<Rational>> branch_molecules;  // m_{x_{n+1} x'_n}, n = 1..n_max-1
  std::vector<Molecule<Rational>> expected_images;   // m_{y_{n+1} y_n}
  std::size_t y_infinity = 0;                        // codomain index of y_inf
  Molecule<Rational> missed;                         // delta(y_inf) - delta(y_nmax)
  Rational missed_norm;                              // 1/n_max
};

/// Star tree through 0 with one branch per n < n_max carrying x'_n at
/// height 1 and x_{n+1} at height 1 + d(y_{n+1}, y_n); f(x_n) = f(x'_n) = y_n
/// onto N = {1 - 1/n} ∪ {1}. Throws Error(invalid_argument) for n_max < 2.
RTreeExample rtree_example(int n_max);

/// Grid {k/n} -> {k^2/n^2}. mu = m_{1/n, 0}, whose image has norm 1/n = a(f).
/// Throws Error(invalid_argument) for n < 2.
WitnessInstance<Rational> xsquared_grid(int n);

}  // namespace lipfree
