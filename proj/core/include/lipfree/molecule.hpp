#pragma once

#include <string>
#include <utility>
#include <vector>

#include "lipfree/lip_function.hpp"
#include "lipfree/metric_space.hpp"

namespace lipfree {

/// A finitely supported element sum a_i delta(x_i) of F(M). Stored in
/// canonical form: terms sorted by point index, coefficients nonzero, base
/// point dropped (delta(0) = 0 in F(M)).
template <Scalar S>
class Molecule {
 public:
  using Term = std::pair<std::size_t, S>;

  explicit Molecule(SpacePtr<S> space) : space_(std::move(space)) {}

  /// Merges repeated points, drops zeros and the base point.
  static Molecule from_terms(SpacePtr<S> space, std::vector<Term> terms);

  const SpacePtr<S>& space() const { return space_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  S coefficient(std::size_t point) const;
  /// Points with nonzero coefficient, ascending.
  std::vector<std::size_t> support() const;
  /// Sum of |a_i| d(x_i, 0): the trivial upper bound on the norm.
  S mass_bound() const;

  Molecule operator+(const Molecule& other) const;
  Molecule operator-(const Molecule& other) const;
  Molecule scaled(const S& factor) const;

  /// Same space object and identical canonical terms.
  bool operator==(const Molecule& other) const { return space_ == other.space_ && terms_ == other.terms_; }

 private:
  SpacePtr<S> space_;
  std::vector<Term> terms_;
};

/// Resolves labels; throws Error(unknown_label).
template <Scalar S>
Molecule<S> canonicalize(SpacePtr<S> space, const std::vector<std::pair<std::string, S>>& terms);

template <Scalar S>
Molecule<S> delta(SpacePtr<S> space, std::size_t x);

/// m_xy = (delta(x) - delta(y)) / d(x, y). Throws Error(equal_points).
template <Scalar S>
Molecule<S> elementary(SpacePtr<S> space, std::size_t x, std::size_t y);

/// <f, mu> = sum a_i f(x_i). Throws Error(space_mismatch).
template <Scalar S>
S eval(const LipFunction<S>& f, const Molecule<S>& mu);

/// Same indices and labels, coefficients converted; `target` must have the
/// same labels as the molecule's space.
Molecule<double> to_floating(const Molecule<Rational>& mu, SpacePtr<double> target);

/// Step function on the line: values[i] on (breakpoints[i], breakpoints[i+1]),
/// zero outside [breakpoints.front(), breakpoints.back()].
template <Scalar S>
struct StepFunction {
  std::vector<S> breakpoints;
  std::vector<S> values;

  S integral_abs() const;
  S operator()(const S& t) const;
};

template <Scalar S>
struct TransportArc {
  std::size_t from = 0;
  std::size_t to = 0;
  S mass{};
};

/// Flow of mass between points of a space; the cost is sum mass * d.
template <Scalar S>
struct TransportPlan {
  std::vector<TransportArc<S>> arcs;

  S cost(const MetricSpace<S>& space) const;
  /// Net outflow at every point equals the molecule's coefficient there
  /// (the base absorbs the total). Tolerance applies in floating mode only.
  bool balances(const Molecule<S>& mu, double tolerance = 1e-9) const;
};

}  // namespace lipfree
