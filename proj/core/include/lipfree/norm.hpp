#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lipfree/lip_function.hpp"
#include "lipfree/molecule.hpp"

namespace lipfree {

/// Result of the dual route: sup <f, mu> over 1-Lipschitz f with f(0) = 0.
template <Scalar S>
struct DualNormResult {
  S value{};
  /// Optimal potential on supp(mu) and the base, extended to the whole space
  /// by the McShane formula with constant 1 (so it stays optimal).
  std::optional<LipFunction<S>> potential;
  std::size_t rounds = 0;       // cutting-plane rounds
  std::size_t constraints = 0;  // pair constraints in the final LP
  std::size_t pivots = 0;
};

/// Result of the primal route: minimal transport cost.
template <Scalar S>
struct FlowNormResult {
  S value{};
  TransportPlan<S> plan;
  std::size_t pivots = 0;
};

/// Result of the line oracle: the L1 norm of the step function Phi(mu).
template <Scalar S>
struct LineNormResult {
  S value{};
  StepFunction<S> phi;
};

/// Dual LP over potentials on supp(mu) and the base. Pair constraints are
/// generated lazily: the LP starts from box bounds plus nearest-neighbour
/// pairs and adds the most violated pair per point until none is violated.
/// Throws Error(solver_failure) if the LP does not reach optimality.
template <Scalar S>
DualNormResult<S> norm_dual_lp(const Molecule<S>& mu);

/// Min-cost transport of the positive part of mu onto the negative part,
/// the base absorbing the imbalance.
template <Scalar S>
FlowNormResult<S> norm_flow(const Molecule<S>& mu);

/// Line oracle. Uses the space's own coordinates when it was built on the
/// line, else `positions` (checked against every pairwise distance), else
/// coordinates recovered from the metric. Throws Error(not_a_line_space).
template <Scalar S>
LineNormResult<S> norm_line(const Molecule<S>& mu, std::span<const S> positions = {});

/// Real coordinates realizing the metric with the base at 0, if they exist.
template <Scalar S>
std::optional<std::vector<S>> infer_line_positions(const MetricSpace<S>& space);

/// The norm by the primal route, which is exact for rational input.
template <Scalar S>
S norm(const Molecule<S>& mu) {
  return norm_flow(mu).value;
}

/// Largest violation of |f(x) - f(y)| <= d(x, y) over all pairs
/// (0 or negative means f is 1-Lipschitz).
template <Scalar S>
S lipschitz_violation(const LipFunction<S>& f);

/// Combined report of both certified routes.
template <Scalar S>
struct CertifiedNorm {
  S primal{};
  S dual{};
  S gap{};  // |primal - dual| / max(1, |primal|)
  bool potential_feasible = false;
  bool plan_balanced = false;
};

template <Scalar S>
CertifiedNorm<S> certify_norm(const Molecule<S>& mu, double tolerance = 1e-9);

}  // namespace lipfree
