#include "lipfree/norm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "lipfree/lp.hpp"
#include "lipfree/network_simplex.hpp"

namespace lipfree {

namespace {

// Points of supp(mu) preceded by the base, with their distances.
template <Scalar S>
struct LocalProblem {
  std::vector<std::size_t> points;  // points[0] is the base
  std::vector<S> coeff;             // coeff[0] == 0
  std::vector<S> dist;              // k*k, k = points.size()

  explicit LocalProblem(const Molecule<S>& mu) {
    const auto& space = *mu.space();
    points.push_back(space.base());
    coeff.push_back(ScalarTraits<S>::zero());
    for (const auto& [p, a] : mu.terms()) {
      points.push_back(p);
      coeff.push_back(a);
    }
    const std::size_t k = points.size();
    dist.resize(k * k);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) dist[i * k + j] = space.distance(points[i], points[j]);
    }
  }
  std::size_t size() const { return points.size(); }
  const S& d(std::size_t i, std::size_t j) const { return dist[i * points.size() + j]; }
};

template <Scalar S>
LipFunction<S> extend_potential(const SpacePtr<S>& space, const std::vector<std::size_t>& points,
                                const std::vector<S>& values) {
  // McShane extension with constant 1, keeping the values on the support.
  std::vector<S> out(space->size());
  std::vector<char> fixed(space->size(), 0);
  for (std::size_t t = 0; t < points.size(); ++t) {
    out[points[t]] = values[t];
    fixed[points[t]] = 1;
  }
  for (std::size_t z = 0; z < space->size(); ++z) {
    if (fixed[z]) continue;
    S best = values[0] + space->distance(z, points[0]);
    for (std::size_t t = 1; t < points.size(); ++t) {
      S candidate = values[t] + space->distance(z, points[t]);
      if (candidate < best) best = candidate;
    }
    out[z] = best;
  }
  out[space->base()] = ScalarTraits<S>::zero();
  return LipFunction<S>(space, std::move(out));
}

}  // namespace

template <Scalar S>
DualNormResult<S> norm_dual_lp(const Molecule<S>& mu) {
  DualNormResult<S> result;
  if (mu.is_zero()) {
    result.value = ScalarTraits<S>::zero();
    result.potential = LipFunction<S>::zero(mu.space());
    return result;
  }
  const LocalProblem<S> local(mu);
  const std::size_t k = local.size();
  const std::size_t vars = k - 1;  // local point t >= 1 is variable t - 1

  // Floating mode works on data scaled to unit size.
  S dscale = ScalarTraits<S>::one();
  S cscale = ScalarTraits<S>::one();
  S tol = ScalarTraits<S>::zero();
  if constexpr (!ScalarTraits<S>::is_exact) {
    dscale = 0;
    cscale = 0;
    for (std::size_t t = 1; t < k; ++t) {
      dscale = std::max(dscale, local.d(0, t));
      cscale = std::max(cscale, std::abs(local.coeff[t]));
    }
    tol = 1e-12;
  }
  auto nd = [&](std::size_t i, std::size_t j) { return S(local.d(i, j) / dscale); };

  // Shifted variables v_t = u_t + d(t, 0) are nonnegative; the box
  // |u_t| <= d(t, 0) encodes the pairs with the base.
  std::vector<S> objective(vars);
  for (std::size_t t = 1; t < k; ++t) objective[t - 1] = local.coeff[t] / cscale;
  LinearProgram<S> lp(objective, ScalarTraits<S>::is_exact ? S(0) : S(1e-11));
  for (std::size_t t = 1; t < k; ++t) lp.add_constraint({{t - 1, ScalarTraits<S>::one()}}, S(nd(0, t) + nd(0, t)));

  std::set<std::pair<std::size_t, std::size_t>> present;
  auto add_pair = [&](std::size_t i, std::size_t j) {
    if (!present.emplace(i, j).second) return false;
    S rhs = nd(i, j) + nd(0, i) - nd(0, j);
    if (ScalarTraits<S>::sign(rhs) < 0) rhs = ScalarTraits<S>::zero();  // rounding only
    lp.add_constraint({{i - 1, ScalarTraits<S>::one()}, {j - 1, S(-1)}}, rhs);
    return true;
  };
  constexpr std::size_t kNeighbours = 2;
  for (std::size_t i = 1; i < k; ++i) {
    std::vector<std::size_t> others;
    for (std::size_t j = 1; j < k; ++j) {
      if (j != i) others.push_back(j);
    }
    const std::size_t take = std::min(kNeighbours, others.size());
    std::partial_sort(others.begin(), others.begin() + static_cast<long>(take), others.end(),
                      [&](auto a, auto b) { return local.d(i, a) < local.d(i, b); });
    for (std::size_t q = 0; q < take; ++q) {
      add_pair(i, others[q]);
      add_pair(others[q], i);
    }
  }

  std::vector<S> u(k, ScalarTraits<S>::zero());
  while (true) {
    ++result.rounds;
    const auto status = lp.solve();
    if (status != LpStatus::optimal) {
      throw Error(ErrorCode::solver_failure, "dual LP ended " + to_string(status));
    }
    const auto v = lp.solution();
    for (std::size_t t = 1; t < k; ++t) u[t] = v[t - 1] - nd(0, t);
    bool added = false;
    for (std::size_t i = 1; i < k; ++i) {
      std::size_t worst = 0;
      S excess = tol;
      for (std::size_t j = 1; j < k; ++j) {
        if (j == i) continue;
        S e = u[i] - u[j] - nd(i, j);
        if (excess < e) {
          excess = e;
          worst = j;
        }
      }
      if (worst != 0 && add_pair(i, worst)) added = true;
    }
    if (!added) break;
  }

  std::vector<S> potential(k);
  S value = ScalarTraits<S>::zero();
  for (std::size_t t = 0; t < k; ++t) {
    potential[t] = u[t] * dscale;
    value += local.coeff[t] * potential[t];
  }
  potential[0] = ScalarTraits<S>::zero();
  result.value = value;
  result.potential = extend_potential(mu.space(), local.points, potential);
  result.constraints = present.size();
  result.pivots = lp.pivots();
  return result;
}

template <Scalar S>
FlowNormResult<S> norm_flow(const Molecule<S>& mu) {
  FlowNormResult<S> result;
  if (mu.is_zero()) {
    result.value = ScalarTraits<S>::zero();
    return result;
  }
  const LocalProblem<S> local(mu);
  const std::size_t k = local.size();
  std::vector<S> supply = local.coeff;
  S total = ScalarTraits<S>::zero();
  for (std::size_t t = 1; t < k; ++t) total += supply[t];
  supply[0] = -total;
  NetworkSimplex<S> solver(k, local.dist, std::move(supply));
  solver.run();
  for (const auto& f : solver.flows()) {
    result.plan.arcs.push_back({local.points[f.from], local.points[f.to], f.amount});
  }
  result.value = solver.total_cost();
  result.pivots = solver.pivots();
  return result;
}

template <Scalar S>
std::optional<std::vector<S>> infer_line_positions(const MetricSpace<S>& space) {
  const std::size_t n = space.size();
  const std::size_t b = space.base();
  std::vector<S> pos(n, ScalarTraits<S>::zero());
  if (n <= 1) return pos;
  auto same = [](const S& x, const S& y) {
    if constexpr (ScalarTraits<S>::is_exact) {
      return x == y;
    } else {
      return approx_equal(x, y, 1e-9);
    }
  };
  std::size_t far = b;
  for (std::size_t i = 0; i < n; ++i) {
    if (space.distance(b, far) < space.distance(b, i)) far = i;
  }
  const S reach = space.distance(b, far);
  for (std::size_t z = 0; z < n; ++z) {
    if (z == b) continue;
    const S dz = space.distance(b, z);
    const S to_far = space.distance(z, far);
    if (same(to_far, S(reach - dz))) {
      pos[z] = dz;
    } else if (same(to_far, S(reach + dz))) {
      pos[z] = -dz;
    } else {
      return std::nullopt;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!same(space.distance(i, j), ScalarTraits<S>::abs(S(pos[i] - pos[j])))) return std::nullopt;
    }
  }
  return pos;
}

template <Scalar S>
LineNormResult<S> norm_line(const Molecule<S>& mu, std::span<const S> positions) {
  const auto& space = *mu.space();
  std::vector<S> pos;
  if (const auto* own = space.positions()) {
    pos = *own;
  } else if (!positions.empty()) {
    if (positions.size() != space.size()) {
      throw Error(ErrorCode::not_a_line_space, "one position per point is required");
    }
    for (std::size_t i = 0; i < space.size(); ++i) {
      for (std::size_t j = i + 1; j < space.size(); ++j) {
        const S gap = ScalarTraits<S>::abs(S(positions[i] - positions[j]));
        bool ok;
        if constexpr (ScalarTraits<S>::is_exact) {
          ok = gap == space.distance(i, j);
        } else {
          ok = approx_equal(gap, space.distance(i, j), 1e-9);
        }
        if (!ok) {
          throw Error(ErrorCode::not_a_line_space, "positions disagree with the metric",
                      {space.label(i), space.label(j)});
        }
      }
    }
    pos.assign(positions.begin(), positions.end());
  } else if (auto inferred = infer_line_positions(space)) {
    pos = std::move(*inferred);
  } else {
    throw Error(ErrorCode::not_a_line_space, "space '" + space.name() + "' does not embed isometrically in the line");
  }

  LineNormResult<S> result;
  if (mu.is_zero()) {
    result.value = ScalarTraits<S>::zero();
    return result;
  }
  const S origin = pos[space.base()];
  struct Node {
    S at;
    S coeff;
  };
  std::vector<Node> nodes{{ScalarTraits<S>::zero(), ScalarTraits<S>::zero()}};
  for (const auto& [p, a] : mu.terms()) nodes.push_back({pos[p] - origin, a});
  std::sort(nodes.begin(), nodes.end(), [](const Node& x, const Node& y) { return x.at < y.at; });

  // Phi(mu) on (u, v): right of 0 it is the mass at or beyond v, left of 0
  // minus the mass at or before u.
  const std::size_t m = nodes.size();
  std::vector<S> prefix(m + 1, ScalarTraits<S>::zero());
  for (std::size_t i = 0; i < m; ++i) prefix[i + 1] = prefix[i] + nodes[i].coeff;
  for (std::size_t i = 0; i < m; ++i) result.phi.breakpoints.push_back(nodes[i].at);
  for (std::size_t i = 0; i + 1 < m; ++i) {
    if (ScalarTraits<S>::sign(nodes[i].at) >= 0) {
      result.phi.values.push_back(prefix[m] - prefix[i + 1]);
    } else {
      result.phi.values.push_back(-prefix[i + 1]);
    }
  }
  result.value = result.phi.integral_abs();
  return result;
}

template <Scalar S>
S lipschitz_violation(const LipFunction<S>& f) {
  const auto& space = *f.space();
  S worst = S(-1) * space.diameter();
  for (std::size_t i = 0; i < space.size(); ++i) {
    for (std::size_t j = i + 1; j < space.size(); ++j) {
      S e = ScalarTraits<S>::abs(S(f(i) - f(j))) - space.distance(i, j);
      if (worst < e) worst = e;
    }
  }
  return worst;
}

template <Scalar S>
CertifiedNorm<S> certify_norm(const Molecule<S>& mu, double tolerance) {
  CertifiedNorm<S> out;
  auto primal = norm_flow(mu);
  auto dual = norm_dual_lp(mu);
  out.primal = primal.value;
  out.dual = dual.value;
  const S diff = ScalarTraits<S>::abs(S(out.primal - out.dual));
  S denom = ScalarTraits<S>::abs(out.primal);
  if (denom < ScalarTraits<S>::one()) denom = ScalarTraits<S>::one();
  out.gap = diff / denom;
  const S violation = lipschitz_violation(*dual.potential);
  if constexpr (ScalarTraits<S>::is_exact) {
    out.potential_feasible = ScalarTraits<S>::sign(violation) <= 0;
  } else {
    out.potential_feasible = violation <= tolerance * std::max(1.0, mu.space()->diameter());
  }
  out.plan_balanced = primal.plan.balances(mu, tolerance);
  return out;
}

#define LIPFREE_INSTANTIATE(S)                                                                   \
  template DualNormResult<S> norm_dual_lp<S>(const Molecule<S>&);                                \
  template FlowNormResult<S> norm_flow<S>(const Molecule<S>&);                                   \
  template LineNormResult<S> norm_line<S>(const Molecule<S>&, std::span<const S>);               \
  template std::optional<std::vector<S>> infer_line_positions<S>(const MetricSpace<S>&);         \
  template S lipschitz_violation<S>(const LipFunction<S>&);                                      \
  template CertifiedNorm<S> certify_norm<S>(const Molecule<S>&, double);

LIPFREE_INSTANTIATE(Rational)
LIPFREE_INSTANTIATE(double)

#undef LIPFREE_INSTANTIATE

}  // namespace lipfree
