#include "lipfree/network_simplex.hpp"

#include <algorithm>
#include <cmath>

#include "lipfree/error.hpp"

namespace lipfree {

template <Scalar S>
NetworkSimplex<S>::NetworkSimplex(std::size_t n, std::vector<S> cost, std::vector<S> supply, double tolerance)
    : n_(n), cost_(std::move(cost)), supply_(std::move(supply)) {
  if (cost_.size() != n_ * n_ || supply_.size() != n_) {
    throw Error(ErrorCode::invalid_argument, "cost matrix or supply vector has the wrong size");
  }
  S max_cost = ScalarTraits<S>::zero();
  for (const auto& c : cost_) {
    if (ScalarTraits<S>::sign(c) < 0) throw Error(ErrorCode::invalid_argument, "costs must be nonnegative");
    if (max_cost < c) max_cost = c;
  }
  if constexpr (ScalarTraits<S>::is_exact) {
    eps_ = ScalarTraits<S>::zero();
  } else {
    eps_ = tolerance * std::max(1.0, max_cost);
  }
  // Artificial cost dominates any path of real arcs.
  const S artificial = (max_cost + ScalarTraits<S>::one()) * S(static_cast<long>(n_ + 1));
  for (std::size_t u = 0; u < n_; ++u) {
    if (ScalarTraits<S>::sign(supply_[u]) >= 0) {
      arcs_.push_back({u, n_, supply_[u], ScalarTraits<S>::zero()});
    } else {
      arcs_.push_back({n_, u, S(-supply_[u]), artificial});
    }
  }
  rebuild();
}

template <Scalar S>
bool NetworkSimplex<S>::is_negative(const S& v) const {
  return v < -eps_;
}

template <Scalar S>
void NetworkSimplex<S>::rebuild() {
  const std::size_t total = n_ + 1;
  std::vector<std::vector<std::size_t>> incident(total);
  for (std::size_t a = 0; a < arcs_.size(); ++a) {
    incident[arcs_[a].tail].push_back(a);
    incident[arcs_[a].head].push_back(a);
  }
  parent_.assign(total, total);
  pred_.assign(total, arcs_.size());
  depth_.assign(total, 0);
  pi_.assign(total, ScalarTraits<S>::zero());
  std::vector<std::size_t> queue{n_};
  std::vector<char> seen(total, 0);
  seen[n_] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t u = queue[head];
    for (auto a : incident[u]) {
      const auto& arc = arcs_[a];
      const std::size_t v = arc.tail == u ? arc.head : arc.tail;
      if (seen[v]) continue;
      seen[v] = 1;
      parent_[v] = u;
      pred_[v] = a;
      depth_[v] = depth_[u] + 1;
      pi_[v] = arc.tail == u ? S(pi_[u] + arc.cost) : S(pi_[u] - arc.cost);
      queue.push_back(v);
    }
  }
  if (queue.size() != total) throw Error(ErrorCode::solver_failure, "spanning tree became disconnected");
}

template <Scalar S>
bool NetworkSimplex<S>::find_entering(std::size_t& from, std::size_t& to) {
  if (n_ < 2) return false;
  const std::size_t arcs = n_ * (n_ - 1);
  const auto block = std::max<std::size_t>(10, static_cast<std::size_t>(std::sqrt(static_cast<double>(arcs))) + 1);
  S best = ScalarTraits<S>::zero();
  bool found = false;
  std::size_t in_block = 0;
  for (std::size_t scanned = 0; scanned < arcs; ++scanned) {
    const std::size_t e = (next_arc_ + scanned) % arcs;
    const std::size_t i = e / (n_ - 1);
    const std::size_t k = e % (n_ - 1);
    const std::size_t j = k < i ? k : k + 1;
    S reduced = cost(i, j) + pi_[i] - pi_[j];
    if (is_negative(reduced) && (!found || reduced < best)) {
      best = reduced;
      from = i;
      to = j;
      found = true;
    }
    if (++in_block == block) {
      in_block = 0;
      if (found) {
        next_arc_ = (e + 1) % arcs;
        return true;
      }
    }
  }
  return found;
}

template <Scalar S>
void NetworkSimplex<S>::run(std::size_t max_pivots) {
  std::size_t first = 0;
  std::size_t second = 0;
  while (find_entering(first, second)) {
    if (pivots_++ >= max_pivots) throw Error(ErrorCode::solver_failure, "network simplex pivot budget exhausted");
    // Join node of the cycle closed by first -> second.
    std::size_t u = first;
    std::size_t v = second;
    while (u != v) {
      if (depth_[u] >= depth_[v]) {
        u = parent_[u];
      } else {
        v = parent_[v];
      }
    }
    const std::size_t join = u;
    // Leaving arc: the first blocking arc met when walking the cycle in
    // flow direction from the join (strict on the first side, non-strict
    // on the second), which keeps the tree strongly feasible.
    bool have = false;
    S delta{};
    std::size_t leaving = 0;
    for (std::size_t w = first; w != join; w = parent_[w]) {
      const auto& arc = arcs_[pred_[w]];
      if (arc.tail == w && (!have || arc.flow < delta)) {
        delta = arc.flow;
        leaving = w;
        have = true;
      }
    }
    for (std::size_t w = second; w != join; w = parent_[w]) {
      const auto& arc = arcs_[pred_[w]];
      if (arc.head == w && (!have || arc.flow <= delta)) {
        delta = arc.flow;
        leaving = w;
        have = true;
      }
    }
    if (!have) throw Error(ErrorCode::solver_failure, "unbounded cycle in network simplex");
    auto shift = [&](TreeArc& arc, bool increase) {
      if (increase) {
        arc.flow += delta;
      } else {
        arc.flow -= delta;
        if constexpr (!ScalarTraits<S>::is_exact) {
          if (arc.flow < 0) arc.flow = 0;
        }
      }
    };
    for (std::size_t w = first; w != join; w = parent_[w]) {
      auto& arc = arcs_[pred_[w]];
      shift(arc, arc.head == w);
    }
    for (std::size_t w = second; w != join; w = parent_[w]) {
      auto& arc = arcs_[pred_[w]];
      shift(arc, arc.tail == w);
    }
    arcs_[pred_[leaving]] = {first, second, delta, cost(first, second)};
    rebuild();
  }
  S stranded = ScalarTraits<S>::zero();
  S moved = ScalarTraits<S>::zero();
  for (const auto& arc : arcs_) {
    if (arc.tail == n_ || arc.head == n_) stranded += arc.flow;
  }
  for (const auto& s : supply_) {
    if (ScalarTraits<S>::sign(s) > 0) moved += s;
  }
  bool failed;
  if constexpr (ScalarTraits<S>::is_exact) {
    failed = !is_zero(stranded);
  } else {
    failed = stranded > 1e-9 * std::max(1.0, moved);
  }
  if (failed) throw Error(ErrorCode::solver_failure, "artificial arcs still carry flow; supplies do not balance");
}

template <Scalar S>
S NetworkSimplex<S>::total_cost() const {
  S total = ScalarTraits<S>::zero();
  for (const auto& arc : arcs_) {
    if (arc.tail != n_ && arc.head != n_) total += arc.flow * arc.cost;
  }
  return total;
}

template <Scalar S>
std::vector<typename NetworkSimplex<S>::Flow> NetworkSimplex<S>::flows() const {
  std::vector<Flow> out;
  for (const auto& arc : arcs_) {
    if (arc.tail == n_ || arc.head == n_) continue;
    if (ScalarTraits<S>::sign(arc.flow) > 0) out.push_back({arc.tail, arc.head, arc.flow});
  }
  std::sort(out.begin(), out.end(), [](const Flow& a, const Flow& b) {
    return a.from != b.from ? a.from < b.from : a.to < b.to;
  });
  return out;
}

template class NetworkSimplex<Rational>;
template class NetworkSimplex<double>;

}  // namespace lipfree
