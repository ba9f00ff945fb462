#pragma once

#include <cstddef>
#include <vector>

#include "lipfree/rational.hpp"

namespace lipfree {

/// Uncapacitated min-cost flow on the complete directed graph over n nodes.
/// supply[i] > 0 is a source, < 0 a sink; supplies must sum to zero and
/// costs must be nonnegative (so no negative cycles exist).
///
/// Primal network simplex started from an artificial root with a strongly
/// feasible tree, leaving arcs chosen by the Cunningham rule, so the method
/// terminates without cycling. Pricing is block search over the n(n-1)
/// arcs. Tree structure is rebuilt from the arc list after every pivot,
/// which costs O(n) and keeps the bookkeeping simple.
template <Scalar S>
class NetworkSimplex {
 public:
  struct Flow {
    std::size_t from;
    std::size_t to;
    S amount;
  };

  /// cost is row-major n*n; tolerance is ignored for exact scalars.
  NetworkSimplex(std::size_t n, std::vector<S> cost, std::vector<S> supply, double tolerance = 1e-12);

  /// Throws Error(solver_failure) if the pivot budget is exhausted or
  /// artificial flow remains.
  void run(std::size_t max_pivots = 10'000'000);

  S total_cost() const;
  /// Positive flows on real arcs.
  std::vector<Flow> flows() const;
  /// Node potentials pi with cost(i,j) + pi[i] - pi[j] >= 0 at optimality;
  /// normalized so that pi[anchor] == 0 by the caller.
  const std::vector<S>& potentials() const { return pi_; }
  std::size_t pivots() const { return pivots_; }

 private:
  struct TreeArc {
    std::size_t tail;  // node ids; n_ is the root
    std::size_t head;
    S flow;
    S cost;
  };

  const S& cost(std::size_t i, std::size_t j) const { return cost_[i * n_ + j]; }
  void rebuild();
  bool find_entering(std::size_t& from, std::size_t& to);
  bool is_negative(const S& v) const;

  std::size_t n_;
  std::vector<S> cost_;
  std::vector<S> supply_;
  S eps_;
  std::vector<TreeArc> arcs_;  // n_ tree arcs
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> pred_;  // index of the tree arc joining a node to its parent
  std::vector<std::size_t> depth_;
  std::vector<S> pi_;
  std::size_t next_arc_ = 0;
  std::size_t pivots_ = 0;
};

}  // namespace lipfree
