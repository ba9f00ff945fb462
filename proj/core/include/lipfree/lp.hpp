#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "lipfree/rational.hpp"

namespace lipfree {

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

std::string to_string(LpStatus status);

/// maximize c.x subject to A x <= b, x >= 0, on a dense tableau.
///
/// Constraints may be added after a solve; the new row is rewritten in terms
/// of the current nonbasic variables and the next solve restores primal
/// feasibility with the dual simplex method, so cutting-plane loops do not
/// restart from scratch. Pricing is Dantzig's rule with a switch to Bland's
/// rule after a run of degenerate pivots. With an exact scalar the tolerance
/// is zero and every comparison is exact.
template <Scalar S>
class LinearProgram {
 public:
  using Coefficients = std::vector<std::pair<std::size_t, S>>;

  explicit LinearProgram(std::vector<S> objective, S tolerance = S(0));

  void add_constraint(const Coefficients& coeffs, const S& rhs);
  LpStatus solve(std::size_t max_pivots = 1'000'000);

  std::size_t num_variables() const { return n_; }
  std::size_t num_constraints() const { return rows_.size(); }
  std::size_t pivots() const { return pivots_; }
  /// Objective value of the current basis (meaningful after `optimal`).
  const S& value() const { return obj_[n_ + 1]; }
  std::vector<S> solution() const;

 private:
  void pivot(std::size_t r, std::size_t s);
  bool primal(std::vector<S>& row, bool phase_one, std::size_t max_pivots, LpStatus& status);
  bool dual(std::size_t max_pivots, LpStatus& status);
  bool negative(const S& v) const { return v < -eps_; }
  bool positive(const S& v) const { return eps_ < v; }

  std::size_t n_;
  S eps_;
  // Row i reads x_B[i] = rows_[i][n+1] - sum_j rows_[i][j] x_N[j]. Column n
  // belongs to the phase-one artificial variable (id -1).
  std::vector<std::vector<S>> rows_;
  std::vector<S> obj_;
  std::vector<S> aux_;
  std::vector<long> basic_;
  std::vector<long> nonbasic_;
  bool solved_once_ = false;
  std::size_t pivots_ = 0;
  std::size_t degenerate_run_ = 0;
};

}  // namespace lipfree
