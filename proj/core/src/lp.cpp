#include "lipfree/lp.hpp"

#include "lipfree/error.hpp"

namespace lipfree {

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration_limit";
  }
  return "unknown";
}

namespace {
// Consecutive degenerate pivots tolerated before switching to Bland's rule.
constexpr std::size_t kBlandAfter = 64;
}  // namespace

template <Scalar S>
LinearProgram<S>::LinearProgram(std::vector<S> objective, S tolerance)
    : n_(objective.size()), eps_(std::move(tolerance)), obj_(n_ + 2), aux_(n_ + 2), nonbasic_(n_ + 1) {
  for (std::size_t j = 0; j < n_; ++j) {
    obj_[j] = -objective[j];
    nonbasic_[j] = static_cast<long>(j);
  }
  nonbasic_[n_] = -1;
  aux_[n_] = ScalarTraits<S>::one();
}

template <Scalar S>
void LinearProgram<S>::add_constraint(const Coefficients& coeffs, const S& rhs) {
  std::vector<S> row(n_ + 2);
  row[n_ + 1] = rhs;
  if (!solved_once_) {
    for (const auto& [v, a] : coeffs) row[v] += a;
    row[n_] = S(-1);
  } else {
    // Substitute the current basis: basic variables are replaced by their
    // row expressions, nonbasic ones enter directly.
    std::vector<long> where(n_, -1);  // column of a nonbasic structural var
    for (std::size_t j = 0; j <= n_; ++j) {
      if (nonbasic_[j] >= 0 && static_cast<std::size_t>(nonbasic_[j]) < n_) where[nonbasic_[j]] = static_cast<long>(j);
    }
    std::vector<long> row_of(n_, -1);
    for (std::size_t i = 0; i < basic_.size(); ++i) {
      if (basic_[i] >= 0 && static_cast<std::size_t>(basic_[i]) < n_) row_of[basic_[i]] = static_cast<long>(i);
    }
    for (const auto& [v, a] : coeffs) {
      if (is_zero(a)) continue;
      if (where[v] >= 0) {
        row[where[v]] += a;
      } else {
        const auto& source = rows_[row_of[v]];
        for (std::size_t j = 0; j <= n_ + 1; ++j) {
          if (!is_zero(source[j])) row[j] -= a * source[j];
        }
      }
    }
  }
  rows_.push_back(std::move(row));
  basic_.push_back(static_cast<long>(n_ + rows_.size() - 1));
}

template <Scalar S>
void LinearProgram<S>::pivot(std::size_t r, std::size_t s) {
  ++pivots_;
  auto& prow = rows_[r];
  const S inv = ScalarTraits<S>::one() / prow[s];
  std::vector<std::size_t> nonzero;
  for (std::size_t j = 0; j <= n_ + 1; ++j) {
    if (j != s && !is_zero(prow[j])) nonzero.push_back(j);
  }
  auto eliminate = [&](std::vector<S>& row) {
    if (is_zero(row[s])) return;
    const S factor = row[s] * inv;
    for (auto j : nonzero) row[j] -= prow[j] * factor;
    row[s] = -factor;
  };
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (i != r) eliminate(rows_[i]);
  }
  eliminate(obj_);
  eliminate(aux_);
  for (auto j : nonzero) prow[j] *= inv;
  prow[s] = inv;
  std::swap(basic_[r], nonbasic_[s]);
}

template <Scalar S>
bool LinearProgram<S>::primal(std::vector<S>& row, bool phase_one, std::size_t max_pivots, LpStatus& status) {
  while (true) {
    if (pivots_ >= max_pivots) {
      status = LpStatus::iteration_limit;
      return false;
    }
    const bool bland = degenerate_run_ >= kBlandAfter;
    long s = -1;
    for (std::size_t j = 0; j <= n_; ++j) {
      if (!phase_one && nonbasic_[j] == -1) continue;
      if (!negative(row[j])) continue;
      if (s < 0) {
        s = static_cast<long>(j);
      } else if (bland) {
        if (nonbasic_[j] < nonbasic_[s]) s = static_cast<long>(j);
      } else if (row[j] < row[s] || (row[j] == row[s] && nonbasic_[j] < nonbasic_[s])) {
        s = static_cast<long>(j);
      }
    }
    if (s < 0) return true;
    long r = -1;
    S best_ratio{};
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (!positive(rows_[i][s])) continue;
      S ratio = rows_[i][n_ + 1] / rows_[i][s];
      if (r < 0 || ratio < best_ratio || (ratio == best_ratio && basic_[i] < basic_[r])) {
        r = static_cast<long>(i);
        best_ratio = ratio;
      }
    }
    if (r < 0) {
      status = LpStatus::unbounded;
      return false;
    }
    degenerate_run_ = is_zero(rows_[r][n_ + 1]) ? degenerate_run_ + 1 : 0;
    pivot(static_cast<std::size_t>(r), static_cast<std::size_t>(s));
  }
}

template <Scalar S>
bool LinearProgram<S>::dual(std::size_t max_pivots, LpStatus& status) {
  while (true) {
    if (pivots_ >= max_pivots) {
      status = LpStatus::iteration_limit;
      return false;
    }
    const bool bland = degenerate_run_ >= kBlandAfter;
    long r = -1;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (!negative(rows_[i][n_ + 1])) continue;
      if (r < 0 || (bland ? basic_[i] < basic_[r] : rows_[i][n_ + 1] < rows_[r][n_ + 1])) r = static_cast<long>(i);
    }
    if (r < 0) return true;
    const auto& row = rows_[r];
    long s = -1;
    S best_ratio{};
    for (std::size_t j = 0; j <= n_; ++j) {
      if (nonbasic_[j] == -1 || !negative(row[j])) continue;
      S ratio = obj_[j] / S(-row[j]);
      if (s < 0 || ratio < best_ratio || (ratio == best_ratio && nonbasic_[j] < nonbasic_[s])) {
        s = static_cast<long>(j);
        best_ratio = ratio;
      }
    }
    if (s < 0) {
      status = LpStatus::infeasible;
      return false;
    }
    degenerate_run_ = is_zero(best_ratio) ? degenerate_run_ + 1 : 0;
    pivot(static_cast<std::size_t>(r), static_cast<std::size_t>(s));
  }
}

template <Scalar S>
LpStatus LinearProgram<S>::solve(std::size_t max_pivots) {
  LpStatus status = LpStatus::optimal;
  degenerate_run_ = 0;
  if (!solved_once_) {
    solved_once_ = true;
    long r = -1;
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      if (r < 0 || rows_[i][n_ + 1] < rows_[r][n_ + 1]) r = static_cast<long>(i);
    }
    if (r >= 0 && negative(rows_[r][n_ + 1])) {
      // Phase one: drive the single artificial variable back to zero.
      pivot(static_cast<std::size_t>(r), n_);
      if (!primal(aux_, true, max_pivots, status)) return status == LpStatus::unbounded ? LpStatus::infeasible : status;
      if (negative(aux_[n_ + 1])) return LpStatus::infeasible;
      for (std::size_t i = 0; i < rows_.size(); ++i) {
        if (basic_[i] != -1) continue;
        long s = -1;
        for (std::size_t j = 0; j <= n_; ++j) {
          if (is_zero(rows_[i][j])) continue;
          if (s < 0 || ScalarTraits<S>::abs(rows_[i][s]) < ScalarTraits<S>::abs(rows_[i][j])) s = static_cast<long>(j);
        }
        if (s >= 0) pivot(i, static_cast<std::size_t>(s));
      }
    }
  } else if (!dual(max_pivots, status)) {
    return status;
  }
  if (!primal(obj_, false, max_pivots, status)) return status;
  return LpStatus::optimal;
}

template <Scalar S>
std::vector<S> LinearProgram<S>::solution() const {
  std::vector<S> x(n_, ScalarTraits<S>::zero());
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (basic_[i] >= 0 && static_cast<std::size_t>(basic_[i]) < n_) x[basic_[i]] = rows_[i][n_ + 1];
  }
  return x;
}

template class LinearProgram<Rational>;
template class LinearProgram<double>;

}  // namespace lipfree
