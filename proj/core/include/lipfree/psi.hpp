#pragma once

#include <algorithm>
#include <vector>

#include "lipfree/rational.hpp"

namespace lipfree {

enum class Side { positive, negative };

/// Open interval (lo, hi) of the complement of a closed set containing 0.
/// Positive intervals lie in (0, inf), negative ones in (-inf, 0).
template <Scalar S>
struct OpenInterval {
  S lo;
  S hi;
  Side side = Side::positive;

  S length() const { return hi - lo; }
};

/// Pairwise disjoint open intervals, indexed separately on each side in the
/// order given (construction stage, then left to right).
template <Scalar S>
class IntervalFamily {
 public:
  /// Throws Error(overlapping_intervals) with the two indices on overlap and
  /// Error(invalid_argument) for an empty interval or one on the wrong side.
  explicit IntervalFamily(std::vector<OpenInterval<S>> intervals);

  const std::vector<OpenInterval<S>>& positive() const { return positive_; }
  const std::vector<OpenInterval<S>>& negative() const { return negative_; }
  /// Largest per-side count; psi_n with n >= this uses every interval.
  std::size_t depth() const { return std::max(positive_.size(), negative_.size()); }

  /// sum over j > n of lambda(I_j^+) + lambda(I_j^-).
  S tail_length(std::size_t n) const;

 private:
  std::vector<OpenInterval<S>> positive_;
  std::vector<OpenInterval<S>> negative_;
};

/// psi_n(x) = sum_{j <= n, x >= sup I_j^+} lambda(I_j^+)
///          - sum_{j <= n, x <= inf I_j^-} lambda(I_j^-).
/// Finitely valued, 0 at 0, 1-Lipschitz on the complement of the intervals.
template <Scalar S>
class PsiFunction {
 public:
  PsiFunction(const IntervalFamily<S>& family, std::size_t n);

  S operator()(const S& x) const;
  std::size_t n() const { return n_; }

 private:
  // Jump points with cumulative sums, sorted; one list per side.
  std::vector<S> right_ends_;
  std::vector<S> right_sums_;
  std::vector<S> left_ends_;
  std::vector<S> left_sums_;
  std::size_t n_;
};

template <Scalar S>
PsiFunction<S> psi_n(const IntervalFamily<S>& family, std::size_t n) {
  return PsiFunction<S>(family, n);
}

}  // namespace lipfree
