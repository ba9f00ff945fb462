#include "lipfree/psi.hpp"

#include <algorithm>
#include <numeric>

#include "lipfree/error.hpp"

namespace lipfree {

template <Scalar S>
IntervalFamily<S>::IntervalFamily(std::vector<OpenInterval<S>> intervals) {
  const S zero = ScalarTraits<S>::zero();
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const auto& iv = intervals[i];
    if (!(iv.lo < iv.hi)) throw Error(ErrorCode::invalid_argument, "empty interval at index " + std::to_string(i));
    const bool placed = iv.side == Side::positive ? !(iv.lo < zero) : !(zero < iv.hi);
    if (!placed) throw Error(ErrorCode::invalid_argument, "interval " + std::to_string(i) + " is on the wrong side of 0");
  }
  std::vector<std::size_t> order(intervals.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return intervals[a].lo < intervals[b].lo; });
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (intervals[order[k]].lo < intervals[order[k - 1]].hi) {
      throw Error(ErrorCode::overlapping_intervals, "intervals overlap",
                  {std::to_string(order[k - 1]), std::to_string(order[k])});
    }
  }
  for (auto& iv : intervals) (iv.side == Side::positive ? positive_ : negative_).push_back(std::move(iv));
}

template <Scalar S>
S IntervalFamily<S>::tail_length(std::size_t n) const {
  S total = ScalarTraits<S>::zero();
  for (std::size_t j = n; j < positive_.size(); ++j) total += positive_[j].length();
  for (std::size_t j = n; j < negative_.size(); ++j) total += negative_[j].length();
  return total;
}

template <Scalar S>
PsiFunction<S>::PsiFunction(const IntervalFamily<S>& family, std::size_t n) : n_(n) {
  std::vector<OpenInterval<S>> pos(family.positive().begin(),
                                   family.positive().begin() + std::min(n, family.positive().size()));
  std::vector<OpenInterval<S>> neg(family.negative().begin(),
                                   family.negative().begin() + std::min(n, family.negative().size()));
  std::sort(pos.begin(), pos.end(), [](const auto& a, const auto& b) { return a.hi < b.hi; });
  std::sort(neg.begin(), neg.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
  S running = ScalarTraits<S>::zero();
  right_sums_.push_back(running);
  for (const auto& iv : pos) {
    right_ends_.push_back(iv.hi);
    running += iv.length();
    right_sums_.push_back(running);
  }
  left_sums_.assign(neg.size() + 1, ScalarTraits<S>::zero());
  for (std::size_t i = neg.size(); i-- > 0;) left_sums_[i] = left_sums_[i + 1] + neg[i].length();
  for (const auto& iv : neg) left_ends_.push_back(iv.lo);
}

template <Scalar S>
S PsiFunction<S>::operator()(const S& x) const {
  // Positive intervals with sup <= x, negative intervals with inf >= x.
  const auto passed = std::upper_bound(right_ends_.begin(), right_ends_.end(), x) - right_ends_.begin();
  const auto ahead = std::lower_bound(left_ends_.begin(), left_ends_.end(), x) - left_ends_.begin();
  return right_sums_[static_cast<std::size_t>(passed)] - left_sums_[static_cast<std::size_t>(ahead)];
}

template class IntervalFamily<Rational>;
template class IntervalFamily<double>;
template class PsiFunction<Rational>;
template class PsiFunction<double>;

}  // namespace lipfree
