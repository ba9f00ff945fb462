#include "lipfree/lip_function.hpp"

#include <algorithm>

namespace lipfree {

template <Scalar S>
LipFunction<S>::LipFunction(SpacePtr<S> space, std::vector<S> values)
    : space_(std::move(space)), values_(std::move(values)) {
  if (values_.size() != space_->size()) {
    throw Error(ErrorCode::invalid_argument, "function has " + std::to_string(values_.size()) +
                                                 " values for a space of " + std::to_string(space_->size()));
  }
  if (!is_zero(values_[space_->base()])) {
    throw Error(ErrorCode::invalid_argument, "Lip_0 functions vanish at the base point", {space_->base_label()});
  }
}

template <Scalar S>
LipFunction<S> LipFunction<S>::zero(SpacePtr<S> space) {
  const auto n = space->size();
  return LipFunction(std::move(space), std::vector<S>(n, ScalarTraits<S>::zero()));
}

template <Scalar S>
LipFunction<S> LipFunction<S>::distance_to_base(SpacePtr<S> space) {
  std::vector<S> values(space->size());
  for (std::size_t i = 0; i < space->size(); ++i) values[i] = space->distance(i, space->base());
  return LipFunction(std::move(space), std::move(values));
}

template <Scalar S>
LipConstant<S> lip_constant_with_witness(const MetricSpace<S>& space, std::span<const S> values) {
  LipConstant<S> best{ScalarTraits<S>::zero(), 0, 0};
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = i + 1; j < values.size(); ++j) {
      S slope = ScalarTraits<S>::abs(S(values[i] - values[j])) / space.distance(i, j);
      if (best.value < slope) best = {slope, i, j};
    }
  }
  return best;
}

template <Scalar S>
PointFunction<S> mcshane_extend_raw(SpacePtr<S> space, std::span<const std::size_t> subset,
                                    std::span<const S> partial, const S& lipschitz) {
  if (subset.size() != partial.size() || subset.empty()) {
    throw Error(ErrorCode::invalid_argument, "extension needs a nonempty subset with one value per point");
  }
  for (std::size_t a = 0; a < subset.size(); ++a) {
    for (std::size_t b = a + 1; b < subset.size(); ++b) {
      S gap = ScalarTraits<S>::abs(S(partial[a] - partial[b]));
      S allowed = lipschitz * space->distance(subset[a], subset[b]);
      bool exceeds = gap > allowed;
      if constexpr (!ScalarTraits<S>::is_exact) exceeds = gap > allowed + 1e-12 * std::max(1.0, allowed);
      if (exceeds) {
        throw Error(ErrorCode::partial_constant_exceeds_l, "partial function is not L-Lipschitz",
                    {space->label(subset[a]), space->label(subset[b])});
      }
    }
  }
  std::vector<S> values(space->size());
  for (std::size_t z = 0; z < space->size(); ++z) {
    S best = partial[0] + lipschitz * space->distance(z, subset[0]);
    for (std::size_t a = 1; a < subset.size(); ++a) {
      S candidate = partial[a] + lipschitz * space->distance(z, subset[a]);
      if (candidate < best) best = candidate;
    }
    values[z] = best;
  }
  // Points of K keep their values exactly.
  for (std::size_t a = 0; a < subset.size(); ++a) values[subset[a]] = partial[a];
  return {std::move(space), std::move(values)};
}

template <Scalar S>
LipFunction<S> mcshane_extend(SpacePtr<S> space, std::span<const std::size_t> subset, std::span<const S> partial,
                              const S& lipschitz) {
  const auto it = std::find(subset.begin(), subset.end(), space->base());
  if (it == subset.end() || !is_zero(partial[static_cast<std::size_t>(it - subset.begin())])) {
    throw Error(ErrorCode::invalid_argument, "subset must contain the base point with value 0");
  }
  auto raw = mcshane_extend_raw<S>(space, subset, partial, lipschitz);
  return LipFunction<S>(std::move(raw.space), std::move(raw.values));
}

template <Scalar S>
PointFunction<S> plateau(SpacePtr<S> space, std::size_t x, const S& radius) {
  if (ScalarTraits<S>::sign(radius) <= 0) throw Error(ErrorCode::invalid_argument, "plateau radius must be positive");
  const S two_r = radius + radius;
  std::vector<std::size_t> subset;
  std::vector<S> partial;
  for (std::size_t z = 0; z < space->size(); ++z) {
    const S d = space->distance(x, z);
    if (d <= radius) {
      subset.push_back(z);
      partial.push_back(ScalarTraits<S>::one());
    } else if (two_r < d) {
      subset.push_back(z);
      partial.push_back(ScalarTraits<S>::zero());
    }
  }
  const S slope = ScalarTraits<S>::one() / radius;
  auto extended = mcshane_extend_raw<S>(space, subset, partial, slope);
  for (auto& v : extended.values) {
    if (v < ScalarTraits<S>::zero()) v = ScalarTraits<S>::zero();
    if (ScalarTraits<S>::one() < v) v = ScalarTraits<S>::one();
  }
  return extended;
}

template <Scalar S>
LipFunction<S> weighting_operator(const PointFunction<S>& weight, const LipFunction<S>& g) {
  if (weight.space != g.space()) throw Error(ErrorCode::space_mismatch, "weight and function live on different spaces");
  std::vector<S> values(g.values().size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = weight.values[i] * g(i);
  return LipFunction<S>(g.space(), std::move(values));
}

template <Scalar S>
S weighting_bound(const PointFunction<S>& weight, const LipFunction<S>& g) {
  const auto& space = *g.space();
  S sup_norm = ScalarTraits<S>::zero();
  S reach = ScalarTraits<S>::zero();
  for (std::size_t i = 0; i < space.size(); ++i) {
    const S magnitude = ScalarTraits<S>::abs(weight.values[i]);
    if (sup_norm < magnitude) sup_norm = magnitude;
    if (!is_zero(weight.values[i])) {
      const S d = space.distance(space.base(), i);
      if (reach < d) reach = d;
    }
  }
  return (sup_norm + reach * lip_constant(weight)) * lip_constant(g);
}

#define LIPFREE_INSTANTIATE(S)                                                                                   \
  template class LipFunction<S>;                                                                                 \
  template LipConstant<S> lip_constant_with_witness<S>(const MetricSpace<S>&, std::span<const S>);               \
  template PointFunction<S> mcshane_extend_raw<S>(SpacePtr<S>, std::span<const std::size_t>, std::span<const S>, \
                                                  const S&);                                                     \
  template LipFunction<S> mcshane_extend<S>(SpacePtr<S>, std::span<const std::size_t>, std::span<const S>,       \
                                            const S&);                                                           \
  template PointFunction<S> plateau<S>(SpacePtr<S>, std::size_t, const S&);                                      \
  template LipFunction<S> weighting_operator<S>(const PointFunction<S>&, const LipFunction<S>&);                 \
  template S weighting_bound<S>(const PointFunction<S>&, const LipFunction<S>&);

LIPFREE_INSTANTIATE(Rational)
LIPFREE_INSTANTIATE(double)

#undef LIPFREE_INSTANTIATE

}  // namespace lipfree
