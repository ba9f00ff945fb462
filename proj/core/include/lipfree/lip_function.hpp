#pragma once

#include <span>
#include <vector>

#include "lipfree/metric_space.hpp"

namespace lipfree {

/// Real-valued function on a space with no base-point normalization
/// (weights, plateau functions).
template <Scalar S>
struct PointFunction {
  SpacePtr<S> space;
  std::vector<S> values;

  const S& operator()(std::size_t i) const { return values[i]; }
};

/// Element of Lip_0(M): a function on the points of M vanishing at the base.
template <Scalar S>
class LipFunction {
 public:
  /// Throws Error(invalid_argument) unless values[base] == 0 and the sizes
  /// agree.
  LipFunction(SpacePtr<S> space, std::vector<S> values);

  static LipFunction zero(SpacePtr<S> space);
  /// f(t) = d(t, 0).
  static LipFunction distance_to_base(SpacePtr<S> space);

  const SpacePtr<S>& space() const { return space_; }
  const std::vector<S>& values() const { return values_; }
  const S& operator()(std::size_t i) const { return values_[i]; }

  PointFunction<S> as_point_function() const { return {space_, values_}; }

 private:
  SpacePtr<S> space_;
  std::vector<S> values_;
};

template <Scalar S>
struct LipConstant {
  S value{};
  std::size_t x = 0;  // maximizing pair (meaningless when value == 0)
  std::size_t y = 0;
};

/// Exact max over pairs of |f(x) - f(y)| / d(x, y).
template <Scalar S>
LipConstant<S> lip_constant_with_witness(const MetricSpace<S>& space, std::span<const S> values);

template <Scalar S>
S lip_constant(const MetricSpace<S>& space, std::span<const S> values) {
  return lip_constant_with_witness(space, values).value;
}

template <Scalar S>
S lip_constant(const LipFunction<S>& f) {
  return lip_constant<S>(*f.space(), f.values());
}

template <Scalar S>
S lip_constant(const PointFunction<S>& f) {
  return lip_constant<S>(*f.space, f.values);
}

/// f~(z) = min_{y in K} (fK(y) + L d(z, y)). Throws
/// Error(partial_constant_exceeds_l) when fK is not L-Lipschitz on K.
template <Scalar S>
PointFunction<S> mcshane_extend_raw(SpacePtr<S> space, std::span<const std::size_t> subset,
                                    std::span<const S> partial, const S& lipschitz);

/// Base-vanishing variant: K must contain the base with fK(base) == 0.
template <Scalar S>
LipFunction<S> mcshane_extend(SpacePtr<S> space, std::span<const std::size_t> subset, std::span<const S> partial,
                              const S& lipschitz);

/// r-plateau at x: 1 on B(x, r), 0 off B(x, 2r), values in [0, 1],
/// Lipschitz constant <= 1/r. The partial function is extended at constant
/// 1/r and then clamped to [0, 1].
template <Scalar S>
PointFunction<S> plateau(SpacePtr<S> space, std::size_t x, const S& radius);

/// Pointwise product g * w. Vanishes at the base because g does.
template <Scalar S>
LipFunction<S> weighting_operator(const PointFunction<S>& weight, const LipFunction<S>& g);

/// (||w||_inf + sup_{x in supp w} d(0, x) Lip(w)) * Lip(g).
template <Scalar S>
S weighting_bound(const PointFunction<S>& weight, const LipFunction<S>& g);

}  // namespace lipfree
