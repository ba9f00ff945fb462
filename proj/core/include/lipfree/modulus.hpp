#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "lipfree/lip_function.hpp"
#include "lipfree/point_map.hpp"

namespace lipfree {

/// Nondecreasing omega: [0, inf) -> [0, inf) with omega(0) = 0, either
/// t^alpha (0 < alpha <= 1) or piecewise linear through given breakpoints,
/// optionally inf-convolved with n*Id. Both forms are continuous, hence
/// left continuous.
template <Scalar S>
class ModulusFunction {
 public:
  enum class Kind { power, pwl };

  /// Error(alpha_out_of_range) unless 0 < alpha <= 1.
  static ModulusFunction power(const Rational& alpha, S c1 = ScalarTraits<S>::one());
  /// Breakpoints 0 = b_0 < b_1 < ... with values v_0 = 0 <= v_1 <= ...;
  /// slope `final_slope` after the last breakpoint. Error(not_monotone)
  /// otherwise.
  static ModulusFunction pwl(std::vector<S> breakpoints, std::vector<S> values,
                             S final_slope = ScalarTraits<S>::zero(), S c1 = ScalarTraits<S>::one());

  Kind kind() const { return kind_; }
  const Rational& alpha() const { return alpha_; }
  const std::vector<S>& breakpoints() const { return breakpoints_; }
  const std::vector<S>& values() const { return values_; }
  const S& final_slope() const { return final_slope_; }
  /// Subadditivity constant: omega(a + b) <= omega(a) + C1 omega(b).
  const S& c1() const { return c1_; }
  bool left_continuous() const { return true; }
  /// n when this is omega inf-convolved with n*Id.
  const std::optional<S>& cap() const { return cap_; }

  /// Exact in rational mode; t^alpha throws Error(inexact_power) when the
  /// value is irrational and actually needed.
  S operator()(const S& t) const;

  /// Value without the inf-convolution.
  S uncapped(const S& t) const;

  /// ω □ n·Id. Nesting keeps the smaller slope; a piecewise-linear omega
  /// that is already n-Lipschitz comes back unchanged.
  ModulusFunction inf_convolve(const S& n) const;

 private:
  ModulusFunction() = default;

  Kind kind_ = Kind::pwl;
  Rational alpha_{1};
  std::vector<S> breakpoints_;
  std::vector<S> values_;
  S final_slope_{};
  S c1_{};
  std::optional<S> cap_;
};

template <Scalar S>
ModulusFunction<S> inf_convolve(const ModulusFunction<S>& omega, const S& n) {
  return omega.inf_convolve(n);
}

/// The properties the separation argument needs from omega_n, checked on
/// every pair (or triple) of a sample grid. Each field names the first
/// failing sample when false.
template <Scalar S>
struct InfConvolutionReport {
  bool nondecreasing = true;   // (i)
  bool below_omega = true;     // omega_n <= omega
  bool below_next = true;      // omega_n <= omega_{n+1}
  bool n_lipschitz = true;
  bool modulus_bound = true;   // (iii): |w_n(s) - w_n(t)| <= C1 omega(|s - t|)
  bool subadditive = true;     // omega_n(a + b) <= omega_n(a) + C1 omega_n(b)
  S max_gap{};                 // max over the grid of omega - omega_n, for (ii)
  std::vector<S> failing;

  bool ok() const { return nondecreasing && below_omega && below_next && n_lipschitz && modulus_bound && subadditive; }
};

template <Scalar S>
InfConvolutionReport<S> check_inf_convolution(const ModulusFunction<S>& omega, const S& n, const std::vector<S>& grid);

/// First (a, b) on the grid with omega(a + b) > omega(a) + C1 omega(b).
template <Scalar S>
std::optional<std::pair<S, S>> subadditivity_violation(const ModulusFunction<S>& omega, const std::vector<S>& grid);

template <Scalar S>
struct SeparationFamily {
  LipFunction<S> g;      // g_n on the codomain
  LipFunction<S> pulled; // g_n o f on the domain
  S pulled_lip;          // Lip(g_n o f)
  S bound;               // C1 / C2
};

/// g_n(z) = omega_n(d(z, f(y))) - omega_n(d(f(y), 0)). First checks
/// C2 omega(d(f(a), f(b))) <= d(a, b) <= omega(d(f(a), f(b))) on every pair,
/// throwing Error(moduli_hypothesis_violated) with the pair otherwise.
template <Scalar S>
SeparationFamily<S> separation_family(const PointMap<S>& f, const ModulusFunction<S>& omega, const S& c2,
                                      const S& n, std::size_t y);

}  // namespace lipfree
