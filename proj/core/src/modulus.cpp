#include "lipfree/modulus.hpp"

#include <algorithm>
#include <cmath>

namespace lipfree {

namespace {

// a <= b, with a relative 1e-12 allowance in floating mode.
template <Scalar S>
bool leq(const S& a, const S& b) {
  if constexpr (ScalarTraits<S>::is_exact) {
    return a <= b;
  } else {
    return a <= b + 1e-12 * std::max(1.0, std::fabs(b));
  }
}

}  // namespace

template <Scalar S>
ModulusFunction<S> ModulusFunction<S>::power(const Rational& alpha, S c1) {
  if (sgn(alpha) <= 0 || alpha > 1) {
    throw Error(ErrorCode::alpha_out_of_range, "modulus exponent must lie in (0, 1], got " + format_rational(alpha));
  }
  if (c1 < ScalarTraits<S>::one()) throw Error(ErrorCode::invalid_argument, "C1 must be at least 1");
  ModulusFunction w;
  w.kind_ = Kind::power;
  w.alpha_ = alpha;
  w.c1_ = std::move(c1);
  return w;
}

template <Scalar S>
ModulusFunction<S> ModulusFunction<S>::pwl(std::vector<S> breakpoints, std::vector<S> values, S final_slope, S c1) {
  if (breakpoints.empty() || breakpoints.size() != values.size()) {
    throw Error(ErrorCode::invalid_argument, "breakpoints and values must be nonempty and of equal length");
  }
  if (!is_zero(breakpoints.front()) || !is_zero(values.front())) {
    throw Error(ErrorCode::not_monotone, "a modulus starts at omega(0) = 0");
  }
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    if (!(breakpoints[i - 1] < breakpoints[i])) {
      throw Error(ErrorCode::invalid_argument, "breakpoints must be strictly increasing");
    }
    if (values[i] < values[i - 1]) {
      throw Error(ErrorCode::not_monotone, "values decrease after breakpoint " + ScalarTraits<S>::to_string(breakpoints[i - 1]));
    }
  }
  if (ScalarTraits<S>::sign(final_slope) < 0) throw Error(ErrorCode::not_monotone, "negative final slope");
  if (c1 < ScalarTraits<S>::one()) throw Error(ErrorCode::invalid_argument, "C1 must be at least 1");
  ModulusFunction w;
  w.kind_ = Kind::pwl;
  w.breakpoints_ = std::move(breakpoints);
  w.values_ = std::move(values);
  w.final_slope_ = std::move(final_slope);
  w.c1_ = std::move(c1);
  return w;
}

template <Scalar S>
S ModulusFunction<S>::uncapped(const S& t) const {
  if (ScalarTraits<S>::sign(t) < 0) throw Error(ErrorCode::invalid_argument, "modulus evaluated at a negative argument");
  if (kind_ == Kind::power) {
    if (is_zero(t)) return ScalarTraits<S>::zero();
    if constexpr (ScalarTraits<S>::is_exact) {
      auto v = exact_power(t, alpha_);
      if (!v) {
        throw Error(ErrorCode::inexact_power,
                    format_rational(t) + "^" + format_rational(alpha_) + " is irrational; use floating mode");
      }
      return *v;
    } else {
      return std::pow(t, alpha_.get_d());
    }
  }
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
  const auto i = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
  if (i + 1 == breakpoints_.size()) return values_[i] + final_slope_ * (t - breakpoints_[i]);
  const S slope = (values_[i + 1] - values_[i]) / (breakpoints_[i + 1] - breakpoints_[i]);
  return values_[i] + slope * (t - breakpoints_[i]);
}

template <Scalar S>
S ModulusFunction<S>::operator()(const S& t) const {
  if (!cap_) return uncapped(t);
  const S& n = *cap_;
  if (ScalarTraits<S>::sign(t) < 0) throw Error(ErrorCode::invalid_argument, "modulus evaluated at a negative argument");
  if (kind_ == Kind::power) {
    // a -> t^alpha + n (s - a) is concave, so the infimum sits at a = 0 or
    // a = s: omega_n(s) = min(n s, s^alpha).
    const S linear = n * t;
    if constexpr (ScalarTraits<S>::is_exact) {
      if (is_zero(t)) return ScalarTraits<S>::zero();
      // n s <= s^(p/q)  <=>  (n s)^q <= s^p, decided without the root.
      const auto p = alpha_.get_num().get_ui();
      const auto q = alpha_.get_den().get_ui();
      if (pow_rational(linear, q) <= pow_rational(t, p)) return linear;
      return uncapped(t);
    } else {
      return std::min(linear, uncapped(t));
    }
  }
  // Piecewise linear: the minimum over a in [0, s] sits at a breakpoint or
  // at a = s.
  S best = uncapped(t);
  for (std::size_t i = 0; i < breakpoints_.size() && breakpoints_[i] <= t; ++i) {
    S candidate = values_[i] + n * (t - breakpoints_[i]);
    if (candidate < best) best = candidate;
  }
  return best;
}

template <Scalar S>
ModulusFunction<S> ModulusFunction<S>::inf_convolve(const S& n) const {
  if (ScalarTraits<S>::sign(n) <= 0) throw Error(ErrorCode::invalid_argument, "inf-convolution slope must be positive");
  ModulusFunction out = *this;
  if (cap_) {
    if (n < *cap_) out.cap_ = n;
    return out;
  }
  if (kind_ == Kind::pwl) {
    bool within = final_slope_ <= n;
    for (std::size_t i = 0; i + 1 < breakpoints_.size() && within; ++i) {
      within = values_[i + 1] - values_[i] <= n * (breakpoints_[i + 1] - breakpoints_[i]);
    }
    if (within) return out;
  }
  out.cap_ = n;
  return out;
}

template <Scalar S>
InfConvolutionReport<S> check_inf_convolution(const ModulusFunction<S>& omega, const S& n, const std::vector<S>& grid) {
  InfConvolutionReport<S> report;
  const auto wn = omega.inf_convolve(n);
  const auto wnext = omega.inf_convolve(S(n + ScalarTraits<S>::one()));
  std::vector<S> pts = grid;
  std::sort(pts.begin(), pts.end());
  std::vector<S> vw, vn, vnext;
  for (const auto& t : pts) {
    vw.push_back(omega(t));
    vn.push_back(wn(t));
    vnext.push_back(wnext(t));
  }
  auto fail = [&](bool& flag, std::initializer_list<S> at) {
    if (flag) report.failing.insert(report.failing.end(), at.begin(), at.end());
    flag = false;
  };
  report.max_gap = ScalarTraits<S>::zero();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (!leq(vn[i], vw[i])) fail(report.below_omega, {pts[i]});
    if (!leq(vn[i], vnext[i])) fail(report.below_next, {pts[i]});
    if (report.max_gap < vw[i] - vn[i]) report.max_gap = vw[i] - vn[i];
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const S rise = vn[j] - vn[i];
      const S run = pts[j] - pts[i];
      if (!leq(vn[i], vn[j])) fail(report.nondecreasing, {pts[i], pts[j]});
      if (!leq(ScalarTraits<S>::abs(rise), S(n * run))) fail(report.n_lipschitz, {pts[i], pts[j]});
      if (!leq(ScalarTraits<S>::abs(rise), S(omega.c1() * omega(run)))) fail(report.modulus_bound, {pts[i], pts[j]});
    }
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (!leq(wn(S(pts[i] + pts[j])), S(vn[i] + omega.c1() * vn[j]))) fail(report.subadditive, {pts[i], pts[j]});
    }
  }
  return report;
}

template <Scalar S>
std::optional<std::pair<S, S>> subadditivity_violation(const ModulusFunction<S>& omega, const std::vector<S>& grid) {
  for (const auto& a : grid) {
    for (const auto& b : grid) {
      if (!leq(omega(S(a + b)), S(omega(a) + omega.c1() * omega(b)))) return std::pair{a, b};
    }
  }
  return std::nullopt;
}

template <Scalar S>
SeparationFamily<S> separation_family(const PointMap<S>& f, const ModulusFunction<S>& omega, const S& c2,
                                      const S& n, std::size_t y) {
  const auto& m = *f.domain();
  const auto& target = *f.codomain();
  if (y >= m.size()) throw Error(ErrorCode::unknown_label, "point index out of range");
  if (ScalarTraits<S>::sign(c2) <= 0) throw Error(ErrorCode::invalid_argument, "C2 must be positive");
  for (std::size_t a = 0; a < m.size(); ++a) {
    for (std::size_t b = a + 1; b < m.size(); ++b) {
      const S w = omega(target.distance(f(a), f(b)));
      const S d = m.distance(a, b);
      if (!leq(d, w) || !leq(S(c2 * w), d)) {
        throw Error(ErrorCode::moduli_hypothesis_violated,
                    "C2 omega(d(f(a), f(b))) <= d(a, b) <= omega(d(f(a), f(b))) fails", {m.label(a), m.label(b)});
      }
    }
  }
  const auto wn = omega.inf_convolve(n);
  const std::size_t fy = f(y);
  const S offset = wn(target.distance(fy, target.base()));
  std::vector<S> g(target.size());
  for (std::size_t z = 0; z < target.size(); ++z) g[z] = wn(target.distance(z, fy)) - offset;
  g[target.base()] = ScalarTraits<S>::zero();
  std::vector<S> pulled(m.size());
  for (std::size_t x = 0; x < m.size(); ++x) pulled[x] = g[f(x)];
  LipFunction<S> gf(f.codomain(), std::move(g));
  LipFunction<S> pf(f.domain(), std::move(pulled));
  S lip = lip_constant(pf);
  return {std::move(gf), std::move(pf), std::move(lip), S(omega.c1() / c2)};
}

#define LIPFREE_INSTANTIATE(S)                                                                                     \
  template class ModulusFunction<S>;                                                                               \
  template InfConvolutionReport<S> check_inf_convolution<S>(const ModulusFunction<S>&, const S&,                   \
                                                            const std::vector<S>&);                                \
  template std::optional<std::pair<S, S>> subadditivity_violation<S>(const ModulusFunction<S>&,                    \
                                                                     const std::vector<S>&);                       \
  template SeparationFamily<S> separation_family<S>(const PointMap<S>&, const ModulusFunction<S>&, const S&,       \
                                                    const S&, std::size_t);

LIPFREE_INSTANTIATE(Rational)
LIPFREE_INSTANTIATE(double)

#undef LIPFREE_INSTANTIATE

}  // namespace lipfree
