#include "lipfree/molecule.hpp"

#include <algorithm>
#include <cmath>

namespace lipfree {

template <Scalar S>
Molecule<S> Molecule<S>::from_terms(SpacePtr<S> space, std::vector<Term> terms) {
  for (const auto& [point, coeff] : terms) {
    if (point >= space->size()) {
      throw Error(ErrorCode::unknown_label, "point index " + std::to_string(point) + " out of range");
    }
  }
  std::stable_sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.first < b.first; });
  Molecule mu(std::move(space));
  for (auto& [point, coeff] : terms) {
    if (point == mu.space_->base()) continue;
    if (!mu.terms_.empty() && mu.terms_.back().first == point) {
      mu.terms_.back().second += coeff;
    } else {
      mu.terms_.emplace_back(point, std::move(coeff));
    }
  }
  std::erase_if(mu.terms_, [](const Term& t) { return lipfree::is_zero(t.second); });
  return mu;
}

template <Scalar S>
S Molecule<S>::coefficient(std::size_t point) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), point,
                             [](const Term& t, std::size_t p) { return t.first < p; });
  if (it != terms_.end() && it->first == point) return it->second;
  return ScalarTraits<S>::zero();
}

template <Scalar S>
std::vector<std::size_t> Molecule<S>::support() const {
  std::vector<std::size_t> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.push_back(t.first);
  return out;
}

template <Scalar S>
S Molecule<S>::mass_bound() const {
  S total = ScalarTraits<S>::zero();
  for (const auto& [point, coeff] : terms_) {
    total += ScalarTraits<S>::abs(coeff) * space_->distance(point, space_->base());
  }
  return total;
}

template <Scalar S>
Molecule<S> Molecule<S>::operator+(const Molecule& other) const {
  if (space_ != other.space_) throw Error(ErrorCode::space_mismatch, "molecules live on different spaces");
  std::vector<Term> all = terms_;
  all.insert(all.end(), other.terms_.begin(), other.terms_.end());
  return from_terms(space_, std::move(all));
}

template <Scalar S>
Molecule<S> Molecule<S>::operator-(const Molecule& other) const {
  return *this + other.scaled(S(-1));
}

template <Scalar S>
Molecule<S> Molecule<S>::scaled(const S& factor) const {
  std::vector<Term> out = terms_;
  for (auto& t : out) t.second *= factor;
  return from_terms(space_, std::move(out));
}

template <Scalar S>
Molecule<S> canonicalize(SpacePtr<S> space, const std::vector<std::pair<std::string, S>>& terms) {
  std::vector<typename Molecule<S>::Term> indexed;
  indexed.reserve(terms.size());
  for (const auto& [label, coeff] : terms) indexed.emplace_back(space->index(label), coeff);
  return Molecule<S>::from_terms(std::move(space), std::move(indexed));
}

template <Scalar S>
Molecule<S> delta(SpacePtr<S> space, std::size_t x) {
  return Molecule<S>::from_terms(std::move(space), {{x, ScalarTraits<S>::one()}});
}

template <Scalar S>
Molecule<S> elementary(SpacePtr<S> space, std::size_t x, std::size_t y) {
  if (x == y) throw Error(ErrorCode::equal_points, "elementary molecule needs distinct points", {space->label(x)});
  const S scale = ScalarTraits<S>::one() / space->distance(x, y);
  return Molecule<S>::from_terms(std::move(space), {{x, scale}, {y, S(-scale)}});
}

template <Scalar S>
S eval(const LipFunction<S>& f, const Molecule<S>& mu) {
  if (f.space() != mu.space()) throw Error(ErrorCode::space_mismatch, "function and molecule live on different spaces");
  S total = ScalarTraits<S>::zero();
  for (const auto& [point, coeff] : mu.terms()) total += coeff * f(point);
  return total;
}

Molecule<double> to_floating(const Molecule<Rational>& mu, SpacePtr<double> target) {
  if (target->labels() != mu.space()->labels()) {
    throw Error(ErrorCode::space_mismatch, "target space has different labels");
  }
  std::vector<Molecule<double>::Term> terms;
  for (const auto& [point, coeff] : mu.terms()) terms.emplace_back(point, coeff.get_d());
  return Molecule<double>::from_terms(std::move(target), std::move(terms));
}

template <Scalar S>
S StepFunction<S>::integral_abs() const {
  S total = ScalarTraits<S>::zero();
  for (std::size_t i = 0; i < values.size(); ++i) {
    total += ScalarTraits<S>::abs(values[i]) * (breakpoints[i + 1] - breakpoints[i]);
  }
  return total;
}

template <Scalar S>
S StepFunction<S>::operator()(const S& t) const {
  // Right-continuous reading: the value on [b_i, b_{i+1}).
  if (breakpoints.empty() || t < breakpoints.front() || !(t < breakpoints.back())) return ScalarTraits<S>::zero();
  auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), t);
  return values[static_cast<std::size_t>(it - breakpoints.begin()) - 1];
}

template <Scalar S>
S TransportPlan<S>::cost(const MetricSpace<S>& space) const {
  S total = ScalarTraits<S>::zero();
  for (const auto& arc : arcs) total += arc.mass * space.distance(arc.from, arc.to);
  return total;
}

template <Scalar S>
bool TransportPlan<S>::balances(const Molecule<S>& mu, double tolerance) const {
  const auto& space = *mu.space();
  std::vector<S> net(space.size(), ScalarTraits<S>::zero());
  for (const auto& arc : arcs) {
    if (ScalarTraits<S>::sign(arc.mass) < 0) return false;
    net[arc.from] += arc.mass;
    net[arc.to] -= arc.mass;
  }
  S scale = ScalarTraits<S>::one();
  for (const auto& [point, coeff] : mu.terms()) {
    net[point] -= coeff;
    if constexpr (!ScalarTraits<S>::is_exact) scale = std::max(scale, std::abs(coeff));
  }
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (i == space.base()) continue;
    if constexpr (ScalarTraits<S>::is_exact) {
      if (!is_zero(net[i])) return false;
    } else {
      if (std::abs(net[i]) > tolerance * scale) return false;
    }
  }
  return true;
}

#define LIPFREE_INSTANTIATE(S)                                                                          \
  template class Molecule<S>;                                                                           \
  template Molecule<S> canonicalize<S>(SpacePtr<S>, const std::vector<std::pair<std::string, S>>&);     \
  template Molecule<S> delta<S>(SpacePtr<S>, std::size_t);                                              \
  template Molecule<S> elementary<S>(SpacePtr<S>, std::size_t, std::size_t);                            \
  template S eval<S>(const LipFunction<S>&, const Molecule<S>&);                                        \
  template struct StepFunction<S>;                                                                      \
  template struct TransportPlan<S>;

LIPFREE_INSTANTIATE(Rational)
LIPFREE_INSTANTIATE(double)

#undef LIPFREE_INSTANTIATE

}  // namespace lipfree
