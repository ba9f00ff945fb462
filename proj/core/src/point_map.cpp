#include "lipfree/point_map.hpp"

#include <algorithm>
#include <unordered_map>

namespace lipfree {

template <Scalar S>
PointMap<S>::PointMap(SpacePtr<S> domain, SpacePtr<S> codomain, std::vector<std::size_t> assignment)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), assignment_(std::move(assignment)) {
  if (assignment_.size() != domain_->size()) {
    throw Error(ErrorCode::invalid_argument, "map assigns " + std::to_string(assignment_.size()) +
                                                 " points for a domain of " + std::to_string(domain_->size()));
  }
  for (std::size_t x = 0; x < assignment_.size(); ++x) {
    if (assignment_[x] >= codomain_->size()) {
      throw Error(ErrorCode::invalid_argument, "image index out of range", {domain_->label(x)});
    }
  }
  if (assignment_[domain_->base()] != codomain_->base()) {
    throw Error(ErrorCode::base_not_preserved, "the base must map to the base",
                {domain_->base_label(), codomain_->label(assignment_[domain_->base()])});
  }
}

template <Scalar S>
PointMap<S> PointMap<S>::from_labels(SpacePtr<S> domain, SpacePtr<S> codomain,
                                     const std::vector<std::pair<std::string, std::string>>& assignment) {
  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> table(domain->size(), unset);
  for (const auto& [from, to] : assignment) {
    const std::size_t x = domain->index(from);
    if (table[x] != unset) throw Error(ErrorCode::duplicate_label, "label assigned twice", {from});
    table[x] = codomain->index(to);
  }
  for (std::size_t x = 0; x < table.size(); ++x) {
    if (table[x] == unset) throw Error(ErrorCode::invalid_argument, "map is not total", {domain->label(x)});
  }
  return PointMap(std::move(domain), std::move(codomain), std::move(table));
}

template <Scalar S>
PointMap<S> PointMap<S>::identity(SpacePtr<S> space) {
  std::vector<std::size_t> table(space->size());
  for (std::size_t x = 0; x < table.size(); ++x) table[x] = x;
  return PointMap(space, space, std::move(table));
}

template <Scalar S>
PointMap<S> PointMap<S>::same_labels(SpacePtr<S> domain, SpacePtr<S> codomain) {
  std::vector<std::size_t> table(domain->size());
  for (std::size_t x = 0; x < table.size(); ++x) table[x] = codomain->index(domain->label(x));
  return PointMap(std::move(domain), std::move(codomain), std::move(table));
}

template <Scalar S>
std::optional<std::pair<std::size_t, std::size_t>> PointMap<S>::collision() const {
  std::unordered_map<std::size_t, std::size_t> first;
  for (std::size_t x = 0; x < assignment_.size(); ++x) {
    auto [it, fresh] = first.emplace(assignment_[x], x);
    if (!fresh) return std::pair{it->second, x};
  }
  return std::nullopt;
}

template <Scalar S>
std::vector<std::size_t> PointMap<S>::image() const {
  std::vector<std::size_t> out = assignment_;
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

template <Scalar S>
PointMap<S> compose(const PointMap<S>& g, const PointMap<S>& f) {
  if (f.codomain() != g.domain()) {
    throw Error(ErrorCode::not_composable, "codomain of the first map is not the domain of the second",
                {f.codomain()->name(), g.domain()->name()});
  }
  std::vector<std::size_t> table(f.domain()->size());
  for (std::size_t x = 0; x < table.size(); ++x) table[x] = g(f(x));
  return PointMap<S>(f.domain(), g.codomain(), std::move(table));
}

template <Scalar S>
LipConstant<S> lip_constant(const PointMap<S>& f) {
  const auto& m = *f.domain();
  const auto& n = *f.codomain();
  LipConstant<S> best{ScalarTraits<S>::zero(), 0, 0};
  for (std::size_t x = 0; x < m.size(); ++x) {
    for (std::size_t y = x + 1; y < m.size(); ++y) {
      S ratio = n.distance(f(x), f(y)) / m.distance(x, y);
      if (best.value < ratio) best = {ratio, x, y};
    }
  }
  return best;
}

#define LIPFREE_INSTANTIATE(S)                                            \
  template class PointMap<S>;                                             \
  template PointMap<S> compose<S>(const PointMap<S>&, const PointMap<S>&); \
  template LipConstant<S> lip_constant<S>(const PointMap<S>&);

LIPFREE_INSTANTIATE(Rational)
LIPFREE_INSTANTIATE(double)

#undef LIPFREE_INSTANTIATE

}  // namespace lipfree
