#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lipfree/molecule.hpp"
#include "lipfree/point_map.hpp"

namespace lipfree {

/// Matrix of f^ in the Dirac bases: rows are the non-base codomain points,
/// columns the non-base domain points, in index order. Column x holds a
/// single 1 in row f(x), or nothing when f(x) is the base.
template <Scalar S>
class OperatorMatrix {
 public:
  OperatorMatrix(SpacePtr<S> domain, SpacePtr<S> codomain, std::vector<std::optional<std::size_t>> column_rows);

  const SpacePtr<S>& domain() const { return domain_; }
  const SpacePtr<S>& codomain() const { return codomain_; }
  std::size_t rows() const { return codomain_->size() - 1; }
  std::size_t cols() const { return domain_->size() - 1; }

  /// Point index of a row (codomain) or column (domain).
  std::size_t row_point(std::size_t i) const { return i < codomain_->base() ? i : i + 1; }
  std::size_t col_point(std::size_t j) const { return j < domain_->base() ? j : j + 1; }
  /// Inverse of col_point for a non-base domain point.
  std::size_t column_of(std::size_t x) const { return x < domain_->base() ? x : x - 1; }

  const std::optional<std::size_t>& column_row(std::size_t j) const { return column_rows_[j]; }
  int entry(std::size_t i, std::size_t j) const { return column_rows_[j] == i ? 1 : 0; }
  std::vector<std::vector<int>> dense() const;

  bool operator==(const OperatorMatrix& other) const = default;

 private:
  SpacePtr<S> domain_;
  SpacePtr<S> codomain_;
  std::vector<std::optional<std::size_t>> column_rows_;
};

template <Scalar S>
OperatorMatrix<S> linearize(const PointMap<S>& f);

/// Matrix product g^ f^. Throws Error(not_composable).
template <Scalar S>
OperatorMatrix<S> multiply(const OperatorMatrix<S>& g, const OperatorMatrix<S>& f);

/// Matrix-vector action on the coefficient vector of mu.
/// Throws Error(space_mismatch) if mu is not over the domain.
template <Scalar S>
Molecule<S> apply(const OperatorMatrix<S>& op, const Molecule<S>& mu);

/// sum a_x delta(f(x)), merged directly from the point map.
template <Scalar S>
Molecule<S> pushforward(const PointMap<S>& f, const Molecule<S>& mu);

/// C_f g = g o f. Throws Error(space_mismatch) unless g lives on f's codomain.
template <Scalar S>
LipFunction<S> compose_Cf(const PointMap<S>& f, const LipFunction<S>& g);

template <Scalar S>
struct KernelReport {
  std::size_t rank = 0;
  bool injective = false;
  std::vector<Molecule<S>> basis;
};

/// Exact Gauss-Jordan elimination over the rationals; the verdict never
/// depends on a tolerance.
template <Scalar S>
KernelReport<S> kernel_basis(const OperatorMatrix<S>& op);

/// Rank of a rational matrix by exact elimination.
std::size_t exact_rank(const std::vector<std::vector<Rational>>& matrix);

struct SupportReport {
  std::vector<std::size_t> lhs;  // supp(f^ mu), codomain indices
  std::vector<std::size_t> rhs;  // f(supp mu)
  bool inclusion_holds = false;
  bool equality_holds = false;
};

template <Scalar S>
SupportReport check_support_preservation(const PointMap<S>& f, const Molecule<S>& mu);

template <Scalar S>
struct NonReturningReport {
  /// sup of rho with f(M) ∩ B(f(x), rho) ⊆ f(B(x, r)), in the form
  /// f^{-1}(B(f(x), rho)) ⊆ B(x, r): the distance from f(x) to f(M \ B(x, r)).
  /// Empty means +inf. Every rho strictly below it works (balls are closed).
  std::optional<S> supremum;
  std::optional<std::size_t> nearest;  // domain point realizing the supremum
  bool holds = true;                   // for the requested rho, if any
  std::optional<std::size_t> witness;  // z outside B(x, r) with d(f(z), f(x)) <= rho
};

template <Scalar S>
NonReturningReport<S> check_nonreturning(const PointMap<S>& f, std::size_t x, const S& r,
                                         const std::optional<S>& rho = std::nullopt);

template <Scalar S>
struct BilipConstants {
  S a{};  // min d_N(f(x), f(y)) / d_M(x, y); 0 when f collapses a pair
  S b{};  // Lip(f)
  std::pair<std::size_t, std::size_t> a_pair{};
  std::pair<std::size_t, std::size_t> b_pair{};
  bool collapsing = false;
};

template <Scalar S>
BilipConstants<S> bilip_constants(const PointMap<S>& f);

enum class ModulusMethod { exact_vertex, witness_family };

std::string to_string(ModulusMethod method);

/// Bracket for inf_{mu != 0} ||f^ mu|| / ||mu||.
template <Scalar S>
struct ModulusBracket {
  std::optional<S> lower;
  S upper{};
  ModulusMethod method = ModulusMethod::witness_family;
  std::size_t candidates = 0;
  /// Set when the exact route was requested but the dimension exceeded the
  /// cap (DimensionTooLargeForExact).
  bool fell_back = false;
};

inline constexpr std::size_t kExactModulusDimension = 8;

/// Exact when |M| - 1 <= kExactModulusDimension: the ball {mu : ||f^ mu|| <= 1}
/// is the convex hull of the preimages of the elementary molecules of f(M),
/// and the norm is maximized at one of them. Otherwise the upper bound is
/// the minimum ratio over elementary molecules and `witnesses`.
/// Non-injective f gives 0 exactly.
template <Scalar S>
ModulusBracket<S> embedding_modulus(const OperatorMatrix<S>& op, const std::vector<Molecule<S>>& witnesses = {});

/// Per-law tally over sample molecules: `applicable` counts samples meeting
/// the hypotheses, `failures` lists the sample indices where the conclusion
/// did not hold.
struct LawTally {
  std::size_t applicable = 0;
  std::vector<std::size_t> failures;
  bool ok() const { return failures.empty(); }
};

struct CompositionLawReport {
  LawTally preserving_compose;  // f, g preserve  =>  g o f preserves
  LawTally cancel_injective;    // g injective, g o f preserves  =>  f preserves
  LawTally cancel_onto;         // f^ onto, g o f preserves  =>  g preserves f^ mu
  bool g_injective = false;
  bool f_hat_onto = false;
  std::vector<bool> composite_preserves;  // per sample

  bool ok() const { return preserving_compose.ok() && cancel_injective.ok() && cancel_onto.ok(); }
};

/// Throws Error(not_composable).
template <Scalar S>
CompositionLawReport composition_support_laws(const PointMap<S>& f, const PointMap<S>& g,
                                              const std::vector<Molecule<S>>& samples);

}  // namespace lipfree
