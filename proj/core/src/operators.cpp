#include "lipfree/operators.hpp"

#include <algorithm>
#include <map>

#include "lipfree/norm.hpp"

namespace lipfree {

namespace {

using SparseRow = std::map<std::size_t, Rational>;

struct Reduced {
  std::vector<SparseRow> rows;
  std::vector<std::pair<std::size_t, std::size_t>> pivots;  // (column, row)
};

// Reduced row echelon form by Gauss-Jordan elimination over Q.
Reduced gauss_jordan(std::vector<SparseRow> rows, std::size_t ncols) {
  Reduced out;
  std::vector<char> used(rows.size(), 0);
  for (std::size_t c = 0; c < ncols; ++c) {
    std::size_t r = rows.size();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (!used[i] && rows[i].count(c)) {
        r = i;
        break;
      }
    }
    if (r == rows.size()) continue;
    used[r] = 1;
    const Rational inv = 1 / rows[r][c];
    for (auto& [col, v] : rows[r]) v *= inv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r) continue;
      auto hit = rows[i].find(c);
      if (hit == rows[i].end()) continue;
      const Rational factor = hit->second;
      for (const auto& [col, v] : rows[r]) {
        Rational& target = rows[i][col];
        target -= factor * v;
        if (sgn(target) == 0) rows[i].erase(col);
      }
    }
    out.pivots.emplace_back(c, r);
  }
  out.rows = std::move(rows);
  return out;
}

std::vector<std::size_t> sorted_unique(std::vector<std::size_t> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

template <Scalar S>
OperatorMatrix<S>::OperatorMatrix(SpacePtr<S> domain, SpacePtr<S> codomain,
                                  std::vector<std::optional<std::size_t>> column_rows)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), column_rows_(std::move(column_rows)) {
  if (column_rows_.size() != cols()) throw Error(ErrorCode::invalid_argument, "operator matrix has the wrong width");
  for (const auto& r : column_rows_) {
    if (r && *r >= rows()) throw Error(ErrorCode::invalid_argument, "operator matrix row out of range");
  }
}

template <Scalar S>
std::vector<std::vector<int>> OperatorMatrix<S>::dense() const {
  std::vector<std::vector<int>> out(rows(), std::vector<int>(cols(), 0));
  for (std::size_t j = 0; j < cols(); ++j) {
    if (column_rows_[j]) out[*column_rows_[j]][j] = 1;
  }
  return out;
}

template <Scalar S>
OperatorMatrix<S> linearize(const PointMap<S>& f) {
  const auto& m = *f.domain();
  const auto& n = *f.codomain();
  std::vector<std::optional<std::size_t>> columns;
  columns.reserve(m.size() - 1);
  for (std::size_t x = 0; x < m.size(); ++x) {
    if (x == m.base()) continue;
    const std::size_t y = f(x);
    if (y == n.base()) {
      columns.emplace_back(std::nullopt);
    } else {
      columns.emplace_back(y < n.base() ? y : y - 1);
    }
  }
  return OperatorMatrix<S>(f.domain(), f.codomain(), std::move(columns));
}

template <Scalar S>
OperatorMatrix<S> multiply(const OperatorMatrix<S>& g, const OperatorMatrix<S>& f) {
  if (f.codomain() != g.domain()) {
    throw Error(ErrorCode::not_composable, "operator shapes do not chain", {f.codomain()->name(), g.domain()->name()});
  }
  std::vector<std::optional<std::size_t>> columns(f.cols());
  for (std::size_t j = 0; j < f.cols(); ++j) {
    if (const auto& row = f.column_row(j)) columns[j] = g.column_row(*row);
  }
  return OperatorMatrix<S>(f.domain(), g.codomain(), std::move(columns));
}

template <Scalar S>
Molecule<S> apply(const OperatorMatrix<S>& op, const Molecule<S>& mu) {
  if (mu.space() != op.domain()) throw Error(ErrorCode::space_mismatch, "molecule is not over the operator's domain");
  std::vector<typename Molecule<S>::Term> terms;
  for (const auto& [x, a] : mu.terms()) {
    if (const auto& row = op.column_row(op.column_of(x))) terms.emplace_back(op.row_point(*row), a);
  }
  return Molecule<S>::from_terms(op.codomain(), std::move(terms));
}

template <Scalar S>
Molecule<S> pushforward(const PointMap<S>& f, const Molecule<S>& mu) {
  if (mu.space() != f.domain()) throw Error(ErrorCode::space_mismatch, "molecule is not over the map's domain");
  std::vector<typename Molecule<S>::Term> terms;
  for (const auto& [x, a] : mu.terms()) terms.emplace_back(f(x), a);
  return Molecule<S>::from_terms(f.codomain(), std::move(terms));
}

template <Scalar S>
LipFunction<S> compose_Cf(const PointMap<S>& f, const LipFunction<S>& g) {
  if (g.space() != f.codomain()) throw Error(ErrorCode::space_mismatch, "function is not on the map's codomain");
  std::vector<S> values(f.domain()->size());
  for (std::size_t x = 0; x < values.size(); ++x) values[x] = g(f(x));
  return LipFunction<S>(f.domain(), std::move(values));
}

template <Scalar S>
KernelReport<S> kernel_basis(const OperatorMatrix<S>& op) {
  std::vector<SparseRow> rows(op.rows());
  for (std::size_t j = 0; j < op.cols(); ++j) {
    if (const auto& r = op.column_row(j)) rows[*r][j] = 1;
  }
  const Reduced red = gauss_jordan(std::move(rows), op.cols());
  KernelReport<S> report;
  report.rank = red.pivots.size();
  report.injective = report.rank == op.cols();
  std::vector<char> pivot(op.cols(), 0);
  for (const auto& [c, r] : red.pivots) pivot[c] = 1;
  for (std::size_t free = 0; free < op.cols(); ++free) {
    if (pivot[free]) continue;
    std::vector<typename Molecule<S>::Term> terms{{op.col_point(free), ScalarTraits<S>::one()}};
    for (const auto& [c, r] : red.pivots) {
      auto it = red.rows[r].find(free);
      if (it != red.rows[r].end()) terms.emplace_back(op.col_point(c), ScalarTraits<S>::from_rational(-it->second));
    }
    report.basis.push_back(Molecule<S>::from_terms(op.domain(), std::move(terms)));
  }
  return report;
}

std::size_t exact_rank(const std::vector<std::vector<Rational>>& matrix) {
  std::size_t ncols = 0;
  std::vector<SparseRow> rows;
  for (const auto& row : matrix) {
    ncols = std::max(ncols, row.size());
    SparseRow sparse;
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (sgn(row[j]) != 0) sparse[j] = row[j];
    }
    rows.push_back(std::move(sparse));
  }
  return gauss_jordan(std::move(rows), ncols).pivots.size();
}

template <Scalar S>
SupportReport check_support_preservation(const PointMap<S>& f, const Molecule<S>& mu) {
  SupportReport report;
  report.lhs = pushforward(f, mu).support();
  std::vector<std::size_t> image;
  for (auto x : mu.support()) image.push_back(f(x));
  report.rhs = sorted_unique(std::move(image));
  report.inclusion_holds = std::includes(report.rhs.begin(), report.rhs.end(), report.lhs.begin(), report.lhs.end());
  report.equality_holds = report.lhs == report.rhs;
  return report;
}

template <Scalar S>
NonReturningReport<S> check_nonreturning(const PointMap<S>& f, std::size_t x, const S& r, const std::optional<S>& rho) {
  const auto& m = *f.domain();
  const auto& n = *f.codomain();
  if (x >= m.size()) throw Error(ErrorCode::unknown_label, "point index out of range");
  if (ScalarTraits<S>::sign(r) <= 0) throw Error(ErrorCode::invalid_argument, "radius must be positive");
  NonReturningReport<S> report;
  for (std::size_t z = 0; z < m.size(); ++z) {
    if (m.distance(x, z) <= r) continue;
    const S d = n.distance(f(z), f(x));
    if (!report.supremum || d < *report.supremum) {
      report.supremum = d;
      report.nearest = z;
    }
  }
  if (rho && report.supremum && !(*rho < *report.supremum)) {
    report.holds = false;
    report.witness = report.nearest;
  }
  return report;
}

template <Scalar S>
BilipConstants<S> bilip_constants(const PointMap<S>& f) {
  const auto& m = *f.domain();
  const auto& n = *f.codomain();
  BilipConstants<S> out;
  bool first = true;
  for (std::size_t x = 0; x < m.size(); ++x) {
    for (std::size_t y = x + 1; y < m.size(); ++y) {
      const S ratio = n.distance(f(x), f(y)) / m.distance(x, y);
      if (first || ratio < out.a) {
        out.a = ratio;
        out.a_pair = {x, y};
      }
      if (first || out.b < ratio) {
        out.b = ratio;
        out.b_pair = {x, y};
      }
      first = false;
    }
  }
  out.collapsing = !first && is_zero(out.a);
  return out;
}

std::string to_string(ModulusMethod method) {
  return method == ModulusMethod::exact_vertex ? "exact-vertex" : "witness-family";
}

template <Scalar S>
ModulusBracket<S> embedding_modulus(const OperatorMatrix<S>& op, const std::vector<Molecule<S>>& witnesses) {
  const std::size_t dim = op.cols();
  if (dim == 0) throw Error(ErrorCode::invalid_argument, "the free space of a one-point space is {0}");
  ModulusBracket<S> out;
  if (!kernel_basis(op).injective) {
    out.lower = ScalarTraits<S>::zero();
    out.upper = ScalarTraits<S>::zero();
    out.method = ModulusMethod::exact_vertex;
    return out;
  }
  const auto& m = *op.domain();
  const auto& n = *op.codomain();
  auto image = [&](std::size_t x) {
    if (x == m.base()) return n.base();
    const auto& row = op.column_row(op.column_of(x));
    return row ? op.row_point(*row) : n.base();
  };

  if (dim <= kExactModulusDimension) {
    // f^ maps F(M) onto F(f(M)), which sits isometrically in F(N); so the
    // polytope {||f^ mu|| <= 1} has vertices among the preimages
    // (delta(x) - delta(y)) / d_N(f(x), f(y)) of elementary molecules.
    S largest = ScalarTraits<S>::zero();
    for (std::size_t x = 0; x < m.size(); ++x) {
      for (std::size_t y = x + 1; y < m.size(); ++y) {
        const S scale = ScalarTraits<S>::one() / n.distance(image(x), image(y));
        auto vertex = (delta(op.domain(), x) - delta(op.domain(), y)).scaled(scale);
        const S value = norm(vertex);
        if (largest < value) largest = value;
        ++out.candidates;
      }
    }
    out.method = ModulusMethod::exact_vertex;
    out.upper = ScalarTraits<S>::one() / largest;
    out.lower = out.upper;
    return out;
  }

  out.fell_back = true;
  out.method = ModulusMethod::witness_family;
  bool first = true;
  // ||f^ m_xy|| = d_N(f(x), f(y)) / d(x, y) since f^ m_xy is a multiple of
  // an elementary molecule.
  for (std::size_t x = 0; x < m.size(); ++x) {
    for (std::size_t y = x + 1; y < m.size(); ++y) {
      const S ratio = n.distance(image(x), image(y)) / m.distance(x, y);
      if (first || ratio < out.upper) out.upper = ratio;
      first = false;
      ++out.candidates;
    }
  }
  for (const auto& w : witnesses) {
    if (w.is_zero()) continue;
    const S ratio = norm(apply(op, w)) / norm(w);
    if (ratio < out.upper) out.upper = ratio;
    ++out.candidates;
  }
  return out;
}

template <Scalar S>
CompositionLawReport composition_support_laws(const PointMap<S>& f, const PointMap<S>& g,
                                              const std::vector<Molecule<S>>& samples) {
  const PointMap<S> gf = compose(g, f);
  CompositionLawReport report;
  report.g_injective = g.is_injective();
  report.f_hat_onto = kernel_basis(linearize(f)).rank == f.codomain()->size() - 1;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& mu = samples[i];
    const bool f_keeps = check_support_preservation(f, mu).equality_holds;
    const bool g_keeps = check_support_preservation(g, pushforward(f, mu)).equality_holds;
    const bool gf_keeps = check_support_preservation(gf, mu).equality_holds;
    report.composite_preserves.push_back(gf_keeps);
    if (f_keeps && g_keeps) {
      ++report.preserving_compose.applicable;
      if (!gf_keeps) report.preserving_compose.failures.push_back(i);
    }
    if (report.g_injective && gf_keeps) {
      ++report.cancel_injective.applicable;
      if (!f_keeps) report.cancel_injective.failures.push_back(i);
    }
    if (report.f_hat_onto && gf_keeps) {
      ++report.cancel_onto.applicable;
      if (!g_keeps) report.cancel_onto.failures.push_back(i);
    }
  }
  return report;
}

#define LIPFREE_INSTANTIATE(S)                                                                                  \
  template class OperatorMatrix<S>;                                                                             \
  template OperatorMatrix<S> linearize<S>(const PointMap<S>&);                                                  \
  template OperatorMatrix<S> multiply<S>(const OperatorMatrix<S>&, const OperatorMatrix<S>&);                   \
  template Molecule<S> apply<S>(const OperatorMatrix<S>&, const Molecule<S>&);                                  \
  template Molecule<S> pushforward<S>(const PointMap<S>&, const Molecule<S>&);                                  \
  template LipFunction<S> compose_Cf<S>(const PointMap<S>&, const LipFunction<S>&);                             \
  template KernelReport<S> kernel_basis<S>(const OperatorMatrix<S>&);                                           \
  template SupportReport check_support_preservation<S>(const PointMap<S>&, const Molecule<S>&);                 \
  template NonReturningReport<S> check_nonreturning<S>(const PointMap<S>&, std::size_t, const S&,               \
                                                       const std::optional<S>&);                                \
  template BilipConstants<S> bilip_constants<S>(const PointMap<S>&);                                            \
  template ModulusBracket<S> embedding_modulus<S>(const OperatorMatrix<S>&, const std::vector<Molecule<S>>&);   \
  template CompositionLawReport composition_support_laws<S>(const PointMap<S>&, const PointMap<S>&,             \
                                                            const std::vector<Molecule<S>>&);

LIPFREE_INSTANTIATE(Rational)
LIPFREE_INSTANTIATE(double)

#undef LIPFREE_INSTANTIATE

}  // namespace lipfree
