#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "credalkit/rational.hpp"

namespace credalkit::exactq {

/// Reduced row echelon form together with the pivot column of each nonzero row.
struct RowEchelon {
  QMatrix matrix;
  std::vector<std::size_t> pivot_cols;
  [[nodiscard]] std::size_t rank() const { return pivot_cols.size(); }
};

RowEchelon rref(QMatrix m);

std::size_t rank(const QMatrix& m);

/// Basis of {x : M x = 0}, one vector per free column of the RREF, in column order.
std::vector<QVector> nullspace(const QMatrix& m);

/// Indices of a maximal linearly independent subset of the rows, chosen greedily in row order.
std::vector<std::size_t> independent_rows(const QMatrix& m);

/// Inverse of a square matrix; nullopt when singular.
std::optional<QMatrix> inverse(const QMatrix& m);

enum class SystemKind {
  unique,          ///< exactly one solution
  underdetermined, ///< consistent, solution set of dimension `nullity`
  inconsistent,
};

struct LinearSolution {
  SystemKind kind = SystemKind::inconsistent;
  /// A particular solution (free variables set to zero); empty when inconsistent.
  QVector solution;
  std::size_t rank = 0;
  std::size_t nullity = 0;
};

/// Exact Gaussian elimination for A x = b.
LinearSolution solve_linear_system(const QMatrix& a, const QVector& b);

}  // namespace credalkit::exactq
