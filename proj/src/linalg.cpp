#include "credalkit/linalg.hpp"

#include <utility>

namespace credalkit::exactq {

RowEchelon rref(QMatrix m) {
  RowEchelon out;
  std::size_t lead_row = 0;
  for (std::size_t c = 0; c < m.cols() && lead_row < m.rows(); ++c) {
    std::size_t pivot = lead_row;
    while (pivot < m.rows() && m(pivot, c).is_zero()) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != lead_row) {
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(pivot, j), m(lead_row, j));
    }
    const Rational inv = Rational(1) / m(lead_row, c);
    for (std::size_t j = c; j < m.cols(); ++j) m(lead_row, j) *= inv;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == lead_row || m(r, c).is_zero()) continue;
      const Rational factor = m(r, c);
      for (std::size_t j = c; j < m.cols(); ++j) {
        if (!m(lead_row, j).is_zero()) m(r, j) -= factor * m(lead_row, j);
      }
    }
    out.pivot_cols.push_back(c);
    ++lead_row;
  }
  out.matrix = std::move(m);
  return out;
}

std::size_t rank(const QMatrix& m) { return rref(m).rank(); }

std::vector<QVector> nullspace(const QMatrix& m) {
  const RowEchelon e = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : e.pivot_cols) is_pivot[c] = true;
  std::vector<QVector> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    QVector v(m.cols());
    v[free] = 1;
    for (std::size_t r = 0; r < e.pivot_cols.size(); ++r) v[e.pivot_cols[r]] = -e.matrix(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<std::size_t> independent_rows(const QMatrix& m) {
  // Incremental elimination against an echelon basis of the accepted rows.
  std::vector<QVector> basis;
  std::vector<std::size_t> lead;
  std::vector<std::size_t> chosen;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    QVector v = m.row(r);
    for (std::size_t b = 0; b < basis.size(); ++b) {
      if (v[lead[b]].is_zero()) continue;
      const Rational f = v[lead[b]];
      v -= basis[b] * f;
    }
    std::size_t c = 0;
    while (c < v.size() && v[c].is_zero()) ++c;
    if (c == v.size()) continue;
    v *= Rational(1) / v[c];
    // Keep the basis fully reduced so later rows only need one pass.
    for (auto& other : basis) {
      if (!other[c].is_zero()) {
        const Rational f = other[c];
        other -= v * f;
      }
    }
    basis.push_back(std::move(v));
    lead.push_back(c);
    chosen.push_back(r);
  }
  return chosen;
}

std::optional<QMatrix> inverse(const QMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("inverse of non-square matrix");
  const std::size_t n = m.rows();
  QMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = 1;
  }
  const RowEchelon e = rref(std::move(aug));
  if (e.rank() < n || e.pivot_cols[n - 1] != n - 1) return std::nullopt;
  QMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = e.matrix(i, n + j);
  return inv;
}

LinearSolution solve_linear_system(const QMatrix& a, const QVector& b) {
  if (a.rows() != b.size()) throw DimensionError("linear system: rows(A) != dim(b)");
  QMatrix aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  const RowEchelon e = rref(std::move(aug));
  LinearSolution out;
  if (!e.pivot_cols.empty() && e.pivot_cols.back() == a.cols()) {
    out.kind = SystemKind::inconsistent;
    out.rank = e.rank() - 1;
    return out;
  }
  out.rank = e.rank();
  out.nullity = a.cols() - out.rank;
  out.kind = out.nullity == 0 ? SystemKind::unique : SystemKind::underdetermined;
  out.solution = QVector(a.cols());
  for (std::size_t r = 0; r < e.pivot_cols.size(); ++r) out.solution[e.pivot_cols[r]] = e.matrix(r, a.cols());
  return out;
}

}  // namespace credalkit::exactq
