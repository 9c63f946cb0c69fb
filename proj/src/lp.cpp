#include "credalkit/lp.hpp"

#include <limits>
#include <stdexcept>
#include <string>

namespace credalkit::exactq {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

// Dense simplex tableau over mpq_class. Rows 0..m-1 are constraints, `cost`
// is the reduced-cost row; the last column holds the right-hand side (and
// -z in the cost row).
class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), cells_(rows * cols), cost_(cols) {}

  mpq_class& at(std::size_t r, std::size_t c) { return cells_[r * cols_ + c]; }
  const mpq_class& at(std::size_t r, std::size_t c) const { return cells_[r * cols_ + c]; }
  mpq_class& cost(std::size_t c) { return cost_[c]; }
  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t rhs_col() const { return cols_ - 1; }

  void pivot(std::size_t pr, std::size_t pc) {
    const mpq_class inv = 1 / at(pr, pc);
    std::vector<std::size_t> nz;
    for (std::size_t c = 0; c < cols_; ++c) {
      if (sgn(at(pr, c)) != 0) {
        at(pr, c) *= inv;
        nz.push_back(c);
      }
    }
    for (std::size_t r = 0; r < rows_; ++r) {
      if (r == pr || sgn(at(r, pc)) == 0) continue;
      const mpq_class f = at(r, pc);
      for (auto c : nz) at(r, c) -= f * at(pr, c);
    }
    if (sgn(cost_[pc]) != 0) {
      const mpq_class f = cost_[pc];
      for (auto c : nz) cost_[c] -= f * at(pr, c);
    }
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<mpq_class> cells_;
  std::vector<mpq_class> cost_;
};

// Standard-form view of an LpProblem: columns for x⁺ (and x⁻ when free),
// slacks for inequality rows, then one artificial per row.
struct StandardForm {
  std::vector<std::size_t> plus_col;
  std::vector<std::size_t> minus_col;
  std::vector<std::size_t> slack_col;
  std::vector<int> orientation;  // -1 for ≥ rows (negated into ≤ form)
  std::vector<int> flip;         // -1 when the ≤-form rhs was negative
  std::size_t structural = 0;
};

StandardForm layout(const LpProblem& p) {
  StandardForm f;
  const std::size_t n = p.variable_count();
  const std::size_t m = p.row_count();
  f.plus_col.resize(n);
  f.minus_col.assign(n, kNone);
  f.slack_col.assign(m, kNone);
  f.orientation.resize(m);
  f.flip.resize(m);
  std::size_t next = 0;
  for (std::size_t j = 0; j < n; ++j) {
    f.plus_col[j] = next++;
    if (p.bounds[j] == VariableBound::free) f.minus_col[j] = next++;
  }
  for (std::size_t i = 0; i < m; ++i) {
    f.orientation[i] = p.senses[i] == RowSense::greater_equal ? -1 : 1;
    if (p.senses[i] != RowSense::equal) f.slack_col[i] = next++;
    const int rhs_sign = p.rhs[i].sign() * f.orientation[i];
    f.flip[i] = rhs_sign < 0 ? -1 : 1;
  }
  f.structural = next;
  return f;
}

// Runs Bland's rule until optimality. Columns at or beyond `allowed_end`
// never enter. Returns false when the objective is unbounded below.
bool run_simplex(Tableau& t, std::vector<std::size_t>& basis, std::size_t allowed_end) {
  const std::size_t rhs = t.rhs_col();
  for (;;) {
    std::size_t enter = kNone;
    for (std::size_t c = 0; c < allowed_end; ++c) {
      if (sgn(t.cost(c)) < 0) {
        enter = c;
        break;
      }
    }
    if (enter == kNone) return true;
    std::size_t leave = kNone;
    mpq_class best_ratio;
    for (std::size_t r = 0; r < t.rows(); ++r) {
      if (sgn(t.at(r, enter)) <= 0) continue;
      mpq_class ratio = t.at(r, rhs) / t.at(r, enter);
      if (leave == kNone || ratio < best_ratio || (ratio == best_ratio && basis[r] < basis[leave])) {
        leave = r;
        best_ratio = std::move(ratio);
      }
    }
    if (leave == kNone) return false;
    t.pivot(leave, enter);
    basis[leave] = enter;
  }
}

}  // namespace

void validate(const LpProblem& p) {
  const std::size_t n = p.variable_count();
  if (p.constraints.cols() != n && p.constraints.rows() != 0) {
    throw DimensionError("lp: constraint matrix has " + std::to_string(p.constraints.cols()) +
                         " columns, objective has " + std::to_string(n));
  }
  if (p.rhs.size() != p.row_count()) throw DimensionError("lp: rhs length differs from row count");
  if (p.senses.size() != p.row_count()) throw DimensionError("lp: sense count differs from row count");
  if (p.bounds.size() != n) throw DimensionError("lp: bound count differs from variable count");
}

LpOutcome lp_solve(const LpProblem& p) {
  validate(p);
  const std::size_t n = p.variable_count();
  const std::size_t m = p.row_count();
  const StandardForm f = layout(p);
  const std::size_t art0 = f.structural;
  const std::size_t cols = f.structural + m + 1;

  Tableau t(m, cols);
  const std::size_t rhs = t.rhs_col();
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    const int s = f.orientation[i] * f.flip[i];
    for (std::size_t j = 0; j < n; ++j) {
      const Rational& a = p.constraints(i, j);
      if (a.is_zero()) continue;
      t.at(i, f.plus_col[j]) = s * a.raw();
      if (f.minus_col[j] != kNone) t.at(i, f.minus_col[j]) = -s * a.raw();
    }
    if (f.slack_col[i] != kNone) t.at(i, f.slack_col[i]) = f.flip[i];
    t.at(i, art0 + i) = 1;
    t.at(i, rhs) = s * p.rhs[i].raw();
    basis[i] = art0 + i;
  }

  // Phase 1: minimize the sum of artificials.
  for (std::size_t c = 0; c < f.structural; ++c) {
    for (std::size_t i = 0; i < m; ++i) t.cost(c) -= t.at(i, c);
  }
  for (std::size_t i = 0; i < m; ++i) t.cost(rhs) -= t.at(i, rhs);
  run_simplex(t, basis, f.structural);

  LpOutcome out;
  if (sgn(t.cost(rhs)) != 0) {
    // u_i = 1 - d(artificial_i); the certificate is -u mapped back to ≤ orientation.
    out.status = LpStatus::infeasible;
    out.farkas = QVector(m);
    for (std::size_t i = 0; i < m; ++i) {
      const mpq_class u = 1 - t.cost(art0 + i);
      out.farkas[i] = Rational(mpq_class(-u * f.flip[i]));
    }
    if (!verify_farkas(p, out.farkas)) throw std::logic_error("lp: produced an invalid Farkas certificate");
    return out;
  }

  // Drive zero-level artificials out of the basis where possible.
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < art0) continue;
    for (std::size_t c = 0; c < f.structural; ++c) {
      if (sgn(t.at(i, c)) != 0) {
        t.pivot(i, c);
        basis[i] = c;
        break;
      }
    }
  }

  // Phase 2 on the original objective, always as a minimization.
  std::vector<mpq_class> c(f.structural);
  const int dir = p.direction == Direction::maximize ? -1 : 1;
  for (std::size_t j = 0; j < n; ++j) {
    c[f.plus_col[j]] = dir * p.objective[j].raw();
    if (f.minus_col[j] != kNone) c[f.minus_col[j]] = -dir * p.objective[j].raw();
  }
  for (std::size_t col = 0; col < cols; ++col) {
    mpq_class d = col < f.structural ? c[col] : mpq_class(0);
    for (std::size_t i = 0; i < m; ++i) {
      if (basis[i] < art0 && sgn(c[basis[i]]) != 0) d -= c[basis[i]] * t.at(i, col);
    }
    t.cost(col) = d;
  }
  if (!run_simplex(t, basis, f.structural)) {
    out.status = LpStatus::unbounded;
    return out;
  }

  std::vector<mpq_class> value(f.structural);
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < art0) value[basis[i]] = t.at(i, rhs);
  }
  out.status = LpStatus::optimal;
  out.solution = QVector(n);
  for (std::size_t j = 0; j < n; ++j) {
    mpq_class x = value[f.plus_col[j]];
    if (f.minus_col[j] != kNone) x -= value[f.minus_col[j]];
    out.solution[j] = Rational(std::move(x));
  }
  out.value = dot(p.objective, out.solution);
  if (!is_feasible(p, out.solution)) throw std::logic_error("lp: optimal solution violates a constraint");
  return out;
}

bool is_feasible(const LpProblem& p, const QVector& x) {
  if (x.size() != p.variable_count()) return false;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (p.bounds[j] == VariableBound::nonnegative && x[j].sign() < 0) return false;
  }
  for (std::size_t i = 0; i < p.row_count(); ++i) {
    const Rational lhs = dot(p.constraints.row(i), x);
    switch (p.senses[i]) {
      case RowSense::less_equal:
        if (lhs > p.rhs[i]) return false;
        break;
      case RowSense::greater_equal:
        if (lhs < p.rhs[i]) return false;
        break;
      case RowSense::equal:
        if (lhs != p.rhs[i]) return false;
        break;
    }
  }
  return true;
}

bool verify_farkas(const LpProblem& p, const QVector& y) {
  if (y.size() != p.row_count()) return false;
  const std::size_t n = p.variable_count();
  QVector combined(n);
  Rational combined_rhs;
  for (std::size_t i = 0; i < p.row_count(); ++i) {
    if (p.senses[i] != RowSense::equal && y[i].sign() < 0) return false;
    if (y[i].is_zero()) continue;
    const Rational w = p.senses[i] == RowSense::greater_equal ? -y[i] : y[i];
    for (std::size_t j = 0; j < n; ++j) {
      if (!p.constraints(i, j).is_zero()) combined[j] += w * p.constraints(i, j);
    }
    combined_rhs += w * p.rhs[i];
  }
  for (std::size_t j = 0; j < n; ++j) {
    const int s = combined[j].sign();
    if (p.bounds[j] == VariableBound::free ? s != 0 : s < 0) return false;
  }
  return combined_rhs.sign() < 0;
}

}  // namespace credalkit::exactq
