#pragma once

#include <cstddef>
#include <vector>

#include "credalkit/rational.hpp"

namespace credalkit::exactq {

enum class RowSense { less_equal, equal, greater_equal };
enum class VariableBound { nonnegative, free };
enum class Direction { minimize, maximize };

/**
 * A linear program over the rationals:
 *
 *     optimize  objectiveᵀ x
 *     subject to  row_i(A) x  (sense_i)  rhs_i
 *                 x_j >= 0 for nonnegative variables
 */
struct LpProblem {
  QVector objective;
  QMatrix constraints;
  QVector rhs;
  std::vector<RowSense> senses;
  std::vector<VariableBound> bounds;
  Direction direction = Direction::minimize;

  [[nodiscard]] std::size_t variable_count() const { return objective.size(); }
  [[nodiscard]] std::size_t row_count() const { return constraints.rows(); }
};

enum class LpStatus { optimal, infeasible, unbounded };

/**
 * Result of lp_solve.
 *
 * `farkas` holds one multiplier per constraint row, applied to the row in
 * "≤ orientation" (a ≥ row is negated first). A valid certificate has
 * nonnegative multipliers on inequality rows, combines the rows into a
 * vector that is zero on free variables and nonnegative on nonnegative
 * variables, and combines the right-hand sides into a strictly negative
 * number: 0 ≤ (negative), a contradiction.
 */
struct LpOutcome {
  LpStatus status = LpStatus::infeasible;
  Rational value;
  QVector solution;
  QVector farkas;
};

/// Throws DimensionError when the problem's pieces disagree in size.
void validate(const LpProblem& problem);

/// Exact two-phase primal simplex with Bland's rule. Deterministic.
LpOutcome lp_solve(const LpProblem& problem);

/// Checks every constraint and bound of `problem` at `x`, exactly.
bool is_feasible(const LpProblem& problem, const QVector& x);

/// Exact check of the certificate convention documented on LpOutcome.
bool verify_farkas(const LpProblem& problem, const QVector& multipliers);

}  // namespace credalkit::exactq
