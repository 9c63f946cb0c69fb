#pragma once

#include <vector>

#include "credalkit/rational.hpp"

namespace credalkit::geom {

/**
 * Extreme rays of the pointed polyhedral cone {z : A z ≥ 0}, by the
 * double description method (Motzkin et al.) with the combinatorial
 * adjacency test. Rows are inserted in index order, so the output is
 * deterministic. Each ray is returned as a primitive integer vector.
 *
 * Throws std::domain_error when rank(A) < cols(A), i.e. the cone has a
 * nontrivial lineality space.
 */
std::vector<exactq::QVector> extreme_rays(const exactq::QMatrix& a);

}  // namespace credalkit::geom
