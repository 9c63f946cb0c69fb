#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "credalkit/lp.hpp"
#include "credalkit/rational.hpp"

namespace credalkit::geom {

using exactq::QMatrix;
using exactq::QVector;
using exactq::Rational;

/// coeffs·x ≤ rhs (inequality) or coeffs·x = rhs (equality).
struct LinearConstraint {
  QVector coeffs;
  Rational rhs;
  friend bool operator==(const LinearConstraint&, const LinearConstraint&) = default;
};

struct HRep {
  std::vector<LinearConstraint> inequalities;
  std::vector<LinearConstraint> equalities;
};

/// Convex hull generators. Bounded sets only, so no rays.
struct VRep {
  std::vector<QVector> vertices;
};

/**
 * Certificate that `point` lies outside a set S.
 *
 * Halfspace form (the usual one): a single functional g with
 * g·point − g·v ≥ gap for every v ∈ S, gap > 0.
 *
 * Pointwise form, used only for finite non-convex sets: for every v ∈ S
 * some functional g_i satisfies |g_i·point − g_i·v| ≥ gap.
 */
struct SeparationCertificate {
  enum class Form { halfspace, pointwise };
  Form form = Form::halfspace;
  std::vector<QVector> functionals;
  Rational gap;
  QVector point;

  [[nodiscard]] const QVector& functional() const { return functionals.front(); }
  /// Exact check against an explicit list of generators (vertices or members).
  [[nodiscard]] bool verify_against(const std::vector<QVector>& generators) const;
};

class NotSeparable : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/**
 * Bounded convex polytope in ℚ^d, immutable. Carries an H-representation,
 * a V-representation, or both; a missing one is computed on first request
 * and cached. Copies share the cache.
 */
class Polytope {
 public:
  static Polytope from_hrep(std::size_t dim, HRep h);
  static Polytope from_vrep(std::size_t dim, VRep v);
  /// {x ≥ 0, Σx = 1} in ℚ^dim.
  static Polytope simplex(std::size_t dim);
  static Polytope point(const QVector& x) { return from_vrep(x.size(), VRep{{x}}); }
  static Polytope empty_set(std::size_t dim);

  [[nodiscard]] std::size_t dim() const;
  [[nodiscard]] bool has_hrep() const;
  [[nodiscard]] bool has_vrep() const;

  /// H-representation as supplied, or the facet description of the hull.
  [[nodiscard]] const HRep& hrep() const;
  /// Extreme points (the supplied generators when constructed from a V-rep
  /// and not yet normalized through dd_convert).
  [[nodiscard]] const VRep& vrep() const;
  [[nodiscard]] bool is_empty() const;

 private:
  struct State;
  explicit Polytope(std::shared_ptr<State> state) : state_(std::move(state)) {}
  std::shared_ptr<State> state_;

  friend Polytope dd_convert(const Polytope& p);
};

/// Both representations, with extreme points only and no redundant rows.
Polytope dd_convert(const Polytope& p);

/// Vertices of a bounded H-polytope (empty when infeasible). Throws
/// std::domain_error when the set is unbounded.
std::vector<QVector> enumerate_vertices(std::size_t dim, const HRep& h);

/// Facets and affine hull of conv(points); the result has no redundant rows.
HRep hull_facets(std::size_t dim, const std::vector<QVector>& points);

/// Drops generators that are not extreme points of their hull (and duplicates).
std::vector<QVector> extreme_points(std::size_t dim, const std::vector<QVector>& points);

Polytope linear_image(const QMatrix& m, const Polytope& p);
/// {x ∈ ambient : M x ∈ q}, built by pulling q's H-rep back through M.
Polytope linear_preimage(const QMatrix& m, const Polytope& q, const Polytope& ambient);

bool contains_point(const Polytope& p, const QVector& x);

struct SubsetResult {
  bool holds = true;
  std::optional<SeparationCertificate> certificate;
  explicit operator bool() const { return holds; }
};

SubsetResult is_subset(const Polytope& p, const Polytope& q);
bool equals(const Polytope& p, const Polytope& q);

struct IntersectionResult {
  Polytope polytope;
  /// Indices into the concatenated inequality / equality lists of the inputs.
  std::vector<std::size_t> kept_inequalities;
  std::vector<std::size_t> kept_equalities;
  /// Farkas multipliers over the concatenated rows (inequalities first) when empty.
  std::optional<QVector> farkas;
};

IntersectionResult intersect_detailed(const std::vector<Polytope>& ps);
Polytope intersect(const std::vector<Polytope>& ps);

/// Certificate separating x from p. Throws NotSeparable when x ∈ p.
SeparationCertificate separate(const Polytope& p, const QVector& x);

/// Exact check of a halfspace certificate against p (vertex minimum when
/// a V-rep is available, otherwise an LP maximum of g over p).
bool verify_certificate(const Polytope& p, const SeparationCertificate& c);

/// Optimize a linear functional over p. Uses the vertices if known, else an LP.
exactq::LpOutcome optimize(const Polytope& p, const QVector& objective, exactq::Direction dir);

/// LP over an H-representation with free variables.
exactq::LpProblem hrep_problem(std::size_t dim, const HRep& h, const QVector& objective, exactq::Direction dir);

/// Redundancy elimination: a row is dropped iff maximizing it over the
/// remaining rows stays within its bound. Rows are examined in order.
HRep remove_redundant(std::size_t dim, const HRep& h);

}  // namespace credalkit::geom
