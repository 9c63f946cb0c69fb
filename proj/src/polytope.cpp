#include "credalkit/polytope.hpp"

#include <algorithm>
#include <mutex>
#include <string>

#include "credalkit/double_description.hpp"
#include "credalkit/linalg.hpp"

namespace credalkit::geom {

using exactq::Direction;
using exactq::DimensionError;
using exactq::LpOutcome;
using exactq::LpProblem;
using exactq::LpStatus;
using exactq::RowSense;
using exactq::VariableBound;

struct Polytope::State {
  std::size_t dim = 0;
  std::mutex mu;
  std::optional<HRep> h;
  std::optional<VRep> v;
  bool v_extreme = false;
  std::optional<bool> empty;
};

namespace {

void check_rows(std::size_t dim, const std::vector<LinearConstraint>& rows) {
  for (const auto& r : rows) {
    if (r.coeffs.size() != dim) {
      throw DimensionError("constraint of length " + std::to_string(r.coeffs.size()) + " in dimension " +
                           std::to_string(dim));
    }
  }
}

std::vector<QVector> sorted_unique(std::vector<QVector> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

HRep infeasible_hrep(std::size_t dim) {
  HRep h;
  h.inequalities.push_back({QVector(dim), Rational(-1)});
  return h;
}

LpProblem feasibility_problem(std::size_t dim, const HRep& h) {
  return hrep_problem(dim, h, QVector(dim), Direction::minimize);
}

bool satisfies(const HRep& h, const QVector& x) {
  for (const auto& r : h.inequalities)
    if (exactq::dot(r.coeffs, x) > r.rhs) return false;
  for (const auto& r : h.equalities)
    if (exactq::dot(r.coeffs, x) != r.rhs) return false;
  return true;
}

// Indices of the rows that survive redundancy elimination.
struct Survivors {
  std::vector<std::size_t> inequalities;
  std::vector<std::size_t> equalities;
};

Survivors irredundant_rows(std::size_t dim, const HRep& h) {
  Survivors s;
  QMatrix eq(h.equalities.size(), dim);
  for (std::size_t i = 0; i < h.equalities.size(); ++i)
    for (std::size_t j = 0; j < dim; ++j) eq(i, j) = h.equalities[i].coeffs[j];
  s.equalities = exactq::independent_rows(eq);

  // Back to front, so that of several equivalent rows the first one survives.
  std::vector<bool> alive(h.inequalities.size(), true);
  for (std::size_t i = h.inequalities.size(); i-- > 0;) {
    HRep rest;
    for (auto e : s.equalities) rest.equalities.push_back(h.equalities[e]);
    for (std::size_t j = 0; j < h.inequalities.size(); ++j)
      if (j != i && alive[j]) rest.inequalities.push_back(h.inequalities[j]);
    const LpOutcome out = exactq::lp_solve(hrep_problem(dim, rest, h.inequalities[i].coeffs, Direction::maximize));
    if (out.status == LpStatus::optimal && out.value <= h.inequalities[i].rhs) alive[i] = false;
    if (out.status == LpStatus::infeasible) alive[i] = false;  // only reachable for an empty input
  }
  for (std::size_t i = 0; i < alive.size(); ++i)
    if (alive[i]) s.inequalities.push_back(i);
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Polytope

Polytope Polytope::from_hrep(std::size_t dim, HRep h) {
  check_rows(dim, h.inequalities);
  check_rows(dim, h.equalities);
  auto s = std::make_shared<State>();
  s->dim = dim;
  s->h = std::move(h);
  return Polytope(std::move(s));
}

Polytope Polytope::from_vrep(std::size_t dim, VRep v) {
  for (const auto& x : v.vertices)
    if (x.size() != dim) throw DimensionError("generator dimension differs from polytope dimension");
  auto s = std::make_shared<State>();
  s->dim = dim;
  s->empty = v.vertices.empty();
  s->v = std::move(v);
  if (*s->empty) s->h = infeasible_hrep(dim);
  return Polytope(std::move(s));
}

Polytope Polytope::simplex(std::size_t dim) {
  HRep h;
  for (std::size_t i = 0; i < dim; ++i) h.inequalities.push_back({-QVector::unit(dim, i), 0});
  h.equalities.push_back({QVector(dim, Rational(1)), 1});
  VRep v;
  for (std::size_t i = dim; i-- > 0;) v.vertices.push_back(QVector::unit(dim, i));
  auto s = std::make_shared<State>();
  s->dim = dim;
  s->h = std::move(h);
  s->v = std::move(v);
  s->v_extreme = true;
  s->empty = false;
  return Polytope(std::move(s));
}

Polytope Polytope::empty_set(std::size_t dim) { return from_vrep(dim, VRep{}); }

std::size_t Polytope::dim() const { return state_->dim; }

bool Polytope::has_hrep() const {
  std::lock_guard lock(state_->mu);
  return state_->h.has_value();
}

bool Polytope::has_vrep() const {
  std::lock_guard lock(state_->mu);
  return state_->v.has_value();
}

const HRep& Polytope::hrep() const {
  {
    std::lock_guard lock(state_->mu);
    if (state_->h) return *state_->h;
  }
  // Absent H-rep means the V-rep was supplied at construction and is immutable.
  HRep computed = hull_facets(state_->dim, state_->v->vertices);
  std::lock_guard lock(state_->mu);
  if (!state_->h) state_->h = std::move(computed);
  return *state_->h;
}

const VRep& Polytope::vrep() const {
  {
    std::lock_guard lock(state_->mu);
    if (state_->v) return *state_->v;
  }
  VRep computed{enumerate_vertices(state_->dim, *state_->h)};
  std::lock_guard lock(state_->mu);
  if (!state_->v) {
    state_->v = std::move(computed);
    state_->v_extreme = true;
    state_->empty = state_->v->vertices.empty();
  }
  return *state_->v;
}

bool Polytope::is_empty() const {
  {
    std::lock_guard lock(state_->mu);
    if (state_->empty) return *state_->empty;
    if (state_->v) return state_->v->vertices.empty();
  }
  const bool e = exactq::lp_solve(feasibility_problem(state_->dim, *state_->h)).status == LpStatus::infeasible;
  std::lock_guard lock(state_->mu);
  state_->empty = e;
  return e;
}

// ---------------------------------------------------------------------------
// Representation conversion

std::vector<QVector> enumerate_vertices(std::size_t dim, const HRep& h) {
  if (exactq::lp_solve(feasibility_problem(dim, h)).status == LpStatus::infeasible) return {};

  // Homogenize: y = (λ, x); the polytope is the λ = 1 slice of
  // {λ ≥ 0, bλ − A x ≥ 0, eλ − E x = 0}.
  const std::size_t n = dim + 1;
  QMatrix eq(h.equalities.size(), n);
  for (std::size_t i = 0; i < h.equalities.size(); ++i) {
    eq(i, 0) = h.equalities[i].rhs;
    for (std::size_t j = 0; j < dim; ++j) eq(i, j + 1) = -h.equalities[i].coeffs[j];
  }
  std::vector<QVector> basis;
  if (h.equalities.empty()) {
    for (std::size_t j = 0; j < n; ++j) basis.push_back(QVector::unit(n, j));
  } else {
    basis = exactq::nullspace(eq);
  }
  const QMatrix param = QMatrix::from_rows(basis, n).transpose();  // n × k

  QMatrix g(h.inequalities.size() + 1, n);
  g(0, 0) = 1;
  for (std::size_t i = 0; i < h.inequalities.size(); ++i) {
    g(i + 1, 0) = h.inequalities[i].rhs;
    for (std::size_t j = 0; j < dim; ++j) g(i + 1, j + 1) = -h.inequalities[i].coeffs[j];
  }

  std::vector<QVector> rays;
  try {
    rays = extreme_rays(g * param);
  } catch (const std::domain_error&) {
    throw std::domain_error("polytope is unbounded");
  }
  std::vector<QVector> vertices;
  for (const auto& z : rays) {
    const QVector y = param * z;
    if (y[0].sign() <= 0) throw std::domain_error("polytope is unbounded");
    QVector x(dim);
    for (std::size_t j = 0; j < dim; ++j) x[j] = y[j + 1] / y[0];
    vertices.push_back(std::move(x));
  }
  return sorted_unique(std::move(vertices));
}

HRep hull_facets(std::size_t dim, const std::vector<QVector>& points_in) {
  const std::vector<QVector> points = sorted_unique(points_in);
  if (points.empty()) return infeasible_hrep(dim);
  const std::size_t n = dim + 1;
  QMatrix g(points.size(), n);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != dim) throw DimensionError("hull generator has wrong dimension");
    g(i, 0) = 1;
    for (std::size_t j = 0; j < dim; ++j) g(i, j + 1) = points[i][j];
  }

  HRep h;
  // Affine hull: every (c, a) with c + a·v = 0 on all points gives a·x = −c.
  for (const auto& w : exactq::nullspace(g)) {
    QVector a(dim);
    for (std::size_t j = 0; j < dim; ++j) a[j] = w[j + 1];
    h.equalities.push_back({std::move(a), -w[0]});
  }

  // Facets: extreme rays of the dual cone {w : g w ≥ 0} restricted to rowspace(g).
  std::vector<QVector> row_basis;
  for (auto r : exactq::independent_rows(g)) row_basis.push_back(g.row(r));
  const QMatrix param = QMatrix::from_rows(row_basis, n).transpose();
  for (const auto& z : extreme_rays(g * param)) {
    const QVector w = exactq::primitive(param * z);
    QVector a(dim);
    for (std::size_t j = 0; j < dim; ++j) a[j] = w[j + 1];
    const bool touches = std::any_of(points.begin(), points.end(),
                                     [&](const QVector& v) { return (w[0] + exactq::dot(a, v)).is_zero(); });
    if (!touches) continue;  // only the trivial "1 ≥ 0" row of a 0-dimensional hull
    h.inequalities.push_back({-a, w[0]});
  }
  return h;
}

std::vector<QVector> extreme_points(std::size_t dim, const std::vector<QVector>& points_in) {
  const std::vector<QVector> points = sorted_unique(points_in);
  if (points.size() <= 1) return points;
  const HRep h = hull_facets(dim, points);
  std::vector<QVector> out;
  for (const auto& v : points) {
    std::vector<QVector> normals;
    for (const auto& e : h.equalities) normals.push_back(e.coeffs);
    for (const auto& r : h.inequalities)
      if (exactq::dot(r.coeffs, v) == r.rhs) normals.push_back(r.coeffs);
    if (exactq::rank(QMatrix::from_rows(normals, dim)) == dim) out.push_back(v);
  }
  return out;
}

Polytope dd_convert(const Polytope& p) {
  const std::size_t dim = p.dim();
  auto s = std::make_shared<Polytope::State>();
  s->dim = dim;
  if (p.is_empty()) {
    s->h = p.has_hrep() ? p.hrep() : infeasible_hrep(dim);
    s->v = VRep{};
    s->v_extreme = true;
    s->empty = true;
    return Polytope(std::move(s));
  }
  std::vector<QVector> vertices = p.vrep().vertices;
  bool extreme = false;
  {
    std::lock_guard lock(p.state_->mu);
    extreme = p.state_->v_extreme;
  }
  if (!extreme) vertices = extreme_points(dim, vertices);
  s->h = hull_facets(dim, vertices);
  s->v = VRep{std::move(vertices)};
  s->v_extreme = true;
  s->empty = false;
  return Polytope(std::move(s));
}

// ---------------------------------------------------------------------------
// Maps

Polytope linear_image(const QMatrix& m, const Polytope& p) {
  if (m.cols() != p.dim()) {
    throw DimensionError("linear image: map has " + std::to_string(m.cols()) + " columns, polytope dimension " +
                         std::to_string(p.dim()));
  }
  if (p.is_empty()) return Polytope::empty_set(m.rows());
  std::vector<QVector> images;
  for (const auto& v : p.vrep().vertices) images.push_back(m * v);
  return dd_convert(Polytope::from_vrep(m.rows(), VRep{extreme_points(m.rows(), images)}));
}

Polytope linear_preimage(const QMatrix& m, const Polytope& q, const Polytope& ambient) {
  if (m.rows() != q.dim() || m.cols() != ambient.dim()) throw DimensionError("linear preimage: dimension mismatch");
  HRep h = ambient.hrep();
  const HRep& target = q.hrep();
  auto pull = [&](const LinearConstraint& r, std::vector<LinearConstraint>& dst, bool equality) {
    QVector a = m.left_multiply(r.coeffs);
    if (a.is_zero()) {
      const bool trivially_true = equality ? r.rhs.is_zero() : r.rhs.sign() >= 0;
      if (trivially_true) return;
    }
    dst.push_back({std::move(a), r.rhs});
  };
  for (const auto& r : target.inequalities) pull(r, h.inequalities, false);
  for (const auto& r : target.equalities) pull(r, h.equalities, true);
  return Polytope::from_hrep(m.cols(), std::move(h));
}

// ---------------------------------------------------------------------------
// Predicates

LpProblem hrep_problem(std::size_t dim, const HRep& h, const QVector& objective, Direction dir) {
  LpProblem p;
  p.objective = objective;
  const std::size_t rows = h.inequalities.size() + h.equalities.size();
  p.constraints = QMatrix(rows, dim);
  p.rhs = QVector(rows);
  std::size_t r = 0;
  for (const auto& c : h.inequalities) {
    for (std::size_t j = 0; j < dim; ++j) p.constraints(r, j) = c.coeffs[j];
    p.rhs[r++] = c.rhs;
    p.senses.push_back(RowSense::less_equal);
  }
  for (const auto& c : h.equalities) {
    for (std::size_t j = 0; j < dim; ++j) p.constraints(r, j) = c.coeffs[j];
    p.rhs[r++] = c.rhs;
    p.senses.push_back(RowSense::equal);
  }
  p.bounds.assign(dim, VariableBound::free);
  p.direction = dir;
  return p;
}

LpOutcome optimize(const Polytope& p, const QVector& objective, Direction dir) {
  if (objective.size() != p.dim()) throw DimensionError("objective dimension differs from polytope dimension");
  if (p.has_vrep()) {
    const auto& vs = p.vrep().vertices;
    LpOutcome out;
    if (vs.empty()) return out;  // infeasible
    out.status = LpStatus::optimal;
    out.solution = vs.front();
    out.value = exactq::dot(objective, vs.front());
    for (const auto& v : vs) {
      const Rational val = exactq::dot(objective, v);
      if (dir == Direction::maximize ? val > out.value : val < out.value) {
        out.value = val;
        out.solution = v;
      }
    }
    return out;
  }
  return exactq::lp_solve(hrep_problem(p.dim(), p.hrep(), objective, dir));
}

bool contains_point(const Polytope& p, const QVector& x) {
  if (x.size() != p.dim()) throw DimensionError("point dimension differs from polytope dimension");
  if (p.has_hrep()) return satisfies(p.hrep(), x);
  const auto& vs = p.vrep().vertices;
  if (vs.empty()) return false;
  // λ ≥ 0, Σλ = 1, Σ λ_i v_i = x.
  LpProblem lp;
  lp.objective = QVector(vs.size());
  lp.constraints = QMatrix(p.dim() + 1, vs.size());
  lp.rhs = QVector(p.dim() + 1);
  lp.rhs[0] = 1;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    lp.constraints(0, i) = 1;
    for (std::size_t j = 0; j < p.dim(); ++j) lp.constraints(j + 1, i) = vs[i][j];
  }
  for (std::size_t j = 0; j < p.dim(); ++j) lp.rhs[j + 1] = x[j];
  lp.senses.assign(p.dim() + 1, RowSense::equal);
  lp.bounds.assign(vs.size(), VariableBound::nonnegative);
  return exactq::lp_solve(lp).status == LpStatus::optimal;
}

SubsetResult is_subset(const Polytope& p, const Polytope& q) {
  if (p.dim() != q.dim()) throw DimensionError("subset test: dimension mismatch");
  if (p.is_empty()) return {};
  if (p.has_vrep()) {
    for (const auto& v : p.vrep().vertices) {
      if (!contains_point(q, v)) return {false, separate(q, v)};
    }
    return {};
  }
  const HRep& qh = q.hrep();
  auto excess = [&](const QVector& g, const Rational& bound) -> std::optional<SeparationCertificate> {
    const LpOutcome out = optimize(p, g, Direction::maximize);
    if (out.status == LpStatus::optimal && out.value > bound) {
      return SeparationCertificate{SeparationCertificate::Form::halfspace, {g}, out.value - bound, out.solution};
    }
    return std::nullopt;
  };
  for (const auto& r : qh.inequalities) {
    if (auto c = excess(r.coeffs, r.rhs)) return {false, std::move(c)};
  }
  for (const auto& r : qh.equalities) {
    if (auto c = excess(r.coeffs, r.rhs)) return {false, std::move(c)};
    if (auto c = excess(-r.coeffs, -r.rhs)) return {false, std::move(c)};
  }
  return {};
}

bool equals(const Polytope& p, const Polytope& q) { return is_subset(p, q).holds && is_subset(q, p).holds; }

IntersectionResult intersect_detailed(const std::vector<Polytope>& ps) {
  if (ps.empty()) throw std::invalid_argument("intersect: no polytopes given");
  const std::size_t dim = ps.front().dim();
  HRep all;
  for (const auto& p : ps) {
    if (p.dim() != dim) throw DimensionError("intersect: dimension mismatch");
    const HRep& h = p.hrep();
    all.inequalities.insert(all.inequalities.end(), h.inequalities.begin(), h.inequalities.end());
    all.equalities.insert(all.equalities.end(), h.equalities.begin(), h.equalities.end());
  }
  const LpOutcome feas = exactq::lp_solve(feasibility_problem(dim, all));
  if (feas.status == LpStatus::infeasible) {
    IntersectionResult r{Polytope::from_hrep(dim, all), {}, {}, feas.farkas};
    for (std::size_t i = 0; i < all.inequalities.size(); ++i) r.kept_inequalities.push_back(i);
    for (std::size_t i = 0; i < all.equalities.size(); ++i) r.kept_equalities.push_back(i);
    r.polytope.is_empty();
    return r;
  }
  const Survivors s = irredundant_rows(dim, all);
  HRep kept;
  for (auto i : s.inequalities) kept.inequalities.push_back(all.inequalities[i]);
  for (auto i : s.equalities) kept.equalities.push_back(all.equalities[i]);
  return IntersectionResult{Polytope::from_hrep(dim, std::move(kept)), s.inequalities, s.equalities, std::nullopt};
}

Polytope intersect(const std::vector<Polytope>& ps) { return intersect_detailed(ps).polytope; }

HRep remove_redundant(std::size_t dim, const HRep& h) {
  const Survivors s = irredundant_rows(dim, h);
  HRep out;
  for (auto i : s.inequalities) out.inequalities.push_back(h.inequalities[i]);
  for (auto i : s.equalities) out.equalities.push_back(h.equalities[i]);
  return out;
}

SeparationCertificate separate(const Polytope& p, const QVector& x) {
  if (contains_point(p, x)) throw NotSeparable("point lies in the set; not separable");
  using Form = SeparationCertificate::Form;
  if (p.has_hrep()) {
    const HRep& h = p.hrep();
    for (const auto& r : h.inequalities) {
      const Rational lhs = exactq::dot(r.coeffs, x);
      if (lhs > r.rhs) return {Form::halfspace, {r.coeffs}, lhs - r.rhs, x};
    }
    for (const auto& r : h.equalities) {
      const Rational lhs = exactq::dot(r.coeffs, x);
      if (lhs > r.rhs) return {Form::halfspace, {r.coeffs}, lhs - r.rhs, x};
      if (lhs < r.rhs) return {Form::halfspace, {-r.coeffs}, r.rhs - lhs, x};
    }
  }
  // Farkas multipliers of the convex-combination LP: y₀ on Σλ = 1 and y on
  // the coordinate rows satisfy y₀ + y·v ≥ 0 at every generator and
  // y₀ + y·x < 0, so g = −y separates.
  const auto& vs = p.vrep().vertices;
  LpProblem lp;
  lp.objective = QVector(vs.size());
  lp.constraints = QMatrix(p.dim() + 1, vs.size());
  lp.rhs = QVector(p.dim() + 1);
  lp.rhs[0] = 1;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    lp.constraints(0, i) = 1;
    for (std::size_t j = 0; j < p.dim(); ++j) lp.constraints(j + 1, i) = vs[i][j];
  }
  for (std::size_t j = 0; j < p.dim(); ++j) lp.rhs[j + 1] = x[j];
  lp.senses.assign(p.dim() + 1, RowSense::equal);
  lp.bounds.assign(vs.size(), VariableBound::nonnegative);
  const LpOutcome out = exactq::lp_solve(lp);
  QVector g(p.dim());
  for (std::size_t j = 0; j < p.dim(); ++j) g[j] = -out.farkas[j + 1];
  g = exactq::primitive(g);
  const Rational gx = exactq::dot(g, x);
  Rational gap = gx - exactq::dot(g, vs.front());
  for (const auto& v : vs) gap = std::min(gap, gx - exactq::dot(g, v));
  return {Form::halfspace, {std::move(g)}, gap, x};
}

bool SeparationCertificate::verify_against(const std::vector<QVector>& generators) const {
  if (gap.sign() <= 0 || functionals.empty()) return false;
  if (form == Form::halfspace) {
    const Rational gx = exactq::dot(functional(), point);
    return std::all_of(generators.begin(), generators.end(),
                       [&](const QVector& v) { return gx - exactq::dot(functional(), v) >= gap; });
  }
  return std::all_of(generators.begin(), generators.end(), [&](const QVector& v) {
    return std::any_of(functionals.begin(), functionals.end(), [&](const QVector& g) {
      return (exactq::dot(g, point) - exactq::dot(g, v)).abs() >= gap;
    });
  });
}

bool verify_certificate(const Polytope& p, const SeparationCertificate& c) {
  if (c.gap.sign() <= 0 || c.functionals.empty()) return false;
  if (c.form == SeparationCertificate::Form::pointwise || p.has_vrep()) return c.verify_against(p.vrep().vertices);
  const LpOutcome out = optimize(p, c.functional(), Direction::maximize);
  if (out.status == LpStatus::infeasible) return true;
  if (out.status == LpStatus::unbounded) return false;
  return exactq::dot(c.functional(), c.point) - out.value >= c.gap;
}

}  // namespace credalkit::geom
