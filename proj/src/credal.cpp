#include "credalkit/credal.hpp"

#include <algorithm>
#include <set>

namespace credalkit::credal {

using exactq::Direction;
using exactq::LpStatus;
using geom::HRep;
using geom::LinearConstraint;
using geom::VRep;

namespace {

std::vector<QVector> dedupe(std::vector<QVector> xs) {
  std::vector<QVector> out;
  for (auto& x : xs)
    if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(std::move(x));
  return out;
}

void require_measures(const std::vector<QVector>& xs, std::size_t dim, const std::string& where) {
  for (const auto& x : xs) {
    if (x.size() != dim) {
      throw CredalError(where + ": vector has " + std::to_string(x.size()) + " entries, expected " +
                        std::to_string(dim));
    }
    if (!spaces::is_measure(x)) throw CredalError(where + ": entries must be nonnegative and sum to 1");
  }
}

std::string describe(const ProcessSpace& space, const IndexTuple& t) { return "credal set " + t.str(space); }

// Pointwise certificate for a point inside the hull of a finite set but not
// a member of it: the coordinate functionals and the smallest sup-distance.
SeparationCertificate pointwise_certificate(const std::vector<QVector>& members, const QVector& p0) {
  SeparationCertificate c;
  c.form = SeparationCertificate::Form::pointwise;
  c.point = p0;
  for (std::size_t i = 0; i < p0.size(); ++i) c.functionals.push_back(QVector::unit(p0.size(), i));
  bool first = true;
  for (const auto& v : members) {
    Rational far;
    for (std::size_t i = 0; i < p0.size(); ++i) far = std::max(far, (p0[i] - v[i]).abs());
    if (first || far < c.gap) c.gap = far;
    first = false;
  }
  return c;
}

SeparationCertificate finite_separation(const std::vector<QVector>& members, const QVector& p0) {
  const Polytope hull = Polytope::from_vrep(p0.size(), VRep{members});
  if (!geom::contains_point(hull, p0)) return geom::separate(hull, p0);
  return pointwise_certificate(members, p0);
}

}  // namespace

// ---------------------------------------------------------------------------

CredalSet CredalSet::from_vertices(const ProcessSpace& space, IndexTuple tuple, std::vector<QVector> vertices) {
  const std::size_t dim = space.product_size(tuple.size());
  const std::string where = describe(space, tuple);
  if (vertices.empty()) throw CredalError(where + " is empty");
  require_measures(vertices, dim, where);
  CredalSet s(std::move(tuple), Mode::polytope, dim);
  s.body_ = Polytope::from_vrep(dim, VRep{dedupe(std::move(vertices))});
  return s;
}

CredalSet CredalSet::from_hrep(const ProcessSpace& space, IndexTuple tuple, HRep h) {
  const std::size_t dim = space.product_size(tuple.size());
  const std::string where = describe(space, tuple);
  for (const auto& r : h.inequalities)
    if (r.coeffs.size() != dim) throw CredalError(where + ": constraint row has wrong length");
  for (const auto& r : h.equalities)
    if (r.coeffs.size() != dim) throw CredalError(where + ": constraint row has wrong length");
  const HRep simplex = Polytope::simplex(dim).hrep();
  h.inequalities.insert(h.inequalities.end(), simplex.inequalities.begin(), simplex.inequalities.end());
  h.equalities.insert(h.equalities.end(), simplex.equalities.begin(), simplex.equalities.end());
  CredalSet s(std::move(tuple), Mode::polytope, dim);
  s.body_ = Polytope::from_hrep(dim, std::move(h));
  if (s.body_->is_empty()) throw CredalError(where + " is empty");
  return s;
}

CredalSet CredalSet::from_members(const ProcessSpace& space, IndexTuple tuple, std::vector<QVector> members) {
  const std::size_t dim = space.product_size(tuple.size());
  const std::string where = describe(space, tuple);
  if (members.empty()) throw CredalError(where + " is empty");
  require_measures(members, dim, where);
  CredalSet s(std::move(tuple), Mode::finite, dim);
  s.members_ = dedupe(std::move(members));
  return s;
}

CredalSet CredalSet::from_polytope(IndexTuple tuple, Polytope body) {
  if (body.is_empty()) throw CredalError("credal set is empty");
  CredalSet s(std::move(tuple), Mode::polytope, body.dim());
  s.body_ = std::move(body);
  return s;
}

const Polytope& CredalSet::body() const {
  if (mode_ != Mode::polytope) throw std::logic_error("finite credal set has no polytope body");
  return *body_;
}

const std::vector<QVector>& CredalSet::members() const {
  if (mode_ != Mode::finite) throw std::logic_error("polytope credal set has no member list");
  return members_;
}

const std::vector<QVector>& CredalSet::generators() const {
  return mode_ == Mode::finite ? members_ : body_->vrep().vertices;
}

bool CredalSet::contains(const QVector& p) const {
  if (mode_ == Mode::finite) return std::find(members_.begin(), members_.end(), p) != members_.end();
  return geom::contains_point(*body_, p);
}

CredalSet CredalSet::pushforward(const QMatrix& m, IndexTuple target) const {
  if (m.cols() != dim_) throw exactq::DimensionError("pushforward: map does not match the set's dimension");
  if (mode_ == Mode::polytope) return from_polytope(std::move(target), geom::linear_image(m, *body_));
  std::vector<QVector> images;
  for (const auto& v : members_) images.push_back(m * v);
  CredalSet s(std::move(target), Mode::finite, m.rows());
  s.members_ = dedupe(std::move(images));
  return s;
}

// ---------------------------------------------------------------------------

Inclusion inclusion(const CredalSet& a, const CredalSet& b) {
  if (a.mode() != b.mode()) throw CredalError("cannot compare a finite set with a polytope");
  if (a.dim() != b.dim()) throw exactq::DimensionError("inclusion: dimension mismatch");
  if (a.mode() == Mode::polytope) {
    auto r = geom::is_subset(a.body(), b.body());
    if (r.holds) return {};
    QVector point = r.certificate->point;
    return {false, Witness{std::move(point), std::move(*r.certificate)}};
  }
  for (const auto& v : a.members()) {
    if (!b.contains(v)) return {false, Witness{v, finite_separation(b.members(), v)}};
  }
  return {};
}

bool verify_witness(const Witness& w, const CredalSet& set) {
  if (w.certificate.point != w.measure) return false;
  if (set.mode() == Mode::finite) return w.certificate.verify_against(set.members());
  return geom::verify_certificate(set.body(), w.certificate);
}

// ---------------------------------------------------------------------------

CredalCollection::CredalCollection(ProcessSpace space, std::vector<CredalSet> sets, PermutationPolicy policy)
    : space_(std::move(space)), policy_(policy) {
  if (sets.empty()) throw CredalError("collection defines no credal sets");
  mode_ = sets.front().mode();
  for (auto& s : sets) {
    const std::string name = s.tuple().str(space_);
    if (s.mode() != mode_) throw CredalError("credal set " + name + " mixes finite and polytope modes");
    if (s.dim() != space_.product_size(s.tuple().size())) throw CredalError("credal set " + name + " has wrong dimension");
    if (policy_ == PermutationPolicy::synthesized) {
      if (!s.tuple().is_canonical()) {
        throw CredalError("credal set " + name + " is not in ascending index order; use the supplied permutation policy");
      }
    }
    const IndexTuple key = s.tuple();
    if (!sets_.emplace(key, std::move(s)).second) throw CredalError("credal set " + name + " is defined twice");
  }
}

bool CredalCollection::defines(const IndexTuple& alpha) const {
  return std::any_of(sets_.begin(), sets_.end(),
                     [&](const auto& kv) { return spaces::same_elements(kv.first, alpha); });
}

CredalSet CredalCollection::at(const IndexTuple& alpha) const {
  if (auto it = sets_.find(alpha); it != sets_.end()) return it->second;
  // Any supplied ordering of the same elements, relabeled onto alpha.
  for (const auto& [key, set] : sets_) {
    if (!spaces::same_elements(key, alpha)) continue;
    const auto pi = spaces::relabeling(key, alpha);
    return set.pushforward(spaces::permutation_matrix(space_, alpha.size(), pi), alpha);
  }
  throw CredalError("no credal set defined for " + alpha.str(space_));
}

bool CredalCollection::covers_all_subsets() const {
  for (const auto& t : spaces::all_canonical_tuples(space_)) {
    const bool present = std::any_of(sets_.begin(), sets_.end(),
                                     [&](const auto& kv) { return spaces::same_elements(kv.first, t); });
    if (!present) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

std::string to_string(Condition c) { return c == Condition::c1 ? "C1" : "C2"; }

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::unchecked: return "unchecked";
    case CheckStatus::by_construction: return "by_construction";
  }
  return "unknown";
}

bool ConsistencyReport::passed() const {
  return std::none_of(records.begin(), records.end(),
                      [](const CheckRecord& r) { return r.status == CheckStatus::fail; });
}

namespace {

void record_both(ConsistencyReport& report, Condition cond, const IndexTuple& source, const IndexTuple& target,
                 const CredalSet& image, const CredalSet& v_target) {
  auto add = [&](const char* direction, const Inclusion& inc) {
    report.records.push_back({cond, source, target, direction, inc.holds ? CheckStatus::pass : CheckStatus::fail,
                              inc.witness, ""});
  };
  add("image ⊆ target", inclusion(image, v_target));
  add("target ⊆ image", inclusion(v_target, image));
}

}  // namespace

ConsistencyReport check_condition1(const CredalCollection& c) {
  ConsistencyReport report;
  const auto& space = c.space();
  const auto& sets = c.supplied();
  if (c.policy() == PermutationPolicy::synthesized) {
    for (const auto& [alpha, set] : sets) {
      if (alpha.size() < 2) continue;
      report.records.push_back({Condition::c1, alpha, alpha, "all orderings", CheckStatus::by_construction,
                                std::nullopt, "permuted sets are derived from " + alpha.str(space)});
    }
    return report;
  }

  std::set<IndexTuple> groups;
  for (const auto& kv : sets) groups.insert(kv.first.canonical());
  for (const auto& group : groups) {
    if (group.size() < 2) continue;
    std::vector<IndexTuple> present;
    for (const auto& t : spaces::permutations_of(space, group))
      if (sets.count(t)) present.push_back(t);
    for (std::size_t i = 0; i < present.size(); ++i) {
      for (std::size_t j = i + 1; j < present.size(); ++j) {
        const IndexTuple& alpha = present[i];
        const IndexTuple& target = present[j];
        const QMatrix m = condition_map(space, Condition::c1, alpha, target);
        record_both(report, Condition::c1, alpha, target, sets.at(alpha).pushforward(m, target), sets.at(target));
      }
    }
    for (const auto& t : spaces::permutations_of(space, group)) {
      if (sets.count(t)) continue;
      report.records.push_back({Condition::c1, present.front(), t, "unchecked pair", CheckStatus::unchecked,
                                std::nullopt, "no credal set supplied for " + t.str(space)});
    }
  }
  return report;
}

ConsistencyReport check_condition2(const CredalCollection& c) {
  ConsistencyReport report;
  const auto& space = c.space();
  const auto& sets = c.supplied();
  for (const auto& [alpha, v_alpha] : sets) {
    for (const auto& [beta, v_beta] : sets) {
      if (beta.size() >= alpha.size() || !spaces::dominates(alpha, beta)) continue;
      const QMatrix m = condition_map(space, Condition::c2, alpha, beta);
      record_both(report, Condition::c2, alpha, beta, v_alpha.pushforward(m, beta), v_beta);
    }
  }
  return report;
}

QMatrix condition_map(const ProcessSpace& space, Condition cond, const IndexTuple& source,
                      const IndexTuple& target) {
  if (cond == Condition::c1) return spaces::permutation_matrix(space, source.size(), spaces::relabeling(source, target));
  return spaces::marginal_matrix(space, source.size(), target.size()) *
         spaces::permutation_matrix(space, source.size(), spaces::alignment(source, target));
}

bool verify_record(const CredalCollection& c, const CheckRecord& r) {
  if (!r.witness) return false;
  const CredalSet image = c.at(r.source).pushforward(condition_map(c.space(), r.condition, r.source, r.target), r.target);
  const CredalSet target = c.at(r.target);
  const bool forward = r.direction == "image ⊆ target";
  if (!forward && r.direction != "target ⊆ image") return false;
  const CredalSet& inside = forward ? image : target;
  const CredalSet& outside = forward ? target : image;
  return inside.contains(r.witness->measure) && verify_witness(*r.witness, outside);
}

// ---------------------------------------------------------------------------

namespace {

Rational expectation(const CredalSet& v, const QVector& f, Direction dir) {
  if (f.size() != v.dim()) {
    throw exactq::DimensionError("function has " + std::to_string(f.size()) + " values, expected " +
                                 std::to_string(v.dim()));
  }
  if (v.mode() == Mode::finite) {
    Rational best = exactq::dot(f, v.members().front());
    for (const auto& p : v.members()) {
      const Rational x = exactq::dot(f, p);
      best = dir == Direction::minimize ? std::min(best, x) : std::max(best, x);
    }
    return best;
  }
  const auto out = geom::optimize(v.body(), f, dir);
  if (out.status != LpStatus::optimal) throw std::logic_error("expectation LP over a nonempty credal set not optimal");
  return out.value;
}

}  // namespace

Rational lower_expectation(const CredalSet& v, const QVector& f) { return expectation(v, f, Direction::minimize); }
Rational upper_expectation(const CredalSet& v, const QVector& f) { return expectation(v, f, Direction::maximize); }

QVector extend_measure(std::size_t size, const std::vector<std::vector<std::size_t>>& atoms, const QVector& masses) {
  if (atoms.size() != masses.size()) throw CredalError("partition has " + std::to_string(atoms.size()) +
                                                       " atoms but " + std::to_string(masses.size()) + " masses");
  if (!spaces::is_measure(masses)) throw CredalError("atom masses must be nonnegative and sum to 1");
  std::vector<bool> covered(size, false);
  QVector out(size);
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    if (atoms[a].empty()) throw CredalError("partition atom " + std::to_string(a) + " is empty");
    const Rational share = masses[a] / Rational(static_cast<long>(atoms[a].size()));
    for (auto i : atoms[a]) {
      if (i >= size) throw CredalError("partition atom " + std::to_string(a) + " names point " + std::to_string(i) +
                                       " outside the space");
      if (covered[i]) throw CredalError("point " + std::to_string(i) + " belongs to two atoms");
      covered[i] = true;
      out[i] = share;
    }
  }
  for (std::size_t i = 0; i < size; ++i)
    if (!covered[i]) throw CredalError("point " + std::to_string(i) + " is not covered by any atom");
  return out;
}

QVector aggregate(const QVector& measure, const std::vector<std::vector<std::size_t>>& atoms) {
  QVector out(atoms.size());
  for (std::size_t a = 0; a < atoms.size(); ++a)
    for (auto i : atoms[a]) out[a] += measure.at(i);
  return out;
}

SeparationCertificate closedness_witness(const CredalSet& v, const QVector& p0) {
  if (p0.size() != v.dim()) throw exactq::DimensionError("closedness witness: dimension mismatch");
  if (v.mode() == Mode::polytope) return geom::separate(v.body(), p0);
  if (v.contains(p0)) throw geom::NotSeparable("point is a member of the set; not separable");
  SeparationCertificate c = finite_separation(v.members(), p0);
  if (!c.verify_against(v.members())) throw std::logic_error("finite separation certificate failed to verify");
  return c;
}

}  // namespace credalkit::credal
