#include "credalkit/joint.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace credalkit::joint {

using exactq::Direction;
using exactq::LpOutcome;
using exactq::LpStatus;
using geom::LinearConstraint;
using geom::SeparationCertificate;

CapExceeded::CapExceeded(std::size_t selections_, std::size_t cap_)
    : std::runtime_error("finite mode needs " + std::to_string(selections_) + " member selections, above the cap of " +
                         std::to_string(cap_)),
      selections(selections_),
      cap(cap_) {}

bool JointModel::is_empty() const {
  if (mode == Mode::finite) return cells.empty();
  return !polytope || polytope->is_empty();
}

namespace {

constexpr std::size_t kPermutationLimit = 24;

void append(HRep& dst, std::vector<RowOrigin>& ineq_origin, std::vector<RowOrigin>& eq_origin, const HRep& src,
            const RowOrigin& origin) {
  dst.inequalities.insert(dst.inequalities.end(), src.inequalities.begin(), src.inequalities.end());
  dst.equalities.insert(dst.equalities.end(), src.equalities.begin(), src.equalities.end());
  ineq_origin.insert(ineq_origin.end(), src.inequalities.size(), origin);
  eq_origin.insert(eq_origin.end(), src.equalities.size(), origin);
}

// Ω-simplex rows plus the pulled-back rows of the given tuples.
struct System {
  HRep h;
  std::vector<RowOrigin> ineq_origin;
  std::vector<RowOrigin> eq_origin;
};

System assemble(const CredalCollection& c, const std::vector<IndexTuple>& tuples) {
  System s;
  const std::size_t dim = c.space().omega_size();
  append(s.h, s.ineq_origin, s.eq_origin, Polytope::simplex(dim).hrep(), std::nullopt);
  for (const auto& t : tuples) append(s.h, s.ineq_origin, s.eq_origin, pulled_back_rows(c, t), t);
  return s;
}

LpOutcome feasibility(std::size_t dim, const HRep& h) {
  return exactq::lp_solve(geom::hrep_problem(dim, h, QVector(dim), Direction::minimize));
}

// Tuples carrying a nonzero multiplier.
std::vector<IndexTuple> farkas_support(const System& s, const QVector& y) {
  std::vector<IndexTuple> out;
  auto note = [&](const RowOrigin& o, const Rational& m) {
    if (o && !m.is_zero() && std::find(out.begin(), out.end(), *o) == out.end()) out.push_back(*o);
  };
  for (std::size_t i = 0; i < s.ineq_origin.size(); ++i) note(s.ineq_origin[i], y[i]);
  for (std::size_t i = 0; i < s.eq_origin.size(); ++i) note(s.eq_origin[i], y[s.ineq_origin.size() + i]);
  std::sort(out.begin(), out.end());
  return out;
}

// Deletion filter: drop each tuple whose removal keeps `infeasible` true.
std::vector<IndexTuple> minimal_conflict(std::vector<IndexTuple> tuples,
                                         const std::function<bool(const std::vector<IndexTuple>&)>& infeasible) {
  for (std::size_t i = 0; i < tuples.size();) {
    std::vector<IndexTuple> rest = tuples;
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
    if (infeasible(rest)) tuples = std::move(rest);
    else ++i;
  }
  return tuples;
}

QMatrix phi(const JointModel& j, const IndexTuple& alpha) { return spaces::phi_matrix(j.space, alpha); }

void require_coverage(const CredalCollection& c) {
  for (const auto& t : spaces::all_canonical_tuples(c.space())) {
    if (!c.defines(t)) throw credal::CredalError("no credal set defined for " + t.str(c.space()));
  }
}

// Finite mode: the rows {Φ_α p = v_α} of a (partial) selection.
HRep selection_rows(const ProcessSpace& space, const std::vector<IndexTuple>& tuples,
                    const std::vector<QVector>& chosen) {
  HRep h = Polytope::simplex(space.omega_size()).hrep();
  for (std::size_t t = 0; t < chosen.size(); ++t) {
    const QMatrix m = spaces::phi_matrix(space, tuples[t]);
    for (std::size_t r = 0; r < m.rows(); ++r) h.equalities.push_back({m.row(r), chosen[t][r]});
  }
  return h;
}

// Depth-first enumeration of selections with infeasible prefixes pruned.
// Calls `leaf` with every feasible complete selection and a point of its cell.
void enumerate_cells(const ProcessSpace& space, const std::vector<IndexTuple>& tuples,
                     const std::vector<std::vector<QVector>>& lists,
                     const std::function<bool(const std::vector<QVector>&, const QVector&)>& leaf) {
  std::vector<QVector> chosen;
  bool stop = false;
  std::function<void(std::size_t)> rec = [&](std::size_t depth) {
    if (stop) return;
    for (const auto& v : lists[depth]) {
      chosen.push_back(v);
      const LpOutcome out = feasibility(space.omega_size(), selection_rows(space, tuples, chosen));
      if (out.status == LpStatus::optimal) {
        if (depth + 1 == tuples.size()) {
          if (!leaf(chosen, out.solution)) stop = true;
        } else {
          rec(depth + 1);
        }
      }
      chosen.pop_back();
      if (stop) return;
    }
  };
  if (!tuples.empty()) rec(0);
}

std::vector<QVector> joint_images(const JointModel& j, const IndexTuple& alpha) {
  const QMatrix m = phi(j, alpha);
  std::vector<QVector> out;
  for (const auto& cell : j.cells) {
    QVector q = m * cell.point;
    if (std::find(out.begin(), out.end(), q) == out.end()) out.push_back(std::move(q));
  }
  return out;
}

std::vector<QVector> lift(const SeparationCertificate& cert, const QMatrix& m) {
  std::vector<QVector> out;
  for (const auto& g : cert.functionals) out.push_back(m.left_multiply(g));
  return out;
}

InclusionCheck failed(Witness w, const QMatrix& m) {
  InclusionCheck check;
  check.status = CheckStatus::fail;
  auto lifted = lift(w.certificate, m);
  check.witness = LiftedWitness{std::move(w), std::move(lifted)};
  return check;
}

// Φ̂_α(P) ⊆ V_α by maximizing every facet functional of V_α, composed with
// Φ_α, over P.
InclusionCheck image_in_set_polytope(const Polytope& p, const QMatrix& m, const CredalSet& v) {
  const HRep& h = v.body().hrep();
  auto probe = [&](const QVector& g, const Rational& bound) -> std::optional<InclusionCheck> {
    const QVector lifted = m.left_multiply(g);
    const LpOutcome out = geom::optimize(p, lifted, Direction::maximize);
    if (out.status != LpStatus::optimal || out.value <= bound) return std::nullopt;
    const QVector q = m * out.solution;
    return failed(Witness{q, {SeparationCertificate::Form::halfspace, {g}, out.value - bound, q}}, m);
  };
  for (const auto& r : h.inequalities)
    if (auto f = probe(r.coeffs, r.rhs)) return *f;
  for (const auto& r : h.equalities) {
    if (auto f = probe(r.coeffs, r.rhs)) return *f;
    if (auto f = probe(-r.coeffs, -r.rhs)) return *f;
  }
  return {};
}

// V_α ⊆ Φ̂_α(P) by one feasibility LP {p ∈ P, Φ_α p = v} per generator v.
// An infeasible LP yields multipliers y_M on the rows Φ_α p = v, and
// g = −y_M satisfies g·v > g·Φ_α p for every p ∈ P.
InclusionCheck set_in_image_polytope(const Polytope& p, const QMatrix& m, const CredalSet& v) {
  const std::size_t dim = p.dim();
  for (const auto& gen : v.generators()) {
    HRep h = p.hrep();
    const std::size_t offset = h.inequalities.size() + h.equalities.size();
    for (std::size_t r = 0; r < m.rows(); ++r) h.equalities.push_back({m.row(r), gen[r]});
    const LpOutcome out = feasibility(dim, h);
    if (out.status == LpStatus::optimal) continue;
    QVector g(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) g[r] = -out.farkas[offset + r];
    g = exactq::primitive(g);
    const QVector lifted = m.left_multiply(g);
    const LpOutcome best = geom::optimize(p, lifted, Direction::maximize);
    Rational gap = exactq::dot(g, gen);
    if (best.status == LpStatus::optimal) gap -= best.value;
    if (best.status == LpStatus::infeasible) gap = 1;  // empty P: any gap holds
    return failed(Witness{gen, {SeparationCertificate::Form::halfspace, {g}, gap, gen}}, m);
  }
  return {};
}

InclusionCheck from_inclusion(const credal::Inclusion& inc, const QMatrix& m) {
  if (inc.holds) return {};
  return failed(*inc.witness, m);
}

// Minimum and maximum of every coordinate coincide exactly at a single point.
std::optional<QVector> unique_measure_of(const Polytope& p, std::size_t dim) {
  QVector x(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const LpOutcome lo = geom::optimize(p, QVector::unit(dim, i), Direction::minimize);
    const LpOutcome hi = geom::optimize(p, QVector::unit(dim, i), Direction::maximize);
    if (lo.status != LpStatus::optimal || hi.status != LpStatus::optimal || lo.value != hi.value) return std::nullopt;
    x[i] = lo.value;
  }
  return x;
}

}  // namespace

// ---------------------------------------------------------------------------

HRep pulled_back_rows(const CredalCollection& c, const IndexTuple& alpha) {
  const CredalSet v = c.at(alpha);
  if (v.mode() != Mode::polytope) throw std::invalid_argument("preimages of finite sets are built as selection cells");
  const QMatrix m = spaces::phi_matrix(c.space(), alpha);
  const Polytope pulled = geom::linear_preimage(m, v.body(), Polytope::from_hrep(m.cols(), {}));
  return pulled.hrep();
}

Polytope preimage_set(const CredalCollection& c, const IndexTuple& alpha) {
  const System s = assemble(c, {alpha});
  return Polytope::from_hrep(c.space().omega_size(), s.h);
}

JointModel build_joint(const CredalCollection& c, const JointOptions& options) {
  require_coverage(c);
  JointModel j{c.space(), c.mode(), spaces::all_canonical_tuples(c.space()), {}, {}, {}, {}, 0, std::nullopt};
  const std::size_t dim = c.space().omega_size();

  if (c.mode() == Mode::finite) {
    std::vector<std::vector<QVector>> lists;
    std::size_t count = 1;
    bool over = false;
    for (const auto& t : j.tuples) {
      lists.push_back(c.at(t).members());
      count *= lists.back().size();  // count ≤ cap before this step, so no overflow
      if (count > options.finite_cap) over = true;
      if (over) break;
    }
    if (over) {
      // The full count, saturating instead of overflowing.
      std::size_t total = 1;
      for (const auto& t : j.tuples) {
        const std::size_t n = c.at(t).members().size();
        total = total > SIZE_MAX / n ? SIZE_MAX : total * n;
      }
      throw CapExceeded(total, options.finite_cap);
    }
    j.selection_count = count;
    enumerate_cells(c.space(), j.tuples, lists, [&](const std::vector<QVector>& sel, const QVector& point) {
      j.cells.push_back({sel, Polytope::from_hrep(dim, selection_rows(c.space(), j.tuples, sel)), point});
      return true;
    });
    if (j.cells.empty()) {
      InconsistencyDiagnosis d;
      d.tuples = minimal_conflict(j.tuples, [&](const std::vector<IndexTuple>& ts) {
        std::vector<std::vector<QVector>> sub;
        for (const auto& t : ts) sub.push_back(c.at(t).members());
        bool found = false;
        enumerate_cells(c.space(), ts, sub, [&](const auto&, const auto&) {
          found = true;
          return false;
        });
        return !found && !ts.empty();
      });
      j.diagnosis = std::move(d);
    }
    return j;
  }

  System all = assemble(c, j.tuples);
  std::vector<Polytope> parts{Polytope::from_hrep(dim, all.h)};
  const geom::IntersectionResult r = geom::intersect_detailed(parts);
  j.polytope = r.polytope;
  if (!r.farkas) {
    for (auto i : r.kept_inequalities) j.inequality_origin.push_back(all.ineq_origin[i]);
    for (auto i : r.kept_equalities) j.equality_origin.push_back(all.eq_origin[i]);
    return j;
  }

  j.inequality_origin = all.ineq_origin;
  j.equality_origin = all.eq_origin;
  auto infeasible = [&](const std::vector<IndexTuple>& ts) {
    return feasibility(dim, assemble(c, ts).h).status == LpStatus::infeasible;
  };
  InconsistencyDiagnosis d;
  d.tuples = minimal_conflict(farkas_support(all, *r.farkas), infeasible);
  System core = assemble(c, d.tuples);
  const LpOutcome out = feasibility(dim, core.h);
  if (out.status != LpStatus::infeasible) throw std::logic_error("minimal conflict lost its infeasibility");
  d.system = std::move(core.h);
  d.inequality_origin = std::move(core.ineq_origin);
  d.equality_origin = std::move(core.eq_origin);
  d.farkas = out.farkas;
  j.diagnosis = std::move(d);
  return j;
}

std::optional<QVector> unique_measure(const JointModel& j) {
  if (j.is_empty()) return std::nullopt;
  if (j.mode == Mode::finite) {
    for (const auto& cell : j.cells) {
      if (!unique_measure_of(cell.polytope, j.dim()) || cell.point != j.cells.front().point) return std::nullopt;
    }
    return j.cells.front().point;
  }
  return unique_measure_of(*j.polytope, j.dim());
}

CredalSet pushforward_joint(const JointModel& j, const IndexTuple& alpha) {
  if (j.is_empty()) throw std::domain_error("empty joint set");
  const QMatrix m = phi(j, alpha);
  if (j.mode == Mode::finite) return CredalSet::from_members(j.space, alpha, joint_images(j, alpha));
  return CredalSet::from_polytope(alpha, geom::linear_image(m, *j.polytope));
}

// ---------------------------------------------------------------------------

bool RepresentationReport::passed() const {
  if (joint_empty) return false;
  return std::all_of(records.begin(), records.end(), [](const RepresentationRecord& r) {
    return r.image_in_set.status == CheckStatus::pass && r.set_in_image.status == CheckStatus::pass;
  });
}

RepresentationReport verify_representation(const CredalCollection& c, const JointModel& j) {
  RepresentationReport report;
  report.joint_empty = j.is_empty();
  for (const auto& alpha : j.tuples) {
    RepresentationRecord rec{alpha, {}, {}};
    const CredalSet v = c.at(alpha);
    const QMatrix m = phi(j, alpha);
    if (report.joint_empty) {
      rec.set_in_image.status = CheckStatus::fail;
      rec.set_in_image.note = "joint set is empty; see the inconsistency diagnosis";
    } else if (j.mode == Mode::finite) {
      const CredalSet image = CredalSet::from_members(j.space, alpha, joint_images(j, alpha));
      rec.image_in_set = from_inclusion(credal::inclusion(image, v), m);
      rec.set_in_image = from_inclusion(credal::inclusion(v, image), m);
    } else {
      rec.image_in_set = image_in_set_polytope(*j.polytope, m, v);
      rec.set_in_image = set_in_image_polytope(*j.polytope, m, v);
    }
    report.records.push_back(std::move(rec));
  }
  return report;
}

bool verify_lifted(const CredalCollection& c, const JointModel& j, const IndexTuple& alpha, const LiftedWitness& w,
                   bool image_in_set) {
  if (j.is_empty()) return false;
  const QMatrix m = phi(j, alpha);
  const CredalSet v = c.at(alpha);
  const auto& cert = w.witness.certificate;
  if (cert.point != w.witness.measure || cert.gap.sign() <= 0) return false;
  if (lift(cert, m) != w.lifted) return false;

  if (image_in_set) {
    // The measure is attained by P and lies outside V_α.
    bool attained = false;
    if (j.mode == Mode::finite) {
      const auto images = joint_images(j, alpha);
      attained = std::find(images.begin(), images.end(), w.witness.measure) != images.end();
    } else {
      HRep h = j.polytope->hrep();
      for (std::size_t r = 0; r < m.rows(); ++r) h.equalities.push_back({m.row(r), w.witness.measure[r]});
      attained = feasibility(j.dim(), h).status == LpStatus::optimal;
    }
    return attained && credal::verify_witness(w.witness, v);
  }

  if (!v.contains(w.witness.measure)) return false;
  if (j.mode == Mode::finite) return cert.verify_against(joint_images(j, alpha));
  if (cert.form != SeparationCertificate::Form::halfspace) return false;
  const LpOutcome best = geom::optimize(*j.polytope, w.lifted.front(), Direction::maximize);
  if (best.status == LpStatus::infeasible) return true;
  return best.status == LpStatus::optimal && exactq::dot(cert.functional(), cert.point) - best.value >= cert.gap;
}

// ---------------------------------------------------------------------------

bool LemmaReport::passed() const {
  return std::all_of(records.begin(), records.end(), [](const LemmaRecord& r) { return r.holds; });
}

bool LemmaReport::any_strict() const {
  return std::any_of(records.begin(), records.end(), [](const LemmaRecord& r) { return r.strict; });
}

LemmaReport lemma_suite(const CredalCollection& c, const JointModel& j) {
  LemmaReport report;
  report.sigma_note =
      "every finitely additive measure on a finite space is countably additive, so the countably additive "
      "part of P coincides with P";
  const auto& space = c.space();

  if (j.mode == Mode::polytope) {
    std::map<IndexTuple, Polytope> pre;
    for (const auto& t : j.tuples) pre.emplace(t, preimage_set(c, t));

    for (const auto& alpha : j.tuples) {
      if (alpha.size() < 2) continue;
      const auto perms = spaces::permutations_of(space, alpha);
      for (std::size_t i = 1; i < perms.size() && i < kPermutationLimit; ++i) {
        const bool same = geom::equals(preimage_set(c, perms[i]), pre.at(alpha));
        report.records.push_back({"permutation_invariance", alpha, perms[i], same, false, ""});
      }
    }
    for (const auto& alpha : j.tuples) {
      for (const auto& beta : j.tuples) {
        if (beta.size() >= alpha.size() || !spaces::dominates(alpha, beta)) continue;
        const bool holds = geom::is_subset(pre.at(alpha), pre.at(beta)).holds;
        const bool strict = holds && !geom::is_subset(pre.at(beta), pre.at(alpha)).holds;
        report.records.push_back({"monotonicity", alpha, beta, holds, strict, ""});
      }
    }
  }

  const RepresentationReport rep = verify_representation(c, j);
  for (const auto& r : rep.records) {
    report.records.push_back(
        {"attainment", r.tuple, r.tuple, r.set_in_image.status == CheckStatus::pass, false, r.set_in_image.note});
  }

  if (j.mode == Mode::polytope) {
    const IndexTuple gamma = IndexTuple::full(space);
    const bool same = !j.is_empty() && geom::equals(*j.polytope, preimage_set(c, gamma));
    report.records.push_back({"shortcut", gamma, gamma, same, false, "P equals the preimage of the full tuple"});
  }
  return report;
}

}  // namespace credalkit::joint
