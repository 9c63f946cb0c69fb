#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "credalkit/credal.hpp"

namespace credalkit::joint {

using credal::CheckStatus;
using credal::CredalCollection;
using credal::CredalSet;
using credal::Mode;
using credal::Witness;
using exactq::QMatrix;
using exactq::QVector;
using exactq::Rational;
using geom::HRep;
using geom::Polytope;
using spaces::IndexTuple;
using spaces::ProcessSpace;

/// Finite-mode selection count above the configured cap.
class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(std::size_t selections, std::size_t cap);
  std::size_t selections;
  std::size_t cap;
};

/// Origin of a constraint row of P: the Ω-simplex (nullopt) or a tuple.
using RowOrigin = std::optional<IndexTuple>;

/**
 * Why P is empty. In polytope mode `system` consists of the Ω-simplex rows
 * and the pulled-back rows of `tuples` only, and `farkas` proves it
 * infeasible (inequality rows first, then equalities). `tuples` is
 * minimal: dropping any one of them makes the system feasible.
 */
struct InconsistencyDiagnosis {
  std::vector<IndexTuple> tuples;
  HRep system;
  std::vector<RowOrigin> inequality_origin;
  std::vector<RowOrigin> equality_origin;
  std::optional<QVector> farkas;
};

/// One nonempty selection cell of a finite-mode joint set.
struct Cell {
  /// Chosen member of V_α for each canonical α, in canonical tuple order.
  std::vector<QVector> selection;
  Polytope polytope;
  /// Some measure in the cell.
  QVector point;
};

struct JointOptions {
  std::size_t finite_cap = 10000;
};

/**
 * P = ⋂ V_α⁻¹ over the Ω-simplex. Polytope mode keeps P as an H-polytope
 * with the origin of every row; finite mode keeps the nonempty cells.
 */
struct JointModel {
  ProcessSpace space;
  Mode mode = Mode::polytope;
  std::vector<IndexTuple> tuples;
  std::optional<Polytope> polytope;
  std::vector<RowOrigin> inequality_origin;
  std::vector<RowOrigin> equality_origin;
  std::vector<Cell> cells;
  /// Finite mode: number of member selections (product of the list sizes).
  std::size_t selection_count = 0;
  std::optional<InconsistencyDiagnosis> diagnosis;

  [[nodiscard]] bool is_empty() const;
  [[nodiscard]] std::size_t dim() const { return space.omega_size(); }
};

/// The rows {p : Φ_α p ∈ V_α} pulled back from V_α's H-rep, without the simplex.
HRep pulled_back_rows(const CredalCollection& c, const IndexTuple& alpha);

/// V_α⁻¹ within the Ω-simplex. Polytope mode only.
Polytope preimage_set(const CredalCollection& c, const IndexTuple& alpha);

/// Requires a set for every element subset of T.
JointModel build_joint(const CredalCollection& c, const JointOptions& options = {});

/// The measure P consists of, when P is a single point (polytope mode;
/// finite mode when all cells collapse to the same point).
std::optional<QVector> unique_measure(const JointModel& j);

/// Φ̂_α(P). Throws std::domain_error for an empty joint set.
CredalSet pushforward_joint(const JointModel& j, const IndexTuple& alpha);

/// A witness on Y^n together with its functionals lifted to Ω (gᵀΦ_α).
struct LiftedWitness {
  Witness witness;
  std::vector<QVector> lifted;
};

struct InclusionCheck {
  CheckStatus status = CheckStatus::pass;
  std::optional<LiftedWitness> witness;
  std::string note;
};

struct RepresentationRecord {
  IndexTuple tuple;
  /// Φ̂_α(P) ⊆ V_α
  InclusionCheck image_in_set;
  /// V_α ⊆ Φ̂_α(P)
  InclusionCheck set_in_image;
};

struct RepresentationReport {
  std::vector<RepresentationRecord> records;
  bool joint_empty = false;
  [[nodiscard]] bool passed() const;
};

RepresentationReport verify_representation(const CredalCollection& c, const JointModel& j);

/// Exact re-check of a lifted witness: in the direction Φ̂(P) ⊆ V the
/// certificate must separate its measure from V_α; in the direction
/// V ⊆ Φ̂(P) the lifted functional must stay below g·v − gap over P.
bool verify_lifted(const CredalCollection& c, const JointModel& j, const IndexTuple& alpha, const LiftedWitness& w,
                   bool image_in_set);

struct LemmaRecord {
  /// "permutation_invariance", "monotonicity", "attainment" or "shortcut".
  std::string lemma;
  IndexTuple alpha;
  IndexTuple beta;
  bool holds = true;
  /// Monotonicity records only: the reverse containment fails.
  bool strict = false;
  std::string note;
};

struct LemmaReport {
  std::vector<LemmaRecord> records;
  std::string sigma_note;
  [[nodiscard]] bool passed() const;
  [[nodiscard]] bool any_strict() const;
};

/**
 * Preimage invariance under permutations, monotonicity of preimages
 * along α ≥ β, V_α ⊆ Φ̂_α(P), and P = V_γ*⁻¹ for γ* enumerating T.
 * Orderings are exhausted up to 24 per tuple; beyond that the first 24 in
 * lexicographic order are used.
 */
LemmaReport lemma_suite(const CredalCollection& c, const JointModel& j);

}  // namespace credalkit::joint
