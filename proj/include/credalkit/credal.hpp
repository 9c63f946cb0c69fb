#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "credalkit/polytope.hpp"
#include "credalkit/spaces.hpp"

namespace credalkit::credal {

using exactq::QMatrix;
using exactq::QVector;
using exactq::Rational;
using geom::Polytope;
using geom::SeparationCertificate;
using spaces::IndexTuple;
using spaces::ProcessSpace;

/// Structurally invalid credal data: empty sets, non-measures, clashing tuples.
class CredalError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Mode { polytope, finite };

/**
 * A nonempty closed set of measures on Y^n attached to an index tuple.
 * Either a rational polytope inside the simplex, or a finite list of
 * measure vectors (duplicates removed, first occurrence kept).
 */
class CredalSet {
 public:
  /// Vertex description; every vertex must be a measure.
  static CredalSet from_vertices(const ProcessSpace& space, IndexTuple tuple, std::vector<QVector> vertices);
  /// Constraint description; simplex constraints are appended.
  static CredalSet from_hrep(const ProcessSpace& space, IndexTuple tuple, geom::HRep h);
  static CredalSet from_members(const ProcessSpace& space, IndexTuple tuple, std::vector<QVector> members);
  /// Wraps a polytope already known to lie in the simplex.
  static CredalSet from_polytope(IndexTuple tuple, Polytope body);

  [[nodiscard]] const IndexTuple& tuple() const { return tuple_; }
  [[nodiscard]] Mode mode() const { return mode_; }
  [[nodiscard]] std::size_t dim() const { return dim_; }
  /// Polytope mode only.
  [[nodiscard]] const Polytope& body() const;
  /// Finite mode only.
  [[nodiscard]] const std::vector<QVector>& members() const;
  /// Vertices (polytope mode) or members (finite mode).
  [[nodiscard]] const std::vector<QVector>& generators() const;
  [[nodiscard]] bool contains(const QVector& p) const;

  /// Image under a column-stochastic matrix, attached to `target`.
  [[nodiscard]] CredalSet pushforward(const QMatrix& m, IndexTuple target) const;

 private:
  CredalSet(IndexTuple tuple, Mode mode, std::size_t dim) : tuple_(std::move(tuple)), mode_(mode), dim_(dim) {}
  IndexTuple tuple_;
  Mode mode_;
  std::size_t dim_;
  std::optional<Polytope> body_;
  std::vector<QVector> members_;
};

/// An offending measure together with the certificate excluding it.
struct Witness {
  QVector measure;
  SeparationCertificate certificate;
};

/// Result of testing a ⊆ b; on failure the witness lies in a but not in b.
struct Inclusion {
  bool holds = true;
  std::optional<Witness> witness;
};

/// a ⊆ b for two sets of the same mode and dimension.
Inclusion inclusion(const CredalSet& a, const CredalSet& b);

/// Exact check that a witness excludes its measure from `set`.
bool verify_witness(const Witness& w, const CredalSet& set);

enum class PermutationPolicy { synthesized, supplied };

/**
 * The family {V_α}. Under the synthesized policy only canonical
 * (ascending) tuples are given and every other ordering is derived by
 * pushforward; under the supplied policy any orderings may be given.
 */
class CredalCollection {
 public:
  CredalCollection(ProcessSpace space, std::vector<CredalSet> sets,
                   PermutationPolicy policy = PermutationPolicy::synthesized);

  [[nodiscard]] const ProcessSpace& space() const { return space_; }
  [[nodiscard]] PermutationPolicy policy() const { return policy_; }
  [[nodiscard]] Mode mode() const { return mode_; }
  /// Supplied sets in canonical tuple order.
  [[nodiscard]] const std::map<IndexTuple, CredalSet>& supplied() const { return sets_; }

  /// Whether some ordering of α's elements was supplied.
  [[nodiscard]] bool defines(const IndexTuple& alpha) const;
  /// V_α, derived by relabeling when it was not supplied directly.
  [[nodiscard]] CredalSet at(const IndexTuple& alpha) const;
  /// Every element subset of T has at least one supplied ordering.
  [[nodiscard]] bool covers_all_subsets() const;

 private:
  ProcessSpace space_;
  PermutationPolicy policy_;
  Mode mode_ = Mode::polytope;
  std::map<IndexTuple, CredalSet> sets_;
};

enum class Condition { c1, c2 };
enum class CheckStatus { pass, fail, unchecked, by_construction };

std::string to_string(Condition c);
std::string to_string(CheckStatus s);

struct CheckRecord {
  Condition condition;
  IndexTuple source;
  IndexTuple target;
  /// Which inclusion was tested, e.g. "image ⊆ target".
  std::string direction;
  CheckStatus status;
  std::optional<Witness> witness;
  std::string note;
};

struct ConsistencyReport {
  std::vector<CheckRecord> records;
  /// No record failed (unchecked notices do not count as failures).
  [[nodiscard]] bool passed() const;
};

/// Permutation compatibility between orderings of the same elements.
ConsistencyReport check_condition1(const CredalCollection& c);
/// Marginal compatibility between every α and every β on a proper subset of α.
ConsistencyReport check_condition2(const CredalCollection& c);

/// Matrix carrying measures of `source` onto `target`: a relabeling (C1)
/// or the aligned marginal (C2).
QMatrix condition_map(const ProcessSpace& space, Condition cond, const IndexTuple& source, const IndexTuple& target);

/// Exact re-check of a failed record against the collection: the witness
/// measure lies on the including side and its certificate excludes it from
/// the other. Records without a witness are rejected.
bool verify_record(const CredalCollection& c, const CheckRecord& r);

Rational lower_expectation(const CredalSet& v, const QVector& f);
Rational upper_expectation(const CredalSet& v, const QVector& f);

/// Uniform split of each atom's mass over its points. Atoms must be
/// nonempty, disjoint and cover {0..size−1}; masses a measure.
QVector extend_measure(std::size_t size, const std::vector<std::vector<std::size_t>>& atoms, const QVector& masses);
/// Mass of each atom.
QVector aggregate(const QVector& measure, const std::vector<std::vector<std::size_t>>& atoms);

/// Certificate that p0 ∉ v. Throws geom::NotSeparable when p0 ∈ v.
SeparationCertificate closedness_witness(const CredalSet& v, const QVector& p0);

}  // namespace credalkit::credal
