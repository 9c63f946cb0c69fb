#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "credalkit/rational.hpp"

namespace credalkit::spaces {

using exactq::QMatrix;
using exactq::QVector;

/// Raised for unknown labels, repeated indices and malformed permutations.
class SpaceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/**
 * A finite index set T and outcome set Y, both with a fixed order. The
 * canonical space Ω = Y^T is indexed row-major with the first element of T
 * most significant; Yⁿ for an index tuple uses the same convention.
 */
class ProcessSpace {
 public:
  ProcessSpace(std::vector<std::string> index_labels, std::vector<std::string> outcome_labels);

  [[nodiscard]] std::size_t index_count() const { return index_labels_.size(); }
  [[nodiscard]] std::size_t outcome_count() const { return outcome_labels_.size(); }
  /// m^n
  [[nodiscard]] std::size_t product_size(std::size_t n) const;
  /// m^k, the number of points of Ω.
  [[nodiscard]] std::size_t omega_size() const { return product_size(index_count()); }

  [[nodiscard]] const std::vector<std::string>& index_labels() const { return index_labels_; }
  [[nodiscard]] const std::vector<std::string>& outcome_labels() const { return outcome_labels_; }
  [[nodiscard]] std::size_t index_position(std::string_view label) const;
  [[nodiscard]] std::size_t outcome_position(std::string_view label) const;

  /// Row-major index of an outcome tuple given by positions in Y.
  [[nodiscard]] std::size_t product_index(const std::vector<std::size_t>& outcomes) const;
  /// Inverse of product_index for tuples of length n.
  [[nodiscard]] std::vector<std::size_t> product_point(std::size_t index, std::size_t n) const;

  friend bool operator==(const ProcessSpace&, const ProcessSpace&) = default;

 private:
  std::vector<std::string> index_labels_;
  std::vector<std::string> outcome_labels_;
};

/// Row-major index of an outcome tuple given by labels.
std::size_t product_index(const ProcessSpace& space, const std::vector<std::string>& outcomes);

/// A sequence of pairwise distinct elements of T, stored as positions in T.
class IndexTuple {
 public:
  IndexTuple() = default;
  IndexTuple(const ProcessSpace& space, std::vector<std::size_t> positions);
  static IndexTuple from_labels(const ProcessSpace& space, const std::vector<std::string>& labels);
  /// The tuple listing all of T in T's order.
  static IndexTuple full(const ProcessSpace& space);

  [[nodiscard]] std::size_t size() const { return positions_.size(); }
  [[nodiscard]] const std::vector<std::size_t>& positions() const { return positions_; }
  std::size_t operator[](std::size_t i) const { return positions_[i]; }

  /// Elements in ascending T-order.
  [[nodiscard]] IndexTuple canonical() const;
  [[nodiscard]] bool is_canonical() const;
  [[nodiscard]] std::vector<std::string> labels(const ProcessSpace& space) const;
  [[nodiscard]] std::string str(const ProcessSpace& space) const;

  friend bool operator==(const IndexTuple&, const IndexTuple&) = default;
  /// Canonical tuple order: shorter first, then lexicographic positions.
  friend bool operator<(const IndexTuple& a, const IndexTuple& b);

 private:
  std::vector<std::size_t> positions_;
};

/// α ≥ β: the elements of β form a subset of the elements of α.
bool dominates(const IndexTuple& alpha, const IndexTuple& beta);
bool same_elements(const IndexTuple& a, const IndexTuple& b);

/// Permutation (0-based) π with alpha_reordered[j] = alpha[π[j]], where the
/// first |beta| slots list beta. Requires dominates(alpha, beta).
std::vector<std::size_t> alignment(const IndexTuple& alpha, const IndexTuple& beta);

/// Permutation π with target[j] = source[π[j]]. Requires same_elements.
std::vector<std::size_t> relabeling(const IndexTuple& source, const IndexTuple& target);

/// Every nonempty subset of T as its canonical tuple, in canonical tuple order.
std::vector<IndexTuple> all_canonical_tuples(const ProcessSpace& space);

/// All orderings of a tuple's elements, in lexicographic order of positions.
std::vector<IndexTuple> permutations_of(const ProcessSpace& space, const IndexTuple& tuple);

/// Matrix of the pushforward under ω ↦ (ω(t₁),…,ω(t_n)); size m^n × m^k.
QMatrix phi_matrix(const ProcessSpace& space, const IndexTuple& alpha);

/// Matrix of the pushforward under f_π(y₁,…,y_n) = (y_{π(1)},…,y_{π(n)}),
/// π given 0-based. Satisfies M(π)·M(ρ) = M(ρ∘π).
QMatrix permutation_matrix(const ProcessSpace& space, std::size_t n, const std::vector<std::size_t>& pi);

/// Sums out the trailing (n_plus_m − n) coordinates; size m^n × m^(n+m).
QMatrix marginal_matrix(const ProcessSpace& space, std::size_t n_plus_m, std::size_t n);

/// Nonnegative entries summing to exactly one.
bool is_measure(const QVector& v);

}  // namespace credalkit::spaces
