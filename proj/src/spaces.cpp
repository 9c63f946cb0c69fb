#include "credalkit/spaces.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace credalkit::spaces {

namespace {

void require_unique(const std::vector<std::string>& labels, const char* what) {
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) throw SpaceError(std::string("duplicate ") + what + " label \"" + l + "\"");
  }
}

}  // namespace

ProcessSpace::ProcessSpace(std::vector<std::string> index_labels, std::vector<std::string> outcome_labels)
    : index_labels_(std::move(index_labels)), outcome_labels_(std::move(outcome_labels)) {
  if (index_labels_.empty()) throw SpaceError("index set T must be nonempty");
  if (outcome_labels_.size() < 2) throw SpaceError("outcome set Y needs at least two labels");
  require_unique(index_labels_, "index");
  require_unique(outcome_labels_, "outcome");
}

std::size_t ProcessSpace::product_size(std::size_t n) const {
  std::size_t s = 1;
  for (std::size_t i = 0; i < n; ++i) s *= outcome_count();
  return s;
}

std::size_t ProcessSpace::index_position(std::string_view label) const {
  const auto it = std::find(index_labels_.begin(), index_labels_.end(), label);
  if (it == index_labels_.end()) throw SpaceError("unknown index label \"" + std::string(label) + "\"");
  return static_cast<std::size_t>(it - index_labels_.begin());
}

std::size_t ProcessSpace::outcome_position(std::string_view label) const {
  const auto it = std::find(outcome_labels_.begin(), outcome_labels_.end(), label);
  if (it == outcome_labels_.end()) throw SpaceError("unknown outcome label \"" + std::string(label) + "\"");
  return static_cast<std::size_t>(it - outcome_labels_.begin());
}

std::size_t ProcessSpace::product_index(const std::vector<std::size_t>& outcomes) const {
  std::size_t idx = 0;
  for (auto y : outcomes) {
    if (y >= outcome_count()) throw SpaceError("outcome position out of range");
    idx = idx * outcome_count() + y;
  }
  return idx;
}

std::vector<std::size_t> ProcessSpace::product_point(std::size_t index, std::size_t n) const {
  std::vector<std::size_t> y(n);
  for (std::size_t j = n; j-- > 0;) {
    y[j] = index % outcome_count();
    index /= outcome_count();
  }
  return y;
}

std::size_t product_index(const ProcessSpace& space, const std::vector<std::string>& outcomes) {
  std::vector<std::size_t> pos;
  pos.reserve(outcomes.size());
  for (const auto& o : outcomes) pos.push_back(space.outcome_position(o));
  return space.product_index(pos);
}

// ---------------------------------------------------------------------------

IndexTuple::IndexTuple(const ProcessSpace& space, std::vector<std::size_t> positions)
    : positions_(std::move(positions)) {
  if (positions_.empty()) throw SpaceError("index tuple must be nonempty");
  std::vector<bool> seen(space.index_count(), false);
  for (auto p : positions_) {
    if (p >= space.index_count()) throw SpaceError("index position out of range");
    if (seen[p]) throw SpaceError("index tuple repeats \"" + space.index_labels()[p] + "\"");
    seen[p] = true;
  }
}

IndexTuple IndexTuple::from_labels(const ProcessSpace& space, const std::vector<std::string>& labels) {
  std::vector<std::size_t> pos;
  pos.reserve(labels.size());
  for (const auto& l : labels) pos.push_back(space.index_position(l));
  return IndexTuple(space, std::move(pos));
}

IndexTuple IndexTuple::full(const ProcessSpace& space) {
  std::vector<std::size_t> pos(space.index_count());
  std::iota(pos.begin(), pos.end(), std::size_t{0});
  return IndexTuple(space, std::move(pos));
}

IndexTuple IndexTuple::canonical() const {
  IndexTuple c = *this;
  std::sort(c.positions_.begin(), c.positions_.end());
  return c;
}

bool IndexTuple::is_canonical() const { return std::is_sorted(positions_.begin(), positions_.end()); }

std::vector<std::string> IndexTuple::labels(const ProcessSpace& space) const {
  std::vector<std::string> out;
  for (auto p : positions_) out.push_back(space.index_labels().at(p));
  return out;
}

std::string IndexTuple::str(const ProcessSpace& space) const {
  std::string s = "(";
  for (std::size_t i = 0; i < positions_.size(); ++i) s += (i ? "," : "") + space.index_labels().at(positions_[i]);
  return s + ")";
}

bool operator<(const IndexTuple& a, const IndexTuple& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a.positions_ < b.positions_;
}

bool dominates(const IndexTuple& alpha, const IndexTuple& beta) {
  const auto& a = alpha.positions();
  return std::all_of(beta.positions().begin(), beta.positions().end(),
                     [&](std::size_t p) { return std::find(a.begin(), a.end(), p) != a.end(); });
}

bool same_elements(const IndexTuple& a, const IndexTuple& b) {
  return a.size() == b.size() && dominates(a, b);
}

std::vector<std::size_t> alignment(const IndexTuple& alpha, const IndexTuple& beta) {
  if (!dominates(alpha, beta)) throw SpaceError("alignment requires alpha >= beta");
  std::vector<std::size_t> pi;
  std::vector<bool> used(alpha.size(), false);
  for (auto b : beta.positions()) {
    const auto it = std::find(alpha.positions().begin(), alpha.positions().end(), b);
    const auto slot = static_cast<std::size_t>(it - alpha.positions().begin());
    pi.push_back(slot);
    used[slot] = true;
  }
  for (std::size_t j = 0; j < alpha.size(); ++j)
    if (!used[j]) pi.push_back(j);
  return pi;
}

std::vector<std::size_t> relabeling(const IndexTuple& source, const IndexTuple& target) {
  if (!same_elements(source, target)) throw SpaceError("relabeling requires tuples with the same elements");
  return alignment(source, target);
}

std::vector<IndexTuple> all_canonical_tuples(const ProcessSpace& space) {
  const std::size_t k = space.index_count();
  std::vector<IndexTuple> out;
  for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
    std::vector<std::size_t> pos;
    for (std::size_t i = 0; i < k; ++i)
      if (mask & (std::size_t{1} << i)) pos.push_back(i);
    out.emplace_back(space, std::move(pos));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<IndexTuple> permutations_of(const ProcessSpace& space, const IndexTuple& tuple) {
  std::vector<std::size_t> pos = tuple.canonical().positions();
  std::vector<IndexTuple> out;
  do {
    out.emplace_back(space, pos);
  } while (std::next_permutation(pos.begin(), pos.end()));
  return out;
}

// ---------------------------------------------------------------------------

QMatrix phi_matrix(const ProcessSpace& space, const IndexTuple& alpha) {
  const std::size_t k = space.index_count();
  const std::size_t omega = space.omega_size();
  QMatrix m(space.product_size(alpha.size()), omega);
  std::vector<std::size_t> x(alpha.size());
  for (std::size_t w = 0; w < omega; ++w) {
    const std::vector<std::size_t> point = space.product_point(w, k);
    for (std::size_t j = 0; j < alpha.size(); ++j) x[j] = point[alpha[j]];
    m(space.product_index(x), w) = 1;
  }
  return m;
}

QMatrix permutation_matrix(const ProcessSpace& space, std::size_t n, const std::vector<std::size_t>& pi) {
  if (pi.size() != n) throw SpaceError("permutation has wrong length");
  std::vector<bool> seen(n, false);
  for (auto p : pi) {
    if (p >= n || seen[p]) throw SpaceError("not a permutation of 1..n");
    seen[p] = true;
  }
  const std::size_t size = space.product_size(n);
  QMatrix m(size, size);
  std::vector<std::size_t> image(n);
  for (std::size_t i = 0; i < size; ++i) {
    const std::vector<std::size_t> y = space.product_point(i, n);
    for (std::size_t j = 0; j < n; ++j) image[j] = y[pi[j]];
    m(space.product_index(image), i) = 1;
  }
  return m;
}

QMatrix marginal_matrix(const ProcessSpace& space, std::size_t n_plus_m, std::size_t n) {
  if (n < 1 || n > n_plus_m) throw SpaceError("marginalization needs 1 <= n <= n+m");
  const std::size_t block = space.product_size(n_plus_m - n);
  const std::size_t rows = space.product_size(n);
  QMatrix m(rows, rows * block);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t r = 0; r < block; ++r) m(i, i * block + r) = 1;
  return m;
}

bool is_measure(const QVector& v) {
  if (v.empty()) return false;
  for (const auto& x : v)
    if (x.sign() < 0) return false;
  return v.sum() == 1;
}

}  // namespace credalkit::spaces
