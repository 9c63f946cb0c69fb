#include "credalkit/double_description.hpp"

#include <bit>
#include <cstdint>
#include <stdexcept>

#include "credalkit/linalg.hpp"

namespace credalkit::geom {

using exactq::QMatrix;
using exactq::QVector;
using exactq::Rational;

namespace {

class RowSet {
 public:
  explicit RowSet(std::size_t n) : words_((n + 63) / 64, 0) {}
  void insert(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  [[nodiscard]] std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  [[nodiscard]] bool subset_of(const RowSet& other) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if ((words_[i] & ~other.words_[i]) != 0) return false;
    return true;
  }
  friend RowSet operator&(RowSet a, const RowSet& b) {
    for (std::size_t i = 0; i < a.words_.size(); ++i) a.words_[i] &= b.words_[i];
    return a;
  }

 private:
  std::vector<std::uint64_t> words_;
};

struct Ray {
  QVector z;
  RowSet zeros;
};

}  // namespace

std::vector<QVector> extreme_rays(const QMatrix& a) {
  const std::size_t n = a.cols();
  const std::size_t total = a.rows();
  const std::vector<std::size_t> basis_rows = exactq::independent_rows(a);
  if (basis_rows.size() < n) throw std::domain_error("cone has a nontrivial lineality space");

  // Initial simplicial cone: A_I r_k = e_k.
  QMatrix sub(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) sub(i, j) = a(basis_rows[i], j);
  const QMatrix inv = *exactq::inverse(sub);

  std::vector<bool> processed(total, false);
  for (auto r : basis_rows) processed[r] = true;

  std::vector<Ray> rays;
  for (std::size_t k = 0; k < n; ++k) {
    Ray ray{exactq::primitive(inv.col(k)), RowSet(total)};
    for (std::size_t i = 0; i < n; ++i)
      if (i != k) ray.zeros.insert(basis_rows[i]);
    rays.push_back(std::move(ray));
  }

  const auto min_common = static_cast<std::ptrdiff_t>(n) - 2;
  for (std::size_t h = 0; h < total; ++h) {
    if (processed[h]) continue;
    processed[h] = true;
    const QVector row = a.row(h);

    std::vector<Rational> value(rays.size());
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < rays.size(); ++i) {
      value[i] = exactq::dot(row, rays[i].z);
      if (value[i].sign() > 0) pos.push_back(i);
      else if (value[i].sign() < 0) neg.push_back(i);
    }
    if (neg.empty()) {
      for (std::size_t i = 0; i < rays.size(); ++i)
        if (value[i].is_zero()) rays[i].zeros.insert(h);
      continue;
    }

    std::vector<Ray> next;
    for (auto p : pos) {
      for (auto q : neg) {
        RowSet common = rays[p].zeros & rays[q].zeros;
        if (static_cast<std::ptrdiff_t>(common.count()) < min_common) continue;
        bool adjacent = true;
        for (std::size_t r = 0; r < rays.size() && adjacent; ++r) {
          if (r != p && r != q && common.subset_of(rays[r].zeros)) adjacent = false;
        }
        if (!adjacent) continue;
        QVector z = rays[q].z * value[p] - rays[p].z * value[q];
        common.insert(h);
        next.push_back(Ray{exactq::primitive(z), std::move(common)});
      }
    }
    for (std::size_t i = 0; i < rays.size(); ++i) {
      if (value[i].sign() > 0) {
        next.push_back(std::move(rays[i]));
      } else if (value[i].is_zero()) {
        rays[i].zeros.insert(h);
        next.push_back(std::move(rays[i]));
      }
    }
    rays = std::move(next);
  }

  std::vector<QVector> out;
  out.reserve(rays.size());
  for (auto& r : rays) out.push_back(std::move(r.z));
  return out;
}

}  // namespace credalkit::geom
