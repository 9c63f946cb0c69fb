#pragma once

// Brute-force reference computations used by the tests. Nothing here calls
// into the LP solver, the double-description code or the library's
// Gaussian elimination, so the oracles stay independent of what they check.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "credalkit/rational.hpp"

namespace credalkit::testing {

using exactq::QMatrix;
using exactq::QVector;
using exactq::Rational;

struct Row {
  QVector coeffs;
  Rational rhs;
};

/// Unique solution of a square system by naive Gaussian elimination.
inline std::optional<QVector> naive_solve(std::vector<Row> rows, std::size_t dim) {
  if (rows.size() != dim) return std::nullopt;
  for (std::size_t c = 0; c < dim; ++c) {
    std::size_t p = c;
    while (p < dim && rows[p].coeffs[c].is_zero()) ++p;
    if (p == dim) return std::nullopt;
    std::swap(rows[p], rows[c]);
    const Rational inv = Rational(1) / rows[c].coeffs[c];
    rows[c].coeffs *= inv;
    rows[c].rhs *= inv;
    for (std::size_t r = 0; r < dim; ++r) {
      if (r == c || rows[r].coeffs[c].is_zero()) continue;
      const Rational f = rows[r].coeffs[c];
      rows[r].coeffs -= rows[c].coeffs * f;
      rows[r].rhs -= rows[c].rhs * f;
    }
  }
  QVector x(dim);
  for (std::size_t i = 0; i < dim; ++i) x[i] = rows[i].rhs;
  return x;
}

inline bool satisfies(const QVector& x, const std::vector<Row>& le, const std::vector<Row>& eq) {
  for (const auto& r : le)
    if (exactq::dot(r.coeffs, x) > r.rhs) return false;
  for (const auto& r : eq)
    if (exactq::dot(r.coeffs, x) != r.rhs) return false;
  return true;
}

/// Vertices of {x : le rows ≤, eq rows =} by trying every choice of tight
/// inequalities that completes the equalities to a square system. Equality
/// rows must be linearly independent.
inline std::vector<QVector> brute_vertices(std::size_t dim, const std::vector<Row>& le, const std::vector<Row>& eq) {
  std::vector<QVector> found;
  std::vector<std::size_t> pick;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (pick.size() + eq.size() == dim) {
      std::vector<Row> sys = eq;
      for (auto i : pick) sys.push_back(le[i]);
      if (auto x = naive_solve(sys, dim); x && satisfies(*x, le, eq)) {
        if (std::find(found.begin(), found.end(), *x) == found.end()) found.push_back(*x);
      }
      return;
    }
    for (std::size_t i = start; i < le.size(); ++i) {
      pick.push_back(i);
      rec(i + 1);
      pick.pop_back();
    }
  };
  if (eq.size() <= dim) rec(0);
  std::sort(found.begin(), found.end());
  return found;
}

/// Points of the form Σ λ_i v_i with λ on a grid of the given resolution.
inline std::vector<QVector> grid_combinations(const std::vector<QVector>& vertices, long resolution) {
  std::vector<QVector> out;
  std::vector<long> weights(vertices.size(), 0);
  std::function<void(std::size_t, long)> rec = [&](std::size_t i, long left) {
    if (i + 1 == vertices.size()) {
      weights[i] = left;
      QVector p(vertices.front().size());
      for (std::size_t k = 0; k < vertices.size(); ++k) p += vertices[k] * Rational(weights[k], resolution);
      out.push_back(std::move(p));
      return;
    }
    for (long w = 0; w <= left; ++w) {
      weights[i] = w;
      rec(i + 1, left - w);
    }
  };
  if (!vertices.empty()) rec(0, resolution);
  return out;
}

/// Digits of `index` in base m, most significant first.
inline std::vector<std::size_t> digits(std::size_t index, std::size_t m, std::size_t n) {
  std::vector<std::size_t> d(n);
  for (std::size_t j = 0; j < n; ++j) {
    d[n - 1 - j] = index % m;
    index /= m;
  }
  return d;
}

inline std::size_t undigits(const std::vector<std::size_t>& d, std::size_t m) {
  std::size_t index = 0;
  for (auto x : d) index = index * m + x;
  return index;
}

/// Law of (y_{pick[0]}, y_{pick[1]}, …) under a measure p on Y^n, computed
/// point by point. Covers coordinate maps, permutations and marginals.
inline QVector brute_pushforward(const QVector& p, std::size_t m, std::size_t n, const std::vector<std::size_t>& pick) {
  std::size_t out_size = 1;
  for (std::size_t j = 0; j < pick.size(); ++j) out_size *= m;
  QVector q(out_size);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto y = digits(i, m, n);
    std::vector<std::size_t> x;
    for (auto j : pick) x.push_back(y[j]);
    q[undigits(x, m)] += p[i];
  }
  return q;
}

/// Set equality of two finite lists of exact vectors.
inline bool same_set(std::vector<QVector> a, std::vector<QVector> b) {
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  std::sort(b.begin(), b.end());
  b.erase(std::unique(b.begin(), b.end()), b.end());
  return a == b;
}

class RandomRationals {
 public:
  explicit RandomRationals(std::uint64_t seed) : rng_(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }

  Rational rational(long lo, long hi, long max_den) {
    const long den = integer(1, max_den);
    return Rational(integer(lo * den, hi * den), den);
  }

  /// Random probability vector with entries k/den, den ≤ max_den.
  QVector measure(std::size_t dim, long max_den) {
    const long den = integer(1, max_den);
    std::vector<long> cuts{0, den};
    for (std::size_t i = 0; i + 1 < dim; ++i) cuts.push_back(integer(0, den));
    std::sort(cuts.begin(), cuts.end());
    QVector v(dim);
    for (std::size_t i = 0; i < dim; ++i) v[i] = Rational(cuts[i + 1] - cuts[i], den);
    return v;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace credalkit::testing
