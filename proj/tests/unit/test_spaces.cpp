#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "credalkit/spaces.hpp"
#include "support/oracles.hpp"

using namespace credalkit::spaces;
using credalkit::exactq::Rational;
using credalkit::testing::RandomRationals;

namespace {

const ProcessSpace binary_ab({"a", "b"}, {"0", "1"});
const ProcessSpace binary_abc({"a", "b", "c"}, {"0", "1"});
const ProcessSpace ternary_abc({"a", "b", "c"}, {"x", "y", "z"});

bool column_stochastic_01(const QMatrix& m) {
  for (std::size_t c = 0; c < m.cols(); ++c) {
    int ones = 0;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (m(r, c) == 1) ++ones;
      else if (!m(r, c).is_zero()) return false;
    }
    if (ones != 1) return false;
  }
  return true;
}

// Image of point y (as outcome positions) under y ↦ (y_{π(0)}, …).
std::vector<std::size_t> permute_point(const std::vector<std::size_t>& pi, const std::vector<std::size_t>& y) {
  std::vector<std::size_t> out(pi.size());
  for (std::size_t j = 0; j < pi.size(); ++j) out[j] = y[pi[j]];
  return out;
}

std::vector<std::vector<std::size_t>> all_permutations(std::size_t n) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  std::vector<std::vector<std::size_t>> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

}  // namespace

TEST_CASE("process space validation") {
  CHECK_THROWS_AS(ProcessSpace({}, {"0", "1"}), SpaceError);
  CHECK_THROWS_AS(ProcessSpace({"a"}, {"0"}), SpaceError);
  CHECK_THROWS_AS(ProcessSpace({"a", "a"}, {"0", "1"}), SpaceError);
  CHECK_THROWS_AS(ProcessSpace({"a"}, {"0", "1", "0"}), SpaceError);
  CHECK(binary_abc.omega_size() == 8);
  CHECK(ternary_abc.product_size(2) == 9);
}

TEST_CASE("product index examples") {
  CHECK(product_index(binary_ab, {"0", "0"}) == 0);
  CHECK(product_index(binary_ab, {"1", "0"}) == 2);
  const ProcessSpace abc({"t"}, {"a", "b", "c"});
  CHECK(product_index(abc, {"c", "a", "b"}) == 19);
  CHECK_THROWS_AS(product_index(abc, {"d"}), SpaceError);
}

TEST_CASE("product index is a bijection with product_point") {
  for (std::size_t n = 1; n <= 3; ++n) {
    for (std::size_t i = 0; i < ternary_abc.product_size(n); ++i)
      CHECK(ternary_abc.product_index(ternary_abc.product_point(i, n)) == i);
  }
}

TEST_CASE("index tuples") {
  CHECK_THROWS_AS(IndexTuple::from_labels(binary_abc, {"a", "a"}), SpaceError);
  CHECK_THROWS_AS(IndexTuple::from_labels(binary_abc, {"d"}), SpaceError);
  CHECK_THROWS_AS(IndexTuple(binary_abc, {}), SpaceError);

  const auto ba = IndexTuple::from_labels(binary_abc, {"b", "a"});
  CHECK(ba.str(binary_abc) == "(b,a)");
  CHECK_FALSE(ba.is_canonical());
  CHECK(ba.canonical() == IndexTuple::from_labels(binary_abc, {"a", "b"}));
  CHECK(dominates(IndexTuple::full(binary_abc), ba));
  CHECK_FALSE(dominates(ba, IndexTuple::from_labels(binary_abc, {"c"})));

  const auto tuples = all_canonical_tuples(binary_abc);
  REQUIRE(tuples.size() == 7);
  CHECK(tuples.front().str(binary_abc) == "(a)");
  CHECK(tuples.back().str(binary_abc) == "(a,b,c)");
  CHECK(std::is_sorted(tuples.begin(), tuples.end()));

  const auto perms = permutations_of(binary_abc, IndexTuple::full(binary_abc));
  CHECK(perms.size() == 6);
  CHECK(perms.front() == IndexTuple::full(binary_abc));
}

TEST_CASE("phi matrix examples") {
  const auto b = IndexTuple::from_labels(binary_ab, {"b"});
  CHECK(phi_matrix(binary_ab, b) == QMatrix{{1, 0, 1, 0}, {0, 1, 0, 1}});
  CHECK(phi_matrix(binary_abc, IndexTuple::full(binary_abc)) == QMatrix::identity(8));
  CHECK(phi_matrix(ternary_abc, IndexTuple::full(ternary_abc)) == QMatrix::identity(27));
}

TEST_CASE("phi matrix agrees with the coordinate map") {
  for (const auto& canon : all_canonical_tuples(ternary_abc)) {
    for (const auto& alpha : permutations_of(ternary_abc, canon)) {
      const QMatrix m = phi_matrix(ternary_abc, alpha);
      CHECK(column_stochastic_01(m));
      for (std::size_t w = 0; w < ternary_abc.omega_size(); ++w) {
        const auto omega = ternary_abc.product_point(w, 3);
        std::vector<std::size_t> x;
        for (auto t : alpha.positions()) x.push_back(omega[t]);
        CHECK(m(ternary_abc.product_index(x), w) == 1);
      }
    }
  }
}

TEST_CASE("phi pushes uniform to uniform") {
  RandomRationals rng(11);
  const auto tuples = all_canonical_tuples(ternary_abc);
  for (int trial = 0; trial < 20; ++trial) {
    const auto& canon = tuples[static_cast<std::size_t>(rng.integer(0, 6))];
    const auto perms = permutations_of(ternary_abc, canon);
    const auto& alpha = perms[static_cast<std::size_t>(rng.integer(0, static_cast<long>(perms.size()) - 1))];
    const std::size_t omega = ternary_abc.omega_size();
    const std::size_t d = ternary_abc.product_size(alpha.size());
    const QVector uniform(omega, Rational(1, static_cast<long>(omega)));
    CHECK(phi_matrix(ternary_abc, alpha) * uniform == QVector(d, Rational(1, static_cast<long>(d))));
  }
}

TEST_CASE("permutation matrix examples") {
  CHECK(permutation_matrix(binary_ab, 3, {0, 1, 2}) == QMatrix::identity(8));
  const QMatrix swap = permutation_matrix(binary_ab, 2, {1, 0});
  CHECK(swap * QVector::unit(4, 1) == QVector::unit(4, 2));
  CHECK_THROWS_AS(permutation_matrix(binary_ab, 2, {0, 0}), SpaceError);
  CHECK_THROWS_AS(permutation_matrix(binary_ab, 2, {0, 2}), SpaceError);
  CHECK_THROWS_AS(permutation_matrix(binary_ab, 3, {0, 1}), SpaceError);
}

TEST_CASE("permutation matrices realize the point maps and compose over S3") {
  const auto perms = all_permutations(3);
  for (const auto& pi : perms) {
    const QMatrix mp = permutation_matrix(ternary_abc, 3, pi);
    CHECK(column_stochastic_01(mp));
    for (std::size_t i = 0; i < 27; ++i) {
      const auto y = ternary_abc.product_point(i, 3);
      CHECK(mp * QVector::unit(27, i) == QVector::unit(27, ternary_abc.product_index(permute_point(pi, y))));
    }
    std::vector<std::size_t> inv(3);
    for (std::size_t j = 0; j < 3; ++j) inv[pi[j]] = j;
    CHECK(mp * permutation_matrix(ternary_abc, 3, inv) == QMatrix::identity(27));

    for (const auto& rho : perms) {
      // Applying f_ρ and then f_π sends y to permute_point(π, permute_point(ρ, y)).
      QMatrix expected(27, 27);
      for (std::size_t i = 0; i < 27; ++i) {
        const auto y = ternary_abc.product_point(i, 3);
        expected(ternary_abc.product_index(permute_point(pi, permute_point(rho, y))), i) = 1;
      }
      std::vector<std::size_t> rho_after_pi(3);
      for (std::size_t j = 0; j < 3; ++j) rho_after_pi[j] = rho[pi[j]];
      CHECK(mp * permutation_matrix(ternary_abc, 3, rho) == expected);
      CHECK(permutation_matrix(ternary_abc, 3, rho_after_pi) == expected);
    }
  }
}

TEST_CASE("marginal matrix examples and chain identity") {
  CHECK(marginal_matrix(binary_ab, 2, 2) == QMatrix::identity(4));
  CHECK(marginal_matrix(binary_ab, 2, 1) == QMatrix{{1, 1, 0, 0}, {0, 0, 1, 1}});
  CHECK_THROWS_AS(marginal_matrix(binary_ab, 2, 0), SpaceError);
  CHECK_THROWS_AS(marginal_matrix(binary_ab, 2, 3), SpaceError);

  for (std::size_t total = 1; total <= 4; ++total) {
    for (std::size_t n = 1; n <= total; ++n) {
      QMatrix chain = QMatrix::identity(ternary_abc.product_size(total));
      for (std::size_t s = total; s > n; --s) chain = marginal_matrix(ternary_abc, s, s - 1) * chain;
      const QMatrix direct = marginal_matrix(ternary_abc, total, n);
      CHECK(direct == chain);
      CHECK(column_stochastic_01(direct));
    }
  }
}

TEST_CASE("compatibility identity marg · perm · phi(α) = phi(β)") {
  for (const ProcessSpace* space : {&binary_abc, &ternary_abc}) {
    for (const auto& canon_a : all_canonical_tuples(*space)) {
      for (const auto& alpha : permutations_of(*space, canon_a)) {
        for (const auto& canon_b : all_canonical_tuples(*space)) {
          if (!dominates(alpha, canon_b)) continue;
          for (const auto& beta : permutations_of(*space, canon_b)) {
            const auto pi = alignment(alpha, beta);
            const QMatrix lhs = marginal_matrix(*space, alpha.size(), beta.size()) *
                                permutation_matrix(*space, alpha.size(), pi) * phi_matrix(*space, alpha);
            CHECK(lhs == phi_matrix(*space, beta));
          }
        }
      }
    }
  }
}

TEST_CASE("relabeling maps phi of one ordering onto another") {
  const auto ab = IndexTuple::from_labels(ternary_abc, {"a", "c"});
  const auto ba = IndexTuple::from_labels(ternary_abc, {"c", "a"});
  const auto pi = relabeling(ab, ba);
  CHECK(permutation_matrix(ternary_abc, 2, pi) * phi_matrix(ternary_abc, ab) == phi_matrix(ternary_abc, ba));
  CHECK_THROWS_AS(relabeling(ab, IndexTuple::from_labels(ternary_abc, {"a", "b"})), SpaceError);
}

TEST_CASE("measures") {
  CHECK(is_measure(QVector{Rational(1, 3), Rational(2, 3)}));
  CHECK_FALSE(is_measure(QVector{Rational(1, 3), Rational(1, 3)}));
  CHECK_FALSE(is_measure(QVector{Rational(-1), Rational(2)}));
  CHECK_FALSE(is_measure(QVector{}));
}
