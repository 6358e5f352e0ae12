#include <random>

#include "carnot/catalog.hpp"
#include "carnot/lie_algebra.hpp"
#include "doctest.h"
#include "support/generators.hpp"

using namespace carnot;

namespace {

Vec e(std::size_t n, std::size_t k) { return unit_vec(n, k); }

// Brute-force oracle: expands the Jacobiator on a triple directly from the
// structure-constant table, without bracket_of.
Vec jacobiator_oracle(const LieAlgebra& alg, std::size_t i, std::size_t j, std::size_t k) {
  const std::size_t n = alg.dim();
  auto br = [&](const Vec& x, const Vec& y) {
    Vec out(n);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        if (x[a].is_zero() || y[b].is_zero()) continue;
        const Vec c = alg.bracket_basis(static_cast<int>(a), static_cast<int>(b));
        for (std::size_t m = 0; m < n; ++m) out[m] += x[a] * y[b] * c[m];
      }
    }
    return out;
  };
  return br(br(e(n, i), e(n, j)), e(n, k)) + br(br(e(n, j), e(n, k)), e(n, i)) + br(br(e(n, k), e(n, i)), e(n, j));
}

LieAlgebra so3_like() {
  LieAlgebra alg(3, Field{});
  alg.set_bracket(0, 1, e(3, 2));
  alg.set_bracket(1, 2, e(3, 0));
  alg.set_bracket(2, 0, e(3, 1));
  return alg;
}

}  // namespace

TEST_CASE("bracket_of on the worked examples") {
  const auto h3 = catalog::heisenberg(1);
  CHECK(bracket_of(h3.algebra, e(3, 0), e(3, 1)) == e(3, 2));
  const Vec x{Scalar(2), Scalar::rational(-1, 3), Scalar(5)};
  CHECK(is_zero(bracket_of(h3.algebra, x, x)));

  const auto fil = catalog::exceptional_filiform(3);
  // basis y0 z0 y1 y2 y3 y4
  CHECK(bracket_of(fil.algebra, e(6, 2), e(6, 3)) == Scalar(-1) * e(6, 5));
  CHECK(bracket_of(fil.algebra, e(6, 1), e(6, 0)) == e(6, 2));
  CHECK(bracket_of(fil.algebra, e(6, 0), e(6, 4)) == e(6, 5));
  CHECK_THROWS_AS(bracket_of(h3.algebra, Vec(2), Vec(3)), InputError);
}

TEST_CASE("bracket_of is antisymmetric and satisfies Jacobi on random triples") {
  std::mt19937_64 rng(1);
  for (const auto& g : {catalog::heisenberg(1), catalog::heisenberg(2), catalog::exceptional_filiform(3),
                        catalog::quaternionic_heisenberg()}) {
    REQUIRE(check_jacobi(g.algebra).ok);
    const std::size_t n = g.dim();
    for (int t = 0; t < 200; ++t) {
      const Vec x = carnot::testing::random_vec(rng, n);
      const Vec y = carnot::testing::random_vec(rng, n);
      const Vec z = carnot::testing::random_vec(rng, n);
      const auto& a = g.algebra;
      CHECK(bracket_of(a, x, y) == Scalar(-1) * bracket_of(a, y, x));
      CHECK(is_zero(bracket_of(a, bracket_of(a, x, y), z) + bracket_of(a, bracket_of(a, y, z), x) +
                    bracket_of(a, bracket_of(a, z, x), y)));
    }
  }
}

TEST_CASE("check_jacobi") {
  CHECK(check_jacobi(catalog::heisenberg(1).algebra).ok);
  CHECK(check_jacobi(catalog::exceptional_filiform(3).algebra).ok);

  LieAlgebra bad(3, Field{});
  bad.set_bracket(0, 2, e(3, 2));
  bad.set_bracket(1, 2, e(3, 1));
  const auto res = check_jacobi(bad);
  CHECK_FALSE(res.ok);
  CHECK(res.i == 0);
  CHECK(res.j == 1);
  CHECK(res.k == 2);
  CHECK(res.residual == jacobiator_oracle(bad, 0, 1, 2));
  CHECK(res.residual == e(3, 1));
}

TEST_CASE("lower central series") {
  using V = std::vector<std::size_t>;
  CHECK(lower_central_series(catalog::heisenberg(1).algebra) == V{3, 1, 0});
  CHECK(lower_central_series(catalog::exceptional_filiform(3).algebra) == V{6, 4, 3, 2, 1, 0});
  CHECK(lower_central_series(so3_like()) == V{3, 3});
  CHECK_FALSE(is_nilpotent(so3_like()));
  CHECK(lower_central_series(catalog::abelian(4).algebra) == V{4, 0});
}

TEST_CASE("lower central series is invariant under change of basis") {
  std::mt19937_64 rng(2);
  for (const auto& g : {catalog::heisenberg(1), catalog::heisenberg(2), catalog::exceptional_filiform(3)}) {
    const auto expected = lower_central_series(g.algebra);
    for (int t = 0; t < 10; ++t) {
      const Matrix p = carnot::testing::random_invertible(rng, g.dim());
      const LieAlgebra conj = change_basis(g.algebra, p);
      CHECK(check_jacobi(conj).ok);
      CHECK(lower_central_series(conj) == expected);
    }
  }
}

TEST_CASE("verify_grading") {
  CHECK(verify_grading(catalog::heisenberg(1)).kind == GradingVerdict::Kind::graded_carnot);
  CHECK(verify_grading(catalog::exceptional_filiform(3)).kind == GradingVerdict::Kind::graded_carnot);
  CHECK(verify_grading(catalog::heisenberg3_weighted()).kind == GradingVerdict::Kind::graded);

  const GradedAlgebra wrong{catalog::heisenberg(1).algebra, Grading({{0, 2}, {1}}, 3)};
  const auto v = verify_grading(wrong);
  CHECK(v.kind == GradingVerdict::Kind::violation);
  CHECK(v.layer_a == 0);
  CHECK(v.layer_b == 1);
  CHECK(v.witness_i == 0);
  CHECK(v.witness_j == 1);

  CHECK_THROWS_AS(Grading({{0}, {0, 1}}, 3), InputError);
  CHECK_THROWS_AS(Grading({{0}, {1}}, 3), InputError);
  CHECK_THROWS_AS(Grading({{0, 1, 2}, {}}, 3), InputError);
}

TEST_CASE("verify_grading is invariant under layer-preserving basis change") {
  std::mt19937_64 rng(3);
  for (const auto& g : {catalog::heisenberg(1), catalog::heisenberg(2), catalog::exceptional_filiform(3),
                        catalog::heisenberg3_weighted(), catalog::quaternionic_heisenberg()}) {
    const auto expected = verify_grading(g).kind;
    for (int t = 0; t < 10; ++t) {
      const Matrix p = carnot::testing::random_layer_preserving(rng, g.grading, g.dim());
      CHECK(verify_grading(change_basis(g, p)).kind == expected);
    }
  }
}

TEST_CASE("dilation_matrix") {
  const auto h3 = catalog::heisenberg(1);
  CHECK(dilation_matrix(h3, Scalar(2)) == Matrix::diagonal({2, 2, 4}));
  CHECK(dilation_matrix(h3, Scalar(1)) == Matrix::identity(3));
  const Scalar s = Scalar::rational(3, 2);
  CHECK(dilation_matrix(catalog::exceptional_filiform(3), s) ==
        Matrix::diagonal({s, s, s.pow(2), s.pow(3), s.pow(4), s.pow(5)}));
  CHECK_THROWS_AS(dilation_matrix(h3, Scalar(0)), InputError);

  std::mt19937_64 rng(4);
  for (const auto& g : {h3, catalog::exceptional_filiform(3), catalog::heisenberg3_weighted()}) {
    for (int t = 0; t < 10; ++t) {
      Scalar a = carnot::testing::random_rational(rng);
      Scalar b = carnot::testing::random_rational(rng);
      if (a.is_zero()) a = 1;
      if (b.is_zero()) b = -1;
      CHECK(dilation_matrix(g, a) * dilation_matrix(g, b) == dilation_matrix(g, a * b));
    }
  }
}
