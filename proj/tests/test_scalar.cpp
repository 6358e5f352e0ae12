#include <cmath>
#include <random>

#include "carnot/matrix.hpp"
#include "carnot/univariate.hpp"
#include "doctest.h"
#include "support/generators.hpp"

using namespace carnot;

namespace {

Scalar q3(long a, long b) { return Scalar(a, b, 3); }

}  // namespace

TEST_CASE("quadratic field arithmetic is exact") {
  const Scalar lambda = q3(2, 1);
  const Scalar sigma = lambda.conj();
  CHECK(lambda * sigma == Scalar(1));
  CHECK(lambda + sigma == Scalar(4));
  CHECK(lambda * lambda == q3(7, 4));
  CHECK(lambda.pow(3) == q3(26, 15));
  CHECK(lambda.inverse() == sigma);
  CHECK(lambda.pow(-2) == sigma.pow(2));
  CHECK((lambda / sigma) == lambda.pow(2));
}

TEST_CASE("galois conjugation is an involutive field automorphism") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 50; ++k) {
    const Scalar x(carnot::testing::random_rational(rng).rational_part(), carnot::testing::random_rational(rng).rational_part(), 3);
    const Scalar y(carnot::testing::random_rational(rng).rational_part(), carnot::testing::random_rational(rng).rational_part(), 3);
    CHECK(x.conj().conj() == x);
    CHECK((x * y).conj() == x.conj() * y.conj());
    CHECK((x + y).conj() == x.conj() + y.conj());
  }
}

TEST_CASE("sign, floor and to_double use the embedding sqrt(d) > 0") {
  const Scalar sigma = q3(2, -1);  // 2 - √3 ≈ 0.2679
  CHECK(sigma.sign() == 1);
  CHECK(sigma.floor() == 0);
  CHECK(q3(-2, 1).sign() == -1);
  CHECK(q3(-2, 1).floor() == -1);
  CHECK(Scalar(mpq_class(3, 2), 1, 3).floor() == 3);
  CHECK(sigma.pow(3).to_double() == doctest::Approx(std::pow(2.0 - std::sqrt(3.0), 3)).epsilon(1e-15));
  CHECK(Scalar::rational(-7, 2).floor() == -4);
  CHECK(Scalar(0, -1, 2) < Scalar(0));
}

TEST_CASE("scalar strings round trip") {
  const Field f3 = Field::quadratic(3);
  for (const char* s : {"0", "5", "-7/3", "2+1*r", "-1/2-3/4*r", "1*r", "-2*r"}) {
    const Scalar x = Scalar::parse(s, f3);
    CHECK(Scalar::parse(x.to_string(), f3) == x);
  }
  CHECK(Scalar::parse("2+r", f3) == q3(2, 1));
  CHECK(Scalar::parse("-r", f3) == q3(0, -1));
  CHECK(Scalar::parse(" 1/2 ", Field{}) == Scalar::rational(1, 2));
  CHECK_THROWS_AS(Scalar::parse("2+r", Field{}), FieldMismatch);
  CHECK_THROWS_AS(Scalar::parse("1/0", Field{}), InputError);
  CHECK_THROWS_AS(Scalar::parse("abc", Field{}), InputError);
  CHECK_THROWS_AS(Field::quadratic(12), InputError);
}

TEST_CASE("mixing quadratic fields is rejected") {
  CHECK_THROWS_AS(Scalar(0, 1, 2) + Scalar(0, 1, 3), FieldMismatch);
  CHECK_NOTHROW(Scalar(0, 1, 2) + Scalar(5));
  CHECK_THROWS_AS(Field::join(Field{2}, Field{3}), FieldMismatch);
}

TEST_CASE("exact linear algebra") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 10; ++k) {
    const Matrix a = carnot::testing::random_invertible(rng, 4);
    const auto inv = inverse(a);
    REQUIRE(inv);
    CHECK(a * *inv == Matrix::identity(4));
    CHECK(determinant(a) * determinant(*inv) == Scalar(1));
  }
  Matrix singular = Matrix::from_rows({{1, 2}, {2, 4}});
  CHECK_FALSE(inverse(singular));
  CHECK(rank(singular) == 1);
  const auto ns = nullspace(singular);
  REQUIRE(ns.size() == 1);
  CHECK(is_zero(singular * ns[0]));
  CHECK_FALSE(solve(singular, {1, 0}));
  CHECK(is_positive_definite(Matrix::from_rows({{2, 1}, {1, 2}})));
  CHECK_FALSE(is_positive_definite(Matrix::from_rows({{1, 2}, {2, 1}})));
  CHECK_FALSE(is_positive_definite(Matrix::from_rows({{1, 0}, {0, 0}})));
}

TEST_CASE("characteristic polynomial and Sturm root isolation") {
  // companion of x^2 - 4x + 1
  const Matrix c = Matrix::from_rows({{0, -1}, {1, 4}});
  const UPoly p = characteristic_polynomial(c);
  CHECK(p == UPoly({1, -4, 1}));
  const auto roots = isolate_real_roots(p);
  REQUIRE(roots.size() == 2);
  const Scalar lambda = q3(2, 1);
  CHECK(roots[0].lo < lambda.conj());
  CHECK(lambda.conj() <= roots[0].hi);
  CHECK(roots[1].lo < lambda);
  CHECK(lambda <= roots[1].hi);
  // rotation generator: no real roots
  CHECK(isolate_real_roots(characteristic_polynomial(Matrix::from_rows({{0, -1}, {1, 0}}))).empty());
  // over Q(√3): (x - λ)(x - 1) has real roots λ and 1
  const UPoly pq = UPoly({-lambda, 1}) * UPoly({-1, 1});
  CHECK(count_real_roots(pq, Scalar(0), Scalar(4)) == 2);
  CHECK(strip_zero_roots(UPoly({0, 0, 3, 1})) == UPoly({3, 1}));
}
