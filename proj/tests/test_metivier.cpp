#include "carnot/metivier.hpp"
#include "doctest.h"

using namespace carnot;

namespace {

Poly var(std::size_t k) { return Poly::variable(3, k); }
Poly one() { return Poly::constant(3, Scalar(1)); }
PolyVectorField d(std::size_t k) { return PolyVectorField::coordinate(3, k); }

std::vector<PolyVectorField> heisenberg_model() { return {d(0), d(1) + var(0) * d(2)}; }
std::vector<PolyVectorField> martinet() { return {d(0), d(1) + (var(0) * var(0)) * d(2)}; }

Vec pt(Scalar a, Scalar b, Scalar c) { return {a, b, c}; }

}  // namespace

TEST_CASE("polynomial arithmetic and brackets") {
  const Poly p = var(0) * var(0) + Scalar(3) * var(1) - one();
  CHECK(p.degree() == 2);
  CHECK(p.derivative(0) == Scalar(2) * var(0));
  CHECK(p(pt(2, 1, 0)) == Scalar(6));
  CHECK((p - p).is_zero());
  // substitution x = (1,0,0) + y
  CHECK(var(0).affine_substitute(Matrix::identity(3), pt(1, 0, 0)) == var(0) + one());

  const auto h = heisenberg_model();
  CHECK(lie_bracket(h[0], h[1]) == d(2));
  const auto m = martinet();
  CHECK(lie_bracket(m[0], m[1]) == (Scalar(2) * var(0)) * d(2));
  CHECK(lie_bracket(m[0], lie_bracket(m[0], m[1])) == Scalar(2) * d(2));
  CHECK(lie_bracket(m[1], m[0]) == Scalar(-1) * lie_bracket(m[0], m[1]));

  Poly big = one();
  for (int k = 0; k < 12; ++k) big = big * var(0);
  CHECK_THROWS_AS(big * var(1), InputError);
}

TEST_CASE("evaluate_filtration") {
  const auto h = evaluate_filtration(heisenberg_model(), pt(0, 0, 0));
  CHECK(h.dims == std::vector<std::size_t>{2, 3});
  CHECK(h.floor == std::vector<int>{1, 1, 2});

  const auto m = evaluate_filtration(martinet(), pt(0, 0, 0));
  CHECK(m.dims == std::vector<std::size_t>{2, 2, 3});
  CHECK(m.floor == std::vector<int>{1, 1, 3});
  CHECK(evaluate_filtration(martinet(), pt(Scalar::rational(1, 2), 0, 0)).dims == std::vector<std::size_t>{2, 3});
  CHECK(evaluate_filtration(martinet(), pt(-3, 5, 7)).dims == std::vector<std::size_t>{2, 3});

  const auto full = evaluate_filtration({d(0), d(1), d(2)}, pt(4, -1, 2));
  CHECK(full.dims == std::vector<std::size_t>{3});
  CHECK(full.floor == std::vector<int>{1, 1, 1});

  try {
    evaluate_filtration(martinet(), pt(0, 0, 0), 1);
    FAIL("expected a horizontality error");
  } catch (const HorizontalityError& e) {
    CHECK(e.achieved_dims == std::vector<std::size_t>{2, 2});
  }
  CHECK_THROWS_AS(evaluate_filtration({d(0), d(1)}, pt(0, 0, 0)), HorizontalityError);
}

TEST_CASE("genericity_check") {
  const auto h = genericity_check(heisenberg_model(), pt(0, 0, 0), default_samples(pt(0, 0, 0)));
  CHECK(h.generic);
  CHECK(h.order == 2);
  CHECK_FALSE(h.vacuous);

  const auto m = genericity_check(martinet(), pt(0, 0, 0), {pt(Scalar::rational(1, 2), 0, 0)});
  CHECK_FALSE(m.generic);
  REQUIRE(m.witness);
  CHECK(*m.witness == pt(Scalar::rational(1, 2), 0, 0));
  CHECK(m.witness_dims == std::vector<std::size_t>{2, 3});
  CHECK(m.dims_at_point == std::vector<std::size_t>{2, 2, 3});
  CHECK_FALSE(genericity_check(martinet(), pt(0, 0, 0), default_samples(pt(0, 0, 0))).generic);
  CHECK(genericity_check(martinet(), pt(1, 0, 0), default_samples(pt(1, 0, 0))).generic);

  const auto v = genericity_check(martinet(), pt(0, 0, 0), {});
  CHECK(v.generic);
  CHECK(v.vacuous);
}

TEST_CASE("weighted degree and homogeneous parts") {
  const std::vector<int> floor{1, 1, 2};
  CHECK(weighted_degree(var(0) * d(2), floor) == 1);
  CHECK(weighted_degree(var(2) * d(0), floor) == -1);
  CHECK(weighted_degree(d(2), floor) == 2);
  CHECK_FALSE(weighted_degree(PolyVectorField::zero(3), floor));

  const auto x = d(1) + var(0) * d(2) + (var(0) * var(0)) * d(2);
  CHECK(homogeneous_part(x, floor, 1) == d(1) + var(0) * d(2));
  CHECK(homogeneous_part(d(0) + d(1), floor, 1) == d(0) + d(1));

  const auto h = heisenberg_model();
  CHECK(homogeneous_part(lie_bracket(h[0], h[1]), floor, 2) ==
        lie_bracket(homogeneous_part(h[0], floor, 1), homogeneous_part(h[1], floor, 1)));
  CHECK(homogeneous_part(lie_bracket(h[0], h[1]), floor, 2) == d(2));
}

TEST_CASE("tangent cone of the Heisenberg model") {
  const Vec origin = pt(0, 0, 0);
  const auto cone = tangent_cone(heisenberg_model(), origin, default_samples(origin));
  const auto& alg = cone.algebra.algebra;
  CHECK(alg.bracket_basis(0, 1) == unit_vec(3, 2));
  CHECK(is_zero(alg.bracket_basis(0, 2)));
  CHECK(is_zero(alg.bracket_basis(1, 2)));
  CHECK(check_jacobi(alg).ok);
  CHECK(lower_central_series(alg).back() == 0);
  CHECK(verify_grading(cone.algebra).kind == GradingVerdict::Kind::graded_carnot);
  CHECK(cone.algebra.grading.layer_dims() == std::vector<std::size_t>{2, 1});
  CHECK(cone.frame.words == std::vector<BracketWord>{{0}, {1}, {0, 1}});

  // group model: identical constants at every base point
  const Vec q = pt(1, 2, 3);
  const auto moved = tangent_cone(heisenberg_model(), q, default_samples(q));
  CHECK(moved.algebra.algebra == alg);

  // swapping the horizontal basis flips the top frame element, absorbed by the adaptation
  const auto h = heisenberg_model();
  const auto swapped = tangent_cone({h[1], h[0]}, origin, default_samples(origin));
  CHECK(swapped.algebra.algebra == alg);
  CHECK(swapped.adaptation.column(2) == Scalar(-1) * unit_vec(3, 2));
  CHECK(swapped.hats[2] == d(2));
}

TEST_CASE("tangent cone of the abelian frame") {
  const auto cone = tangent_cone({d(0), d(1), d(2)}, pt(1, 1, 1), {});
  CHECK(cone.algebra.algebra.structure_constants().empty());
  CHECK(cone.algebra.grading.depth() == 1);
}

TEST_CASE("Martinet off the singular plane has a Heisenberg cone") {
  const Vec p = pt(1, 0, 0);
  const auto cone = tangent_cone(martinet(), p, default_samples(p));
  CHECK(cone.adaptation == Matrix::from_rows({{1, 0, 0}, {0, 1, 0}, {0, 1, 2}}));
  const auto y1 = var(0);
  CHECK(cone.adapted[1] == d(1) + (y1 + Scalar::rational(1, 2) * y1 * y1) * d(2));
  CHECK(cone.adapted[2] == (y1 + one()) * d(2));
  CHECK(cone.hats[0] == d(0));
  CHECK(cone.hats[1] == d(1) + y1 * d(2));
  CHECK(cone.hats[2] == d(2));
  CHECK(cone.algebra.algebra.bracket_basis(0, 1) == unit_vec(3, 2));
  CHECK(verify_grading(cone.algebra).kind == GradingVerdict::Kind::graded_carnot);

  CHECK_THROWS_AS(tangent_cone(martinet(), pt(0, 0, 0), default_samples(pt(0, 0, 0))), PreconditionError);
}

TEST_CASE("bracket of hats is the top homogeneous part on every frame pair") {
  for (const auto& [fields, p] : {std::pair{heisenberg_model(), pt(0, 0, 0)}, std::pair{martinet(), pt(1, 0, 0)},
                                  std::pair{martinet(), pt(-2, 3, 1)}}) {
    const auto cone = tangent_cone(fields, p, default_samples(p));
    const auto& floor = cone.filtration.floor;
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        const int q = floor[i] + floor[j];
        CHECK(homogeneous_part(lie_bracket(cone.adapted[i], cone.adapted[j]), floor, q) ==
              lie_bracket(homogeneous_part(cone.adapted[i], floor, floor[i]),
                          homogeneous_part(cone.adapted[j], floor, floor[j])));
      }
    }
  }
}

TEST_CASE("hat of a function combination uses the values at the point") {
  const auto h = heisenberg_model();
  const Vec p = pt(2, -1, 5);
  const auto cone = tangent_cone(h, p, default_samples(p));
  const Poly a1 = one() + var(1);
  const Poly a2 = var(0);
  const auto combo = a1 * h[0] + a2 * h[1];
  const auto expected = a1(p) * hat_field(cone, h[0]) + a2(p) * hat_field(cone, h[1]);
  CHECK(hat_field(cone, combo) == expected);
}
