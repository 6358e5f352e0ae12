#include <cmath>
#include <random>

#include "carnot/autgroup.hpp"
#include "carnot/catalog.hpp"
#include "carnot/spectra.hpp"
#include "doctest.h"
#include "support/generators.hpp"

using namespace carnot;

namespace {

const Scalar lambda(2, 1, 3);
constexpr double log_lambda = 1.3169578969248166;

Matrix smale_unstable() { return Matrix::diagonal({lambda, lambda.pow(2), lambda.pow(3)}); }

Matrix block_diag(const Matrix& a, const Matrix& b) {
  Matrix m(a.rows() + b.rows(), a.cols() + b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) m(r, c) = a(r, c);
  }
  for (std::size_t r = 0; r < b.rows(); ++r) {
    for (std::size_t c = 0; c < b.cols(); ++c) m(a.rows() + r, a.cols() + c) = b(r, c);
  }
  return m;
}

}  // namespace

TEST_CASE("lyapunov_spectrum examples") {
  const auto s = lyapunov_spectrum(smale_unstable());
  CHECK(s.source == SpectrumReport::Source::exact_eigenvalues);
  REQUIRE(s.exponents.size() == 3);
  CHECK(s.exponents[0].value == doctest::Approx(log_lambda).epsilon(1e-15));
  CHECK(s.exponents[1].value == doctest::Approx(2 * log_lambda).epsilon(1e-15));
  CHECK(s.exponents[2].value == doctest::Approx(3 * log_lambda).epsilon(1e-15));
  CHECK(s.total_multiplicity() == 3);

  const auto id = lyapunov_spectrum(Matrix::identity(4));
  REQUIRE(id.exponents.size() == 1);
  CHECK(id.exponents[0].value == 0.0);
  CHECK(id.exponents[0].multiplicity == 4);

  const auto c = lyapunov_spectrum(Matrix::from_rows({{0, -1}, {1, 4}}));
  REQUIRE(c.exponents.size() == 2);
  CHECK(c.exponents[0].value == doctest::Approx(-log_lambda).epsilon(1e-14));
  CHECK(c.exponents[1].value == doctest::Approx(log_lambda).epsilon(1e-14));

  // rotation generator scaled by 2: one conjugate pair, modulus 2
  const auto rot = lyapunov_spectrum(Matrix::from_rows({{0, -2}, {2, 0}}));
  REQUIRE(rot.exponents.size() == 1);
  CHECK(rot.exponents[0].multiplicity == 2);
  CHECK(rot.exponents[0].value == doctest::Approx(std::log(2.0)).epsilon(1e-15));

  CHECK_THROWS_AS(lyapunov_spectrum(Matrix::from_rows({{1, 2}, {2, 4}})), InputError);
}

TEST_CASE("rational roots and numeric fallback") {
  // (x-2)(x-3)(x+5) in a non-triangular basis
  std::mt19937_64 rng(12);
  const Matrix p = carnot::testing::random_invertible(rng, 3);
  const Matrix a = p * Matrix::diagonal({2, 3, -5}) * *inverse(p);
  const auto eig = eigenvalues(a);
  for (const auto& e : eig) CHECK(e.exact.has_value());
  // irreducible cubic x^3 - 2 forces the numeric path
  const Matrix cubic = Matrix::from_rows({{0, 0, 2}, {1, 0, 0}, {0, 1, 0}});
  const auto s = lyapunov_spectrum(cubic);
  CHECK(s.source == SpectrumReport::Source::numeric_eigenvalues);
  REQUIRE(s.exponents.size() == 1);
  CHECK(s.exponents[0].multiplicity == 3);
  CHECK(s.exponents[0].value == doctest::Approx(std::log(2.0) / 3).epsilon(1e-12));
  CHECK(s.error_bound > 0.0);
  CHECK(s.error_bound < 1e-10);
}

TEST_CASE("quadratic remainder yields both roots") {
  // x^2 - 5/2 x + 1 = (x - 2)(x - 1/2), no diagonal entry is a root
  const auto eig = eigenvalues(Matrix::from_rows({{1, 1}, {Scalar::rational(1, 2), Scalar::rational(3, 2)}}));
  REQUIRE(eig.size() == 2);
  CHECK(*eig[0].exact * *eig[1].exact == Scalar(1));
  CHECK(*eig[0].exact + *eig[1].exact == Scalar::rational(5, 2));
  // x^2 - 4x + 1 over Q(√3): roots 2 ± √3
  const auto eq = eigenvalues(Matrix::from_rows({{0, -1}, {1, 4}}));
  REQUIRE(eq.size() == 2);
  CHECK(*eq[0].exact * *eq[1].exact == Scalar(1));
}

TEST_CASE("spectrum is similarity invariant and scales under powers") {
  std::mt19937_64 rng(13);
  const auto h5 = catalog::heisenberg(2);
  const auto der = graded_derivations(h5);
  for (int t = 0; t < 20; ++t) {
    const Matrix a = carnot::testing::random_graded_automorphism(rng, h5, der);
    const auto base = lyapunov_spectrum(a).flattened();
    const Matrix p = carnot::testing::random_invertible(rng, 5);
    const auto conj = lyapunov_spectrum(p * a * *inverse(p));
    const auto moved = conj.flattened();
    REQUIRE(moved.size() == base.size());
    for (std::size_t k = 0; k < base.size(); ++k) CHECK(std::abs(moved[k] - base[k]) <= conj.error_bound + 1e-12);
    const auto base_report = lyapunov_spectrum(a);
    const auto cube_report = lyapunov_spectrum(a * a * a);
    const auto cube = cube_report.flattened();
    const double tol = cube_report.error_bound + 3 * base_report.error_bound + 1e-13;
    if (cube_report.source == SpectrumReport::Source::exact_eigenvalues) CHECK(tol < 1e-12);
    for (std::size_t k = 0; k < base.size(); ++k) CHECK(std::abs(cube[k] - 3 * base[k]) <= tol);
  }
}

TEST_CASE("verify_arithmeticity examples") {
  const auto fil = catalog::exceptional_filiform(3);
  const auto v = verify_arithmeticity(dilation_matrix(fil, Scalar(2)), fil);
  CHECK(v.holds);
  CHECK(v.lambda == doctest::Approx(2.0).epsilon(1e-14));
  REQUIRE(v.expected.size() == 5);
  CHECK(v.expected[0].multiplicity == 2);
  CHECK(v.expected[4].value == doctest::Approx(5 * std::log(2.0)).epsilon(1e-14));

  const auto h3 = catalog::heisenberg(1);
  const auto bad = verify_arithmeticity(Matrix::diagonal({2, 3, 6}), h3);
  CHECK_FALSE(bad.holds);
  CHECK(bad.max_deviation == doctest::Approx(std::log(3.0) - 0.5 * std::log(6.0)).epsilon(1e-12));

  Matrix noisy = dilation_matrix(fil, Scalar(2));
  noisy(0, 1) = Scalar::rational(1, 3);
  noisy(0, 4) = 7;
  noisy(2, 5) = Scalar::rational(-2, 5);
  noisy(1, 3) = 1;
  CHECK(check_block_structure(noisy, fil).block_upper_triangular);
  CHECK(verify_arithmeticity(noisy, fil).holds);
}

TEST_CASE("arithmeticity of dilation and rotation on the catalog") {
  std::mt19937_64 rng(14);
  for (const auto& g : {catalog::heisenberg(1), catalog::heisenberg(2), catalog::exceptional_filiform(3),
                        catalog::quaternionic_heisenberg(), catalog::heisenberg3_weighted()}) {
    for (int t = 0; t < 10; ++t) {
      const Matrix o = carnot::testing::random_graded_rotation(rng, g);
      const Scalar s = Scalar::rational(3 + t, 2);
      const Matrix a = dilation_matrix(g, s) * o;
      REQUIRE(is_graded_automorphism(g, a).yes);
      const auto v = verify_arithmeticity(a, g);
      CHECK(v.holds);
      CHECK(v.lambda == doctest::Approx(s.to_double()).epsilon(1e-12));
    }
  }
}

TEST_CASE("verify_subadditivity") {
  const double l2 = std::log(2.0), l3 = std::log(3.0);
  CHECK(verify_subadditivity({{log_lambda, 2 * log_lambda}, {3 * log_lambda}}).holds);
  const auto v = verify_subadditivity({{l2, l2}, {l2}});
  CHECK_FALSE(v.holds);
  CHECK(v.level == 1);
  CHECK(v.index == 2);
  CHECK(verify_subadditivity({{l2, l3}, {l2 + l3}}).holds);

  std::mt19937_64 rng(15);
  for (const auto& g : {catalog::heisenberg(1), catalog::heisenberg(2), catalog::exceptional_filiform(3),
                        catalog::quaternionic_heisenberg()}) {
    const auto der = graded_derivations(g);
    for (int t = 0; t < 5; ++t) {
      const Matrix a = carnot::testing::random_graded_automorphism(rng, g, der);
      CHECK(verify_subadditivity(level_exponents(a, g)).holds);
    }
  }
}

TEST_CASE("verify_heisenberg_additivity") {
  const auto s = verify_heisenberg_additivity({log_lambda, 2 * log_lambda, 3 * log_lambda});
  CHECK(s.holds);
  CHECK(s.n == 1);
  CHECK(verify_heisenberg_additivity({0.7, -0.7, 0.0}).holds);
  const auto f = verify_heisenberg_additivity({std::log(2.0), std::log(3.0), std::log(5.0)});
  CHECK_FALSE(f.holds);
  CHECK(f.deviation == doctest::Approx(0.18232155679395468).epsilon(1e-14));
  CHECK_THROWS_AS(verify_heisenberg_additivity({1.0, 2.0}), InputError);

  const auto exact = verify_heisenberg_additivity(smale_unstable(), catalog::heisenberg(1));
  CHECK(exact.holds);
  CHECK(exact.exact);
  CHECK(exact.deviation == 0.0);

  std::mt19937_64 rng(16);
  for (int n = 1; n <= 3; ++n) {
    const auto h = catalog::heisenberg(n);
    for (int t = 0; t < 5; ++t) {
      const Scalar sigma = Scalar::rational(t + 2, 3);
      const Matrix a = block_diag(sigma * carnot::testing::random_symplectic(rng, static_cast<std::size_t>(n)),
                                  Matrix::diagonal({sigma * sigma}));
      REQUIRE(is_graded_automorphism(h, a).yes);
      const auto m = verify_heisenberg_additivity(a, h, 1e-10);
      CHECK(m.holds);
      const auto levels = level_exponents(a, h);
      std::vector<double> flat = levels[0];
      flat.push_back(levels[1][0]);
      CHECK(verify_heisenberg_additivity(flat, 1e-10).holds);
    }
  }
}

TEST_CASE("check_block_structure") {
  const auto h3 = catalog::heisenberg(1);
  const auto s = check_block_structure(smale_unstable(), h3);
  CHECK(s.block_upper_triangular);
  CHECK(s.products_checked);
  CHECK(s.products_ok);
  REQUIRE(s.diagonal_blocks.size() == 2);
  CHECK(s.diagonal_blocks[1](0, 0) == lambda.pow(3));

  Matrix lower = Matrix::identity(3);
  lower(2, 0) = 1;
  const auto v = check_block_structure(lower, h3);
  CHECK_FALSE(v.block_upper_triangular);
  CHECK(v.violation_row == 2);
  CHECK(v.violation_col == 0);

  const auto wrong = check_block_structure(Matrix::diagonal({2, 3, 7}), h3);
  CHECK(wrong.block_upper_triangular);
  CHECK_FALSE(wrong.products_ok);
  CHECK(wrong.product_mismatch == 2);

  const auto fil = catalog::exceptional_filiform(3);
  Matrix unipotent = Matrix::identity(6);
  for (std::size_t r = 0; r < 6; ++r) {
    for (std::size_t c = r + 1; c < 6; ++c) unipotent(r, c) = Scalar::rational(static_cast<long>(r + c), 3);
  }
  unipotent(1, 0) = 0;
  const auto f = check_block_structure(dilation_matrix(fil, Scalar(2)) * unipotent, fil);
  CHECK(f.block_upper_triangular);
  CHECK(f.products_ok);
  for (std::size_t i = 0; i < f.diagonal_blocks.size(); ++i) {
    CHECK(f.diagonal_blocks[i](0, 0) == Scalar(2).pow(static_cast<int>(i + 1)));
  }
}

TEST_CASE("check_dominated_splitting") {
  auto e = [](double t) { return std::pow(2.0, t); };
  auto f = [](double t) { return std::pow(3.0, -t); };
  CHECK(check_dominated_splitting(e, f, 1.0, 2.0 / 3.0, 50.0, 0.5).satisfied);
  const auto v = check_dominated_splitting(e, f, 1.0, 0.6, 50.0, 0.5);
  CHECK_FALSE(v.satisfied);
  CHECK(v.violated_at == 0.5);
  auto one = [](double) { return 1.0; };
  const auto w = check_dominated_splitting(one, one, 1.0, 0.9, 10.0, 0.25);
  CHECK_FALSE(w.satisfied);
  CHECK(w.violated_at == 0.25);
  CHECK_THROWS_AS(check_dominated_splitting(one, one, 1.0, 1.5, 10.0, 0.25), InputError);
}
