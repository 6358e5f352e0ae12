#include <cmath>
#include <random>

#include "carnot/catalog.hpp"
#include "carnot/nilmanifold.hpp"
#include "doctest.h"
#include "support/generators.hpp"

using namespace carnot;

namespace {

Eigen::MatrixXd series_exp(const Eigen::MatrixXd& x) {
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(x.rows(), x.cols());
  Eigen::MatrixXd sum = term;
  for (int k = 1; k < x.rows(); ++k) {
    term = term * x / k;
    sum += term;
  }
  return sum;
}

Eigen::MatrixXd series_log(const Eigen::MatrixXd& g) {
  const Eigen::MatrixXd u = g - Eigen::MatrixXd::Identity(g.rows(), g.cols());
  Eigen::MatrixXd power = u;
  Eigen::MatrixXd sum = u;
  for (int k = 2; k < g.rows(); ++k) {
    power = power * u;
    sum += ((k % 2 == 0) ? -1.0 : 1.0) * power / k;
  }
  return sum;
}

Eigen::MatrixXd random_strict_upper(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = r + 1; c < n; ++c) m(r, c) = u(rng);
  }
  return m;
}

std::vector<double> random_point(std::mt19937_64& rng, std::size_t n, double scale = 2.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> x(n);
  for (auto& v : x) v = u(rng);
  return x;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

Vec lattice_point(const ProductAnosovSystem& s, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> d(-3, 3);
  Vec t(s.dim());
  for (auto& v : t) v = d(rng);
  return s.lattice_basis * t;
}

}  // namespace

TEST_CASE("BCH terms agree with log(exp X exp Y) for nilpotent matrices") {
  const auto& terms = bch_terms(6);
  CHECK(terms[0].word == std::vector<int>{0});
  CHECK(terms[1].word == std::vector<int>{1});
  CHECK(terms[2].word == std::vector<int>{0, 1});
  CHECK(terms[2].coeff == mpq_class(1, 2));
  std::mt19937_64 rng(21);
  for (int t = 0; t < 5; ++t) {
    const Eigen::MatrixXd x = random_strict_upper(rng, 7);
    const Eigen::MatrixXd y = random_strict_upper(rng, 7);
    const Eigen::MatrixXd expected = series_log(series_exp(x) * series_exp(y));
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(7, 7);
    for (const auto& term : terms) {
      Eigen::MatrixXd w = term.word[0] == 0 ? x : y;
      for (std::size_t k = 1; k < term.word.size(); ++k) {
        const Eigen::MatrixXd& l = term.word[k] == 0 ? x : y;
        w = w * l - l * w;
      }
      sum += term.coeff.get_d() * w;
    }
    CHECK((sum - expected).cwiseAbs().maxCoeff() < 1e-12);
  }
  CHECK_THROWS_AS(bch_terms(7), InputError);
}

TEST_CASE("Heisenberg group law") {
  const NilGroupModel h(catalog::heisenberg(1));
  CHECK(h.step() == 2);
  CHECK(h.multiply(unit_vec(3, 0), unit_vec(3, 1)) == Vec{1, 1, Scalar::rational(1, 2)});
  const Vec x{1, 2, 3};
  CHECK(h.multiply(x, h.inverse(x)) == zero_vec(3));
  CHECK(h.multiply(zero_vec(3), x) == x);
  CHECK_THROWS_AS(NilGroupModel(catalog::heisenberg(1)).multiply(Vec(2), Vec(3)), InputError);
}

TEST_CASE("group law is associative with exact inverses") {
  std::mt19937_64 rng(22);
  for (const auto& g : {catalog::heisenberg(1), catalog::heisenberg(2), catalog::exceptional_filiform(3),
                        catalog::quaternionic_heisenberg()}) {
    const NilGroupModel m(g);
    for (int t = 0; t < 100; ++t) {
      const Vec a = carnot::testing::random_vec(rng, g.dim());
      const Vec b = carnot::testing::random_vec(rng, g.dim());
      const Vec c = carnot::testing::random_vec(rng, g.dim());
      CHECK(m.multiply(m.multiply(a, b), c) == m.multiply(a, m.multiply(b, c)));
      CHECK(m.multiply(m.inverse(a), a) == zero_vec(g.dim()));
    }
  }
}

TEST_CASE("double and exact group laws agree") {
  std::mt19937_64 rng(23);
  const NilGroupModel m(catalog::exceptional_filiform(3));
  for (int t = 0; t < 20; ++t) {
    const Vec a = carnot::testing::random_vec(rng, 6);
    const Vec b = carnot::testing::random_vec(rng, 6);
    CHECK(max_abs_diff(m.multiply(to_doubles(a), to_doubles(b)), to_doubles(m.multiply(a, b))) < 1e-12);
    CHECK((m.ad(to_doubles(a)) - m.ad(a).to_eigen()).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("non-nilpotent algebras are rejected") {
  LieAlgebra so3(3, Field{});
  so3.set_bracket(0, 1, unit_vec(3, 2));
  so3.set_bracket(1, 2, unit_vec(3, 0));
  so3.set_bracket(2, 0, unit_vec(3, 1));
  CHECK_THROWS_AS(NilGroupModel(GradedAlgebra{so3, Grading({{0, 1, 2}}, 3)}), InputError);
}

TEST_CASE("Smale system certificates") {
  const auto s = build_smale_system();
  CHECK(s.dim() == 6);
  CHECK(s.certificates.all());
  CHECK(s.lattice_scale == 2);
  const Matrix& l = s.certificates.lattice_matrix;
  CHECK(determinant(l) == Scalar(1));
  const long traces[] = {4, 14, 52};
  for (std::size_t b = 0; b < 3; ++b) {
    const std::vector<int> idx{static_cast<int>(2 * b), static_cast<int>(2 * b + 1)};
    CHECK(l.block(idx, idx).trace() == Scalar(traces[b]));
  }
  CHECK(l.trace() == Scalar(70));
  CHECK(s.product.algebra().grading.depth() == 3);
  CHECK(is_graded_automorphism(s.product.algebra(), s.map).yes);
}

TEST_CASE("product construction accepts and rejects") {
  const auto h3 = catalog::heisenberg(1);
  CHECK(build_product_anosov(h3, Scalar(1, 1, 2)).system);
  const auto bad = build_product_anosov(h3, Scalar(mpq_class(3, 2), 1, 3));
  CHECK_FALSE(bad.system);
  CHECK(bad.failed_certificate == "integrality");
  CHECK_THROWS_AS(build_product_anosov(h3, Scalar(2)), InputError);
  CHECK_THROWS_AS(build_product_anosov(h3, Scalar(0, 1, 5)), InputError);  // |√5^σ| > 1
  CHECK_THROWS_AS(build_product_anosov(h3, Scalar(mpq_class(1, 2), 1, 3).conj()), InputError);
  const auto fil = build_product_anosov(catalog::exceptional_filiform(3), Scalar(2, 1, 3));
  REQUIRE(fil.system);
  CHECK(fil.system->certificates.all());
}

TEST_CASE("lattice is a subgroup") {
  std::mt19937_64 rng(24);
  const auto smale = build_smale_system();
  const auto fil = *build_product_anosov(catalog::exceptional_filiform(3), Scalar(1, 1, 2)).system;
  for (const auto* s : {&smale, &fil}) {
    for (int t = 0; t < 30; ++t) {
      const Vec a = lattice_point(*s, rng);
      const Vec b = lattice_point(*s, rng);
      CHECK(in_lattice(*s, a));
      CHECK(in_lattice(*s, s->product.multiply(a, b)));
      CHECK(in_lattice(*s, s->product.inverse(a)));
      CHECK(in_lattice(*s, s->map * a));
    }
  }
}

TEST_CASE("Malcev reduction picks a coset representative in the unit box") {
  std::mt19937_64 rng(25);
  const auto s = build_smale_system();
  for (int t = 0; t < 30; ++t) {
    Vec x(6);
    for (auto& v : x) v = Scalar(carnot::testing::random_rational(rng, 20, 3).rational_part(),
                                 carnot::testing::random_rational(rng, 20, 3).rational_part(), 3);
    const Vec r = malcev_reduce(s, x);
    for (const auto& c : malcev_coordinates(s, r)) {
      CHECK(c >= Scalar(0));
      CHECK(c < Scalar(1));
    }
    CHECK(in_lattice(s, s.product.multiply(s.product.inverse(x), r)));
    CHECK(malcev_reduce(s, r) == r);

    const auto rd = malcev_reduce(s, to_doubles(x));
    CHECK(max_abs_diff(rd, to_doubles(r)) < 1e-9);
  }
  // a lattice point reduces to the identity
  const Vec g = lattice_point(s, rng);
  CHECK(malcev_reduce(s, g) == zero_vec(6));
}

TEST_CASE("constant cocycle reproduces the exact spectrum") {
  const auto s = build_smale_system();
  const auto exact = lyapunov_spectrum(s.map).flattened();
  const auto f = automorphism_map(s);
  const auto est = qr_lyapunov_estimate(s, f, random_start(s, 1), 2000, 1);
  REQUIRE(est.exponents.size() == 6);
  for (std::size_t k = 0; k < 6; ++k) CHECK(std::abs(est.exponents[k] - exact[k]) < 1e-6);
  CHECK(est.report.source == SpectrumReport::Source::qr_estimate);
  CHECK(est.burn_in == 200);
  CHECK(std::abs(est.mean_log_det) < 1e-9);
}

TEST_CASE("left translation does not change the spectrum") {
  const auto s = build_smale_system();
  const auto exact = lyapunov_spectrum(s.map).flattened();
  const auto f = affine_map(s, {0.3, -0.2, 0.1, 0.05, 0.7, -0.4});
  const auto est = qr_lyapunov_estimate(s, f, random_start(s, 2), 3000, 2);
  for (std::size_t k = 0; k < 6; ++k) CHECK(std::abs(est.exponents[k] - exact[k]) < 1e-6);
}

TEST_CASE("perturbation Jacobian matches finite differences") {
  const auto s = build_smale_system();
  std::mt19937_64 rng(26);
  for (const auto* which : {"affine", "perturbed"}) {
    const PointMap f = std::string(which) == "affine" ? affine_map(s, {0.1, 0.2, -0.3, 0.4, 0.5, -0.6})
                                                      : make_periodic_perturbation(s, 0.05, 7);
    for (int t = 0; t < 20; ++t) {
      const auto x = random_point(rng, 6);
      const Eigen::MatrixXd analytic = f.dmap(x);
      const Eigen::MatrixXd numeric = finite_difference_jacobian(s, f, x, 1e-5);
      const double rel = (analytic - numeric).norm() / analytic.norm();
      CHECK(rel < 1e-6);
    }
  }
}

TEST_CASE("perturbation is periodic and vanishes at zero amplitude") {
  std::mt19937_64 rng(27);
  const auto s = build_smale_system();
  const auto f0 = make_periodic_perturbation(s, 0.0, 3);
  const auto a = automorphism_map(s);
  const auto f = make_periodic_perturbation(s, 0.08, 3);
  for (int t = 0; t < 10; ++t) {
    const auto x = random_point(rng, 6);
    CHECK(f0.map(x) == a.map(x));
    CHECK(f0.dmap(x) == a.dmap(x));
    // f(x·γ) and f(x) agree in the quotient
    const auto gamma = to_doubles(lattice_point(s, rng));
    const auto lhs = malcev_reduce(s, f.map(s.product.multiply(x, gamma)));
    const auto rhs = malcev_reduce(s, f.map(x));
    CHECK(max_abs_diff(lhs, rhs) < 1e-8);
  }
  CHECK_THROWS_AS(make_periodic_perturbation(s, 0.2, 1), InputError);
  CHECK_THROWS_AS(make_periodic_perturbation(s, -0.01, 1), InputError);
}

TEST_CASE("perturbed exponents sum to the mean log-determinant") {
  const auto s = build_smale_system();
  const auto f = make_periodic_perturbation(s, 0.05, 11);
  const auto est = qr_lyapunov_estimate(s, f, random_start(s, 4), 4000, 4);
  double sum = 0.0;
  for (double v : est.exponents) sum += v;
  CHECK(std::abs(sum - est.mean_log_det) < 1e-9);
  CHECK(est.report.total_multiplicity() == 6);
  CHECK(std::isfinite(est.report.error_bound));
}
