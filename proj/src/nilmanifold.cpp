#include "carnot/nilmanifold.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "carnot/autgroup.hpp"
#include "carnot/catalog.hpp"

namespace carnot {

namespace {

Eigen::MatrixXd exp_nilpotent(const Eigen::MatrixXd& ad, int step) {
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(ad.rows(), ad.cols());
  Eigen::MatrixXd sum = term;
  for (int k = 1; k <= step; ++k) {
    term = term * ad / static_cast<double>(k);
    sum += term;
  }
  return sum;
}

/// Σ_{k≥0} ad^k/(k+1)!, the right-trivialized differential of exp.
Eigen::MatrixXd dexp(const Eigen::MatrixXd& ad, int step) {
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(ad.rows(), ad.cols());
  Eigen::MatrixXd sum = term;
  for (int k = 1; k < step; ++k) {
    term = term * ad / static_cast<double>(k + 1);
    sum += term;
  }
  return sum;
}

std::vector<double> matvec(const Eigen::MatrixXd& m, const std::vector<double>& x) {
  const Eigen::VectorXd v = m * Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
  return {v.data(), v.data() + v.size()};
}

mpz_class denominator_lcm(const GradedAlgebra& g) {
  mpz_class d = 1;
  for (const auto& [key, vec] : g.algebra.structure_constants()) {
    for (const auto& [k, c] : vec) {
      mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), c.rational_part().get_den().get_mpz_t());
      mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), c.irrational_part().get_den().get_mpz_t());
    }
  }
  return d;
}

}  // namespace

GradedAlgebra galois_product(const GradedAlgebra& g) {
  const std::size_t n = g.dim();
  std::vector<std::string> names = g.algebra.names();
  for (const auto& s : g.algebra.names()) names.push_back(s + "'");
  LieAlgebra prod(2 * n, g.algebra.field(), names);
  for (const auto& [key, vec] : g.algebra.structure_constants()) {
    Vec first(2 * n), second(2 * n);
    for (const auto& [k, c] : vec) {
      first[static_cast<std::size_t>(k)] = c;
      second[n + static_cast<std::size_t>(k)] = c.conj();
    }
    prod.set_bracket(key.first, key.second, first);
    prod.set_bracket(key.first + static_cast<int>(n), key.second + static_cast<int>(n), second);
  }
  std::vector<std::vector<int>> layers;
  for (const auto& layer : g.grading.layers()) {
    std::vector<int> l = layer;
    for (int k : layer) l.push_back(k + static_cast<int>(n));
    layers.push_back(std::move(l));
  }
  return {std::move(prod), Grading(std::move(layers), 2 * n)};
}

long lattice_scale(const GradedAlgebra& g, int step) {
  const mpz_class d = denominator_lcm(g);
  if (!d.fits_slong_p()) throw InputError("structure-constant denominators are too large");
  for (long c = 1; c <= 1000000; ++c) {
    bool ok = true;
    for (const auto& term : bch_terms(step)) {
      const auto k = static_cast<unsigned long>(term.word.size());
      if (k < 2) continue;
      mpz_class ck;
      mpz_pow_ui(ck.get_mpz_t(), mpz_class(c).get_mpz_t(), k - 1);
      const mpq_class v = term.coeff * ck;
      if (v.get_den() != 1) {
        ok = false;
        break;
      }
    }
    if (ok) return c * d.get_si();
  }
  throw InputError("no lattice scale found");
}

AnosovCertificates certify(const GradedAlgebra& product, const Matrix& map, const Matrix& lattice_basis) {
  AnosovCertificates out;
  out.graded_automorphism = is_graded_automorphism(product, map).yes;
  const auto inv = inverse(lattice_basis);
  if (!inv) throw InputError("lattice basis is singular");
  out.lattice_matrix = *inv * map * lattice_basis;
  out.integral = true;
  for (std::size_t r = 0; r < map.rows() && out.integral; ++r) {
    for (std::size_t c = 0; c < map.cols(); ++c) {
      if (!out.lattice_matrix(r, c).is_integer()) {
        out.integral = false;
        out.bad_row = static_cast<int>(r);
        out.bad_col = static_cast<int>(c);
        break;
      }
    }
  }
  out.hyperbolic = true;
  for (const auto& e : eigenvalues(map)) {
    if (e.exact) {
      out.hyperbolic = out.hyperbolic && !(e.exact->abs() == Scalar(1));
    } else {
      out.hyperbolic = out.hyperbolic && std::abs(std::abs(e.value) - 1.0) > 1e-12;
    }
  }
  return out;
}

AnosovBuild build_product_anosov(const GradedAlgebra& g, const Scalar& lambda) {
  if (lambda.is_rational()) throw InputError("lambda must lie in a real quadratic field");
  Field::join(g.algebra.field(), lambda.field());
  if (!(lambda.abs() > Scalar(1)) || !(lambda.conj().abs() < Scalar(1))) {
    throw InputError("lambda must satisfy |lambda| > 1 > |lambda^sigma|, got " + lambda.to_string());
  }
  if (verify_grading(g).kind == GradingVerdict::Kind::violation) throw InputError("algebra grading is violated");
  const long d = lambda.radicand();
  const std::size_t n = g.dim();

  ProductAnosovSystem s;
  s.factor = NilGroupModel(g);
  s.product = NilGroupModel(galois_product(g));
  s.lambda = lambda;
  Vec diag(2 * n);
  for (std::size_t k = 0; k < n; ++k) {
    const int w = g.grading.weight(g.grading.layer_of(static_cast<int>(k)));
    diag[k] = lambda.pow(w);
    diag[n + k] = lambda.conj().pow(w);
  }
  s.map = Matrix::diagonal(diag);
  s.lattice_scale = lattice_scale(g, s.factor.step());
  const Scalar c(s.lattice_scale);
  const Scalar root = Scalar::sqrt_of(d);
  std::vector<Vec> cols;
  for (std::size_t l = 0; l < g.grading.depth(); ++l) {
    for (int k : g.grading.layers()[l]) {
      const auto uk = static_cast<std::size_t>(k);
      Vec a(2 * n), b(2 * n);
      a[uk] = c;
      a[n + uk] = c;
      b[uk] = c * root;
      b[n + uk] = -(c * root);
      cols.push_back(std::move(a));
      cols.push_back(std::move(b));
      s.basis_layer.push_back(static_cast<int>(l));
      s.basis_layer.push_back(static_cast<int>(l));
    }
  }
  s.lattice_basis = Matrix::from_columns(cols, 2 * n);
  s.lattice_basis_inverse = *inverse(s.lattice_basis);
  s.certificates = certify(s.product.algebra(), s.map, s.lattice_basis);
  s.map_d = s.map.to_eigen();
  s.basis_d = s.lattice_basis.to_eigen();
  s.basis_inverse_d = s.lattice_basis_inverse.to_eigen();

  AnosovBuild out;
  const auto& cert = s.certificates;
  if (!cert.graded_automorphism) {
    out.failed_certificate = "graded_automorphism";
    out.diagnostic = "the map is not a graded automorphism of the product algebra";
  } else if (!cert.integral) {
    out.failed_certificate = "integrality";
    out.diagnostic = "lattice matrix entry (" + std::to_string(cert.bad_row + 1) + "," + std::to_string(cert.bad_col + 1) +
                     ") = " + cert.lattice_matrix(static_cast<std::size_t>(cert.bad_row), static_cast<std::size_t>(cert.bad_col)).to_string() +
                     " is not an integer";
  } else if (!cert.hyperbolic) {
    out.failed_certificate = "hyperbolicity";
    out.diagnostic = "the map has an eigenvalue of modulus 1";
  } else {
    out.system = std::move(s);
  }
  return out;
}

ProductAnosovSystem build_smale_system() {
  auto b = build_product_anosov(catalog::heisenberg3_weighted(), Scalar(2, 1, 3));
  if (!b.system) throw std::logic_error("Smale construction failed: " + b.diagnostic);
  return std::move(*b.system);
}

std::vector<double> malcev_coordinates(const ProductAnosovSystem& s, const std::vector<double>& x) {
  return matvec(s.basis_inverse_d, x);
}

Vec malcev_coordinates(const ProductAnosovSystem& s, const Vec& x) { return s.lattice_basis_inverse * x; }

std::vector<double> malcev_reduce(const ProductAnosovSystem& s, const std::vector<double>& x) {
  if (x.size() != s.dim()) throw InputError("point has wrong dimension");
  std::vector<double> cur = x;
  const std::size_t depth = s.product.algebra().grading.depth();
  for (std::size_t l = 0; l < depth; ++l) {
    const auto t = malcev_coordinates(s, cur);
    Eigen::VectorXd shift = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(s.dim()));
    bool any = false;
    for (std::size_t j = 0; j < s.dim(); ++j) {
      if (s.basis_layer[j] != static_cast<int>(l)) continue;
      const double m = std::floor(t[j]);
      if (m == 0.0) continue;
      any = true;
      shift -= m * s.basis_d.col(static_cast<Eigen::Index>(j));
    }
    if (any) cur = s.product.multiply(cur, std::vector<double>(shift.data(), shift.data() + shift.size()));
  }
  return cur;
}

Vec malcev_reduce(const ProductAnosovSystem& s, const Vec& x) {
  if (x.size() != s.dim()) throw InputError("point has wrong dimension");
  Vec cur = x;
  const std::size_t depth = s.product.algebra().grading.depth();
  for (std::size_t l = 0; l < depth; ++l) {
    const Vec t = malcev_coordinates(s, cur);
    Vec shift(s.dim());
    bool any = false;
    for (std::size_t j = 0; j < s.dim(); ++j) {
      if (s.basis_layer[j] != static_cast<int>(l)) continue;
      const mpz_class m = t[j].floor();
      if (m == 0) continue;
      any = true;
      shift = shift - Scalar(mpq_class(m)) * s.lattice_basis.column(j);
    }
    if (any) cur = s.product.multiply(cur, shift);
  }
  return cur;
}

bool in_lattice(const ProductAnosovSystem& s, const Vec& x) {
  for (const auto& t : malcev_coordinates(s, x)) {
    if (!t.is_integer()) return false;
  }
  return true;
}

PointMap automorphism_map(const ProductAnosovSystem& s) {
  const Eigen::MatrixXd a = s.map_d;
  return {[a](const std::vector<double>& x) { return matvec(a, x); },
          [a](const std::vector<double>&) { return a; }};
}

PointMap affine_map(const ProductAnosovSystem& s, const std::vector<double>& g0) {
  if (g0.size() != s.dim()) throw InputError("translation has wrong dimension");
  const Eigen::MatrixXd a = s.map_d;
  const Eigen::MatrixXd cocycle = exp_nilpotent(s.product.ad(g0), s.product.step()) * a;
  const NilGroupModel* model = &s.product;
  return {[a, g0, model](const std::vector<double>& x) { return model->multiply(g0, matvec(a, x)); },
          [cocycle](const std::vector<double>&) { return cocycle; }};
}

PointMap make_periodic_perturbation(const ProductAnosovSystem& s, double epsilon, std::uint64_t seed) {
  if (!(epsilon >= 0.0 && epsilon <= 0.1)) throw InputError("perturbation amplitude must lie in [0, 0.1]");
  struct Mode {
    std::size_t direction;  // layer-0 basis index of the product algebra
    std::size_t coordinate;  // layer-0 lattice coordinate
    double amplitude, frequency, phase;
  };
  std::vector<std::size_t> coords;
  for (std::size_t j = 0; j < s.dim(); ++j) {
    if (s.basis_layer[j] == 0) coords.push_back(j);
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, coords.size() - 1);
  std::uniform_int_distribution<int> freq(1, 3);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::vector<Mode> modes;
  for (int k : s.product.algebra().grading.layers()[0]) {
    for (int rep = 0; rep < 2; ++rep) {
      const std::size_t coord = coords[pick(rng)];
      const double amp = unit(rng);
      const double f = freq(rng);
      modes.push_back({static_cast<std::size_t>(k), coord, amp, f, angle(rng)});
    }
  }
  const Eigen::MatrixXd a = s.map_d;
  const Eigen::MatrixXd binv = s.basis_inverse_d;
  const NilGroupModel* model = &s.product;
  const std::size_t n = s.dim();
  const int step = s.product.step();
  auto phi = [=](const std::vector<double>& x) {
    const auto t = matvec(binv, x);
    std::vector<double> u(n, 0.0);
    for (const auto& m : modes) {
      u[m.direction] += epsilon * m.amplitude * std::sin(2.0 * std::numbers::pi * m.frequency * t[m.coordinate] + m.phase);
    }
    return u;
  };
  auto map = [=](const std::vector<double>& x) { return model->multiply(phi(x), matvec(a, x)); };
  auto dmap = [=](const std::vector<double>& x) {
    const auto t = matvec(binv, x);
    Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (const auto& m : modes) {
      const double w = 2.0 * std::numbers::pi * m.frequency;
      grad.row(static_cast<Eigen::Index>(m.direction)) +=
          epsilon * m.amplitude * w * std::cos(w * t[m.coordinate] + m.phase) *
          binv.row(static_cast<Eigen::Index>(m.coordinate));
    }
    const Eigen::MatrixXd ad_u = model->ad(phi(x));
    return Eigen::MatrixXd(exp_nilpotent(ad_u, step) * a + dexp(ad_u, step) * grad);
  };
  return {map, dmap};
}

Eigen::MatrixXd finite_difference_jacobian(const ProductAnosovSystem& s, const PointMap& f,
                                           const std::vector<double>& x, double h) {
  const std::size_t n = s.dim();
  const auto& model = s.product;
  const auto f0_inv = model.inverse(f.map(x));
  Eigen::MatrixXd j(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<double> step(n, 0.0);
    step[c] = h;
    const auto plus = model.multiply(f.map(model.multiply(step, x)), f0_inv);
    step[c] = -h;
    const auto minus = model.multiply(f.map(model.multiply(step, x)), f0_inv);
    for (std::size_t r = 0; r < n; ++r) j(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = (plus[r] - minus[r]) / (2 * h);
  }
  return j;
}

std::vector<double> random_start(const ProductAnosovSystem& s, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> t(s.dim());
  for (auto& v : t) v = unit(rng);
  return matvec(s.basis_d, t);
}

QrEstimate qr_lyapunov_estimate(const ProductAnosovSystem& s, const PointMap& f, std::vector<double> x0,
                                std::size_t iterations, std::uint64_t seed) {
  if (iterations < 1) throw InputError("the estimator needs at least one iteration");
  const auto n = static_cast<Eigen::Index>(s.dim());
  if (x0.size() != s.dim()) throw InputError("start point has wrong dimension");
  QrEstimate out;
  out.burn_in = iterations / 10;
  const std::size_t averaged = iterations - out.burn_in;
  const std::size_t window = std::max<std::size_t>(1, averaged / 10);
  Eigen::MatrixXd q = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd sums = Eigen::VectorXd::Zero(n);
  double log_det_sum = 0.0;
  std::vector<Eigen::VectorXd> tail;
  std::vector<double> x = malcev_reduce(s, x0);
  for (std::size_t it = 0; it < iterations; ++it) {
    const Eigen::MatrixXd jac = f.dmap(x);
    if (!jac.allFinite()) throw NumericalBlowup("non-finite derivative at iteration " + std::to_string(it), it);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(jac * q);
    q = qr.householderQ();
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    if (it >= out.burn_in) {
      for (Eigen::Index k = 0; k < n; ++k) sums(k) += std::log(std::abs(r(k, k)));
      log_det_sum += std::log(std::abs(jac.partialPivLu().determinant()));
      const std::size_t done = it - out.burn_in + 1;
      if (done + window > averaged) tail.push_back(sums / static_cast<double>(done));
    }
    if (!sums.allFinite()) throw NumericalBlowup("non-finite exponent sum at iteration " + std::to_string(it), it);
    x = malcev_reduce(s, f.map(x));
    for (double v : x) {
      if (!std::isfinite(v)) throw NumericalBlowup("non-finite orbit point at iteration " + std::to_string(it), it);
    }
  }
  const Eigen::VectorXd mean = sums / static_cast<double>(averaged);
  double drift = 0.0;
  for (const auto& m : tail) drift = std::max(drift, (m - mean).cwiseAbs().maxCoeff());
  out.exponents.assign(mean.data(), mean.data() + mean.size());
  std::sort(out.exponents.begin(), out.exponents.end());
  out.mean_log_det = log_det_sum / static_cast<double>(averaged);
  out.report.exponents = group_exponents(out.exponents);
  out.report.source = SpectrumReport::Source::qr_estimate;
  out.report.iterations = iterations;
  out.report.seed = seed;
  out.report.error_bound = drift;
  return out;
}

}  // namespace carnot
