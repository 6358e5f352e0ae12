#include "carnot/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace carnot {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

bool close(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)}); }

UPoly linear_factor(const Scalar& r) { return UPoly({-r, Scalar(1)}); }

/// Rational roots of a polynomial with rational coefficients, bounded search.
std::vector<Scalar> rational_roots(const UPoly& p) {
  std::vector<Scalar> out;
  if (!p.is_rational() || p.degree() < 1) return out;
  mpz_class lcm = 1;
  for (const auto& c : p.coeffs()) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.rational_part().get_den().get_mpz_t());
  std::vector<mpz_class> ints;
  for (const auto& c : p.coeffs()) {
    mpq_class v = c.rational_part() * lcm;
    ints.push_back(v.get_num());
  }
  const mpz_class c0 = abs(ints.front());
  const mpz_class cn = abs(ints.back());
  if (c0 == 0 || c0 > 10000000 || cn > 10000000) return out;
  auto divisors = [](unsigned long m) {
    std::vector<unsigned long> d;
    for (unsigned long k = 1; k * k <= m; ++k) {
      if (m % k == 0) {
        d.push_back(k);
        if (k * k != m) d.push_back(m / k);
      }
    }
    return d;
  };
  for (unsigned long num : divisors(c0.get_ui())) {
    for (unsigned long den : divisors(cn.get_ui())) {
      for (long sign : {1L, -1L}) {
        const Scalar r = Scalar(mpq_class(mpz_class(static_cast<long>(num) * sign), mpz_class(den)));
        if (p(r).is_zero() && std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
      }
    }
  }
  return out;
}

/// Square root inside Q or Q(√d) when one exists.
std::optional<Scalar> exact_sqrt(const Scalar& x, long d) {
  if (!x.is_rational() || x.sign() < 0) return std::nullopt;
  auto rational_sqrt = [](const mpq_class& q) -> std::optional<mpq_class> {
    if (sgn(q) < 0) return std::nullopt;
    mpz_class n = q.get_num(), m = q.get_den();
    if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(m.get_mpz_t())) return std::nullopt;
    return mpq_class(sqrt(n), sqrt(m));
  };
  if (auto r = rational_sqrt(x.rational_part())) return Scalar(*r);
  if (d > 1) {
    if (auto r = rational_sqrt(x.rational_part() / d)) return Scalar(mpq_class(0), *r, d);
    return std::nullopt;
  }
  // over Q: x = m²·d' with d' squarefree gives a root in Q(√d')
  mpz_class rest = x.rational_part().get_num() * x.rational_part().get_den();
  mpz_class core = 1;
  for (unsigned long pr = 2; pr <= 100000 && pr * pr <= rest; ++pr) {
    while (mpz_divisible_ui_p(rest.get_mpz_t(), pr * pr)) rest /= pr * pr;
    if (mpz_divisible_ui_p(rest.get_mpz_t(), pr)) {
      rest /= pr;
      core *= pr;
    }
  }
  if (!mpz_perfect_square_p(rest.get_mpz_t())) {
    if (rest > 100000UL * 100000UL) return std::nullopt;  // cofactor may still hide a square
    core *= rest;
  }
  if (!core.fits_slong_p()) return std::nullopt;
  const mpq_class m2 = x.rational_part() / mpq_class(core);
  if (auto r = rational_sqrt(m2)) return Scalar(mpq_class(0), *r, core.get_si());
  return std::nullopt;
}

std::complex<double> to_complex(const Scalar& s) { return {s.to_double(), 0.0}; }

}  // namespace

int SpectrumReport::total_multiplicity() const {
  int m = 0;
  for (const auto& e : exponents) m += e.multiplicity;
  return m;
}

std::vector<double> SpectrumReport::flattened() const {
  std::vector<double> v;
  for (const auto& e : exponents) v.insert(v.end(), static_cast<std::size_t>(e.multiplicity), e.value);
  return v;
}

std::string to_string(SpectrumReport::Source s) {
  switch (s) {
    case SpectrumReport::Source::exact_eigenvalues:
      return "exact_eigenvalues";
    case SpectrumReport::Source::numeric_eigenvalues:
      return "numeric_eigenvalues";
    case SpectrumReport::Source::qr_estimate:
      return "qr_estimate";
  }
  return "unknown";
}

std::vector<LyapunovExponent> group_exponents(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  std::vector<LyapunovExponent> out;
  std::vector<double> members;
  for (double v : values) {
    if (!out.empty() && close(members.front(), v)) {
      members.push_back(v);
      ++out.back().multiplicity;
      double sum = 0.0;
      for (double m : members) sum += m;
      out.back().value = sum / static_cast<double>(members.size());
    } else {
      members.assign(1, v);
      out.push_back({v, 1});
    }
  }
  return out;
}

std::vector<EigenvalueInfo> eigenvalues(const Matrix& a, double* numeric_error_bound) {
  if (!a.is_square()) throw InputError("eigenvalues of a non-square matrix");
  const std::size_t n = a.rows();
  const long d = a.field().radicand;
  UPoly q = characteristic_polynomial(a);
  std::vector<EigenvalueInfo> out;
  auto divide_out = [&](const Scalar& r) {
    while (q.degree() > 0 && q(r).is_zero()) {
      q = q.divmod(linear_factor(r)).quotient;
      out.push_back({r, to_complex(r)});
    }
  };
  divide_out(Scalar(0));
  for (std::size_t i = 0; i < n; ++i) divide_out(a(i, i));
  if (q.degree() > 2) {
    for (const auto& r : rational_roots(q)) divide_out(r);
  }
  if (q.degree() == 1) {
    divide_out(-q.coeff(0) / q.coeff(1));
  } else if (q.degree() == 2) {
    const Scalar qa = q.coeff(2);
    const Scalar qb = q.coeff(1);
    const Scalar qc = q.coeff(0);
    const Scalar disc = qb * qb - Scalar(4) * qa * qc;
    if (auto s = exact_sqrt(disc, d)) {
      const Scalar r1 = (-qb + *s) / (Scalar(2) * qa);
      const Scalar r2 = (-qb - *s) / (Scalar(2) * qa);
      divide_out(r1);
      divide_out(r2);
    } else {
      const double da = qa.to_double(), db = qb.to_double(), dd = disc.to_double();
      if (disc.sign() < 0) {
        const double re = -db / (2 * da);
        const double im = std::sqrt(-dd) / (2 * da);
        out.push_back({std::nullopt, {re, im}});
        out.push_back({std::nullopt, {re, -im}});
      } else {
        // stable pair: r1 = (-b - sign(b)√Δ)/2a, r2 = c/(a r1)
        const double root = std::sqrt(dd);
        const double t = -0.5 * (db + std::copysign(root, db));
        const double r1 = t / da;
        const double r2 = qc.to_double() / t;
        out.push_back({std::nullopt, {r1, 0.0}});
        out.push_back({std::nullopt, {r2, 0.0}});
      }
    }
    q = UPoly({Scalar(1)});
  }
  double bound = 0.0;
  if (q.degree() > 0) {
    const Eigen::MatrixXd ad = a.to_eigen();
    Eigen::EigenSolver<Eigen::MatrixXd> es(ad);
    std::vector<std::complex<double>> numeric;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) numeric.push_back(es.eigenvalues()[k]);
    for (const auto& e : out) {
      auto it = std::min_element(numeric.begin(), numeric.end(), [&](const auto& x, const auto& y) {
        return std::abs(x - e.value) < std::abs(y - e.value);
      });
      numeric.erase(it);
    }
    const Eigen::MatrixXcd v = es.eigenvectors();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd_v(v);
    const auto sv = svd_v.singularValues();
    const double cond = sv(sv.size() - 1) > 0 ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<double>::infinity();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd_a(ad);
    const double norm_a = svd_a.singularValues()(0);
    for (const auto& z : numeric) {
      out.push_back({std::nullopt, z});
      const double mod = std::max(std::abs(z), kEps);
      double b = 10.0 * static_cast<double>(n) * kEps * cond * norm_a / mod;
      if (!std::isfinite(b) || cond > 1.0 / std::sqrt(kEps)) {
        b = std::pow(kEps, 1.0 / static_cast<double>(n)) * norm_a / mod;
      }
      bound = std::max(bound, b);
    }
  }
  if (out.size() != n) throw std::logic_error("eigenvalue count does not match the dimension");
  if (numeric_error_bound) *numeric_error_bound = bound;
  return out;
}

SpectrumReport lyapunov_spectrum(const Matrix& a) {
  if (!a.is_square()) throw InputError("spectrum of a non-square matrix");
  if (determinant(a).is_zero()) throw InputError("spectrum requires an invertible matrix");
  double numeric_bound = 0.0;
  const auto eig = eigenvalues(a, &numeric_bound);
  SpectrumReport r;
  std::vector<double> values;
  bool all_exact = true;
  for (const auto& e : eig) {
    values.push_back(e.exact ? std::log(std::abs(e.exact->to_double())) : std::log(std::abs(e.value)));
    all_exact = all_exact && e.exact.has_value();
  }
  // quadratic remainders solved by formula still count as a factorization
  const bool factored = numeric_bound == 0.0;
  r.source = factored ? SpectrumReport::Source::exact_eigenvalues : SpectrumReport::Source::numeric_eigenvalues;
  double scale = 1.0;
  for (double v : values) scale = std::max(scale, std::abs(v));
  r.error_bound = factored ? (all_exact ? 4.0 : 16.0) * kEps * scale : numeric_bound;
  r.exponents = group_exponents(std::move(values));
  return r;
}

ArithmeticityVerdict verify_arithmeticity(const Matrix& a, const GradedAlgebra& g, double tol) {
  if (a.rows() != g.dim() || !a.is_square()) throw InputError("matrix and algebra dimensions differ");
  ArithmeticityVerdict v;
  const auto& l0 = g.grading.layers().front();
  const Scalar det0 = determinant(a.block(l0, l0));
  const SpectrumReport spec = lyapunov_spectrum(a);
  v.observed = spec.exponents;
  if (det0.is_zero()) return v;
  const double log_lambda = std::log(std::abs(det0.to_double())) / static_cast<double>(l0.size());
  v.lambda = std::exp(log_lambda);
  std::vector<double> expected;
  for (std::size_t i = 0; i < g.grading.depth(); ++i) {
    const double val = static_cast<double>(i + 1) * log_lambda;
    v.expected.push_back({val, static_cast<int>(g.grading.layers()[i].size())});
    expected.insert(expected.end(), g.grading.layers()[i].size(), val);
  }
  std::sort(expected.begin(), expected.end());
  const auto observed = spec.flattened();
  for (std::size_t k = 0; k < expected.size(); ++k) {
    v.max_deviation = std::max(v.max_deviation, std::abs(expected[k] - observed[k]));
  }
  v.holds = v.max_deviation <= tol;
  return v;
}

SubadditivityVerdict verify_subadditivity(std::vector<std::vector<double>> levels, double tol) {
  SubadditivityVerdict v;
  if (levels.empty() || levels.front().empty()) throw InputError("subadditivity needs a nonempty level 0");
  for (auto& l : levels) std::sort(l.begin(), l.end());
  const double lo = levels.front().front();
  const double hi = levels.front().back();
  int index = 0;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const double w = static_cast<double>(i + 1);
    for (double e : levels[i]) {
      if (e < w * lo - tol || e > w * hi + tol) {
        v.holds = false;
        v.level = static_cast<int>(i);
        v.index = index;
        v.value = e;
        v.lower = w * lo;
        v.upper = w * hi;
        return v;
      }
      ++index;
    }
  }
  return v;
}

HeisenbergVerdict verify_heisenberg_additivity(const std::vector<double>& exponents, double tol) {
  if (exponents.size() % 2 == 0) throw InputError("Heisenberg additivity needs an odd number 2n+1 of exponents");
  HeisenbergVerdict v;
  v.n = static_cast<int>(exponents.size() / 2);
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < exponents.size(); ++k) sum += exponents[k];
  v.deviation = std::abs(sum - v.n * exponents.back());
  v.holds = v.deviation <= tol;
  return v;
}

HeisenbergVerdict verify_heisenberg_additivity(const Matrix& a, const GradedAlgebra& g, double tol) {
  const auto dims = g.grading.layer_dims();
  if (dims.size() != 2 || dims[1] != 1 || dims[0] % 2 != 0) {
    throw PreconditionError("Heisenberg additivity needs layers of dimensions 2n and 1");
  }
  const BlockStructure bs = check_block_structure(a, g);
  if (!bs.block_upper_triangular) throw PreconditionError("map is not block triangular for the grading");
  const int n = static_cast<int>(dims[0] / 2);
  const Scalar det0 = determinant(bs.diagonal_blocks[0]);
  const Scalar c = bs.diagonal_blocks[1](0, 0);
  if (det0.abs() == c.abs().pow(n)) {
    HeisenbergVerdict v;
    v.n = n;
    v.holds = true;
    v.exact = true;
    return v;
  }
  const auto levels = level_exponents(a, g);
  std::vector<double> flat = levels[0];
  flat.push_back(levels[1][0]);
  return verify_heisenberg_additivity(flat, tol);
}

BlockStructure check_block_structure(const Matrix& a, const GradedAlgebra& g) {
  const std::size_t n = g.dim();
  if (a.rows() != n || a.cols() != n) throw InputError("matrix and algebra dimensions differ");
  const Grading& gr = g.grading;
  BlockStructure out;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      if (gr.layer_of(static_cast<int>(r)) > gr.layer_of(static_cast<int>(c)) && !a(r, c).is_zero()) {
        out.violation_row = static_cast<int>(r);
        out.violation_col = static_cast<int>(c);
        return out;
      }
    }
  }
  out.block_upper_triangular = true;
  for (const auto& layer : gr.layers()) out.diagonal_blocks.push_back(a.block(layer, layer));

  const Matrix& b0 = out.diagonal_blocks.front();
  bool diagonal0 = true;
  for (std::size_t r = 0; r < b0.rows(); ++r) {
    for (std::size_t c = 0; c < b0.cols(); ++c) diagonal0 = diagonal0 && (r == c || b0(r, c).is_zero());
  }
  if (!diagonal0 || gr.depth() < 2) return out;
  out.products_checked = true;
  for (std::size_t i = 1; i < gr.depth() && out.products_ok; ++i) {
    for (int k : gr.layers()[i]) {
      bool any = false, match = false;
      for (int x : gr.layers()[0]) {
        for (int y : gr.layers()[i - 1]) {
          if (g.algebra.bracket_basis(x, y)[static_cast<std::size_t>(k)].is_zero()) continue;
          any = true;
          const auto ux = static_cast<std::size_t>(x), uy = static_cast<std::size_t>(y);
          match = match || a(ux, ux) * a(uy, uy) == a(static_cast<std::size_t>(k), static_cast<std::size_t>(k));
        }
      }
      if (any && !match) {
        out.products_ok = false;
        out.product_mismatch = k;
        break;
      }
    }
  }
  return out;
}

std::vector<std::vector<double>> level_exponents(const Matrix& a, const GradedAlgebra& g) {
  const BlockStructure bs = check_block_structure(a, g);
  if (!bs.block_upper_triangular) throw PreconditionError("map is not block triangular for the grading");
  std::vector<std::vector<double>> out;
  for (const auto& b : bs.diagonal_blocks) out.push_back(lyapunov_spectrum(b).flattened());
  return out;
}

DominatedSplittingResult check_dominated_splitting(const std::function<double(double)>& e_norm,
                                                   const std::function<double(double)>& f_conorm, double c,
                                                   double lambda, double horizon, double step) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw InputError("dominated splitting needs 0 < lambda < 1");
  if (!(c > 0.0)) throw InputError("dominated splitting needs C > 0");
  if (!(step > 0.0) || !(horizon >= 0.0)) throw InputError("dominated splitting needs step > 0 and T >= 0");
  DominatedSplittingResult r;
  const auto steps = static_cast<long>(std::floor(horizon / step + 1e-9));
  for (long k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * step;
    const double product = e_norm(t) * f_conorm(t);
    const double bound = c * std::pow(lambda, t);
    if (product > bound * (1.0 + 1e-12)) {
      r.satisfied = false;
      r.violated_at = t;
      r.product = product;
      r.bound = bound;
      return r;
    }
  }
  return r;
}

}  // namespace carnot
