#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include <Eigen/Dense>

#include "carnot/bch.hpp"
#include "carnot/spectra.hpp"

namespace carnot {

/// g ⊕ g^σ with layers L_i ∪ (L_i + n); the second copy carries conjugated constants.
GradedAlgebra galois_product(const GradedAlgebra& g);

struct AnosovCertificates {
  bool graded_automorphism = false;
  bool integral = false;
  bool hyperbolic = false;
  Matrix lattice_matrix;  // map in the lattice basis
  int bad_row = -1, bad_col = -1;  // first non-integral entry
  bool all() const { return graded_automorphism && integral && hyperbolic; }
};

struct ProductAnosovSystem {
  NilGroupModel factor;
  NilGroupModel product;
  Scalar lambda;
  Matrix map;            // δ_λ ⊕ δ_{λ^σ}
  Matrix lattice_basis;  // columns: c·(e_k, e_k), c·(√d e_k, −√d e_k), layerwise
  long lattice_scale = 1;
  AnosovCertificates certificates;

  Matrix lattice_basis_inverse;
  std::vector<int> basis_layer;  // layer of each lattice basis column
  Eigen::MatrixXd map_d, basis_d, basis_inverse_d;

  std::size_t dim() const { return map.rows(); }
};

/// Independent re-check of the three certificates.
AnosovCertificates certify(const GradedAlgebra& product, const Matrix& map, const Matrix& lattice_basis);

struct AnosovBuild {
  std::optional<ProductAnosovSystem> system;
  std::string failed_certificate;  // "graded_automorphism", "integrality", "hyperbolicity"
  std::string diagnostic;
};

/// Galois-pair construction. Throws InputError when λ is not in a real
/// quadratic field with |λ| > 1 > |λ^σ|.
AnosovBuild build_product_anosov(const GradedAlgebra& g, const Scalar& lambda);
/// H³ with weights 1, 2, 3 and λ = 2+√3.
ProductAnosovSystem build_smale_system();

/// c = D·c' where D clears the structure-constant denominators and c' is the
/// smallest integer with c'^{k-1}·(BCH coefficient) integral for every degree k ≤ step.
long lattice_scale(const GradedAlgebra& g, int step);

/// Coordinates in the lattice basis.
std::vector<double> malcev_coordinates(const ProductAnosovSystem& s, const std::vector<double>& x);
Vec malcev_coordinates(const ProductAnosovSystem& s, const Vec& x);

/// Representative of the right coset xΓ with every Malcev coordinate in [0,1).
std::vector<double> malcev_reduce(const ProductAnosovSystem& s, const std::vector<double>& x);
Vec malcev_reduce(const ProductAnosovSystem& s, const Vec& x);
/// log γ ∈ Γ: integral lattice coordinates.
bool in_lattice(const ProductAnosovSystem& s, const Vec& x);

/// Self-map of N×N/Γ with its derivative cocycle in the right-invariant trivialization.
struct PointMap {
  std::function<std::vector<double>(const std::vector<double>&)> map;
  std::function<Eigen::MatrixXd(const std::vector<double>&)> dmap;
};

PointMap automorphism_map(const ProductAnosovSystem& s);
/// x ↦ g0·A(x); cocycle Ad_{g0}·A.
PointMap affine_map(const ProductAnosovSystem& s, const std::vector<double>& g0);
/// x ↦ exp(εφ(x))·A(x) with φ a Γ-periodic trigonometric field along layer 0.
PointMap make_periodic_perturbation(const ProductAnosovSystem& s, double epsilon, std::uint64_t seed);

/// Right-trivialized central differences of the map at x along each basis vector.
Eigen::MatrixXd finite_difference_jacobian(const ProductAnosovSystem& s, const PointMap& f,
                                           const std::vector<double>& x, double h);

struct NumericalBlowup : std::runtime_error {
  NumericalBlowup(const std::string& what, std::size_t it) : std::runtime_error(what), iteration(it) {}
  std::size_t iteration;
};

struct QrEstimate {
  SpectrumReport report;
  std::vector<double> exponents;  // ascending, one per dimension
  double mean_log_det = 0.0;
  std::size_t burn_in = 0;
};

/// Benettin QR iteration: the first N/10 steps align the frame and are not
/// averaged; the remaining steps are. error_bound is the largest drift of the
/// running means over the final 10% of the averaged steps.
QrEstimate qr_lyapunov_estimate(const ProductAnosovSystem& s, const PointMap& f, std::vector<double> x0,
                                std::size_t iterations, std::uint64_t seed);

/// Seeded start point with Malcev coordinates uniform in [0,1).
std::vector<double> random_start(const ProductAnosovSystem& s, std::uint64_t seed);

}  // namespace carnot
