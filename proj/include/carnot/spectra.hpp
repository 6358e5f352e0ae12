#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>

#include "carnot/lie_algebra.hpp"
#include "carnot/univariate.hpp"

namespace carnot {

struct LyapunovExponent {
  double value = 0.0;
  int multiplicity = 0;
};

struct SpectrumReport {
  enum class Source { exact_eigenvalues, numeric_eigenvalues, qr_estimate };
  std::vector<LyapunovExponent> exponents;  // ascending
  Source source = Source::exact_eigenvalues;
  std::size_t iterations = 0;  // qr_estimate only
  std::uint64_t seed = 0;      // qr_estimate only
  double error_bound = 0.0;

  int total_multiplicity() const;
  /// Exponents repeated by multiplicity, ascending.
  std::vector<double> flattened() const;
};

std::string to_string(SpectrumReport::Source s);

/// Groups values within 1e-9 (relative to max(1,|v|)) into one entry.
std::vector<LyapunovExponent> group_exponents(std::vector<double> values);

/// Eigenvalue of an exact matrix: exact when found by factoring, else numeric.
struct EigenvalueInfo {
  std::optional<Scalar> exact;
  std::complex<double> value;
};

/// All n eigenvalues (with multiplicity); exact ones come from diagonal
/// candidates, the rational root test and linear/quadratic remainders.
std::vector<EigenvalueInfo> eigenvalues(const Matrix& a, double* numeric_error_bound = nullptr);

SpectrumReport lyapunov_spectrum(const Matrix& a);

struct ArithmeticityVerdict {
  bool holds = false;
  double lambda = 0.0;
  std::vector<LyapunovExponent> expected;
  std::vector<LyapunovExponent> observed;
  double max_deviation = 0.0;
};

ArithmeticityVerdict verify_arithmeticity(const Matrix& a, const GradedAlgebra& g, double tol = 1e-8);

struct SubadditivityVerdict {
  bool holds = true;
  int level = -1;  // offending level i
  int index = -1;  // 0-based position j in the concatenated list
  double value = 0.0, lower = 0.0, upper = 0.0;
};

/// (i+1)·min(level 0) ≤ e ≤ (i+1)·max(level 0) for every e on level i.
SubadditivityVerdict verify_subadditivity(std::vector<std::vector<double>> levels, double tol = 1e-9);

struct HeisenbergVerdict {
  bool holds = false;
  int n = 0;
  double deviation = 0.0;
  bool exact = false;
};

/// Exponent list with the centre exponent last: |Σ first 2n − n·last| ≤ tol.
HeisenbergVerdict verify_heisenberg_additivity(const std::vector<double>& exponents, double tol = 1e-8);
/// Matrix form for a block triangular map of H^{2n+1}: compares |det A_0| with
/// |c|^n exactly before falling back to the exponent list.
HeisenbergVerdict verify_heisenberg_additivity(const Matrix& a, const GradedAlgebra& g, double tol = 1e-8);

struct BlockStructure {
  bool block_upper_triangular = false;
  int violation_row = -1, violation_col = -1;
  std::vector<Matrix> diagonal_blocks;
  bool products_checked = false;
  bool products_ok = true;
  int product_mismatch = -1;  // basis index whose diagonal entry is no predicted product
};

/// Entries (r, c) with layer(r) > layer(c) must vanish.
BlockStructure check_block_structure(const Matrix& a, const GradedAlgebra& g);

/// Exponents of each diagonal block, ascending per level. Requires block triangular form.
std::vector<std::vector<double>> level_exponents(const Matrix& a, const GradedAlgebra& g);

struct DominatedSplittingResult {
  bool satisfied = true;
  double violated_at = 0.0;
  double product = 0.0, bound = 0.0;
};

/// Finite-horizon check of ‖α_t|E‖·‖α_{-t}|F‖ ≤ C λ^t at t = 0, step, …, T.
DominatedSplittingResult check_dominated_splitting(const std::function<double(double)>& e_norm,
                                                   const std::function<double(double)>& f_conorm, double c,
                                                   double lambda, double horizon, double step);

}  // namespace carnot
