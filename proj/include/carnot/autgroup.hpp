#pragma once

#include <cstdint>
#include <optional>

#include "carnot/lie_algebra.hpp"
#include "carnot/univariate.hpp"

namespace carnot {

/// Lie algebra of the graded automorphism group: derivations preserving every layer.
struct GradedDerivationSpace {
  GradedAlgebra ambient;
  std::vector<Matrix> basis;

  std::size_t dim() const { return basis.size(); }
  /// Coordinates of m in the basis, or nullopt when m is not in the span.
  std::optional<Vec> coordinates(const Matrix& m) const;
  bool contains(const Matrix& m) const { return coordinates(m).has_value(); }
  bool closed_under_commutator() const;
};

GradedDerivationSpace graded_derivations(const GradedAlgebra& g);

/// D[x,y] = [Dx,y] + [x,Dy] on all basis pairs.
bool is_derivation(const LieAlgebra& alg, const Matrix& d);
/// The grading derivation: (i+1)·Id on layer i.
Matrix grading_derivation(const GradedAlgebra& g);

/// Real nonzero eigenvalue witness: the characteristic polynomial of the
/// layer-0 block and an isolating interval (lo, hi] not containing 0.
struct EigenvalueWitness {
  UPoly char_poly;
  RootInterval interval;
};

struct AsymmetryVerdict {
  enum class Kind { asymmetric, not_asymmetric, undetermined };
  Kind kind = Kind::undetermined;
  // not_asymmetric: a trace-zero graded derivation with a real nonzero eigenvalue on layer 0
  std::optional<Matrix> derivation;
  std::optional<EigenvalueWitness> eigenvalue;
  // asymmetric: positive definite P on layer 0 with Dᵀ P + P D = 0 for the trace-zero part
  std::optional<Matrix> inner_product;
  std::size_t trace_zero_dim = 0;
  std::size_t invariant_forms_dim = 0;
};

std::string to_string(AsymmetryVerdict::Kind k);

/// Three-valued, identity-component-level decision of asymmetry. Requires a
/// Carnot grading. The seed drives the bounded random search of steps (a), (b).
AsymmetryVerdict asymmetry_verdict(const GradedAlgebra& g, std::uint64_t seed = 0);

/// Step (b) in isolation: search for a positive definite P invariant under the
/// given layer-0 blocks (an empty list means only the dilations survive).
std::optional<Matrix> find_invariant_inner_product(const std::vector<Matrix>& blocks, std::size_t d0,
                                                   std::uint64_t seed, std::size_t* forms_dim = nullptr);

/// Independent exact re-checks of the certificates.
bool validate_not_asymmetric(const GradedAlgebra& g, const Matrix& derivation, const EigenvalueWitness& witness);
bool validate_asymmetric(const GradedAlgebra& g, const Matrix& inner_product);

struct AutomorphismCheck {
  bool yes = false;
  std::string reason;
  int witness_i = -1, witness_j = -1;  // failing basis pair for multiplicativity
};

AutomorphismCheck is_graded_automorphism(const GradedAlgebra& g, const Matrix& a);

/// Extends a layer-0 block to a candidate graded map via A[x,y] = [Ax,Ay] on a
/// spanning set of brackets. The result still has to pass is_graded_automorphism.
std::optional<Matrix> extend_layer0(const GradedAlgebra& g, const Matrix& layer0_block);

struct HomothetyResult {
  bool homothety = false;
  double lambda = 0.0;
  bool residual_isometry_check = false;
  double relative_residual = 0.0;
};

/// λ = |det A|_{L0}|^{1/d0}; homothety iff A0ᵀ P A0 = λ² P to 1e-9 relative.
HomothetyResult homothety_decompose(const GradedAlgebra& g, const Matrix& a, const Matrix& inner_product);

}  // namespace carnot
