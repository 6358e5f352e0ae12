#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "carnot/matrix.hpp"

namespace carnot {

/// Finite-dimensional Lie algebra given by structure constants on a basis
/// e_0..e_{n-1}. Only [e_i, e_j] with i < j and a nonzero result are stored.
class LieAlgebra {
 public:
  using SparseVec = std::vector<std::pair<int, Scalar>>;

  LieAlgebra() = default;
  LieAlgebra(std::size_t dim, Field field, std::vector<std::string> names = {});

  /// Sets [e_i, e_j] = out; [e_j, e_i] follows by antisymmetry.
  void set_bracket(int i, int j, const Vec& out);

  std::size_t dim() const { return dim_; }
  Field field() const { return field_; }
  const std::vector<std::string>& names() const { return names_; }
  const std::map<std::pair<int, int>, SparseVec>& structure_constants() const { return brackets_; }

  /// [e_i, e_j] as a dense vector.
  Vec bracket_basis(int i, int j) const;

  friend bool operator==(const LieAlgebra& a, const LieAlgebra& b) {
    return a.dim_ == b.dim_ && a.field_ == b.field_ && a.names_ == b.names_ && a.brackets_ == b.brackets_;
  }

 private:
  std::size_t dim_ = 0;
  Field field_;
  std::vector<std::string> names_;
  std::map<std::pair<int, int>, SparseVec> brackets_;
};

/// Bilinear extension of the structure constants.
Vec bracket_of(const LieAlgebra& alg, const Vec& x, const Vec& y);

struct JacobiResult {
  bool ok = true;
  // first violating basis triple i < j < k (0-based) and its residual
  int i = -1, j = -1, k = -1;
  Vec residual;
};

JacobiResult check_jacobi(const LieAlgebra& alg);

/// Dimensions of C^0 ⊇ C^1 ⊇ ...; stops at 0 or at the first repeated value
/// (which is included, so a perfect algebra yields [n, n]).
std::vector<std::size_t> lower_central_series(const LieAlgebra& alg);
bool is_nilpotent(const LieAlgebra& alg);

/// Ordered partition of the basis into layers L_0..L_r; layer i has weight i+1.
class Grading {
 public:
  Grading() = default;
  Grading(std::vector<std::vector<int>> layers, std::size_t dim);

  const std::vector<std::vector<int>>& layers() const { return layers_; }
  std::size_t depth() const { return layers_.size(); }
  int layer_of(int basis_index) const { return layer_of_.at(static_cast<std::size_t>(basis_index)); }
  static int weight(int layer) { return layer + 1; }
  std::vector<std::size_t> layer_dims() const;
  /// Basis indices in layer order (layer 0 first).
  std::vector<int> flattened() const;

  friend bool operator==(const Grading& a, const Grading& b) { return a.layers_ == b.layers_; }

 private:
  std::vector<std::vector<int>> layers_;
  std::vector<int> layer_of_;
};

struct GradedAlgebra {
  LieAlgebra algebra;
  Grading grading;

  std::size_t dim() const { return algebra.dim(); }
  friend bool operator==(const GradedAlgebra&, const GradedAlgebra&) = default;
};

struct GradingVerdict {
  enum class Kind { graded, graded_carnot, violation };
  Kind kind = Kind::violation;
  std::string description;
  // for violations: offending layers and witness basis pair (0-based)
  int layer_a = -1, layer_b = -1;
  int witness_i = -1, witness_j = -1;

  bool is_graded() const { return kind != Kind::violation; }
};

std::string to_string(GradingVerdict::Kind k);

GradingVerdict verify_grading(const GradedAlgebra& g);

/// Acts as s^{i+1} on layer i.
Matrix dilation_matrix(const GradedAlgebra& g, const Scalar& s);

/// Structure constants in the basis f_k = P e_k (columns of P).
LieAlgebra change_basis(const LieAlgebra& alg, const Matrix& p);
/// Same, keeping the grading; P must preserve every layer.
GradedAlgebra change_basis(const GradedAlgebra& g, const Matrix& p);
bool preserves_layers(const Grading& grading, const Matrix& a);

}  // namespace carnot
