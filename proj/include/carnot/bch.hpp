#pragma once

#include <Eigen/Dense>

#include "carnot/lie_algebra.hpp"

namespace carnot {

/// One term of the Baker–Campbell–Hausdorff series: coefficient times the
/// left-normed bracket [[[w1,w2],w3],…] of the letters (0 = X, 1 = Y).
struct BchTerm {
  std::vector<int> word;
  mpq_class coeff;
};

/// Terms of log(exp X exp Y) through the given order (≤ 6), in Dynkin form
/// with exact rational coefficients, grouped by degree.
const std::vector<BchTerm>& bch_terms(int order);

/// Simply connected nilpotent group in exponential coordinates: the product
/// is the BCH series truncated at the nilpotency step.
class NilGroupModel {
 public:
  static constexpr int max_step = 6;

  NilGroupModel() = default;
  explicit NilGroupModel(GradedAlgebra g);

  const GradedAlgebra& algebra() const { return g_; }
  std::size_t dim() const { return g_.dim(); }
  int step() const { return step_; }
  int bch_order() const { return step_; }

  Vec bracket(const Vec& x, const Vec& y) const;
  std::vector<double> bracket(const std::vector<double>& x, const std::vector<double>& y) const;
  Vec multiply(const Vec& x, const Vec& y) const;
  std::vector<double> multiply(const std::vector<double>& x, const std::vector<double>& y) const;
  Vec inverse(const Vec& x) const { return Scalar(-1) * x; }
  std::vector<double> inverse(const std::vector<double>& x) const;

  /// ad_x as an exact / double matrix.
  Matrix ad(const Vec& x) const;
  Eigen::MatrixXd ad(const std::vector<double>& x) const;

 private:
  template <class T>
  std::vector<T> bch(const std::vector<T>& x, const std::vector<T>& y) const;
  template <class T>
  std::vector<T> sparse_bracket(const std::vector<T>& x, const std::vector<T>& y) const;

  struct Entry {
    int i, j;
    std::vector<std::pair<int, Scalar>> out;
    std::vector<std::pair<int, double>> out_d;
  };

  GradedAlgebra g_;
  int step_ = 0;
  std::vector<Entry> entries_;
};

}  // namespace carnot
