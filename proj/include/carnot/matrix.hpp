#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "carnot/scalar.hpp"

namespace carnot {

/// Dense exact matrix over Scalar, row-major.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix identity(std::size_t n);
  static Matrix diagonal(const Vec& d);
  static Matrix from_columns(const std::vector<Vec>& cols, std::size_t rows);
  static Matrix from_rows(const std::vector<Vec>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Scalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Scalar& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Vec column(std::size_t c) const;
  Vec row(std::size_t r) const;
  Matrix transpose() const;
  Matrix conj() const;
  Matrix block(const std::vector<int>& rows, const std::vector<int>& cols) const;
  Scalar trace() const;
  bool is_zero() const;
  Field field() const;

  Matrix operator-() const;
  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator*(const Scalar& s, const Matrix& a);
  friend Vec operator*(const Matrix& a, const Vec& x);
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  Eigen::MatrixXd to_eigen() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

/// Reduced row echelon form with first-nonzero pivoting.
struct RowEchelon {
  Matrix reduced;
  std::vector<std::size_t> pivots;
};

RowEchelon row_reduce(Matrix m);
std::size_t rank(const Matrix& m);
/// Basis of {x : m x = 0}.
std::vector<Vec> nullspace(const Matrix& m);
/// Some solution of m x = b, or nullopt when inconsistent.
std::optional<Vec> solve(const Matrix& m, const Vec& b);
std::optional<Matrix> inverse(const Matrix& m);
Scalar determinant(const Matrix& m);
/// Rank of the span of the given vectors.
std::size_t span_rank(const std::vector<Vec>& vectors, std::size_t dim);
/// Linearly independent subset (greedy, in order) spanning the same space.
std::vector<Vec> independent_subset(const std::vector<Vec>& vectors, std::size_t dim);

/// Exact positive definiteness of a symmetric matrix via LDLᵀ.
bool is_positive_definite(const Matrix& sym);
bool is_symmetric(const Matrix& m);

}  // namespace carnot
