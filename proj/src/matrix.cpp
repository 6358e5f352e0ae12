#include "carnot/matrix.hpp"

namespace carnot {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::diagonal(const Vec& d) {
  Matrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Matrix Matrix::from_columns(const std::vector<Vec>& cols, std::size_t rows) {
  Matrix m(rows, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (cols[c].size() != rows) throw InputError("column length mismatch");
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = cols[c][r];
  }
  return m;
}

Matrix Matrix::from_rows(const std::vector<Vec>& rows) {
  const std::size_t ncols = rows.empty() ? 0 : rows.front().size();
  Matrix m(rows.size(), ncols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != ncols) throw InputError("ragged matrix rows");
    for (std::size_t c = 0; c < ncols; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

Vec Matrix::column(std::size_t c) const {
  Vec v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

Vec Matrix::row(std::size_t r) const {
  return Vec(data_.begin() + static_cast<long>(r * cols_), data_.begin() + static_cast<long>((r + 1) * cols_));
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  }
  return t;
}

Matrix Matrix::conj() const {
  Matrix t = *this;
  for (auto& x : t.data_) x = x.conj();
  return t;
}

Matrix Matrix::block(const std::vector<int>& rows, const std::vector<int>& cols) const {
  Matrix b(rows.size(), cols.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) b(r, c) = (*this)(rows[r], cols[c]);
  }
  return b;
}

Scalar Matrix::trace() const {
  Scalar t;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

bool Matrix::is_zero() const {
  for (const auto& x : data_) {
    if (!x.is_zero()) return false;
  }
  return true;
}

Field Matrix::field() const {
  Field f;
  for (const auto& x : data_) {
    if (!x.is_rational()) f = Field::join(f, x.field());
  }
  return f;
}

Matrix Matrix::operator-() const {
  Matrix m = *this;
  for (auto& x : m.data_) x = -x;
  return m;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw InputError("matrix shape mismatch");
  Matrix m = a;
  for (std::size_t i = 0; i < m.data_.size(); ++i) m.data_[i] += b.data_[i];
  return m;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw InputError("matrix shape mismatch");
  Matrix m = a;
  for (std::size_t i = 0; i < m.data_.size(); ++i) m.data_[i] -= b.data_[i];
  return m;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols_ != b.rows_) throw InputError("matrix shape mismatch in product");
  Matrix m(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Scalar& aik = a(i, k);
      if (aik.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) {
        if (!b(k, j).is_zero()) m(i, j) += aik * b(k, j);
      }
    }
  }
  return m;
}

Matrix operator*(const Scalar& s, const Matrix& a) {
  Matrix m = a;
  for (auto& x : m.data_) x *= s;
  return m;
}

Vec operator*(const Matrix& a, const Vec& x) {
  if (a.cols_ != x.size()) throw InputError("matrix-vector shape mismatch");
  Vec y(a.rows_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      if (!a(i, k).is_zero() && !x[k].is_zero()) y[i] += a(i, k) * x[k];
    }
  }
  return y;
}

Eigen::MatrixXd Matrix::to_eigen() const {
  Eigen::MatrixXd m(rows_, cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) m(static_cast<long>(r), static_cast<long>(c)) = (*this)(r, c).to_double();
  }
  return m;
}

RowEchelon row_reduce(Matrix m) {
  RowEchelon out;
  std::size_t lead_row = 0;
  for (std::size_t c = 0; c < m.cols() && lead_row < m.rows(); ++c) {
    std::size_t pivot = lead_row;
    while (pivot < m.rows() && m(pivot, c).is_zero()) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != lead_row) {
      for (std::size_t k = 0; k < m.cols(); ++k) std::swap(m(pivot, k), m(lead_row, k));
    }
    const Scalar inv = m(lead_row, c).inverse();
    for (std::size_t k = c; k < m.cols(); ++k) m(lead_row, k) *= inv;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == lead_row || m(r, c).is_zero()) continue;
      const Scalar f = m(r, c);
      for (std::size_t k = c; k < m.cols(); ++k) {
        if (!m(lead_row, k).is_zero()) m(r, k) -= f * m(lead_row, k);
      }
    }
    out.pivots.push_back(c);
    ++lead_row;
  }
  out.reduced = std::move(m);
  return out;
}

std::size_t rank(const Matrix& m) { return row_reduce(m).pivots.size(); }

std::vector<Vec> nullspace(const Matrix& m) {
  const RowEchelon e = row_reduce(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<Vec> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    Vec v(m.cols());
    v[free] = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = -e.reduced(r, free);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<Vec> solve(const Matrix& m, const Vec& b) {
  if (b.size() != m.rows()) throw InputError("rhs length mismatch");
  Matrix aug(m.rows(), m.cols() + 1);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) aug(r, c) = m(r, c);
    aug(r, m.cols()) = b[r];
  }
  const RowEchelon e = row_reduce(aug);
  if (!e.pivots.empty() && e.pivots.back() == m.cols()) return std::nullopt;
  Vec x(m.cols());
  for (std::size_t r = 0; r < e.pivots.size(); ++r) x[e.pivots[r]] = e.reduced(r, m.cols());
  return x;
}

std::optional<Matrix> inverse(const Matrix& m) {
  if (!m.is_square()) return std::nullopt;
  const std::size_t n = m.rows();
  Matrix aug(n, 2 * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) aug(r, c) = m(r, c);
    aug(r, n + r) = 1;
  }
  const RowEchelon e = row_reduce(aug);
  if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) return std::nullopt;
  Matrix inv(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) inv(r, c) = e.reduced(r, n + c);
  }
  return inv;
}

Scalar determinant(const Matrix& input) {
  if (!input.is_square()) throw InputError("determinant of non-square matrix");
  Matrix m = input;
  const std::size_t n = m.rows();
  Scalar det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    while (pivot < n && m(pivot, c).is_zero()) ++pivot;
    if (pivot == n) return Scalar(0);
    if (pivot != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(m(pivot, k), m(c, k));
      det = -det;
    }
    det *= m(c, c);
    const Scalar inv = m(c, c).inverse();
    for (std::size_t r = c + 1; r < n; ++r) {
      if (m(r, c).is_zero()) continue;
      const Scalar f = m(r, c) * inv;
      for (std::size_t k = c; k < n; ++k) m(r, k) -= f * m(c, k);
    }
  }
  return det;
}

std::size_t span_rank(const std::vector<Vec>& vectors, std::size_t dim) {
  if (vectors.empty()) return 0;
  return rank(Matrix::from_columns(vectors, dim));
}

std::vector<Vec> independent_subset(const std::vector<Vec>& vectors, std::size_t dim) {
  if (vectors.empty()) return {};
  const RowEchelon e = row_reduce(Matrix::from_columns(vectors, dim));
  std::vector<Vec> out;
  for (auto p : e.pivots) out.push_back(vectors[p]);
  return out;
}

bool is_symmetric(const Matrix& m) { return m.is_square() && m == m.transpose(); }

bool is_positive_definite(const Matrix& sym) {
  if (!is_symmetric(sym)) return false;
  Matrix m = sym;
  const std::size_t n = m.rows();
  // symmetric Gaussian elimination: every pivot (the D of LDLᵀ) must be > 0
  for (std::size_t k = 0; k < n; ++k) {
    if (m(k, k).sign() <= 0) return false;
    const Scalar inv = m(k, k).inverse();
    for (std::size_t r = k + 1; r < n; ++r) {
      if (m(r, k).is_zero()) continue;
      const Scalar f = m(r, k) * inv;
      for (std::size_t c = k; c < n; ++c) m(r, c) -= f * m(k, c);
    }
  }
  return true;
}

}  // namespace carnot
