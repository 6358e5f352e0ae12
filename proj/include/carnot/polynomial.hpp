#pragma once

#include <map>
#include <vector>

#include "carnot/matrix.hpp"

namespace carnot {

using Exponent = std::vector<int>;

/// Sparse multivariate polynomial over Scalar in a fixed number of variables.
class Poly {
 public:
  static constexpr int max_degree = 12;

  Poly() = default;
  explicit Poly(std::size_t nvars) : nvars_(nvars) {}
  static Poly constant(std::size_t nvars, const Scalar& c);
  static Poly variable(std::size_t nvars, std::size_t k);
  static Poly monomial(const Exponent& e, const Scalar& c);

  std::size_t nvars() const { return nvars_; }
  const std::map<Exponent, Scalar>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Total degree, -1 for the zero polynomial.
  int degree() const;
  Scalar coeff(const Exponent& e) const;
  void add_term(const Exponent& e, const Scalar& c);

  Poly derivative(std::size_t k) const;
  Scalar operator()(const Vec& x) const;
  /// p(shift + M y) as a polynomial in y.
  Poly affine_substitute(const Matrix& m, const Vec& shift) const;

  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(const Scalar& s, const Poly& a);
  friend bool operator==(const Poly& a, const Poly& b) { return a.nvars_ == b.nvars_ && a.terms_ == b.terms_; }

  std::string to_string(const std::vector<std::string>& vars = {}) const;

 private:
  std::size_t nvars_ = 0;
  std::map<Exponent, Scalar> terms_;
};

/// Polynomial vector field Σ_k X^k ∂_k on R^n.
struct PolyVectorField {
  std::vector<Poly> components;

  PolyVectorField() = default;
  explicit PolyVectorField(std::vector<Poly> comps);
  static PolyVectorField zero(std::size_t n);
  /// Constant field ∂_k.
  static PolyVectorField coordinate(std::size_t n, std::size_t k);

  std::size_t dim() const { return components.size(); }
  bool is_zero() const;
  Vec operator()(const Vec& x) const;
  /// Coordinates changed by x = shift + M y: Y(y) = M⁻¹ X(shift + M y).
  PolyVectorField change_coordinates(const Matrix& m, const Matrix& m_inv, const Vec& shift) const;

  friend PolyVectorField operator+(const PolyVectorField& a, const PolyVectorField& b);
  friend PolyVectorField operator-(const PolyVectorField& a, const PolyVectorField& b);
  friend PolyVectorField operator*(const Poly& f, const PolyVectorField& a);
  friend PolyVectorField operator*(const Scalar& s, const PolyVectorField& a);
  friend bool operator==(const PolyVectorField& a, const PolyVectorField& b) { return a.components == b.components; }

  std::string to_string(const std::vector<std::string>& vars = {}) const;
};

/// [X,Y]^k = Σ_m (X^m ∂_m Y^k − Y^m ∂_m X^k).
PolyVectorField lie_bracket(const PolyVectorField& x, const PolyVectorField& y);

}  // namespace carnot
