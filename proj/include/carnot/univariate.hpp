#pragma once

#include <vector>

#include "carnot/matrix.hpp"

namespace carnot {

/// Univariate polynomial over Scalar; coefficient k multiplies x^k.
class UPoly {
 public:
  UPoly() = default;
  explicit UPoly(Vec coeffs);
  static UPoly monomial(const Scalar& c, std::size_t k);

  int degree() const { return static_cast<int>(c_.size()) - 1; }  // −1 for zero
  bool is_zero() const { return c_.empty(); }
  const Vec& coeffs() const { return c_; }
  const Scalar& coeff(std::size_t k) const;
  const Scalar& leading() const { return c_.back(); }

  Scalar operator()(const Scalar& x) const;
  UPoly derivative() const;
  UPoly conj() const;
  bool is_rational() const;

  friend UPoly operator+(const UPoly& a, const UPoly& b);
  friend UPoly operator-(const UPoly& a, const UPoly& b);
  friend UPoly operator*(const UPoly& a, const UPoly& b);
  friend bool operator==(const UPoly& a, const UPoly& b) { return a.c_ == b.c_; }

  struct DivMod;
  DivMod divmod(const UPoly& divisor) const;

 private:
  void trim();
  Vec c_;
};

struct UPoly::DivMod {
  UPoly quotient;
  UPoly remainder;
};

/// det(x·I − A), exact (Faddeev–LeVerrier).
UPoly characteristic_polynomial(const Matrix& a);

/// Interval (lo, hi] holding exactly one real root, or lo == hi for an exact root.
struct RootInterval {
  Scalar lo;
  Scalar hi;
};

/// Number of distinct real roots in (lo, hi] (Sturm).
int count_real_roots(const UPoly& p, const Scalar& lo, const Scalar& hi);
/// Integer B with every real root in (−B, B).
Scalar root_bound(const UPoly& p);
/// Isolating intervals for all distinct real roots, ascending.
std::vector<RootInterval> isolate_real_roots(const UPoly& p);
/// p with every factor x removed.
UPoly strip_zero_roots(const UPoly& p);

}  // namespace carnot
