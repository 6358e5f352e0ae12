#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace carnot {

/// Malformed or inconsistent user input (CLI maps this to exit code 2).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two operands live in different quadratic fields.
class FieldMismatch : public InputError {
 public:
  using InputError::InputError;
};

/// An operation was called outside its documented precondition.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Coefficient field: Q when radicand == 0, otherwise Q(sqrt(radicand)) with a
/// squarefree radicand > 1.
struct Field {
  long radicand = 0;

  bool is_rational() const { return radicand == 0; }
  friend bool operator==(const Field&, const Field&) = default;

  /// Smallest field containing both; throws FieldMismatch for Q(√a) vs Q(√b).
  static Field join(Field a, Field b);
  static Field quadratic(long d);
  std::string to_string() const;
};

bool is_squarefree(long d);

/// Exact element a + b·√d of Q or a real quadratic field. The real embedding
/// with √d > 0 is used for sign, floor and to_double.
class Scalar {
 public:
  Scalar() = default;
  Scalar(long v) : a_(v) {}  // NOLINT(google-explicit-constructor)
  Scalar(int v) : a_(v) {}   // NOLINT(google-explicit-constructor)
  Scalar(mpq_class a) : a_(std::move(a)) { a_.canonicalize(); }  // NOLINT
  Scalar(mpq_class a, mpq_class b, long d);

  static Scalar rational(long num, long den);
  static Scalar sqrt_of(long d);

  const mpq_class& rational_part() const { return a_; }
  const mpq_class& irrational_part() const { return b_; }
  long radicand() const { return d_; }
  Field field() const { return Field{d_}; }

  bool is_zero() const { return sgn(a_) == 0 && sgn(b_) == 0; }
  bool is_rational() const { return sgn(b_) == 0; }
  bool is_integer() const { return is_rational() && a_.get_den() == 1; }
  /// a, b in Z, i.e. an element of Z[√d].
  bool in_ring_zsqrtd() const { return a_.get_den() == 1 && b_.get_den() == 1; }

  /// Galois conjugate a − b√d.
  Scalar conj() const;
  /// Field norm a² − d b² (rational).
  mpq_class norm() const;
  int sign() const;
  mpz_class floor() const;
  double to_double() const;
  Scalar inverse() const;
  Scalar abs() const { return sign() < 0 ? -*this : *this; }
  Scalar pow(int k) const;

  Scalar operator-() const;
  Scalar& operator+=(const Scalar& o);
  Scalar& operator-=(const Scalar& o);
  Scalar& operator*=(const Scalar& o);
  Scalar& operator/=(const Scalar& o);

  friend Scalar operator+(Scalar x, const Scalar& y) { return x += y; }
  friend Scalar operator-(Scalar x, const Scalar& y) { return x -= y; }
  friend Scalar operator*(Scalar x, const Scalar& y) { return x *= y; }
  friend Scalar operator/(Scalar x, const Scalar& y) { return x /= y; }
  friend bool operator==(const Scalar& x, const Scalar& y) { return x.a_ == y.a_ && x.b_ == y.b_; }
  friend bool operator<(const Scalar& x, const Scalar& y) { return (x - y).sign() < 0; }
  friend bool operator>(const Scalar& x, const Scalar& y) { return y < x; }
  friend bool operator<=(const Scalar& x, const Scalar& y) { return !(y < x); }
  friend bool operator>=(const Scalar& x, const Scalar& y) { return !(x < y); }

  /// Canonical serialization: "a", "a/b", "a+b*r", "a-b*r", "b*r".
  std::string to_string() const;
  /// Parses the serialized form; `r` stands for √d of the given field.
  static Scalar parse(std::string_view text, Field field);

 private:
  void unify(const Scalar& o);

  mpq_class a_{0};
  mpq_class b_{0};
  long d_ = 0;
};

using Vec = std::vector<Scalar>;

Vec zero_vec(std::size_t n);
Vec unit_vec(std::size_t n, std::size_t k);
bool is_zero(const Vec& v);
Vec operator+(const Vec& x, const Vec& y);
Vec operator-(const Vec& x, const Vec& y);
Vec operator*(const Scalar& s, const Vec& x);
std::vector<double> to_doubles(const Vec& v);

}  // namespace carnot
