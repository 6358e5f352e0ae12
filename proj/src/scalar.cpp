#include "carnot/scalar.hpp"

#include <cctype>
#include <cmath>

namespace carnot {

bool is_squarefree(long d) {
  if (d < 2) return false;
  for (long p = 2; p * p <= d; ++p) {
    if (d % (p * p) == 0) return false;
  }
  return true;
}

Field Field::quadratic(long d) {
  if (!is_squarefree(d)) {
    throw InputError("radicand must be a squarefree integer > 1, got " + std::to_string(d));
  }
  return Field{d};
}

Field Field::join(Field a, Field b) {
  if (a.radicand == 0) return b;
  if (b.radicand == 0 || a.radicand == b.radicand) return a;
  throw FieldMismatch("field mismatch: " + a.to_string() + " vs " + b.to_string());
}

std::string Field::to_string() const {
  return radicand == 0 ? "Q" : "Q(sqrt(" + std::to_string(radicand) + "))";
}

Scalar::Scalar(mpq_class a, mpq_class b, long d) : a_(std::move(a)), b_(std::move(b)), d_(d) {
  a_.canonicalize();
  b_.canonicalize();
  if (sgn(b_) != 0 && !is_squarefree(d_)) {
    throw InputError("invalid radicand " + std::to_string(d_));
  }
}

Scalar Scalar::rational(long num, long den) {
  if (den == 0) throw InputError("zero denominator");
  mpq_class q(num, den);
  q.canonicalize();
  return Scalar(q);
}

Scalar Scalar::sqrt_of(long d) { return Scalar(mpq_class(0), mpq_class(1), d); }

void Scalar::unify(const Scalar& o) {
  if (o.d_ == d_) return;
  if (sgn(o.b_) == 0) {
    if (d_ == 0) d_ = o.d_;
    return;
  }
  if (sgn(b_) == 0) {
    d_ = o.d_;
    return;
  }
  throw FieldMismatch("arithmetic across Q(sqrt(" + std::to_string(d_) + ")) and Q(sqrt(" +
                      std::to_string(o.d_) + "))");
}

Scalar Scalar::conj() const {
  Scalar r = *this;
  r.b_ = -r.b_;
  return r;
}

mpq_class Scalar::norm() const { return a_ * a_ - d_ * b_ * b_; }

int Scalar::sign() const {
  const int sa = sgn(a_);
  const int sb = sgn(b_);
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sb;
  // opposite signs: compare a² with d b²
  const int c = cmp(a_ * a_, d_ * b_ * b_);
  return c == 0 ? 0 : (c > 0 ? sa : sb);
}

mpz_class Scalar::floor() const {
  if (is_rational()) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), a_.get_num_mpz_t(), a_.get_den_mpz_t());
    return q;
  }
  mpz_class k(std::floor(to_double()));
  while ((*this - Scalar(mpq_class(k))).sign() < 0) k -= 1;
  while ((*this - Scalar(mpq_class(k + 1))).sign() >= 0) k += 1;
  return k;
}

double Scalar::to_double() const {
  if (sgn(b_) == 0) return a_.get_d();
  const double root = std::sqrt(static_cast<double>(d_));
  if (sgn(a_) != 0 && sgn(a_) != sgn(b_)) {
    // a + b√d = norm / (a − b√d) avoids cancellation
    const double denom = a_.get_d() - b_.get_d() * root;
    return norm().get_d() / denom;
  }
  return a_.get_d() + b_.get_d() * root;
}

Scalar Scalar::inverse() const {
  if (is_zero()) throw std::domain_error("division by zero scalar");
  if (is_rational()) {
    Scalar r;
    r.a_ = 1 / a_;
    r.d_ = d_;
    return r;
  }
  const mpq_class n = norm();
  Scalar r;
  r.a_ = a_ / n;
  r.b_ = -b_ / n;
  r.d_ = d_;
  return r;
}

Scalar Scalar::pow(int k) const {
  if (k < 0) return inverse().pow(-k);
  Scalar result(1);
  result.d_ = d_;
  Scalar base = *this;
  while (k > 0) {
    if (k & 1) result *= base;
    base *= base;
    k >>= 1;
  }
  return result;
}

Scalar Scalar::operator-() const {
  Scalar r = *this;
  r.a_ = -r.a_;
  r.b_ = -r.b_;
  return r;
}

Scalar& Scalar::operator+=(const Scalar& o) {
  unify(o);
  a_ += o.a_;
  b_ += o.b_;
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) {
  unify(o);
  a_ -= o.a_;
  b_ -= o.b_;
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& o) {
  unify(o);
  if (sgn(b_) == 0 && sgn(o.b_) == 0) {
    a_ *= o.a_;
    return *this;
  }
  const mpq_class a = a_ * o.a_ + d_ * b_ * o.b_;
  const mpq_class b = a_ * o.b_ + b_ * o.a_;
  a_ = a;
  b_ = b;
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& o) { return *this *= o.inverse(); }

std::string Scalar::to_string() const {
  if (sgn(b_) == 0) return a_.get_str();
  std::string out;
  if (sgn(a_) != 0) out = a_.get_str();
  if (sgn(b_) > 0 && !out.empty()) out += "+";
  out += b_.get_str() + "*r";
  return out;
}

namespace {

mpq_class parse_rational(std::string_view s, std::string_view whole) {
  if (s.empty()) throw InputError("malformed scalar '" + std::string(whole) + "'");
  for (char c : s) {
    if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '/' || c == '-' || c == '+')) {
      throw InputError("malformed scalar '" + std::string(whole) + "'");
    }
  }
  std::string str(s);
  if (str.front() == '+') str.erase(0, 1);
  mpq_class q;
  if (q.set_str(str, 10) != 0 || sgn(q.get_den()) == 0) {
    throw InputError("malformed scalar '" + std::string(whole) + "'");
  }
  q.canonicalize();
  return q;
}

// Coefficient of a term ending in "r": "", "+", "-", "3/2*", "-2*".
mpq_class parse_coefficient(std::string_view s, std::string_view whole) {
  if (s.empty() || s == "+") return 1;
  if (s == "-") return -1;
  if (s.back() != '*') throw InputError("malformed scalar '" + std::string(whole) + "'");
  return parse_rational(s.substr(0, s.size() - 1), whole);
}

}  // namespace

Scalar Scalar::parse(std::string_view text, Field field) {
  std::string compact;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) compact += c;
  }
  if (compact.empty()) throw InputError("empty scalar");
  if (compact.back() != 'r') return Scalar(parse_rational(compact, text));
  if (field.is_rational()) {
    throw FieldMismatch("scalar '" + std::string(text) + "' uses r but the field is Q");
  }
  // split "a+b*r" at the last sign that is not the leading one
  std::size_t split = std::string::npos;
  for (std::size_t i = compact.size() - 1; i > 0; --i) {
    if ((compact[i] == '+' || compact[i] == '-') && compact[i - 1] != '/' && compact[i - 1] != '*') {
      split = i;
      break;
    }
  }
  std::string_view body(compact);
  body.remove_suffix(1);
  if (split == std::string::npos) {
    return Scalar(0, parse_coefficient(body, text), field.radicand);
  }
  const mpq_class a = parse_rational(body.substr(0, split), text);
  const mpq_class b = parse_coefficient(body.substr(split), text);
  return Scalar(a, b, field.radicand);
}

Vec zero_vec(std::size_t n) { return Vec(n); }

Vec unit_vec(std::size_t n, std::size_t k) {
  Vec v(n);
  v.at(k) = 1;
  return v;
}

bool is_zero(const Vec& v) {
  for (const auto& x : v) {
    if (!x.is_zero()) return false;
  }
  return true;
}

Vec operator+(const Vec& x, const Vec& y) {
  if (x.size() != y.size()) throw InputError("vector length mismatch");
  Vec r(x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += y[i];
  return r;
}

Vec operator-(const Vec& x, const Vec& y) {
  if (x.size() != y.size()) throw InputError("vector length mismatch");
  Vec r(x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= y[i];
  return r;
}

Vec operator*(const Scalar& s, const Vec& x) {
  Vec r(x);
  for (auto& v : r) v *= s;
  return r;
}

std::vector<double> to_doubles(const Vec& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(x.to_double());
  return out;
}

}  // namespace carnot
