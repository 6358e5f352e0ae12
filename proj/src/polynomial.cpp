#include "carnot/polynomial.hpp"

#include <sstream>

namespace carnot {

namespace {

void check_vars(std::size_t a, std::size_t b) {
  if (a != b) throw InputError("polynomials in different numbers of variables");
}

void check_degree(const Exponent& e) {
  int d = 0;
  for (int k : e) d += k;
  if (d > Poly::max_degree) throw InputError("polynomial degree exceeds the cap of " + std::to_string(Poly::max_degree));
}

}  // namespace

Poly Poly::constant(std::size_t nvars, const Scalar& c) {
  Poly p(nvars);
  p.add_term(Exponent(nvars, 0), c);
  return p;
}

Poly Poly::variable(std::size_t nvars, std::size_t k) {
  Exponent e(nvars, 0);
  e.at(k) = 1;
  return monomial(e, Scalar(1));
}

Poly Poly::monomial(const Exponent& e, const Scalar& c) {
  Poly p(e.size());
  p.add_term(e, c);
  return p;
}

int Poly::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (int k : e) s += k;
    d = std::max(d, s);
  }
  return d;
}

Scalar Poly::coeff(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Scalar() : it->second;
}

void Poly::add_term(const Exponent& e, const Scalar& c) {
  if (e.size() != nvars_) throw InputError("monomial has wrong number of exponents");
  for (int k : e) {
    if (k < 0) throw InputError("negative exponent");
  }
  if (c.is_zero()) return;
  check_degree(e);
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Poly Poly::derivative(std::size_t k) const {
  Poly out(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[k] == 0) continue;
    Exponent f = e;
    --f[k];
    out.add_term(f, Scalar(static_cast<long>(e[k])) * c);
  }
  return out;
}

Scalar Poly::operator()(const Vec& x) const {
  if (x.size() != nvars_) throw InputError("evaluation point has wrong dimension");
  Scalar acc;
  for (const auto& [e, c] : terms_) {
    Scalar t = c;
    for (std::size_t k = 0; k < nvars_; ++k) {
      if (e[k] > 0) t *= x[k].pow(e[k]);
    }
    acc += t;
  }
  return acc;
}

Poly Poly::affine_substitute(const Matrix& m, const Vec& shift) const {
  // x_k -> shift_k + Σ_j m(k,j) y_j
  std::vector<Poly> images;
  for (std::size_t k = 0; k < nvars_; ++k) {
    Poly img = Poly::constant(m.cols(), shift[k]);
    for (std::size_t j = 0; j < m.cols(); ++j) img = img + m(k, j) * Poly::variable(m.cols(), j);
    images.push_back(std::move(img));
  }
  Poly out(m.cols());
  for (const auto& [e, c] : terms_) {
    Poly t = Poly::constant(m.cols(), c);
    for (std::size_t k = 0; k < nvars_; ++k) {
      for (int p = 0; p < e[k]; ++p) t = t * images[k];
    }
    out = out + t;
  }
  return out;
}

Poly operator+(const Poly& a, const Poly& b) {
  check_vars(a.nvars_, b.nvars_);
  Poly out = a;
  for (const auto& [e, c] : b.terms_) out.add_term(e, c);
  return out;
}

Poly operator-(const Poly& a, const Poly& b) { return a + Scalar(-1) * b; }

Poly operator*(const Poly& a, const Poly& b) {
  check_vars(a.nvars_, b.nvars_);
  Poly out(a.nvars_);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      Exponent e = ea;
      for (std::size_t k = 0; k < e.size(); ++k) e[k] += eb[k];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

Poly operator*(const Scalar& s, const Poly& a) {
  Poly out(a.nvars_);
  if (s.is_zero()) return out;
  for (const auto& [e, c] : a.terms_) out.terms_.emplace(e, s * c);
  return out;
}

std::string Poly::to_string(const std::vector<std::string>& vars) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    if (!first) os << " + ";
    first = false;
    bool constant = true;
    for (int k : e) constant = constant && k == 0;
    const std::string cs = c.to_string();
    if (constant) {
      os << cs;
      continue;
    }
    if (!(c == Scalar(1))) os << (c.is_rational() ? cs : "(" + cs + ")") << "*";
    bool first_var = true;
    for (std::size_t k = 0; k < e.size(); ++k) {
      if (e[k] == 0) continue;
      if (!first_var) os << "*";
      first_var = false;
      os << (k < vars.size() ? vars[k] : "x" + std::to_string(k + 1));
      if (e[k] > 1) os << "^" << e[k];
    }
  }
  return os.str();
}

PolyVectorField::PolyVectorField(std::vector<Poly> comps) : components(std::move(comps)) {
  for (const auto& p : components) {
    if (p.nvars() != components.size()) throw InputError("vector field components must be polynomials in n variables");
  }
}

PolyVectorField PolyVectorField::zero(std::size_t n) { return PolyVectorField(std::vector<Poly>(n, Poly(n))); }

PolyVectorField PolyVectorField::coordinate(std::size_t n, std::size_t k) {
  PolyVectorField f = zero(n);
  f.components.at(k) = Poly::constant(n, Scalar(1));
  return f;
}

bool PolyVectorField::is_zero() const {
  for (const auto& p : components) {
    if (!p.is_zero()) return false;
  }
  return true;
}

Vec PolyVectorField::operator()(const Vec& x) const {
  Vec v;
  v.reserve(components.size());
  for (const auto& p : components) v.push_back(p(x));
  return v;
}

PolyVectorField PolyVectorField::change_coordinates(const Matrix& m, const Matrix& m_inv, const Vec& shift) const {
  const std::size_t n = dim();
  std::vector<Poly> sub;
  for (const auto& p : components) sub.push_back(p.affine_substitute(m, shift));
  std::vector<Poly> out(n, Poly(n));
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      if (!m_inv(j, k).is_zero()) out[j] = out[j] + m_inv(j, k) * sub[k];
    }
  }
  return PolyVectorField(std::move(out));
}

PolyVectorField operator+(const PolyVectorField& a, const PolyVectorField& b) {
  if (a.dim() != b.dim()) throw InputError("vector fields of different dimension");
  PolyVectorField out = a;
  for (std::size_t k = 0; k < a.dim(); ++k) out.components[k] = out.components[k] + b.components[k];
  return out;
}

PolyVectorField operator-(const PolyVectorField& a, const PolyVectorField& b) { return a + Scalar(-1) * b; }

PolyVectorField operator*(const Poly& f, const PolyVectorField& a) {
  PolyVectorField out = a;
  for (auto& p : out.components) p = f * p;
  return out;
}

PolyVectorField operator*(const Scalar& s, const PolyVectorField& a) {
  PolyVectorField out = a;
  for (auto& p : out.components) p = s * p;
  return out;
}

std::string PolyVectorField::to_string(const std::vector<std::string>& vars) const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t k = 0; k < components.size(); ++k) {
    if (components[k].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << "(" << components[k].to_string(vars) << ")*d" << (k + 1);
  }
  return first ? "0" : os.str();
}

PolyVectorField lie_bracket(const PolyVectorField& x, const PolyVectorField& y) {
  const std::size_t n = x.dim();
  if (y.dim() != n) throw InputError("vector fields of different dimension");
  std::vector<Poly> out(n, Poly(n));
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t m = 0; m < n; ++m) {
      if (!x.components[m].is_zero()) out[k] = out[k] + x.components[m] * y.components[k].derivative(m);
      if (!y.components[m].is_zero()) out[k] = out[k] - y.components[m] * x.components[k].derivative(m);
    }
  }
  return PolyVectorField(std::move(out));
}

}  // namespace carnot
