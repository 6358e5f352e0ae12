#include "carnot/univariate.hpp"

#include <algorithm>

namespace carnot {

UPoly::UPoly(Vec coeffs) : c_(std::move(coeffs)) { trim(); }

UPoly UPoly::monomial(const Scalar& c, std::size_t k) {
  Vec v(k + 1);
  v[k] = c;
  return UPoly(std::move(v));
}

void UPoly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

const Scalar& UPoly::coeff(std::size_t k) const {
  static const Scalar zero;
  return k < c_.size() ? c_[k] : zero;
}

Scalar UPoly::operator()(const Scalar& x) const {
  Scalar acc;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

UPoly UPoly::derivative() const {
  if (c_.size() <= 1) return {};
  Vec d(c_.size() - 1);
  for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = Scalar(static_cast<long>(k)) * c_[k];
  return UPoly(std::move(d));
}

UPoly UPoly::conj() const {
  Vec d = c_;
  for (auto& x : d) x = x.conj();
  return UPoly(std::move(d));
}

bool UPoly::is_rational() const {
  for (const auto& x : c_) {
    if (!x.is_rational()) return false;
  }
  return true;
}

UPoly operator+(const UPoly& a, const UPoly& b) {
  Vec r(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t k = 0; k < r.size(); ++k) r[k] = a.coeff(k) + b.coeff(k);
  return UPoly(std::move(r));
}

UPoly operator-(const UPoly& a, const UPoly& b) {
  Vec r(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t k = 0; k < r.size(); ++k) r[k] = a.coeff(k) - b.coeff(k);
  return UPoly(std::move(r));
}

UPoly operator*(const UPoly& a, const UPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  Vec r(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
  }
  return UPoly(std::move(r));
}

UPoly::DivMod UPoly::divmod(const UPoly& divisor) const {
  if (divisor.is_zero()) throw std::domain_error("polynomial division by zero");
  Vec rem = c_;
  const int dd = divisor.degree();
  if (degree() < dd) return {UPoly{}, *this};
  Vec quot(static_cast<std::size_t>(degree() - dd + 1));
  const Scalar inv_lead = divisor.leading().inverse();
  for (int k = degree(); k >= dd; --k) {
    const Scalar f = rem[static_cast<std::size_t>(k)] * inv_lead;
    quot[static_cast<std::size_t>(k - dd)] = f;
    if (f.is_zero()) continue;
    for (int j = 0; j <= dd; ++j) {
      rem[static_cast<std::size_t>(k - dd + j)] -= f * divisor.c_[static_cast<std::size_t>(j)];
    }
  }
  return {UPoly(std::move(quot)), UPoly(std::move(rem))};
}

UPoly characteristic_polynomial(const Matrix& a) {
  if (!a.is_square()) throw InputError("characteristic polynomial of non-square matrix");
  const std::size_t n = a.rows();
  Vec c(n + 1);
  c[n] = 1;
  Matrix m(n, n);
  const Matrix id = Matrix::identity(n);
  for (std::size_t k = 1; k <= n; ++k) {
    m = a * m + c[n - k + 1] * id;
    const Matrix am = a * m;
    c[n - k] = -am.trace() / Scalar(static_cast<long>(k));
  }
  return UPoly(std::move(c));
}

namespace {

std::vector<UPoly> sturm_sequence(const UPoly& p) {
  std::vector<UPoly> seq{p, p.derivative()};
  while (!seq.back().is_zero()) {
    UPoly r = seq[seq.size() - 2].divmod(seq.back()).remainder;
    seq.push_back(UPoly{} - r);
  }
  seq.pop_back();
  return seq;
}

int sign_variations(const std::vector<UPoly>& seq, const Scalar& x) {
  int variations = 0;
  int last = 0;
  for (const auto& q : seq) {
    const int s = q(x).sign();
    if (s == 0) continue;
    if (last != 0 && s != last) ++variations;
    last = s;
  }
  return variations;
}

}  // namespace

int count_real_roots(const UPoly& p, const Scalar& lo, const Scalar& hi) {
  if (p.degree() <= 0) return 0;
  const auto seq = sturm_sequence(p);
  return sign_variations(seq, lo) - sign_variations(seq, hi);
}

Scalar root_bound(const UPoly& p) {
  if (p.degree() <= 0) return Scalar(1);
  Scalar max_ratio;
  for (int k = 0; k < p.degree(); ++k) {
    const Scalar r = (p.coeff(static_cast<std::size_t>(k)) / p.leading()).abs();
    if (r > max_ratio) max_ratio = r;
  }
  return Scalar(mpq_class(max_ratio.floor() + 2));
}

std::vector<RootInterval> isolate_real_roots(const UPoly& p) {
  std::vector<RootInterval> out;
  if (p.degree() <= 0) return out;
  const auto seq = sturm_sequence(p);
  const Scalar bound = root_bound(p);
  struct Pending {
    Scalar lo, hi;
    int count;
  };
  std::vector<Pending> stack{{-bound, bound, sign_variations(seq, -bound) - sign_variations(seq, bound)}};
  while (!stack.empty()) {
    Pending cur = stack.back();
    stack.pop_back();
    if (cur.count == 0) continue;
    if (cur.count == 1) {
      out.push_back({cur.lo, cur.hi});
      continue;
    }
    const Scalar mid = (cur.lo + cur.hi) / Scalar(2);
    const int left = sign_variations(seq, cur.lo) - sign_variations(seq, mid);
    stack.push_back({mid, cur.hi, cur.count - left});
    stack.push_back({cur.lo, mid, left});
  }
  for (auto& iv : out) {
    if (p(iv.hi).is_zero()) iv.lo = iv.hi;
  }
  std::sort(out.begin(), out.end(), [](const RootInterval& a, const RootInterval& b) { return a.hi < b.hi; });
  return out;
}

UPoly strip_zero_roots(const UPoly& p) {
  Vec c = p.coeffs();
  std::size_t shift = 0;
  while (shift < c.size() && c[shift].is_zero()) ++shift;
  return UPoly(Vec(c.begin() + static_cast<long>(shift), c.end()));
}

}  // namespace carnot
