#include "carnot/bch.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace carnot {

namespace {

using Word = std::vector<int>;
using FreeElement = std::map<Word, mpq_class>;

FreeElement truncated_product(const FreeElement& a, const FreeElement& b, std::size_t order) {
  FreeElement out;
  for (const auto& [wa, ca] : a) {
    for (const auto& [wb, cb] : b) {
      if (wa.size() + wb.size() > order) continue;
      Word w = wa;
      w.insert(w.end(), wb.begin(), wb.end());
      out[w] += ca * cb;
    }
  }
  for (auto it = out.begin(); it != out.end();) it = sgn(it->second) == 0 ? out.erase(it) : std::next(it);
  return out;
}

FreeElement exp_letter(int letter, std::size_t order) {
  FreeElement e;
  mpq_class f = 1;
  for (std::size_t k = 0; k <= order; ++k) {
    if (k > 0) f /= static_cast<long>(k);
    e[Word(k, letter)] = f;
  }
  return e;
}

std::vector<BchTerm> generate(std::size_t order) {
  FreeElement p = truncated_product(exp_letter(0, order), exp_letter(1, order), order);
  p.erase(Word{});
  // log(1 + p) = Σ (-1)^{m+1} p^m / m
  FreeElement log_sum;
  FreeElement power = p;
  for (std::size_t m = 1; m <= order; ++m) {
    const mpq_class f(m % 2 == 1 ? 1 : -1, static_cast<long>(m));
    for (const auto& [w, c] : power) log_sum[w] += f * c;
    power = truncated_product(power, p, order);
  }
  // Dynkin projection: homogeneous part of degree k equals (1/k) Σ c_w [w]
  std::map<Word, mpq_class> lie;
  for (const auto& [w, c] : log_sum) {
    if (sgn(c) == 0) continue;
    Word v = w;
    mpq_class coeff = c / static_cast<long>(w.size());
    if (v.size() >= 2) {
      if (v[0] == v[1]) continue;
      if (v[0] == 1) {
        std::swap(v[0], v[1]);
        coeff = -coeff;
      }
    }
    lie[v] += coeff;
  }
  std::vector<BchTerm> terms;
  for (std::size_t k = 1; k <= order; ++k) {
    for (const auto& [w, c] : lie) {
      if (w.size() == k && sgn(c) != 0) terms.push_back({w, c});
    }
  }
  return terms;
}

}  // namespace

const std::vector<BchTerm>& bch_terms(int order) {
  if (order < 1 || order > NilGroupModel::max_step) {
    throw InputError("BCH order " + std::to_string(order) + " is outside the supported range 1..6");
  }
  static std::vector<BchTerm> table[NilGroupModel::max_step + 1];
  static std::once_flag once[NilGroupModel::max_step + 1];
  std::call_once(once[order], [order] { table[order] = generate(static_cast<std::size_t>(order)); });
  return table[order];
}

NilGroupModel::NilGroupModel(GradedAlgebra g) : g_(std::move(g)) {
  const auto lcs = lower_central_series(g_.algebra);
  if (lcs.back() != 0) throw InputError("group model needs a nilpotent algebra");
  step_ = static_cast<int>(lcs.size()) - 1;
  if (step_ < 1) step_ = 1;
  if (step_ > max_step) {
    throw InputError("nilpotency step " + std::to_string(step_) + " exceeds the BCH table bound of 6");
  }
  for (const auto& [key, vec] : g_.algebra.structure_constants()) {
    Entry e{key.first, key.second, {}, {}};
    for (const auto& [k, c] : vec) {
      e.out.emplace_back(k, c);
      e.out_d.emplace_back(k, c.to_double());
    }
    entries_.push_back(std::move(e));
  }
}

template <class T>
std::vector<T> NilGroupModel::sparse_bracket(const std::vector<T>& x, const std::vector<T>& y) const {
  const std::size_t n = dim();
  if (x.size() != n || y.size() != n) throw InputError("vector length differs from the algebra dimension");
  std::vector<T> out(n, T(0));
  for (const auto& e : entries_) {
    const auto i = static_cast<std::size_t>(e.i), j = static_cast<std::size_t>(e.j);
    const T w = x[i] * y[j] - x[j] * y[i];
    if (w == T(0)) continue;
    if constexpr (std::is_same_v<T, double>) {
      for (const auto& [k, c] : e.out_d) out[static_cast<std::size_t>(k)] += w * c;
    } else {
      for (const auto& [k, c] : e.out) out[static_cast<std::size_t>(k)] += w * c;
    }
  }
  return out;
}

template <class T>
std::vector<T> NilGroupModel::bch(const std::vector<T>& x, const std::vector<T>& y) const {
  const std::size_t n = dim();
  std::vector<T> z(n, T(0));
  std::map<Word, std::vector<T>> prefix;
  auto letter = [&](int l) -> const std::vector<T>& { return l == 0 ? x : y; };
  for (const auto& term : bch_terms(step_)) {
    const Word& w = term.word;
    std::vector<T> v = letter(w[0]);
    bool zero = false;
    for (std::size_t k = 1; k < w.size() && !zero; ++k) {
      const Word key(w.begin(), w.begin() + static_cast<long>(k) + 1);
      auto it = prefix.find(key);
      if (it == prefix.end()) it = prefix.emplace(key, sparse_bracket(v, letter(w[k]))).first;
      v = it->second;
      zero = std::all_of(v.begin(), v.end(), [](const T& t) { return t == T(0); });
    }
    if (zero) continue;
    T c;
    if constexpr (std::is_same_v<T, double>) {
      c = term.coeff.get_d();
    } else {
      c = Scalar(term.coeff);
    }
    for (std::size_t k = 0; k < n; ++k) z[k] += c * v[k];
  }
  return z;
}

Vec NilGroupModel::bracket(const Vec& x, const Vec& y) const { return sparse_bracket(x, y); }

std::vector<double> NilGroupModel::bracket(const std::vector<double>& x, const std::vector<double>& y) const {
  return sparse_bracket(x, y);
}

Vec NilGroupModel::multiply(const Vec& x, const Vec& y) const { return bch(x, y); }

std::vector<double> NilGroupModel::multiply(const std::vector<double>& x, const std::vector<double>& y) const {
  return bch(x, y);
}

std::vector<double> NilGroupModel::inverse(const std::vector<double>& x) const {
  std::vector<double> out = x;
  for (auto& v : out) v = -v;
  return out;
}

Matrix NilGroupModel::ad(const Vec& x) const {
  const std::size_t n = dim();
  Matrix m(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    const Vec col = bracket(x, unit_vec(n, c));
    for (std::size_t r = 0; r < n; ++r) m(r, c) = col[r];
  }
  return m;
}

Eigen::MatrixXd NilGroupModel::ad(const std::vector<double>& x) const {
  const std::size_t n = dim();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (const auto& e : entries_) {
    const auto i = static_cast<std::size_t>(e.i), j = static_cast<std::size_t>(e.j);
    // [x, e_j] gets x_i c_ij ; [x, e_i] gets -x_j c_ij
    for (const auto& [k, c] : e.out_d) {
      m(k, static_cast<Eigen::Index>(j)) += x[i] * c;
      m(k, static_cast<Eigen::Index>(i)) -= x[j] * c;
    }
  }
  return m;
}

}  // namespace carnot
