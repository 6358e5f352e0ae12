#include "carnot/lie_algebra.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace carnot {

LieAlgebra::LieAlgebra(std::size_t dim, Field field, std::vector<std::string> names)
    : dim_(dim), field_(field), names_(std::move(names)) {
  if (dim_ == 0) throw InputError("Lie algebra dimension must be positive");
  if (names_.empty()) {
    for (std::size_t k = 0; k < dim_; ++k) names_.push_back("e" + std::to_string(k + 1));
  }
  if (names_.size() != dim_) throw InputError("basis name count does not match dimension");
}

void LieAlgebra::set_bracket(int i, int j, const Vec& out) {
  if (i < 0 || j < 0 || static_cast<std::size_t>(i) >= dim_ || static_cast<std::size_t>(j) >= dim_) {
    throw InputError("bracket index out of range");
  }
  if (out.size() != dim_) throw InputError("bracket output has wrong length");
  if (i == j) {
    if (!is_zero(out)) throw InputError("[e_i, e_i] must vanish");
    return;
  }
  const bool flip = i > j;
  SparseVec sparse;
  for (std::size_t k = 0; k < dim_; ++k) {
    if (out[k].is_zero()) continue;
    field_ = Field::join(field_, out[k].is_rational() ? Field{} : out[k].field());
    sparse.emplace_back(static_cast<int>(k), flip ? -out[k] : out[k]);
  }
  const auto key = flip ? std::make_pair(j, i) : std::make_pair(i, j);
  if (sparse.empty()) {
    brackets_.erase(key);
  } else {
    brackets_[key] = std::move(sparse);
  }
}

Vec LieAlgebra::bracket_basis(int i, int j) const {
  Vec out(dim_);
  if (i == j) return out;
  const bool flip = i > j;
  const auto it = brackets_.find(flip ? std::make_pair(j, i) : std::make_pair(i, j));
  if (it == brackets_.end()) return out;
  for (const auto& [k, c] : it->second) out[static_cast<std::size_t>(k)] = flip ? -c : c;
  return out;
}

Vec bracket_of(const LieAlgebra& alg, const Vec& x, const Vec& y) {
  if (x.size() != alg.dim() || y.size() != alg.dim()) {
    throw InputError("bracket_of: vector length does not match algebra dimension");
  }
  Vec out(alg.dim());
  for (const auto& [ij, terms] : alg.structure_constants()) {
    const auto [i, j] = ij;
    const Scalar coeff = x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(j)] -
                         x[static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(i)];
    if (coeff.is_zero()) continue;
    for (const auto& [k, c] : terms) out[static_cast<std::size_t>(k)] += coeff * c;
  }
  return out;
}

JacobiResult check_jacobi(const LieAlgebra& alg) {
  const int n = static_cast<int>(alg.dim());
  for (int i = 0; i < n; ++i) {
    const Vec ei = unit_vec(alg.dim(), static_cast<std::size_t>(i));
    for (int j = i + 1; j < n; ++j) {
      const Vec ej = unit_vec(alg.dim(), static_cast<std::size_t>(j));
      for (int k = j + 1; k < n; ++k) {
        const Vec ek = unit_vec(alg.dim(), static_cast<std::size_t>(k));
        const Vec r = bracket_of(alg, bracket_of(alg, ei, ej), ek) + bracket_of(alg, bracket_of(alg, ej, ek), ei) +
                      bracket_of(alg, bracket_of(alg, ek, ei), ej);
        if (!is_zero(r)) return {false, i, j, k, r};
      }
    }
  }
  return {};
}

std::vector<std::size_t> lower_central_series(const LieAlgebra& alg) {
  const std::size_t n = alg.dim();
  std::vector<Vec> current;
  for (std::size_t k = 0; k < n; ++k) current.push_back(unit_vec(n, k));
  std::vector<std::size_t> dims{n};
  while (true) {
    std::vector<Vec> next;
    for (const auto& c : current) {
      for (std::size_t k = 0; k < n; ++k) {
        Vec b = bracket_of(alg, c, unit_vec(n, k));
        if (!is_zero(b)) next.push_back(std::move(b));
      }
    }
    current = independent_subset(next, n);
    dims.push_back(current.size());
    if (current.empty() || current.size() == dims[dims.size() - 2]) return dims;
  }
}

bool is_nilpotent(const LieAlgebra& alg) { return lower_central_series(alg).back() == 0; }

Grading::Grading(std::vector<std::vector<int>> layers, std::size_t dim) : layers_(std::move(layers)) {
  layer_of_.assign(dim, -1);
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    if (layers_[l].empty()) throw InputError("grading layer " + std::to_string(l) + " is empty");
    for (int idx : layers_[l]) {
      if (idx < 0 || static_cast<std::size_t>(idx) >= dim) throw InputError("grading index out of range");
      if (layer_of_[static_cast<std::size_t>(idx)] != -1) {
        throw InputError("basis index " + std::to_string(idx + 1) + " appears in two layers");
      }
      layer_of_[static_cast<std::size_t>(idx)] = static_cast<int>(l);
    }
  }
  for (std::size_t k = 0; k < dim; ++k) {
    if (layer_of_[k] == -1) throw InputError("basis index " + std::to_string(k + 1) + " is in no layer");
  }
}

std::vector<std::size_t> Grading::layer_dims() const {
  std::vector<std::size_t> d;
  for (const auto& l : layers_) d.push_back(l.size());
  return d;
}

std::vector<int> Grading::flattened() const {
  std::vector<int> out;
  for (const auto& l : layers_) out.insert(out.end(), l.begin(), l.end());
  return out;
}

std::string to_string(GradingVerdict::Kind k) {
  switch (k) {
    case GradingVerdict::Kind::graded:
      return "graded";
    case GradingVerdict::Kind::graded_carnot:
      return "graded_carnot";
    case GradingVerdict::Kind::violation:
      return "violation";
  }
  return "violation";
}

GradingVerdict verify_grading(const GradedAlgebra& g) {
  const auto& alg = g.algebra;
  const auto& gr = g.grading;
  const int depth = static_cast<int>(gr.depth());
  const auto& names = alg.names();
  // weight additivity: [L_a, L_b] ⊆ L_{a+b+1}
  for (const auto& [ij, terms] : alg.structure_constants()) {
    const int la = gr.layer_of(ij.first);
    const int lb = gr.layer_of(ij.second);
    const int target = la + lb + 1;
    for (const auto& [k, c] : terms) {
      if (target < depth && gr.layer_of(k) == target) continue;
      GradingVerdict v;
      v.layer_a = la;
      v.layer_b = lb;
      v.witness_i = ij.first;
      v.witness_j = ij.second;
      std::ostringstream os;
      os << "[L" << la << ",L" << lb << "] not in L" << target << ": [" << names[static_cast<std::size_t>(ij.first)]
         << "," << names[static_cast<std::size_t>(ij.second)] << "] has a component along " << names[static_cast<std::size_t>(k)]
         << " (layer " << gr.layer_of(k) << ")";
      v.description = os.str();
      return v;
    }
  }
  // Carnot flag: [L_0, L_i] spans L_{i+1}
  GradingVerdict v;
  v.kind = GradingVerdict::Kind::graded_carnot;
  for (int i = 0; i + 1 < depth; ++i) {
    std::vector<Vec> images;
    for (int a : gr.layers()[0]) {
      for (int b : gr.layers()[static_cast<std::size_t>(i)]) images.push_back(alg.bracket_basis(a, b));
    }
    if (span_rank(images, alg.dim()) < gr.layers()[static_cast<std::size_t>(i + 1)].size()) {
      v.kind = GradingVerdict::Kind::graded;
      v.layer_a = 0;
      v.layer_b = i;
      v.description = "[L0,L" + std::to_string(i) + "] does not span L" + std::to_string(i + 1);
      return v;
    }
  }
  return v;
}

Matrix dilation_matrix(const GradedAlgebra& g, const Scalar& s) {
  if (s.is_zero()) throw InputError("dilation parameter must be nonzero");
  Matrix d(g.dim(), g.dim());
  for (std::size_t l = 0; l < g.grading.depth(); ++l) {
    const Scalar f = s.pow(Grading::weight(static_cast<int>(l)));
    for (int idx : g.grading.layers()[l]) d(static_cast<std::size_t>(idx), static_cast<std::size_t>(idx)) = f;
  }
  return d;
}

LieAlgebra change_basis(const LieAlgebra& alg, const Matrix& p) {
  const auto pinv = inverse(p);
  if (!pinv) throw InputError("change of basis matrix is singular");
  const std::size_t n = alg.dim();
  LieAlgebra out(n, Field::join(alg.field(), p.field()), alg.names());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      out.set_bracket(static_cast<int>(i), static_cast<int>(j), *pinv * bracket_of(alg, p.column(i), p.column(j)));
    }
  }
  return out;
}

bool preserves_layers(const Grading& grading, const Matrix& a) {
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) {
      if (!a(r, c).is_zero() && grading.layer_of(static_cast<int>(r)) != grading.layer_of(static_cast<int>(c))) {
        return false;
      }
    }
  }
  return true;
}

GradedAlgebra change_basis(const GradedAlgebra& g, const Matrix& p) {
  if (!preserves_layers(g.grading, p)) throw InputError("change of basis does not preserve the grading layers");
  return {change_basis(g.algebra, p), g.grading};
}

}  // namespace carnot
