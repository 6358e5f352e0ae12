#include "carnot/autgroup.hpp"

#include <cmath>
#include <random>

namespace carnot {

namespace {

Matrix unit_matrix(std::size_t n, std::size_t r, std::size_t c) {
  Matrix m(n, n);
  m(r, c) = 1;
  return m;
}

// Stacks the entries of every matrix into one long vector.
Vec flatten(const Matrix& m) {
  Vec v;
  v.reserve(m.rows() * m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) v.push_back(m(r, c));
  }
  return v;
}

Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

std::vector<int> layer0_indices(const GradedAlgebra& g) { return g.grading.layers().front(); }

Matrix layer0_block(const GradedAlgebra& g, const Matrix& m) {
  const auto idx = layer0_indices(g);
  return m.block(idx, idx);
}

// Residual of the derivation identity over all basis pairs, stacked.
Vec derivation_residual(const LieAlgebra& alg, const Matrix& d) {
  const std::size_t n = alg.dim();
  Vec out;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Vec r = d * alg.bracket_basis(static_cast<int>(i), static_cast<int>(j)) -
                    bracket_of(alg, d.column(i), unit_vec(n, j)) - bracket_of(alg, unit_vec(n, i), d.column(j));
      out.insert(out.end(), r.begin(), r.end());
    }
  }
  return out;
}

std::optional<EigenvalueWitness> real_nonzero_eigenvalue(const Matrix& block) {
  const UPoly p = characteristic_polynomial(block);
  const UPoly q = strip_zero_roots(p);
  const auto roots = isolate_real_roots(q);
  if (roots.empty()) return std::nullopt;
  RootInterval iv = roots.front();
  if (iv.lo.sign() < 0 && iv.hi.sign() >= 0) {
    // q(0) != 0, so the root sits strictly on one side of 0
    if (count_real_roots(q, iv.lo, Scalar(0)) == 1) {
      iv.hi = Scalar(0);
      // (lo, 0] with q(0) != 0 is (lo, 0); shrink the right end below 0
      Scalar right(0);
      Scalar left = iv.lo;
      while (true) {
        const Scalar mid = (left + right) / Scalar(2);
        if (count_real_roots(q, iv.lo, mid) == 1) {
          iv.hi = mid;
          break;
        }
        left = mid;
      }
    } else {
      iv.lo = Scalar(0);
    }
  }
  return EigenvalueWitness{p, iv};
}

std::vector<Scalar> random_coefficients(std::mt19937_64& rng, std::size_t m) {
  std::uniform_int_distribution<int> dist(-3, 3);
  std::vector<Scalar> c(m);
  bool all_zero = true;
  for (auto& x : c) {
    x = dist(rng);
    all_zero = all_zero && x.is_zero();
  }
  if (all_zero && m > 0) c[0] = 1;
  return c;
}

template <class T>
T combine(const std::vector<T>& items, const std::vector<Scalar>& coeffs, T zero) {
  for (std::size_t k = 0; k < items.size(); ++k) {
    if (!coeffs[k].is_zero()) zero = zero + coeffs[k] * items[k];
  }
  return zero;
}

}  // namespace

std::optional<Vec> GradedDerivationSpace::coordinates(const Matrix& m) const {
  if (m.rows() != ambient.dim() || m.cols() != ambient.dim()) return std::nullopt;
  if (basis.empty()) return m.is_zero() ? std::optional<Vec>(Vec{}) : std::nullopt;
  std::vector<Vec> cols;
  for (const auto& b : basis) cols.push_back(flatten(b));
  return solve(Matrix::from_columns(cols, cols.front().size()), flatten(m));
}

bool GradedDerivationSpace::closed_under_commutator() const {
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = i + 1; j < basis.size(); ++j) {
      if (!contains(commutator(basis[i], basis[j]))) return false;
    }
  }
  return true;
}

bool is_derivation(const LieAlgebra& alg, const Matrix& d) {
  if (d.rows() != alg.dim() || d.cols() != alg.dim()) return false;
  return is_zero(derivation_residual(alg, d));
}

Matrix grading_derivation(const GradedAlgebra& g) {
  Matrix d(g.dim(), g.dim());
  for (std::size_t l = 0; l < g.grading.depth(); ++l) {
    for (int idx : g.grading.layers()[l]) {
      d(static_cast<std::size_t>(idx), static_cast<std::size_t>(idx)) = Grading::weight(static_cast<int>(l));
    }
  }
  return d;
}

GradedDerivationSpace graded_derivations(const GradedAlgebra& g) {
  const std::size_t n = g.dim();
  // unknowns: entries (r, c) with r, c in the same layer
  std::vector<Matrix> unknowns;
  for (const auto& layer : g.grading.layers()) {
    for (int r : layer) {
      for (int c : layer) unknowns.push_back(unit_matrix(n, static_cast<std::size_t>(r), static_cast<std::size_t>(c)));
    }
  }
  std::vector<Vec> columns;
  for (const auto& u : unknowns) columns.push_back(derivation_residual(g.algebra, u));
  GradedDerivationSpace space{g, {}};
  const std::size_t eqs = columns.front().size();
  if (eqs == 0) {
    space.basis = unknowns;
    return space;
  }
  for (const auto& v : nullspace(Matrix::from_columns(columns, eqs))) {
    space.basis.push_back(combine(unknowns, v, Matrix(n, n)));
  }
  return space;
}

std::string to_string(AsymmetryVerdict::Kind k) {
  switch (k) {
    case AsymmetryVerdict::Kind::asymmetric:
      return "asymmetric";
    case AsymmetryVerdict::Kind::not_asymmetric:
      return "not_asymmetric";
    case AsymmetryVerdict::Kind::undetermined:
      return "undetermined";
  }
  return "undetermined";
}

std::optional<Matrix> find_invariant_inner_product(const std::vector<Matrix>& blocks, std::size_t d0,
                                                   std::uint64_t seed, std::size_t* forms_dim) {
  // unknowns: symmetric unit matrices E_rc + E_cr (r <= c)
  std::vector<Matrix> sym_units;
  for (std::size_t r = 0; r < d0; ++r) {
    for (std::size_t c = r; c < d0; ++c) {
      Matrix e(d0, d0);
      e(r, c) = 1;
      e(c, r) = 1;
      sym_units.push_back(std::move(e));
    }
  }
  std::vector<Matrix> forms;
  if (blocks.empty()) {
    forms = sym_units;
  } else {
    std::vector<Vec> columns;
    for (const auto& e : sym_units) {
      Vec col;
      for (const auto& b : blocks) {
        const Vec part = flatten(b.transpose() * e + e * b);
        col.insert(col.end(), part.begin(), part.end());
      }
      columns.push_back(std::move(col));
    }
    for (const auto& v : nullspace(Matrix::from_columns(columns, columns.front().size()))) {
      forms.push_back(combine(sym_units, v, Matrix(d0, d0)));
    }
  }
  if (forms_dim != nullptr) *forms_dim = forms.size();
  if (forms.empty()) return std::nullopt;

  for (const auto& f : forms) {
    if (is_positive_definite(f)) return f;
  }
  if (forms.size() <= 10) {
    const std::size_t subsets = std::size_t{1} << forms.size();
    for (std::size_t mask = 1; mask < subsets; ++mask) {
      Matrix sum(d0, d0);
      for (std::size_t k = 0; k < forms.size(); ++k) {
        if (mask & (std::size_t{1} << k)) sum = sum + forms[k];
      }
      if (is_positive_definite(sum)) return sum;
    }
  } else {
    for (std::size_t i = 0; i < forms.size(); ++i) {
      for (std::size_t j = i + 1; j < forms.size(); ++j) {
        const Matrix sum = forms[i] + forms[j];
        if (is_positive_definite(sum)) return sum;
      }
    }
  }
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < 500; ++attempt) {
    const Matrix cand = combine(forms, random_coefficients(rng, forms.size()), Matrix(d0, d0));
    if (is_positive_definite(cand)) return cand;
  }
  return std::nullopt;
}

AsymmetryVerdict asymmetry_verdict(const GradedAlgebra& g, std::uint64_t seed) {
  if (verify_grading(g).kind != GradingVerdict::Kind::graded_carnot) {
    throw PreconditionError("asymmetry_verdict requires a Carnot grading");
  }
  const GradedDerivationSpace der = graded_derivations(g);
  const std::size_t n = g.dim();
  const std::size_t d0 = layer0_indices(g).size();

  // trace-zero part l, identified with its layer-0 blocks
  Matrix traces(1, der.dim());
  for (std::size_t k = 0; k < der.dim(); ++k) traces(0, k) = layer0_block(g, der.basis[k]).trace();
  std::vector<Matrix> l_full;
  for (const auto& v : nullspace(traces)) l_full.push_back(combine(der.basis, v, Matrix(n, n)));
  std::vector<Matrix> l_blocks;
  for (const auto& m : l_full) l_blocks.push_back(layer0_block(g, m));

  AsymmetryVerdict verdict;
  verdict.trace_zero_dim = l_full.size();

  // (a) real nonzero eigenvalue on layer 0
  std::vector<std::vector<Scalar>> combos;
  const std::size_t m = l_full.size();
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<Scalar> c(m);
    c[i] = 1;
    combos.push_back(c);
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      std::vector<Scalar> c(m);
      c[i] = 1;
      c[j] = 1;
      combos.push_back(c);
      c[j] = -1;
      combos.push_back(c);
    }
  }
  std::mt19937_64 rng(seed);
  if (m > 0) {
    for (int k = 0; k < 200; ++k) combos.push_back(random_coefficients(rng, m));
  }
  for (const auto& c : combos) {
    const Matrix block = combine(l_blocks, c, Matrix(d0, d0));
    if (block.is_zero()) continue;
    if (auto w = real_nonzero_eigenvalue(block)) {
      verdict.kind = AsymmetryVerdict::Kind::not_asymmetric;
      verdict.derivation = combine(l_full, c, Matrix(n, n));
      verdict.eigenvalue = std::move(w);
      return verdict;
    }
  }

  // (b) invariant positive definite form
  if (auto p = find_invariant_inner_product(l_blocks, d0, seed, &verdict.invariant_forms_dim)) {
    verdict.kind = AsymmetryVerdict::Kind::asymmetric;
    verdict.inner_product = std::move(p);
    return verdict;
  }
  verdict.kind = AsymmetryVerdict::Kind::undetermined;
  return verdict;
}

bool validate_not_asymmetric(const GradedAlgebra& g, const Matrix& derivation, const EigenvalueWitness& witness) {
  if (!preserves_layers(g.grading, derivation) || !is_derivation(g.algebra, derivation)) return false;
  const Matrix block = layer0_block(g, derivation);
  if (!block.trace().is_zero()) return false;
  if (!(characteristic_polynomial(block) == witness.char_poly)) return false;
  const auto& iv = witness.interval;
  if (iv.lo == iv.hi) return !iv.lo.is_zero() && witness.char_poly(iv.lo).is_zero();
  if (!(iv.lo.sign() >= 0 || iv.hi.sign() < 0)) return false;
  return count_real_roots(witness.char_poly, iv.lo, iv.hi) >= 1;
}

bool validate_asymmetric(const GradedAlgebra& g, const Matrix& inner_product) {
  if (!is_positive_definite(inner_product)) return false;
  const GradedDerivationSpace der = graded_derivations(g);
  const Matrix delta = grading_derivation(g);
  const Scalar d0(static_cast<long>(layer0_indices(g).size()));
  for (const auto& d : der.basis) {
    // project onto the trace-zero part along the grading derivation
    const Matrix b = layer0_block(g, d);
    const Matrix t = b - (b.trace() / d0) * layer0_block(g, delta);
    if (!(t.transpose() * inner_product + inner_product * t).is_zero()) return false;
  }
  return true;
}

AutomorphismCheck is_graded_automorphism(const GradedAlgebra& g, const Matrix& a) {
  const std::size_t n = g.dim();
  AutomorphismCheck out;
  if (a.rows() != n || a.cols() != n) {
    out.reason = "wrong shape";
    return out;
  }
  if (determinant(a).is_zero()) {
    out.reason = "not invertible";
    return out;
  }
  if (!preserves_layers(g.grading, a)) {
    out.reason = "does not preserve the grading layers";
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Vec lhs = a * g.algebra.bracket_basis(static_cast<int>(i), static_cast<int>(j));
      const Vec rhs = bracket_of(g.algebra, a.column(i), a.column(j));
      if (!(lhs == rhs)) {
        out.reason = "A[e_i,e_j] != [Ae_i,Ae_j]";
        out.witness_i = static_cast<int>(i);
        out.witness_j = static_cast<int>(j);
        return out;
      }
    }
  }
  out.yes = true;
  return out;
}

std::optional<Matrix> extend_layer0(const GradedAlgebra& g, const Matrix& layer0_block_in) {
  const std::size_t n = g.dim();
  const auto& layers = g.grading.layers();
  const auto& l0 = layers.front();
  if (layer0_block_in.rows() != l0.size() || layer0_block_in.cols() != l0.size()) {
    throw InputError("layer-0 block has the wrong size");
  }
  Matrix a(n, n);
  for (std::size_t r = 0; r < l0.size(); ++r) {
    for (std::size_t c = 0; c < l0.size(); ++c) {
      a(static_cast<std::size_t>(l0[r]), static_cast<std::size_t>(l0[c])) = layer0_block_in(r, c);
    }
  }
  for (std::size_t l = 1; l < layers.size(); ++l) {
    const auto& target = layers[l];
    std::vector<Vec> sources;  // [e_a, e_b] restricted to layer l coordinates
    std::vector<Vec> images;   // [A e_a, A e_b]
    for (int x : l0) {
      for (int y : layers[l - 1]) {
        const Vec br = g.algebra.bracket_basis(x, y);
        Vec coords;
        for (int t : target) coords.push_back(br[static_cast<std::size_t>(t)]);
        if (is_zero(coords)) continue;
        sources.push_back(std::move(coords));
        images.push_back(bracket_of(g.algebra, a.column(static_cast<std::size_t>(x)), a.column(static_cast<std::size_t>(y))));
      }
    }
    if (span_rank(sources, target.size()) < target.size()) return std::nullopt;
    const RowEchelon e = row_reduce(Matrix::from_columns(sources, target.size()));
    std::vector<Vec> basis_src, basis_img;
    for (auto p : e.pivots) {
      basis_src.push_back(sources[p]);
      basis_img.push_back(images[p]);
    }
    const auto vinv = inverse(Matrix::from_columns(basis_src, target.size()));
    const Matrix restricted = Matrix::from_columns(basis_img, n) * *vinv;
    for (std::size_t m = 0; m < target.size(); ++m) {
      for (std::size_t r = 0; r < n; ++r) a(r, static_cast<std::size_t>(target[m])) = restricted(r, m);
    }
  }
  return a;
}

HomothetyResult homothety_decompose(const GradedAlgebra& g, const Matrix& a, const Matrix& inner_product) {
  if (!is_graded_automorphism(g, a).yes) throw PreconditionError("homothety_decompose needs a graded automorphism");
  const auto idx = layer0_indices(g);
  if (inner_product.rows() != idx.size() || !is_positive_definite(inner_product)) {
    throw PreconditionError("inner product must be positive definite on layer 0");
  }
  const Eigen::MatrixXd a0 = a.block(idx, idx).to_eigen();
  const Eigen::MatrixXd p = inner_product.to_eigen();
  const double det = a0.determinant();
  if (det == 0.0) throw PreconditionError("layer-0 block is singular");
  HomothetyResult out;
  out.lambda = std::pow(std::abs(det), 1.0 / static_cast<double>(idx.size()));
  const Eigen::MatrixXd target = out.lambda * out.lambda * p;
  out.relative_residual = (a0.transpose() * p * a0 - target).norm() / target.norm();
  out.homothety = out.relative_residual <= 1e-9;
  out.residual_isometry_check = out.homothety;
  return out;
}

}  // namespace carnot
