#include "carnot/metivier.hpp"

#include <functional>
#include <map>
#include <sstream>

namespace carnot {

namespace {

struct WordField {
  BracketWord word;
  PolyVectorField field;
};

void check_fields(const std::vector<PolyVectorField>& fields, const Vec& p) {
  if (fields.empty()) throw InputError("no horizontal fields given");
  for (const auto& f : fields) {
    if (f.dim() != p.size()) throw InputError("vector field and base point dimensions differ");
  }
}

/// Words of each length 1..max_len, right-normed, in lex order; zero fields
/// and repeated fields are dropped (neither can enlarge a span).
std::vector<std::vector<WordField>> bracket_levels(const std::vector<PolyVectorField>& fields, std::size_t max_len,
                                                   const std::function<bool(const std::vector<std::vector<WordField>>&)>& done) {
  std::vector<std::vector<WordField>> levels;
  std::vector<WordField> first;
  for (std::size_t a = 0; a < fields.size(); ++a) {
    if (!fields[a].is_zero()) first.push_back({{static_cast<int>(a)}, fields[a]});
  }
  levels.push_back(std::move(first));
  while (levels.size() < max_len && !done(levels)) {
    std::vector<WordField> next;
    std::vector<const PolyVectorField*> seen;
    for (std::size_t a = 0; a < fields.size(); ++a) {
      for (const auto& inner : levels.back()) {
        PolyVectorField br = lie_bracket(fields[a], inner.field);
        if (br.is_zero()) continue;
        bool dup = false;
        for (const auto& wf : next) dup = dup || wf.field == br;
        if (dup) continue;
        BracketWord w{static_cast<int>(a)};
        w.insert(w.end(), inner.word.begin(), inner.word.end());
        next.push_back({std::move(w), std::move(br)});
      }
    }
    levels.push_back(std::move(next));
  }
  return levels;
}

Filtration filtration_from_levels(const std::vector<std::vector<WordField>>& levels, const Vec& p) {
  const std::size_t n = p.size();
  Filtration f;
  f.point = p;
  std::vector<Vec> values;
  for (const auto& level : levels) {
    for (const auto& wf : level) values.push_back(wf.field(p));
    auto basis = independent_subset(values, n);
    f.dims.push_back(basis.size());
    f.spaces.push_back(std::move(basis));
  }
  return f;
}

std::string dims_string(const std::vector<std::size_t>& dims) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < dims.size(); ++i) os << (i ? "," : "") << dims[i];
  os << "]";
  return os.str();
}

int term_degree(std::size_t j, const Exponent& e, const std::vector<int>& floor) {
  int d = floor[j];
  for (std::size_t m = 0; m < e.size(); ++m) d -= e[m] * floor[m];
  return d;
}

}  // namespace

std::string word_to_string(const BracketWord& w, const std::vector<std::string>& names) {
  auto name = [&](int a) {
    return static_cast<std::size_t>(a) < names.size() ? names[static_cast<std::size_t>(a)] : "X" + std::to_string(a + 1);
  };
  std::string s = name(w.back());
  for (auto it = w.rbegin() + 1; it != w.rend(); ++it) s = "[" + name(*it) + "," + s + "]";
  return s;
}

std::vector<int> partition_floor(const std::vector<std::size_t>& dims, std::size_t n) {
  std::vector<int> floor(n, 0);
  std::size_t prev = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    for (std::size_t i = prev; i < dims[k] && i < n; ++i) floor[i] = static_cast<int>(k) + 1;
    prev = std::max(prev, dims[k]);
  }
  return floor;
}

Filtration evaluate_filtration(const std::vector<PolyVectorField>& fields, const Vec& p, int max_step) {
  check_fields(fields, p);
  if (max_step < 0) throw InputError("max_step must be non-negative");
  const std::size_t n = p.size();
  std::vector<Vec> values;
  auto full = [&](const std::vector<std::vector<WordField>>& levels) {
    for (const auto& wf : levels.back()) values.push_back(wf.field(p));
    return span_rank(values, n) == n;
  };
  const auto levels = bracket_levels(fields, static_cast<std::size_t>(max_step) + 1, full);
  Filtration f = filtration_from_levels(levels, p);
  if (f.dims.back() != n) {
    throw HorizontalityError("distribution is not bracket generating at the point within depth " +
                                 std::to_string(max_step + 1) + ": dims " + dims_string(f.dims),
                             f.dims);
  }
  f.floor = partition_floor(f.dims, n);
  return f;
}

Filtration evaluate_filtration(const std::vector<PolyVectorField>& fields, const Vec& p) {
  return evaluate_filtration(fields, p, static_cast<int>(p.size()) - 1);
}

GenericityResult genericity_check(const std::vector<PolyVectorField>& fields, const Vec& p,
                                  const std::vector<Vec>& samples) {
  GenericityResult out;
  const Filtration base = evaluate_filtration(fields, p);
  out.dims_at_point = base.dims;
  out.order = static_cast<int>(base.dims.size());
  out.vacuous = samples.empty();
  for (const auto& q : samples) {
    if (q.size() != p.size()) throw InputError("sample point has wrong dimension");
    try {
      const Filtration f = evaluate_filtration(fields, q);
      if (f.dims != base.dims) {
        out.witness = q;
        out.witness_dims = f.dims;
        return out;
      }
    } catch (const HorizontalityError& e) {
      out.witness = q;
      out.witness_dims = e.achieved_dims;
      return out;
    }
  }
  out.generic = true;
  return out;
}

std::vector<Vec> default_samples(const Vec& p) {
  const std::size_t n = p.size();
  const Scalar r = Scalar::rational(1, 8);
  std::vector<Vec> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(p + r * unit_vec(n, i));
    out.push_back(p - r * unit_vec(n, i));
  }
  out.push_back(p + r * Vec(n, Scalar(1)));
  return out;
}

std::optional<int> weighted_degree(const PolyVectorField& x, const std::vector<int>& floor) {
  if (floor.size() != x.dim()) throw InputError("floor function has wrong length");
  std::optional<int> deg;
  for (std::size_t j = 0; j < x.dim(); ++j) {
    for (const auto& [e, c] : x.components[j].terms()) {
      const int d = term_degree(j, e, floor);
      if (!deg || d > *deg) deg = d;
    }
  }
  return deg;
}

PolyVectorField homogeneous_part(const PolyVectorField& x, const std::vector<int>& floor, int q) {
  if (floor.size() != x.dim()) throw InputError("floor function has wrong length");
  PolyVectorField out = PolyVectorField::zero(x.dim());
  for (std::size_t j = 0; j < x.dim(); ++j) {
    for (const auto& [e, c] : x.components[j].terms()) {
      if (term_degree(j, e, floor) == q) out.components[j].add_term(e, c);
    }
  }
  return out;
}

GradedFrame select_graded_frame(const std::vector<PolyVectorField>& fields, const Vec& p, int max_len) {
  check_fields(fields, p);
  const std::size_t n = p.size();
  GradedFrame frame;
  std::vector<Vec> kept;
  auto full = [&](const std::vector<std::vector<WordField>>& levels) {
    for (const auto& wf : levels.back()) {
      if (kept.size() == n) break;
      Vec v = wf.field(p);
      kept.push_back(v);
      if (span_rank(kept, n) < kept.size()) {
        kept.pop_back();
        continue;
      }
      frame.fields.push_back(wf.field);
      frame.words.push_back(wf.word);
    }
    return kept.size() == n;
  };
  const auto levels = bracket_levels(fields, static_cast<std::size_t>(max_len), full);
  // the predicate only sees a level once the next one is requested
  if (kept.size() < n && levels.size() == static_cast<std::size_t>(max_len)) full(levels);
  if (kept.size() < n) throw HorizontalityError("bracket words do not span at the point", {kept.size()});
  return frame;
}

TangentCone tangent_cone(const std::vector<PolyVectorField>& fields, const Vec& p, const std::vector<Vec>& samples) {
  const GenericityResult gen = genericity_check(fields, p, samples);
  if (!gen.generic) throw PreconditionError("tangent_cone requires a generic point");
  const std::size_t n = p.size();

  TangentCone cone;
  cone.filtration = evaluate_filtration(fields, p);
  const auto& floor = cone.filtration.floor;
  cone.frame = select_graded_frame(fields, p, static_cast<int>(cone.filtration.dims.size()));
  std::vector<Vec> cols;
  for (const auto& y : cone.frame.fields) cols.push_back(y(p));
  cone.adaptation = Matrix::from_columns(cols, n);
  auto inv = inverse(cone.adaptation);
  if (!inv) throw InternalConsistencyError("graded frame is not a basis at the point");
  cone.adaptation_inverse = *inv;
  for (const auto& y : cone.frame.fields) cone.adapted.push_back(y.change_coordinates(cone.adaptation, *inv, p));

  std::vector<PolyVectorField> input_hats;
  for (const auto& x : fields) input_hats.push_back(hat_field(cone, x));

  for (std::size_t k = 0; k < n; ++k) {
    const BracketWord& w = cone.frame.words[k];
    if (static_cast<int>(w.size()) != floor[k]) throw InternalConsistencyError("frame word length disagrees with the floor");
    PolyVectorField h = input_hats[static_cast<std::size_t>(w.back())];
    for (auto it = w.rbegin() + 1; it != w.rend(); ++it) h = lie_bracket(input_hats[static_cast<std::size_t>(*it)], h);
    if (!(h == homogeneous_part(cone.adapted[k], floor, floor[k]))) {
      throw InternalConsistencyError("bracket of hat fields differs from the top homogeneous part of " + word_to_string(w));
    }
    cone.hats.push_back(std::move(h));
  }

  // coefficient matching: [ĥ_i, ĥ_j] = Σ_k c_k ĥ_k with constant c_k
  std::map<std::pair<std::size_t, Exponent>, std::size_t> keys;
  auto key_of = [&](std::size_t comp, const Exponent& e) {
    return keys.try_emplace({comp, e}, keys.size()).first->second;
  };
  for (const auto& h : cone.hats) {
    for (std::size_t c = 0; c < n; ++c) {
      for (const auto& [e, v] : h.components[c].terms()) key_of(c, e);
    }
  }
  std::vector<std::string> names;
  for (const auto& w : cone.frame.words) names.push_back(word_to_string(w));
  LieAlgebra alg(n, Field{}, names);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const PolyVectorField br = lie_bracket(cone.hats[i], cone.hats[j]);
      if (br.is_zero()) continue;
      for (std::size_t c = 0; c < n; ++c) {
        for (const auto& [e, v] : br.components[c].terms()) key_of(c, e);
      }
      Matrix sys(keys.size(), n);
      Vec rhs(keys.size());
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t c = 0; c < n; ++c) {
          for (const auto& [e, v] : cone.hats[k].components[c].terms()) sys(keys.at({c, e}), k) = v;
        }
      }
      for (std::size_t c = 0; c < n; ++c) {
        for (const auto& [e, v] : br.components[c].terms()) rhs[keys.at({c, e})] = v;
      }
      auto coeffs = solve(sys, rhs);
      if (!coeffs) {
        throw InternalConsistencyError("bracket [" + names[i] + ", " + names[j] +
                                       "] of hat fields is not a constant combination of the hat frame");
      }
      alg.set_bracket(static_cast<int>(i), static_cast<int>(j), *coeffs);
    }
  }

  std::vector<std::vector<int>> layers;
  for (std::size_t k = 0; k < n; ++k) {
    const auto l = static_cast<std::size_t>(floor[k] - 1);
    if (layers.size() <= l) layers.resize(l + 1);
    layers[l].push_back(static_cast<int>(k));
  }
  for (const auto& l : layers) {
    if (l.empty()) throw InternalConsistencyError("filtration has an empty step at a point reported generic");
  }
  cone.algebra = GradedAlgebra{std::move(alg), Grading(layers, n)};
  return cone;
}

PolyVectorField hat_field(const TangentCone& cone, const PolyVectorField& x) {
  const PolyVectorField y = x.change_coordinates(cone.adaptation, cone.adaptation_inverse, cone.filtration.point);
  const auto deg = weighted_degree(y, cone.filtration.floor);
  if (deg && *deg > 1) {
    throw InputError("field has weighted degree " + std::to_string(*deg) +
                     " in the affine-adapted coordinates; they are not privileged for this distribution");
  }
  return homogeneous_part(y, cone.filtration.floor, 1);
}

}  // namespace carnot
