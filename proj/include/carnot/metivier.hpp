#pragma once

#include <optional>

#include "carnot/lie_algebra.hpp"
#include "carnot/polynomial.hpp"

namespace carnot {

/// The bracket-generating condition fails within the allowed depth.
class HorizontalityError : public InputError {
 public:
  HorizontalityError(const std::string& what, std::vector<std::size_t> dims)
      : InputError(what), achieved_dims(std::move(dims)) {}
  std::vector<std::size_t> achieved_dims;
};

/// A step that cannot fail at a generic point failed; the genericity check
/// most likely reported a false positive.
class InternalConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Right-normed bracket word [X_{a1},[X_{a2},[…,X_{ak}]]] over the horizontal fields.
using BracketWord = std::vector<int>;

std::string word_to_string(const BracketWord& w, const std::vector<std::string>& names = {});

struct Filtration {
  Vec point;
  std::vector<std::vector<Vec>> spaces;  // exact basis of E^i(p)
  std::vector<std::size_t> dims;         // n_0 < n_1 < … (non-strict at singular points)
  std::vector<int> floor;                // [i]_E, length n
};

Filtration evaluate_filtration(const std::vector<PolyVectorField>& fields, const Vec& p, int max_step);
/// Default bracket depth: words of length up to n.
Filtration evaluate_filtration(const std::vector<PolyVectorField>& fields, const Vec& p);

/// [i]_E from the dimension sequence.
std::vector<int> partition_floor(const std::vector<std::size_t>& dims, std::size_t n);

struct GenericityResult {
  bool generic = false;
  int order = 0;  // r + 1 = number of filtration steps
  bool vacuous = false;
  std::vector<std::size_t> dims_at_point;
  std::optional<Vec> witness;
  std::vector<std::size_t> witness_dims;  // empty when the witness is not bracket generating
};

GenericityResult genericity_check(const std::vector<PolyVectorField>& fields, const Vec& p,
                                  const std::vector<Vec>& samples);
/// 2n+1 rational points at radius 1/8: p ± e_i/8 and p + (1,…,1)/8.
std::vector<Vec> default_samples(const Vec& p);

/// Weighted degree max over terms of [j] − Σ α_m [m]; nullopt for the zero field.
std::optional<int> weighted_degree(const PolyVectorField& x, const std::vector<int>& floor);
PolyVectorField homogeneous_part(const PolyVectorField& x, const std::vector<int>& floor, int q);

struct GradedFrame {
  std::vector<PolyVectorField> fields;  // original coordinates
  std::vector<BracketWord> words;
};

/// Greedy selection in length-then-lex order of words that enlarge the span at p.
GradedFrame select_graded_frame(const std::vector<PolyVectorField>& fields, const Vec& p, int max_len);

struct TangentCone {
  GradedAlgebra algebra;
  GradedFrame frame;
  Filtration filtration;
  Matrix adaptation;                          // columns Y_i(p); y = M⁻¹(x − p)
  Matrix adaptation_inverse;
  std::vector<PolyVectorField> adapted;       // frame fields in adapted coordinates
  std::vector<PolyVectorField> hats;          // degree-[i] parts, hat-frame basis
};

/// Requires the fields to be generic at p on the given samples.
TangentCone tangent_cone(const std::vector<PolyVectorField>& fields, const Vec& p, const std::vector<Vec>& samples);

/// X̂_p for an arbitrary horizontal field X in original coordinates.
PolyVectorField hat_field(const TangentCone& cone, const PolyVectorField& x);

}  // namespace carnot
