#pragma once

// JSON file formats. Basis indices are 1-based in every file; layers are
// numbered from 0.

#include <filesystem>
#include <string>

#include "carnot/metivier.hpp"
#include "carnot/nilmanifold.hpp"
#include "json.hpp"

namespace carnot::io {

using nlohmann::json;

json field_to_json(Field f);
Field field_from_json(const json& j);

/// Exact string "a/b" or "a/b+c/e*r"; integers are also accepted on input.
json scalar_to_json(const Scalar& s);
Scalar scalar_from_json(const json& j, Field f);

json algebra_to_json(const GradedAlgebra& g);
GradedAlgebra algebra_from_json(const json& j);

/// {"field": …, "matrix": [[scalar, …], …]}
json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);
json matrix_rows(const Matrix& m);

struct Distribution {
  Field field;
  std::vector<std::string> vars;
  std::vector<PolyVectorField> fields;
  friend bool operator==(const Distribution&, const Distribution&) = default;
};

json poly_to_json(const Poly& p);
Poly poly_from_json(const json& j, std::size_t nvars, Field f);
json distribution_to_json(const Distribution& d);
Distribution distribution_from_json(const json& j);

/// Factor algebra, λ, map, lattice and certificates. Parsing rebuilds the
/// system and rejects files whose map or lattice disagree with the rebuild.
json system_to_json(const ProductAnosovSystem& s);
ProductAnosovSystem system_from_json(const json& j);

json certificates_to_json(const AnosovCertificates& c);
json spectrum_to_json(const SpectrumReport& r);

std::string read_file(const std::filesystem::path& p);
json parse_json(const std::string& text, const std::string& origin);
json read_json_file(const std::filesystem::path& p);
std::string sha256_hex(const std::string& bytes);

}  // namespace carnot::io
