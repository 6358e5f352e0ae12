#include "carnot/io.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace carnot::io {

namespace {

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing key '") + key + "'");
  return j.at(key);
}

int index_from_json(const json& j, std::size_t n) {
  if (!j.is_number_integer()) throw InputError("basis index must be an integer");
  const long v = j.get<long>();
  if (v < 1 || v > static_cast<long>(n)) throw InputError("basis index " + std::to_string(v) + " out of range 1.." + std::to_string(n));
  return static_cast<int>(v - 1);
}

int index_from_string(const std::string& s, std::size_t n) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(s, &pos);
  } catch (const std::exception&) {
    throw InputError("malformed basis index '" + s + "'");
  }
  if (pos != s.size()) throw InputError("malformed basis index '" + s + "'");
  return index_from_json(json(v), n);
}

Exponent parse_exponent(const std::string& s, std::size_t nvars) {
  Exponent e;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    std::size_t pos = 0;
    int v = -1;
    try {
      v = std::stoi(part, &pos);
    } catch (const std::exception&) {
      throw InputError("malformed exponent tuple '" + s + "'");
    }
    if (pos != part.size() || v < 0) throw InputError("malformed exponent tuple '" + s + "'");
    e.push_back(v);
  }
  if (e.size() != nvars) throw InputError("exponent tuple '" + s + "' has wrong length");
  return e;
}

std::string exponent_key(const Exponent& e) {
  std::string out;
  for (std::size_t k = 0; k < e.size(); ++k) {
    if (k) out += ",";
    out += std::to_string(e[k]);
  }
  return out;
}

}  // namespace

json field_to_json(Field f) {
  if (f.is_rational()) return "Q";
  return json{{"sqrt", f.radicand}};
}

Field field_from_json(const json& j) {
  if (j.is_string() && j.get<std::string>() == "Q") return Field{};
  if (j.is_object() && j.contains("sqrt") && j.at("sqrt").is_number_integer()) return Field::quadratic(j.at("sqrt").get<long>());
  throw InputError("field must be \"Q\" or {\"sqrt\": d}");
}

json scalar_to_json(const Scalar& s) { return s.to_string(); }

Scalar scalar_from_json(const json& j, Field f) {
  if (j.is_number_integer()) return Scalar(j.get<long>());
  if (j.is_string()) return Scalar::parse(j.get<std::string>(), f);
  throw InputError("scalar must be an exact string or an integer");
}

json algebra_to_json(const GradedAlgebra& g) {
  const auto& a = g.algebra;
  json brackets = json::array();
  for (const auto& [key, vec] : a.structure_constants()) {
    json out = json::object();
    for (const auto& [k, c] : vec) out[std::to_string(k + 1)] = scalar_to_json(c);
    brackets.push_back({{"i", key.first + 1}, {"j", key.second + 1}, {"out", out}});
  }
  json grading = json::array();
  for (const auto& layer : g.grading.layers()) {
    json l = json::array();
    for (int k : layer) l.push_back(k + 1);
    grading.push_back(l);
  }
  return {{"dim", a.dim()}, {"field", field_to_json(a.field())}, {"basis", a.names()}, {"brackets", brackets}, {"grading", grading}};
}

GradedAlgebra algebra_from_json(const json& j) {
  const json& dim_j = require(j, "dim");
  if (!dim_j.is_number_integer() || dim_j.get<long>() < 1) throw InputError("dim must be a positive integer");
  const auto n = dim_j.get<std::size_t>();
  const Field f = j.contains("field") ? field_from_json(j.at("field")) : Field{};
  std::vector<std::string> names;
  if (j.contains("basis")) {
    if (!j.at("basis").is_array()) throw InputError("basis must be an array of names");
    for (const auto& b : j.at("basis")) {
      if (!b.is_string()) throw InputError("basis names must be strings");
      names.push_back(b.get<std::string>());
    }
  }
  LieAlgebra alg(n, f, names);
  const json& brackets = require(j, "brackets");
  if (!brackets.is_array()) throw InputError("brackets must be an array");
  std::set<std::pair<int, int>> seen;
  for (const auto& b : brackets) {
    const int i = index_from_json(require(b, "i"), n);
    const int jj = index_from_json(require(b, "j"), n);
    if (i == jj) throw InputError("bracket of a basis vector with itself");
    if (!seen.insert({std::min(i, jj), std::max(i, jj)}).second) throw InputError("duplicate bracket entry");
    const json& out = require(b, "out");
    if (!out.is_object()) throw InputError("bracket output must be an object");
    Vec v(n);
    for (const auto& [k, c] : out.items()) v[static_cast<std::size_t>(index_from_string(k, n))] = scalar_from_json(c, f);
    alg.set_bracket(i, jj, v);
  }
  std::vector<std::vector<int>> layers;
  if (j.contains("grading")) {
    if (!j.at("grading").is_array()) throw InputError("grading must be an array of layers");
    for (const auto& layer : j.at("grading")) {
      if (!layer.is_array()) throw InputError("grading layers must be arrays");
      std::vector<int> l;
      for (const auto& k : layer) l.push_back(index_from_json(k, n));
      layers.push_back(std::move(l));
    }
  } else {
    std::vector<int> all(n);
    for (std::size_t k = 0; k < n; ++k) all[k] = static_cast<int>(k);
    layers.push_back(std::move(all));
  }
  return {std::move(alg), Grading(std::move(layers), n)};
}

json matrix_rows(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(scalar_to_json(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

json matrix_to_json(const Matrix& m) { return {{"field", field_to_json(m.field())}, {"matrix", matrix_rows(m)}}; }

Matrix matrix_from_json(const json& j) {
  const Field f = j.contains("field") ? field_from_json(j.at("field")) : Field{};
  const json& rows = require(j, "matrix");
  if (!rows.is_array() || rows.empty()) throw InputError("matrix must be a non-empty array of rows");
  std::vector<Vec> out;
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != rows.at(0).size()) throw InputError("matrix rows must be arrays of equal length");
    Vec v;
    for (const auto& c : row) v.push_back(scalar_from_json(c, f));
    out.push_back(std::move(v));
  }
  return Matrix::from_rows(out);
}

json poly_to_json(const Poly& p) {
  json out = json::object();
  for (const auto& [e, c] : p.terms()) out[exponent_key(e)] = scalar_to_json(c);
  return out;
}

Poly poly_from_json(const json& j, std::size_t nvars, Field f) {
  if (!j.is_object()) throw InputError("polynomial must be a map from exponent tuples to scalars");
  Poly p(nvars);
  for (const auto& [k, c] : j.items()) p.add_term(parse_exponent(k, nvars), scalar_from_json(c, f));
  return p;
}

json distribution_to_json(const Distribution& d) {
  json fields = json::array();
  for (const auto& x : d.fields) {
    json comps = json::array();
    for (const auto& p : x.components) comps.push_back(poly_to_json(p));
    fields.push_back(comps);
  }
  return {{"n", d.vars.size()}, {"field", field_to_json(d.field)}, {"vars", d.vars}, {"fields", fields}};
}

Distribution distribution_from_json(const json& j) {
  const json& n_j = require(j, "n");
  if (!n_j.is_number_integer() || n_j.get<long>() < 1) throw InputError("n must be a positive integer");
  const auto n = n_j.get<std::size_t>();
  Distribution d;
  d.field = j.contains("field") ? field_from_json(j.at("field")) : Field{};
  if (j.contains("vars")) {
    for (const auto& v : j.at("vars")) {
      if (!v.is_string()) throw InputError("variable names must be strings");
      d.vars.push_back(v.get<std::string>());
    }
  } else {
    for (std::size_t k = 0; k < n; ++k) d.vars.push_back("x" + std::to_string(k + 1));
  }
  if (d.vars.size() != n) throw InputError("vars must have n entries");
  const json& fields = require(j, "fields");
  if (!fields.is_array() || fields.empty()) throw InputError("fields must be a non-empty array");
  for (const auto& x : fields) {
    if (!x.is_array() || x.size() != n) throw InputError("each field needs n component polynomials");
    PolyVectorField v;
    for (const auto& p : x) v.components.push_back(poly_from_json(p, n, d.field));
    d.fields.push_back(std::move(v));
  }
  return d;
}

json certificates_to_json(const AnosovCertificates& c) {
  json out{{"graded_automorphism", c.graded_automorphism},
           {"integral", c.integral},
           {"hyperbolic", c.hyperbolic},
           {"lattice_matrix", matrix_rows(c.lattice_matrix)}};
  if (!c.integral) out["non_integral_entry"] = {c.bad_row + 1, c.bad_col + 1};
  return out;
}

json spectrum_to_json(const SpectrumReport& r) {
  json exps = json::array();
  for (const auto& e : r.exponents) exps.push_back({{"value", e.value}, {"multiplicity", e.multiplicity}});
  json out{{"exponents", exps}, {"source", to_string(r.source)}, {"error_bound", r.error_bound}};
  if (r.source == SpectrumReport::Source::qr_estimate) {
    out["iterations"] = r.iterations;
    out["seed"] = r.seed;
  }
  return out;
}

json system_to_json(const ProductAnosovSystem& s) {
  return {{"algebra", algebra_to_json(s.factor.algebra())},
          {"lambda", scalar_to_json(s.lambda)},
          {"field", field_to_json(s.lambda.field())},
          {"lattice_scale", s.lattice_scale},
          {"map", matrix_rows(s.map)},
          {"lattice_basis", matrix_rows(s.lattice_basis)},
          {"certificates", certificates_to_json(s.certificates)}};
}

ProductAnosovSystem system_from_json(const json& j) {
  const GradedAlgebra g = algebra_from_json(require(j, "algebra"));
  const Field f = field_from_json(require(j, "field"));
  const Scalar lambda = scalar_from_json(require(j, "lambda"), f);
  auto built = build_product_anosov(g, lambda);
  if (!built.system) throw InputError("system fails its " + built.failed_certificate + " certificate: " + built.diagnostic);
  ProductAnosovSystem s = std::move(*built.system);
  if (j.contains("map") && matrix_from_json({{"field", j.at("field")}, {"matrix", j.at("map")}}) != s.map) {
    throw InputError("system map does not match the construction");
  }
  if (j.contains("lattice_basis") &&
      matrix_from_json({{"field", j.at("field")}, {"matrix", j.at("lattice_basis")}}) != s.lattice_basis) {
    throw InputError("system lattice does not match the construction");
  }
  return s;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw InputError("cannot open '" + p.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError("malformed JSON in '" + origin + "': " + e.what());
  }
}

json read_json_file(const std::filesystem::path& p) { return parse_json(read_file(p), p.string()); }

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream out;
  for (unsigned int k = 0; k < len; ++k) out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[k]);
  return out.str();
}

}  // namespace carnot::io
