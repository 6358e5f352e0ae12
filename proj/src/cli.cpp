#include "carnot/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "carnot/autgroup.hpp"
#include "carnot/io.hpp"

namespace carnot::cli {

namespace {

using io::json;

struct Options {
  std::string out_path;
  std::uint64_t seed = 0;
  std::string format = "json";
  bool timing = false;

  std::string file;
  std::string algebra_file;
  std::string point;
  std::string theorem;
  std::string example;
  std::string lambda;
  long sqrt_d = 0;
  std::string system_file;
  std::string system_out;
  double eps = 0.0;
  std::size_t iters = 10000;
};

struct Outcome {
  json verdicts = json::object();
  int code = verified;
};

class Session {
 public:
  json inputs = json::array();

  json load(const std::string& path) {
    const std::string bytes = io::read_file(path);
    inputs.push_back({{"path", path}, {"sha256", io::sha256_hex(bytes)}});
    return io::parse_json(bytes, path);
  }
};

json vec_json(const Vec& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(io::scalar_to_json(x));
  return out;
}

Vec parse_point(const std::string& text, std::size_t n, Field f) {
  Vec p;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) p.push_back(Scalar::parse(part, f));
  if (p.size() != n) throw InputError("point must have " + std::to_string(n) + " coordinates");
  return p;
}

json grading_json(const GradingVerdict& gv) {
  if (gv.kind != GradingVerdict::Kind::violation) return to_string(gv.kind);
  return {{"violation",
           {{"layers", {gv.layer_a, gv.layer_b}}, {"witness", {gv.witness_i + 1, gv.witness_j + 1}}, {"description", gv.description}}}};
}

json jacobi_json(const JacobiResult& jr) {
  if (jr.ok) return "ok";
  return {{"violation", {{"triple", {jr.i + 1, jr.j + 1, jr.k + 1}}, {"residual", vec_json(jr.residual)}}}};
}

Outcome algebra_check(Session& s, const Options& o) {
  const GradedAlgebra g = io::algebra_from_json(s.load(o.file));
  Outcome r;
  const auto jr = check_jacobi(g.algebra);
  r.verdicts["jacobi"] = jacobi_json(jr);
  if (!jr.ok) {
    r.code = refuted;
    return r;
  }
  const bool nil = is_nilpotent(g.algebra);
  r.verdicts["nilpotent"] = nil;
  r.verdicts["lower_central_series"] = lower_central_series(g.algebra);
  const auto gv = verify_grading(g);
  r.verdicts["grading"] = grading_json(gv);
  if (!nil || !gv.is_graded()) r.code = refuted;
  return r;
}

Outcome algebra_autos(Session& s, const Options& o) {
  const GradedAlgebra g = io::algebra_from_json(s.load(o.file));
  Outcome r;
  const auto gv = verify_grading(g);
  r.verdicts["grading"] = grading_json(gv);
  if (!gv.is_graded()) {
    r.code = refuted;
    return r;
  }
  const auto der = graded_derivations(g);
  json basis = json::array();
  for (const auto& d : der.basis) basis.push_back(io::matrix_rows(d));
  r.verdicts["graded_derivations"] = {{"dim", der.dim()}, {"basis", basis}, {"closed_under_commutator", der.closed_under_commutator()}};
  return r;
}

Outcome algebra_asymmetry(Session& s, const Options& o) {
  const GradedAlgebra g = io::algebra_from_json(s.load(o.file));
  Outcome r;
  const auto gv = verify_grading(g);
  if (gv.kind != GradingVerdict::Kind::graded_carnot) throw InputError("asymmetry needs a Carnot grading");
  const auto v = asymmetry_verdict(g, o.seed);
  r.verdicts["asymmetry"] = to_string(v.kind);
  r.verdicts["trace_zero_dim"] = v.trace_zero_dim;
  r.verdicts["invariant_forms_dim"] = v.invariant_forms_dim;
  json cert = json::object();
  bool valid = false;
  if (v.kind == AsymmetryVerdict::Kind::not_asymmetric) {
    cert["derivation"] = io::matrix_rows(*v.derivation);
    cert["layer0_char_poly"] = vec_json(v.eigenvalue->char_poly.coeffs());
    cert["eigenvalue_interval"] = {io::scalar_to_json(v.eigenvalue->interval.lo), io::scalar_to_json(v.eigenvalue->interval.hi)};
    valid = validate_not_asymmetric(g, *v.derivation, *v.eigenvalue);
  } else if (v.kind == AsymmetryVerdict::Kind::asymmetric) {
    cert["inner_product"] = io::matrix_rows(*v.inner_product);
    valid = validate_asymmetric(g, *v.inner_product);
  }
  r.verdicts["certificate"] = cert;
  r.verdicts["certificate_valid"] = valid;
  r.code = v.kind == AsymmetryVerdict::Kind::asymmetric && valid ? verified : refuted;
  return r;
}

Outcome cone_compute(Session& s, const Options& o) {
  const auto d = io::distribution_from_json(s.load(o.file));
  const Vec p = parse_point(o.point, d.vars.size(), d.field);
  Outcome r;
  const auto filt = evaluate_filtration(d.fields, p);
  r.verdicts["point"] = vec_json(p);
  r.verdicts["filtration_dims"] = filt.dims;
  r.verdicts["partition_floor"] = filt.floor;
  const auto gen = genericity_check(d.fields, p, default_samples(p));
  json gj{{"generic", gen.generic}, {"order", gen.order}, {"dims_at_point", gen.dims_at_point}};
  if (gen.witness) {
    gj["witness"] = vec_json(*gen.witness);
    gj["witness_dims"] = gen.witness_dims;
  }
  r.verdicts["genericity"] = gj;
  if (!gen.generic) {
    r.code = refuted;
    return r;
  }
  const auto cone = tangent_cone(d.fields, p, default_samples(p));
  json words = json::array();
  for (const auto& w : cone.frame.words) words.push_back(word_to_string(w));
  const auto jr = check_jacobi(cone.algebra.algebra);
  const auto gv = verify_grading(cone.algebra);
  r.verdicts["cone"] = {{"frame", words},
                        {"adaptation", io::matrix_rows(cone.adaptation)},
                        {"algebra", io::algebra_to_json(cone.algebra)},
                        {"jacobi", jacobi_json(jr)},
                        {"grading", grading_json(gv)}};
  if (!jr.ok || gv.kind != GradingVerdict::Kind::graded_carnot) r.code = refuted;
  return r;
}

json exponents_json(const std::vector<LyapunovExponent>& e) {
  json out = json::array();
  for (const auto& x : e) out.push_back({{"value", x.value}, {"multiplicity", x.multiplicity}});
  return out;
}

Outcome spectrum_verify(Session& s, const Options& o) {
  const json mj = s.load(o.file);
  const GradedAlgebra g = io::algebra_from_json(s.load(o.algebra_file));
  if (mj.contains("field")) Field::join(g.algebra.field(), io::field_from_json(mj.at("field")));
  const Matrix a = io::matrix_from_json(mj);
  if (!a.is_square() || a.rows() != g.dim()) throw InputError("map and algebra dimensions differ");
  Outcome r;
  r.verdicts["spectrum"] = io::spectrum_to_json(lyapunov_spectrum(a));
  const auto bs = check_block_structure(a, g);
  json bj{{"block_upper_triangular", bs.block_upper_triangular}};
  if (!bs.block_upper_triangular) bj["violation"] = {bs.violation_row + 1, bs.violation_col + 1};
  r.verdicts["block_structure"] = bj;
  const auto aut = is_graded_automorphism(g, a);
  r.verdicts["graded_automorphism"] = aut.yes;
  json t{{"theorem", o.theorem}};
  bool holds = false;
  if (o.theorem == "heis") {
    if (!bs.block_upper_triangular) {
      t["reason"] = "map is not block upper triangular";
    } else {
      const auto h = verify_heisenberg_additivity(a, g);
      holds = h.holds;
      t["n"] = h.n;
      t["deviation"] = h.deviation;
      t["exact"] = h.exact;
    }
  } else if (!aut.yes) {
    t["reason"] = "map is not a graded automorphism: " + aut.reason;
  } else if (o.theorem == "arith") {
    const auto v = verify_arithmeticity(a, g);
    holds = v.holds;
    t["lambda"] = v.lambda;
    t["expected"] = exponents_json(v.expected);
    t["observed"] = exponents_json(v.observed);
    t["max_deviation"] = v.max_deviation;
  } else {
    const auto v = verify_subadditivity(level_exponents(a, g));
    holds = v.holds;
    if (!v.holds) {
      t["violation"] = {{"level", v.level}, {"index", v.index + 1}, {"value", v.value}, {"lower", v.lower}, {"upper", v.upper}};
    }
  }
  t["holds"] = holds;
  r.verdicts["theorem"] = t;
  r.code = holds ? verified : refuted;
  return r;
}

Outcome anosov_build(Session& s, const Options& o) {
  AnosovBuild built;
  if (!o.example.empty()) {
    if (o.example != "smale") throw InputError("unknown example '" + o.example + "'");
    built.system = build_smale_system();
  } else {
    if (o.algebra_file.empty() || o.lambda.empty()) throw InputError("anosov build needs --example or --algebra with --lambda");
    const GradedAlgebra g = io::algebra_from_json(s.load(o.algebra_file));
    const Field f = o.sqrt_d != 0 ? Field::quadratic(o.sqrt_d) : g.algebra.field();
    built = build_product_anosov(g, Scalar::parse(o.lambda, Field::join(f, g.algebra.field())));
  }
  Outcome r;
  if (!built.system) {
    r.verdicts["failed_certificate"] = built.failed_certificate;
    r.verdicts["diagnostic"] = built.diagnostic;
    r.code = refuted;
    return r;
  }
  const auto& sys = *built.system;
  r.verdicts["system"] = io::system_to_json(sys);
  r.verdicts["certificates_pass"] = sys.certificates.all();
  r.verdicts["spectrum"] = io::spectrum_to_json(lyapunov_spectrum(sys.map));

  // unstable part: the first factor, where the map is δ_λ
  const auto& fg = sys.factor.algebra();
  json unstable = json::array();
  bool exact_pattern = true;
  for (std::size_t k = 0; k < fg.dim(); ++k) {
    const int w = Grading::weight(fg.grading.layer_of(static_cast<int>(k)));
    const Scalar& mu = sys.map(k, k);
    exact_pattern = exact_pattern && mu == sys.lambda.pow(w);
    unstable.push_back({{"eigenvalue", io::scalar_to_json(mu)}, {"weight", w}, {"exponent", std::log(mu.to_double())}});
  }
  r.verdicts["unstable"] = {{"log_lambda", std::log(sys.lambda.to_double())}, {"eigenvalues", unstable}, {"exact_pattern", exact_pattern}};
  if (!o.system_out.empty()) {
    std::ofstream f(o.system_out);
    if (!f) throw InputError("cannot write '" + o.system_out + "'");
    f << io::system_to_json(sys).dump(2) << "\n";
  }
  r.code = sys.certificates.all() && exact_pattern ? verified : refuted;
  return r;
}

Outcome lyapunov_estimate(Session& s, const Options& o) {
  ProductAnosovSystem sys;
  if (!o.system_file.empty()) {
    sys = io::system_from_json(s.load(o.system_file));
  } else if (o.example == "smale") {
    sys = build_smale_system();
  } else {
    throw InputError("lyapunov estimate needs --system or --example smale");
  }
  const PointMap f = o.eps == 0.0 ? automorphism_map(sys) : make_periodic_perturbation(sys, o.eps, o.seed);
  Outcome r;
  r.verdicts["eps"] = o.eps;
  try {
    const auto est = qr_lyapunov_estimate(sys, f, random_start(sys, o.seed), o.iters, o.seed);
    const auto pattern = lyapunov_spectrum(sys.map).flattened();
    json rows = json::array();
    double max_dev = 0.0;
    double sum = 0.0;
    for (std::size_t k = 0; k < est.exponents.size(); ++k) {
      const double dev = std::abs(est.exponents[k] - pattern[k]);
      max_dev = std::max(max_dev, dev);
      sum += est.exponents[k];
      rows.push_back({{"index", k + 1}, {"estimate", est.exponents[k]}, {"arithmetic", pattern[k]}, {"deviation", dev}});
    }
    r.verdicts["spectrum"] = io::spectrum_to_json(est.report);
    r.verdicts["burn_in"] = est.burn_in;
    r.verdicts["deviation_table"] = rows;
    r.verdicts["max_deviation"] = max_dev;
    r.verdicts["exponent_sum"] = sum;
    r.verdicts["mean_log_det"] = est.mean_log_det;
  } catch (const NumericalBlowup& e) {
    r.verdicts["blowup"] = {{"iteration", e.iteration}, {"message", e.what()}};
    r.code = refuted;
  }
  return r;
}

void render_table(const json& j, const std::string& prefix, std::ostream& out) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) render_table(v, prefix.empty() ? k : prefix + "." + k, out);
  } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
    for (std::size_t k = 0; k < j.size(); ++k) render_table(j[k], prefix + "[" + std::to_string(k + 1) + "]", out);
  } else {
    out << prefix << "  " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Exact computations with graded nilpotent Lie algebras and nilmanifold spectra", "carnot"};
  app.require_subcommand(1);
  app.add_option("--out", o.out_path, "Also write the JSON report to this file");
  app.add_option("--seed", o.seed, "Seed for randomized steps");
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "table"}));
  app.add_flag("--timing", o.timing, "Include wall_time in the report");

  std::string command;
  auto leaf = [&](CLI::App* parent, const char* name, const char* desc) {
    CLI::App* c = parent->add_subcommand(name, desc);
    c->fallthrough();
    c->callback([&command, parent, name] { command = parent->get_name() + " " + name; });
    return c;
  };

  CLI::App* algebra = app.add_subcommand("algebra", "Lie algebra checks");
  algebra->require_subcommand(1)->fallthrough();
  for (const auto& [name, desc] : {std::pair{"check", "Jacobi identity, nilpotency and grading"},
                                   std::pair{"autos", "Basis of graded derivations"},
                                   std::pair{"asymmetry", "Asymmetry verdict with certificate"}}) {
    leaf(algebra, name, desc)->add_option("file", o.file, "Algebra JSON")->required();
  }

  CLI::App* cone = app.add_subcommand("cone", "Nilpotent tangent cones");
  cone->require_subcommand(1)->fallthrough();
  CLI::App* compute = leaf(cone, "compute", "Tangent cone at a point");
  compute->add_option("file", o.file, "Distribution JSON")->required();
  compute->add_option("--point", o.point, "Comma-separated coordinates")->required();

  CLI::App* spectrum = app.add_subcommand("spectrum", "Spectral theorems for graded maps");
  spectrum->require_subcommand(1)->fallthrough();
  CLI::App* verify = leaf(spectrum, "verify", "Verify a spectral theorem");
  verify->add_option("file", o.file, "Map JSON")->required();
  verify->add_option("--algebra", o.algebra_file, "Algebra JSON")->required();
  verify->add_option("--theorem", o.theorem, "arith, subadd or heis")->required()->check(CLI::IsMember({"arith", "subadd", "heis"}));

  CLI::App* anosov = app.add_subcommand("anosov", "Nilmanifold Anosov automorphisms");
  anosov->require_subcommand(1)->fallthrough();
  CLI::App* build = leaf(anosov, "build", "Galois-pair construction");
  build->add_option("--example", o.example, "Bundled example (smale)");
  build->add_option("--algebra", o.algebra_file, "Algebra JSON");
  build->add_option("--lambda", o.lambda, "Unit such as 2+r");
  build->add_option("--sqrt", o.sqrt_d, "Radicand d for lambda when the algebra is over Q");
  build->add_option("--system-out", o.system_out, "Write the system JSON here");

  CLI::App* lyapunov = app.add_subcommand("lyapunov", "Numerical Lyapunov exponents");
  lyapunov->require_subcommand(1)->fallthrough();
  CLI::App* estimate = leaf(lyapunov, "estimate", "QR estimate along an orbit");
  estimate->add_option("--system", o.system_file, "System JSON");
  estimate->add_option("--example", o.example, "Bundled example (smale)");
  estimate->add_option("--eps", o.eps, "Perturbation amplitude in [0, 0.1]");
  estimate->add_option("--iters", o.iters, "Iterations")->check(CLI::PositiveNumber);

  for (std::size_t k = 0; k < args.size(); ++k) {
    const std::string& a = args[k];
    if (a == "--out" || a == "--seed" || a == "--format") {
      ++k;
      continue;
    }
    if (a.empty() || a[0] == '-') continue;
    if (!app.get_subcommand_no_throw(a)) {
      err << "error: unknown subcommand '" << a << "'\n";
      return input_error;
    }
    break;
  }
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return verified;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return verified;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return input_error;
  }

  const auto start = std::chrono::steady_clock::now();
  Session session;
  Outcome outcome;
  try {
    if (command == "algebra check") outcome = algebra_check(session, o);
    else if (command == "algebra autos") outcome = algebra_autos(session, o);
    else if (command == "algebra asymmetry") outcome = algebra_asymmetry(session, o);
    else if (command == "cone compute") outcome = cone_compute(session, o);
    else if (command == "spectrum verify") outcome = spectrum_verify(session, o);
    else if (command == "anosov build") outcome = anosov_build(session, o);
    else if (command == "lyapunov estimate") outcome = lyapunov_estimate(session, o);
    else throw InputError("unknown command");
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return input_error;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return input_error;
  } catch (const io::json::exception& e) {
    err << "error: malformed input: " << e.what() << "\n";
    return input_error;
  }

  json report{{"command", command}, {"inputs", session.inputs}, {"verdicts", outcome.verdicts}, {"tool_version", tool_version}};
  if (o.timing) {
    report["wall_time"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  const std::string text = report.dump(2) + "\n";
  if (!o.out_path.empty()) {
    std::ofstream f(o.out_path);
    if (!f) {
      err << "error: cannot write '" << o.out_path << "'\n";
      return input_error;
    }
    f << text;
  }
  if (o.format == "table") {
    render_table(report, "", out);
  } else {
    out << text;
  }
  return outcome.code;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int k = 1; k < argc; ++k) args.emplace_back(argv[k]);
  return run(args, out, err);
}

}  // namespace carnot::cli
