#pragma once

// The poincare command-line tool. Exit codes: 0 success, 1 usage error,
// 2 computation error, 3 verification failure.

#include <charconv>
#include <fstream>
#include <cmath>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "poincare/constants.hpp"
#include "poincare/domain.hpp"
#include "poincare/eigen_oracle.hpp"
#include "poincare/error.hpp"
#include "poincare/estimator.hpp"
#include "poincare/io.hpp"

namespace poincare::cli {

enum ExitCode { Ok = 0, Usage = 1, Computation = 2, VerificationFailure = 3 };

struct RunConfig {
  std::string command;
  std::string shape, gamma, kind;
  std::vector<double> dims;
  std::string levels = "2..6";
  std::string mesh_path, data_path, phi = "auto", out_path;
  bool json = false;
  bool verify = false;
  int refine = 4;
  double tolerance = 1e-10;
};

/// Shortest decimal that reads back to @p v, keeping a ".0" on integral values.
inline std::string format(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : v > 0 ? "inf" : "-inf";
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, r.ptr);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

namespace detail {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline DomainSpec domain_spec(const RunConfig& c) {
  BoundarySelector g;
  if (c.gamma == "side") g = BoundarySelector::OneSide;
  else if (c.gamma == "full") g = BoundarySelector::FullBoundary;
  else if (c.gamma == "leg") g = BoundarySelector::OneLeg;
  else if (c.gamma == "legs") g = BoundarySelector::TwoLegs;
  else if (c.gamma == "hyp") g = BoundarySelector::Hypotenuse;
  else throw UsageError("unknown --gamma '" + c.gamma + "'");
  const std::size_t need = c.shape == "rect" ? 2 : c.shape == "box" ? 3 : 1;
  if (c.dims.size() != need)
    throw UsageError("--shape " + c.shape + " takes " + std::to_string(need) + " dimension(s)");
  DomainSpec spec{Rectangle{1, 1}, g};
  if (c.shape == "rect") spec.shape = Rectangle{c.dims[0], c.dims[1]};
  else if (c.shape == "box") spec.shape = Box{c.dims[0], c.dims[1], c.dims[2]};
  else if (c.shape == "tri") spec.shape = triangle_from_case_length(c.dims[0], g);
  else throw UsageError("unknown --shape '" + c.shape + "'");
  try {
    validate(spec);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return spec;
}

inline ConstantKind kind(const std::string& k) {
  if (k == "c1") return ConstantKind::C1;
  if (k == "c2") return ConstantKind::C2;
  if (k == "cp") return ConstantKind::CP;
  if (k == "cf") return ConstantKind::CF;
  if (k == "pw") return ConstantKind::CPUpperBound;
  throw UsageError("unknown --kind '" + k + "'");
}

// The closed form, or a usage error if the pair is outside the supported table.
inline ConstantResult checked_constant(const DomainSpec& spec, ConstantKind k) {
  try {
    return sharp_constant(spec, k);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Unsupported) throw UsageError(e.what());
    throw;
  }
}

inline std::pair<int, int> level_range(const std::string& s) {
  const auto dots = s.find("..");
  int lo = 0, hi = 0;
  auto parse = [&](std::string_view t, int& v) {
    const auto r = std::from_chars(t.data(), t.data() + t.size(), v);
    return r.ec == std::errc() && r.ptr == t.data() + t.size();
  };
  if (dots == std::string::npos || !parse(std::string_view(s).substr(0, dots), lo) ||
      !parse(std::string_view(s).substr(dots + 2), hi))
    throw UsageError("--levels expects a..b, got '" + s + "'");
  if (lo < 0 || hi < lo || hi > kMaxReferenceLevel)
    throw UsageError("--levels must satisfy 0 <= a <= b <= " + std::to_string(kMaxReferenceLevel));
  return {lo, hi};
}

inline io::Json domain_json(const RunConfig& c, const DomainSpec& spec) {
  io::Json d;
  d["shape"] = c.shape;
  d["gamma"] = c.gamma;
  d["dims"] = c.dims;
  if (const auto* t = std::get_if<RightIsoTriangle>(&spec.shape)) {
    d["case_length"] = c.dims[0];
    d["leg"] = t->leg;
  }
  return d;
}

inline int run_constant(const RunConfig& c, std::ostream& out) {
  const auto spec = domain_spec(c);
  const auto k = kind(c.kind);
  const auto r = checked_constant(spec, k);
  if (c.json) {
    io::Json j;
    j["domain"] = domain_json(c, spec);
    j["result"] = io::to_json(r);
    out << j.dump(2) << '\n';
    return Ok;
  }
  out << format(r.value) << '\n';
  out << "kind " << to_string(k) << ", eigenvalue " << format(r.eigenvalue) << '\n';
  for (const auto& root : r.roots)
    out << "root " << root.name << " = " << format(root.value) << " (residual " << format(root.residual) << ")\n";
  return Ok;
}

inline int run_verify(const RunConfig& c, std::ostream& out) {
  const auto spec = domain_spec(c);
  const auto k = kind(c.kind);
  if (k == ConstantKind::CPUpperBound) throw UsageError("the Payne-Weinberger bound has no eigenvalue problem");
  if (std::holds_alternative<Box>(spec.shape)) throw UsageError("the oracle meshes are two-dimensional only");
  const auto [lo, hi] = level_range(c.levels);
  checked_constant(spec, k);
  const auto rows = verify_constant(spec, k, lo, hi);
  bool one_sided = true;
  for (const auto& r : rows) one_sided = one_sided && r.lambda_h >= r.lambda_closed - 1e-9;
  if (c.json) {
    io::Json j;
    j["domain"] = domain_json(c, spec);
    j["kind"] = to_string(k);
    j["rows"] = io::to_json(rows);
    j["one_sided"] = one_sided;
    out << j.dump(2) << '\n';
  } else {
    out << "level  lambda_h                 lambda_closed            relative_gap\n";
    for (const auto& r : rows) {
      std::string a = format(r.lambda_h), b = format(r.lambda_closed);
      a.resize(std::max<std::size_t>(a.size(), 23), ' ');
      b.resize(std::max<std::size_t>(b.size(), 23), ' ');
      out << r.level << (r.level < 10 ? "      " : "     ") << a << "  " << b << "  " << format(r.relative_gap) << '\n';
    }
    out << (one_sided ? "one-sided from above" : "NOT one-sided") << '\n';
  }
  return one_sided ? Ok : VerificationFailure;
}

inline TriMesh read_mesh(const RunConfig& c, std::ostream& err) {
  std::vector<std::string> warnings;
  auto m = io::load_mesh(c.mesh_path, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << '\n';
  return m;
}

inline int run_simplify(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto mesh = read_mesh(c, err);
  const auto data = io::simplify(io::load_data(c.data_path), mesh);
  io::save_data(data, c.out_path);
  out << "wrote " << c.out_path << ": " << mesh.cells.size() << " cell means, " << mesh.boundary.size()
      << " edge means\n";
  return Ok;
}

inline int run_estimate(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const auto mesh = read_mesh(c, err);
  auto data = io::load_data(c.data_path);
  if (c.phi != "auto") {
    const io::Json doc = io::detail::parse_json(io::detail::read_file(c.phi), c.phi);
    io::Json wrapped;
    wrapped["phi"] = doc.is_object() && doc.contains("phi") ? doc["phi"] : doc;
    data.phi = io::data_from_json(wrapped).phi;
  }
  const FieldSet fs = io::to_field_set(data, mesh);
  io::Json j;
  const auto rep = estimate(mesh, fs, c.tolerance);
  j["report"] = io::to_json(rep);
  std::optional<VerificationResult> v;
  if (c.verify) {
    v = verify_estimate(mesh, fs, c.refine, c.tolerance);
    j["verification"] = io::to_json(*v);
  }
  io::emit_report(j, c.out_path);
  out << "bound " << format(rep.bound) << '\n';
  out << "D1 " << format(rep.D1) << ", D2 " << format(rep.D2) << ", I0 " << format(rep.I0) << ", I1 "
      << format(rep.I1) << ", I2 " << format(rep.I2) << ", c " << format(rep.c) << '\n';
  if (rep.simplified_bound) out << "simplified bound " << format(*rep.simplified_bound) << '\n';
  if (v) {
    out << "true error " << format(v->true_error) << ", efficiency " << format(v->efficiency_index) << ", delta_h "
        << format(v->delta_h) << '\n';
    out << (v->guaranteed ? "guaranteed" : "NOT guaranteed") << '\n';
    if (!v->guaranteed) return VerificationFailure;
  }
  return Ok;
}

}  // namespace detail

/// Runs the tool on @p argv (argv[0] is the program name).
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Sharp Poincare-type constants and guaranteed bounds for simplified elliptic problems", "poincare"};
  app.require_subcommand(1);
  RunConfig c;

  auto domain_options = [&](CLI::App* s) {
    s->add_option("--shape", c.shape, "rect, box or tri")->required()->check(CLI::IsMember({"rect", "box", "tri"}));
    s->add_option("--dims", c.dims, "h1[,h2[,h3]]; for tri the length of the selected side case")
        ->required()
        ->delimiter(',');
    s->add_option("--gamma", c.gamma, "side, full, leg, legs or hyp")
        ->required()
        ->check(CLI::IsMember({"side", "full", "leg", "legs", "hyp"}));
    s->add_option("--kind", c.kind, "c1, c2, cp, cf or pw")->required()->check(CLI::IsMember({"c1", "c2", "cp", "cf", "pw"}));
    s->add_flag("--json", c.json, "print JSON");
  };
  auto* constant = app.add_subcommand("constant", "closed-form sharp constant");
  domain_options(constant);
  auto* verify = app.add_subcommand("verify", "finite-element convergence table for a constant");
  domain_options(verify);
  verify->add_option("--levels", c.levels, "refinement levels a..b")->capture_default_str();
  auto* simplify = app.add_subcommand("simplify", "replace f and F by cell and edge means");
  simplify->add_option("--mesh", c.mesh_path)->required()->check(CLI::ExistingFile);
  simplify->add_option("--data", c.data_path)->required()->check(CLI::ExistingFile);
  simplify->add_option("--out", c.out_path)->required();
  auto* est = app.add_subcommand("estimate", "guaranteed bound for the simplification error");
  est->add_option("--mesh", c.mesh_path)->required()->check(CLI::ExistingFile);
  est->add_option("--data", c.data_path)->required()->check(CLI::ExistingFile);
  est->add_option("--phi", c.phi, "auto or a file with the extension of u0 - u0_hat")->capture_default_str();
  est->add_option("--out", c.out_path)->required();
  est->add_flag("--verify", c.verify, "compare with finite-element solutions");
  est->add_option("--refine", c.refine, "refinement levels for --verify")->capture_default_str()->check(CLI::Range(2, 8));
  est->add_option("--tol", c.tolerance, "zero-mean tolerance")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? Ok : Usage;
  }
  if (c.phi != "auto" && !std::ifstream(c.phi)) {
    err << "--phi: " << c.phi << " is neither 'auto' nor a readable file\n";
    return Usage;
  }

  try {
    if (constant->parsed()) return detail::run_constant(c, out);
    if (verify->parsed()) return detail::run_verify(c, out);
    if (simplify->parsed()) return detail::run_simplify(c, out, err);
    return detail::run_estimate(c, out, err);
  } catch (const detail::UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return Usage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return Computation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return Computation;
  }
}

inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::vector<const char*> argv{"poincare"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace poincare::cli
