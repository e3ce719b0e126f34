#pragma once

// JSON mesh, data and report files.
//
// Mesh:  {"vertices": [[x, y], ...], "cells": [[i, j, k], ...],
//         "boundary": [{"edge": [i, j], "tag": "D" | "N"}, ...]}
// Data:  {"A": [[a11, a12], [a21, a22]], "f": v, "f_hat": v | "auto", "F": v,
//         "F_hat": v | "auto", "u0": v, "u0_hat": v, "phi": "auto" | v | {"nodal": [...]}}
// where a value v is a number, an expression string, or piecewise quadratic
// coefficients {"cells": [[c0, cx, cy, cxx, cxy, cyy], ...]} (cell fields and
// A entries) or {"edges": [...]} (boundary fields, in boundary entry order).

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "poincare/constants.hpp"
#include "poincare/eigen_oracle.hpp"
#include "poincare/error.hpp"
#include "poincare/estimator.hpp"
#include "poincare/expression.hpp"
#include "poincare/jet.hpp"
#include "poincare/mesh.hpp"

namespace poincare::io {

using Json = nlohmann::ordered_json;

namespace detail {

[[noreturn]] inline void schema(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::SchemaError, path + ": " + what);
}

inline const Json& member(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) schema(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema(path + "." + key, "missing");
  return *it;
}

inline double number(const Json& j, const std::string& path) {
  if (!j.is_number()) schema(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) schema(path, "expected a finite number");
  return v;
}

inline int index(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) schema(path, "expected an integer index");
  return j.get<int>();
}

inline const Json& array(const Json& j, const std::string& path, std::optional<std::size_t> size = {}) {
  if (!j.is_array()) schema(path, "expected an array");
  if (size && j.size() != *size) schema(path, "expected " + std::to_string(*size) + " entries, got " + std::to_string(j.size()));
  return j;
}

inline std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::SchemaError, path + ": cannot open file");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline Json parse_json(const std::string& text, const std::string& name) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::SchemaError, name + ": " + e.what());
  }
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::SchemaError, path + ": cannot write file");
  out << text << '\n';
}

}  // namespace detail

/// A double that survives JSON: finite values as numbers, others as strings.
inline Json encode(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

inline double decode(const Json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  detail::schema(path, "expected a number");
}

// ---------------------------------------------------------------------------
// Meshes

/**
 * Reads a mesh document. Clockwise cells are reoriented, with a message
 * appended to @p warnings. Throws SchemaError naming the offending field, in
 * particular for boundary edges without a tag.
 */
inline TriMesh mesh_from_json(const Json& j, std::vector<std::string>* warnings = nullptr) {
  TriMesh m;
  const auto& vs = detail::array(detail::member(j, "vertices", "mesh"), "mesh.vertices");
  for (std::size_t i = 0; i < vs.size(); ++i) {
    const auto p = detail::at("mesh.vertices", i);
    const auto& v = detail::array(vs[i], p, 2);
    m.vertices.push_back({detail::number(v[0], p + "[0]"), detail::number(v[1], p + "[1]")});
  }
  const int nv = static_cast<int>(m.vertices.size());
  auto vertex = [&](const Json& x, const std::string& p) {
    const int k = detail::index(x, p);
    if (k < 0 || k >= nv) detail::schema(p, "vertex index " + std::to_string(k) + " out of range");
    return k;
  };
  const auto& cs = detail::array(detail::member(j, "cells", "mesh"), "mesh.cells");
  for (std::size_t c = 0; c < cs.size(); ++c) {
    const auto p = detail::at("mesh.cells", c);
    const auto& t = detail::array(cs[c], p, 3);
    Cell cell{vertex(t[0], p + "[0]"), vertex(t[1], p + "[1]"), vertex(t[2], p + "[2]")};
    if (signed_area(m.vertices[cell[0]], m.vertices[cell[1]], m.vertices[cell[2]]) < 0.0) {
      std::swap(cell[1], cell[2]);
      if (warnings) warnings->push_back(p + ": clockwise cell reoriented");
    }
    m.cells.push_back(cell);
  }
  const auto& bs = detail::array(detail::member(j, "boundary", "mesh"), "mesh.boundary");
  for (std::size_t i = 0; i < bs.size(); ++i) {
    const auto p = detail::at("mesh.boundary", i);
    const auto& e = detail::array(detail::member(bs[i], "edge", p), p + ".edge", 2);
    BoundaryEdge<BoundaryTag> be{{vertex(e[0], p + ".edge[0]"), vertex(e[1], p + ".edge[1]")}, BoundaryTag::Dirichlet};
    auto it = bs[i].find("tag");
    if (it == bs[i].end())
      detail::schema(p + ".tag", "missing for edge [" + std::to_string(be.v[0]) + ", " + std::to_string(be.v[1]) + "]");
    if (*it == "D") be.tag = BoundaryTag::Dirichlet;
    else if (*it == "N") be.tag = BoundaryTag::Neumann;
    else detail::schema(p + ".tag", "expected \"D\" or \"N\"");
    m.boundary.push_back(be);
  }

  // every edge owned by one cell needs a tag
  std::unordered_map<std::uint64_t, int> count;
  for (const auto& t : m.cells)
    for (int k = 0; k < 3; ++k) {
      const auto e = local_edge(t, k);
      ++count[poincare::detail::edge_key(e[0], e[1])];
    }
  std::unordered_map<std::uint64_t, int> listed;
  for (const auto& b : m.boundary) ++listed[poincare::detail::edge_key(b.v[0], b.v[1])];
  for (const auto& t : m.cells)
    for (int k = 0; k < 3; ++k) {
      const auto e = local_edge(t, k);
      const auto key = poincare::detail::edge_key(e[0], e[1]);
      if (count[key] == 1 && !listed.count(key))
        detail::schema("mesh.boundary", "boundary edge [" + std::to_string(std::min(e[0], e[1])) + ", " +
                                            std::to_string(std::max(e[0], e[1])) + "] has no tag");
    }
  validate_mesh(m);
  return m;
}

inline Json to_json(const TriMesh& m) {
  Json j;
  j["vertices"] = Json::array();
  for (const auto& p : m.vertices) j["vertices"].push_back({p[0], p[1]});
  j["cells"] = Json::array();
  for (const auto& c : m.cells) j["cells"].push_back({c[0], c[1], c[2]});
  j["boundary"] = Json::array();
  for (const auto& b : m.boundary) j["boundary"].push_back({{"edge", {b.v[0], b.v[1]}}, {"tag", to_string(b.tag)}});
  return j;
}

inline TriMesh load_mesh(const std::string& path, std::vector<std::string>* warnings = nullptr) {
  return mesh_from_json(detail::parse_json(detail::read_file(path), path), warnings);
}

inline void save_mesh(const TriMesh& m, const std::string& path) { detail::write_file(path, to_json(m).dump(2)); }

inline bool operator==(const TriMesh& a, const TriMesh& b) {
  if (a.vertices != b.vertices || a.cells != b.cells || a.boundary.size() != b.boundary.size()) return false;
  for (std::size_t i = 0; i < a.boundary.size(); ++i)
    if (a.boundary[i].v != b.boundary[i].v || a.boundary[i].tag != b.boundary[i].tag) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Data

/// c0 + cx x + cy y + cxx x^2 + cxy x y + cyy y^2
using Quadratic = std::array<double, 6>;

inline double eval(const Quadratic& q, const Point& p) {
  const double x = p[0], y = p[1];
  return q[0] + q[1] * x + q[2] * y + q[3] * x * x + q[4] * x * y + q[5] * y * y;
}

struct FieldSpec {
  enum class Kind { Auto, Expression, PerCell, PerEdge };
  Kind kind = Kind::Auto;
  Expr expression;
  std::vector<Quadratic> pieces;

  static FieldSpec automatic() { return {}; }
  static FieldSpec expr(Expr e) { return {Kind::Expression, std::move(e), {}}; }
  static FieldSpec constant(double v) { return expr(poincare::expr::number(v)); }
};

struct PhiSpec {
  enum class Kind { Auto, Expression, Nodal };
  Kind kind = Kind::Auto;
  Expr expression;
  std::vector<double> nodal;
};

/// Contents of a data file; absent members take the FieldSet defaults.
struct DataSpec {
  std::optional<std::array<FieldSpec, 4>> A;  ///< a11, a12, a21, a22
  std::optional<FieldSpec> f, f_hat, F, F_hat, u0, u0_hat;
  PhiSpec phi;
};

namespace detail {

inline FieldSpec field_from_json(const Json& j, const std::string& path, bool allow_auto, bool cell_field) {
  if (j.is_number()) return FieldSpec::constant(number(j, path));
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "auto") {
      if (!allow_auto) schema(path, "\"auto\" is not allowed here");
      return FieldSpec::automatic();
    }
    try {
      return FieldSpec::expr(parse_expression(s));
    } catch (const Error& e) {
      throw Error(e.code(), path + ": " + e.what());
    }
  }
  if (j.is_object()) {
    const char* key = cell_field ? "cells" : "edges";
    auto it = j.find(key);
    if (it == j.end() || j.size() != 1) schema(path, std::string("expected {\"") + key + "\": [...]}");
    const auto p = path + "." + key;
    const auto& arr = array(*it, p);
    FieldSpec s{cell_field ? FieldSpec::Kind::PerCell : FieldSpec::Kind::PerEdge, nullptr, {}};
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const auto pi = at(p, i);
      Quadratic q{};
      if (arr[i].is_number()) {
        q[0] = number(arr[i], pi);
      } else {
        const auto& c = array(arr[i], pi);
        if (c.empty() || c.size() > 6) schema(pi, "expected 1 to 6 coefficients");
        for (std::size_t k = 0; k < c.size(); ++k) q[k] = number(c[k], at(pi, k));
      }
      s.pieces.push_back(q);
    }
    return s;
  }
  schema(path, "expected a number, an expression string or piecewise coefficients");
}

inline Json field_to_json(const FieldSpec& s) {
  switch (s.kind) {
    case FieldSpec::Kind::Auto: return "auto";
    case FieldSpec::Kind::Expression:
      if (const auto* n = std::get_if<ExprNode::Number>(&s.expression->node)) return n->value;
      return print(s.expression);
    default: {
      Json arr = Json::array();
      for (const auto& q : s.pieces) {
        if (std::all_of(q.begin() + 1, q.end(), [](double c) { return c == 0.0; })) arr.push_back(q[0]);
        else arr.push_back(Json(q));
      }
      return Json{{s.kind == FieldSpec::Kind::PerCell ? "cells" : "edges", arr}};
    }
  }
}

inline bool same(const Expr& a, const Expr& b) { return (!a && !b) || (a && b && equal(a, b)); }

}  // namespace detail

inline bool operator==(const FieldSpec& a, const FieldSpec& b) {
  return a.kind == b.kind && detail::same(a.expression, b.expression) && a.pieces == b.pieces;
}
inline bool operator==(const PhiSpec& a, const PhiSpec& b) {
  return a.kind == b.kind && detail::same(a.expression, b.expression) && a.nodal == b.nodal;
}
inline bool operator==(const DataSpec& a, const DataSpec& b) {
  return a.A == b.A && a.f == b.f && a.f_hat == b.f_hat && a.F == b.F && a.F_hat == b.F_hat && a.u0 == b.u0 &&
         a.u0_hat == b.u0_hat && a.phi == b.phi;
}

inline DataSpec data_from_json(const Json& j) {
  if (!j.is_object()) detail::schema("data", "expected an object");
  static const char* known[] = {"A", "f", "f_hat", "F", "F_hat", "u0", "u0_hat", "phi"};
  for (const auto& [key, _] : j.items())
    if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return key == k; }) == std::end(known))
      detail::schema("data." + key, "unknown field");
  DataSpec d;
  if (j.contains("A")) {
    const auto& a = detail::array(j["A"], "data.A", 2);
    std::array<FieldSpec, 4> entries;
    for (int r = 0; r < 2; ++r) {
      const auto pr = detail::at("data.A", r);
      const auto& row = detail::array(a[r], pr, 2);
      for (int c = 0; c < 2; ++c) entries[2 * r + c] = detail::field_from_json(row[c], detail::at(pr, c), false, true);
    }
    d.A = entries;
  }
  auto field = [&](const char* key, bool allow_auto, bool cell) -> std::optional<FieldSpec> {
    if (!j.contains(key)) return std::nullopt;
    return detail::field_from_json(j[key], std::string("data.") + key, allow_auto, cell);
  };
  d.f = field("f", false, true);
  d.f_hat = field("f_hat", true, true);
  d.F = field("F", false, false);
  d.F_hat = field("F_hat", true, false);
  d.u0 = field("u0", false, false);
  d.u0_hat = field("u0_hat", false, false);
  if (j.contains("phi")) {
    const auto& p = j["phi"];
    if (p.is_object()) {
      const auto& nodal = detail::array(detail::member(p, "nodal", "data.phi"), "data.phi.nodal");
      d.phi.kind = PhiSpec::Kind::Nodal;
      for (std::size_t i = 0; i < nodal.size(); ++i) d.phi.nodal.push_back(detail::number(nodal[i], detail::at("data.phi.nodal", i)));
    } else {
      const auto s = detail::field_from_json(p, "data.phi", true, true);
      if (s.kind == FieldSpec::Kind::Expression) {
        d.phi.kind = PhiSpec::Kind::Expression;
        d.phi.expression = s.expression;
      }
    }
  }
  return d;
}

inline Json to_json(const DataSpec& d) {
  Json j = Json::object();
  if (d.A) {
    const auto& a = *d.A;
    j["A"] = Json::array({Json::array({detail::field_to_json(a[0]), detail::field_to_json(a[1])}),
                          Json::array({detail::field_to_json(a[2]), detail::field_to_json(a[3])})});
  }
  auto put = [&](const char* key, const std::optional<FieldSpec>& s) {
    if (s) j[key] = detail::field_to_json(*s);
  };
  put("f", d.f);
  put("f_hat", d.f_hat);
  put("F", d.F);
  put("F_hat", d.F_hat);
  put("u0", d.u0);
  put("u0_hat", d.u0_hat);
  switch (d.phi.kind) {
    case PhiSpec::Kind::Auto: j["phi"] = "auto"; break;
    case PhiSpec::Kind::Expression: j["phi"] = print(d.phi.expression); break;
    case PhiSpec::Kind::Nodal: j["phi"] = Json{{"nodal", d.phi.nodal}}; break;
  }
  return j;
}

inline DataSpec load_data(const std::string& path) {
  return data_from_json(detail::parse_json(detail::read_file(path), path));
}

inline void save_data(const DataSpec& d, const std::string& path) { detail::write_file(path, to_json(d).dump(2)); }

namespace detail {

inline void check_pieces(const FieldSpec& s, std::size_t n, const std::string& name) {
  if (s.pieces.size() != n)
    schema(name, "expected " + std::to_string(n) + " pieces, got " + std::to_string(s.pieces.size()));
}

inline CellField cell_field(const FieldSpec& s, const TriMesh& m, const std::string& name) {
  switch (s.kind) {
    case FieldSpec::Kind::Auto: return {};
    case FieldSpec::Kind::Expression:
      return [e = s.expression](std::size_t, const Point& x) { return evaluate(e, x[0], x[1]); };
    case FieldSpec::Kind::PerCell:
      check_pieces(s, m.cells.size(), name);
      return [p = std::make_shared<std::vector<Quadratic>>(s.pieces)](std::size_t c, const Point& x) {
        return eval((*p)[c], x);
      };
    case FieldSpec::Kind::PerEdge: break;
  }
  schema(name, "a cell field cannot be given per edge");
}

inline EdgeField edge_field(const FieldSpec& s, const TriMesh& m, const std::string& name) {
  switch (s.kind) {
    case FieldSpec::Kind::Auto: return {};
    case FieldSpec::Kind::Expression:
      return [e = s.expression](std::size_t, const Point& x) { return evaluate(e, x[0], x[1]); };
    case FieldSpec::Kind::PerEdge:
      check_pieces(s, m.boundary.size(), name);
      return [p = std::make_shared<std::vector<Quadratic>>(s.pieces)](std::size_t e, const Point& x) {
        return eval((*p)[e], x);
      };
    case FieldSpec::Kind::PerCell: break;
  }
  schema(name, "a boundary field cannot be given per cell");
}

}  // namespace detail

/// The FieldSet described by @p d on @p m.
inline FieldSet to_field_set(const DataSpec& d, const TriMesh& m) {
  FieldSet fs;
  if (d.A) {
    std::array<CellField, 4> a;
    const char* names[4] = {"data.A[0][0]", "data.A[0][1]", "data.A[1][0]", "data.A[1][1]"};
    for (int k = 0; k < 4; ++k) a[k] = detail::cell_field((*d.A)[k], m, names[k]);
    fs.A = [a](std::size_t c, const Point& x) {
      Eigen::Matrix2d r;
      r << a[0](c, x), a[1](c, x), a[2](c, x), a[3](c, x);
      return r;
    };
  }
  if (d.f) fs.f = detail::cell_field(*d.f, m, "data.f");
  if (d.f_hat) fs.f_hat = detail::cell_field(*d.f_hat, m, "data.f_hat");
  if (d.F) fs.F = detail::edge_field(*d.F, m, "data.F");
  if (d.F_hat) fs.F_hat = detail::edge_field(*d.F_hat, m, "data.F_hat");
  if (d.u0) fs.u0 = detail::edge_field(*d.u0, m, "data.u0");
  if (d.u0_hat) fs.u0_hat = detail::edge_field(*d.u0_hat, m, "data.u0_hat");
  switch (d.phi.kind) {
    case PhiSpec::Kind::Auto: break;
    case PhiSpec::Kind::Expression: {
      auto e = d.phi.expression;
      fs.phi = PhiField{[e](std::size_t, const Point& x) { return evaluate(e, x[0], x[1]); },
                        [e](std::size_t, const Point& x) {
                          const auto j = evaluate(e, Jet<2>::variable(x[0], 0), Jet<2>::variable(x[1], 1));
                          return Eigen::Vector2d(j.g[0], j.g[1]);
                        }};
      break;
    }
    case PhiSpec::Kind::Nodal:
      if (d.phi.nodal.size() != m.vertices.size())
        detail::schema("data.phi.nodal", "expected one value per vertex (" + std::to_string(m.vertices.size()) + ")");
      fs.phi = p1_field(m, Eigen::Map<const fem::Vec>(d.phi.nodal.data(), static_cast<Eigen::Index>(d.phi.nodal.size())));
      break;
  }
  return fs;
}

/// @p d with f_hat and F_hat replaced by cell and edge means of f and F.
inline DataSpec simplify(const DataSpec& d, const TriMesh& m) {
  const FieldSet fs = to_field_set(d, m);
  if (!fs.f) throw Error(ErrorCode::DomainError, "the source term f is required");
  const auto s = simplify_fields(m, fs.f, fs.F);
  DataSpec out = d;
  out.f_hat = FieldSpec{FieldSpec::Kind::PerCell, nullptr, {}};
  for (double v : s.f_mean) out.f_hat->pieces.push_back({v, 0, 0, 0, 0, 0});
  out.F_hat = FieldSpec{FieldSpec::Kind::PerEdge, nullptr, {}};
  for (double v : s.F_mean) out.F_hat->pieces.push_back({v, 0, 0, 0, 0, 0});
  return out;
}

// ---------------------------------------------------------------------------
// Reports

inline Json to_json(const SimplificationReport& r) {
  Json j;
  j["D1"] = encode(r.D1);
  j["D2"] = encode(r.D2);
  j["I0"] = encode(r.I0);
  j["I1"] = encode(r.I1);
  j["I2"] = encode(r.I2);
  j["rho1"] = encode(r.rho1);
  j["rho2"] = encode(r.rho2);
  j["c"] = encode(r.c);
  j["phi_energy"] = encode(r.phi_energy);
  j["bound"] = encode(r.bound);
  j["simplified_bound"] = r.simplified_bound ? encode(*r.simplified_bound) : Json(nullptr);
  j["D1_friedrichs"] = r.D1_friedrichs ? encode(*r.D1_friedrichs) : Json(nullptr);
  j["per_cell"] = Json::array();
  for (const auto& t : r.per_cell)
    j["per_cell"].push_back({{"cell", t.cell},
                             {"class", to_string(t.cls)},
                             {"constant", encode(t.constant)},
                             {"contribution", encode(t.contribution)},
                             {"trace_term", encode(t.trace_term)},
                             {"i0_term", encode(t.i0_term)}});
  return j;
}

inline SimplificationReport report_from_json(const Json& j) {
  SimplificationReport r;
  auto num = [&](const char* key) { return decode(detail::member(j, key, "report"), std::string("report.") + key); };
  auto opt = [&](const char* key) -> std::optional<double> {
    const auto& v = detail::member(j, key, "report");
    if (v.is_null()) return std::nullopt;
    return decode(v, std::string("report.") + key);
  };
  r.D1 = num("D1");
  r.D2 = num("D2");
  r.I0 = num("I0");
  r.I1 = num("I1");
  r.I2 = num("I2");
  r.rho1 = num("rho1");
  r.rho2 = num("rho2");
  r.c = num("c");
  r.phi_energy = num("phi_energy");
  r.bound = num("bound");
  r.simplified_bound = opt("simplified_bound");
  r.D1_friedrichs = opt("D1_friedrichs");
  const auto& cells = detail::array(detail::member(j, "per_cell", "report"), "report.per_cell");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto p = detail::at("report.per_cell", i);
    const auto& c = cells[i];
    CellTerm t{};
    const auto& id = detail::member(c, "cell", p);
    if (!id.is_number_unsigned()) detail::schema(p + ".cell", "expected a cell index");
    t.cell = id.get<std::size_t>();
    const auto& cls = detail::member(c, "class", p);
    if (cls == "interior") t.cls = CellClass::Interior;
    else if (cls == "dirichlet") t.cls = CellClass::DirichletTouching;
    else if (cls == "neumann") t.cls = CellClass::NeumannTouching;
    else detail::schema(p + ".class", "expected interior, dirichlet or neumann");
    t.constant = decode(detail::member(c, "constant", p), p + ".constant");
    t.contribution = decode(detail::member(c, "contribution", p), p + ".contribution");
    t.trace_term = decode(detail::member(c, "trace_term", p), p + ".trace_term");
    t.i0_term = decode(detail::member(c, "i0_term", p), p + ".i0_term");
    r.per_cell.push_back(t);
  }
  return r;
}

inline Json to_json(const VerificationResult& v) {
  Json j;
  j["bound"] = encode(v.bound);
  j["simplified_bound"] = v.simplified_bound ? encode(*v.simplified_bound) : Json(nullptr);
  j["true_error"] = encode(v.true_error);
  j["extrapolated"] = encode(v.extrapolated);
  j["delta_h"] = encode(v.delta_h);
  j["efficiency_index"] = encode(v.efficiency_index);
  j["guaranteed"] = v.guaranteed;
  j["levels"] = v.levels;
  j["level_errors"] = Json::array();
  for (double e : v.level_errors) j["level_errors"].push_back(encode(e));
  return j;
}

inline Json to_json(const ConstantResult& r) {
  Json j;
  j["kind"] = to_string(r.kind);
  j["value"] = encode(r.value);
  j["eigenvalue"] = encode(r.eigenvalue);
  j["roots"] = Json::array();
  for (const auto& root : r.roots)
    j["roots"].push_back({{"name", root.name}, {"value", encode(root.value)}, {"residual", encode(root.residual)}});
  return j;
}

inline Json to_json(const std::vector<ConvergenceRow>& rows) {
  Json j = Json::array();
  for (const auto& r : rows)
    j.push_back({{"level", r.level},
                 {"lambda_h", encode(r.lambda_h)},
                 {"lambda_closed", encode(r.lambda_closed)},
                 {"relative_gap", encode(r.relative_gap)}});
  return j;
}

/// Writes @p j to @p path; doubles are printed in the shortest form that reads back bit-exactly.
inline void emit_report(const Json& j, const std::string& path) { detail::write_file(path, j.dump(2)); }

inline void emit_report(const SimplificationReport& r, const std::string& path) { emit_report(to_json(r), path); }

inline SimplificationReport load_report(const std::string& path) {
  const Json j = detail::parse_json(detail::read_file(path), path);
  return report_from_json(j.contains("report") ? j["report"] : j);
}

}  // namespace poincare::io
