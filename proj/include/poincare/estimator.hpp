#pragma once

// Guaranteed bound on the energy-norm difference between the solutions of an
// elliptic problem and of its simplified counterpart.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "poincare/cell_constants.hpp"
#include "poincare/error.hpp"
#include "poincare/fem.hpp"
#include "poincare/mesh.hpp"
#include "poincare/quadrature.hpp"

namespace poincare {

/// Scalar field on Omega; the cell index disambiguates piecewise data.
using CellField = std::function<double(std::size_t cell, const Point& x)>;
/// Scalar field on the boundary, addressed by boundary entry.
using EdgeField = std::function<double(std::size_t edge, const Point& x)>;
using MatrixField = std::function<Eigen::Matrix2d(std::size_t cell, const Point& x)>;
using GradientField = std::function<Eigen::Vector2d(std::size_t cell, const Point& x)>;

struct PhiField {
  CellField value;
  GradientField grad;
};

/**
 * Problem data. Empty members take defaults: A = I; F, u0 = 0; f_hat, F_hat
 * are replaced by cell and edge means (see with_auto_simplification);
 * u0_hat = u0; phi is the discrete A-harmonic extension.
 */
struct FieldSet {
  MatrixField A;
  CellField f, f_hat;
  EdgeField F, F_hat;
  EdgeField u0, u0_hat;
  std::optional<PhiField> phi;
};

/// Partner of a cell in the bound: its class and which edges enter which term.
struct CellPlan {
  CellClass cls = CellClass::Interior;
  std::vector<int> gamma_edges;  ///< boundary entries of Gamma^D_i or Gamma^N_i
  double constant = 0.0;         ///< weight in D1
  std::vector<int> mean_edges;   ///< Dirichlet cells: entries averaged in I0
  std::optional<double> c2_joint;  ///< Neumann cells: C2(T, Gamma^N_i) if mappable
  std::vector<double> c2_edge;     ///< Neumann cells: C2(T, E) per edge in gamma_edges
  std::optional<double> cf;        ///< Dirichlet cells: CF(T, Gamma^D_i)
};

struct CellTerm {
  std::size_t cell;
  CellClass cls;
  double constant;      ///< weight in D1
  double contribution;  ///< constant * |f - f_hat|_{T}
  double trace_term;    ///< the cell's share of D2
  double i0_term;
};

struct SimplificationReport {
  double D1 = 0.0, D2 = 0.0;
  double I0 = 0.0, I1 = 0.0, I2 = 0.0;
  double rho1 = 0.0, rho2 = 0.0;
  double c = 0.0;
  double phi_energy = 0.0;
  double bound = 0.0;
  /// (D1 + D2)/sqrt(c) with Friedrichs weights on Dirichlet cells, when u0_hat = u0.
  std::optional<double> simplified_bound;
  std::optional<double> D1_friedrichs;
  std::vector<CellTerm> per_cell;
};

struct CompatibilityReport {
  bool pass = true;
  double tolerance = 0.0;
  std::vector<double> cell_discrepancy;  ///< |<f - f_hat>_T| on interior and Neumann cells, else 0
  std::vector<double> gamma_discrepancy;  ///< |<F - F_hat>_{Gamma^N_i}| per cell, else 0
  std::vector<double> edge_discrepancy;   ///< |<F - F_hat>_E| per boundary entry on Gamma^N, else 0
  std::vector<std::size_t> failing_cells;
};

struct DTerms {
  double D1 = 0.0, D2 = 0.0;
  std::vector<double> d1, d2;  ///< per-cell terms; D^2 is the sum of their squares
};

struct ITerms {
  double I0 = 0.0, I1 = 0.0, I2 = 0.0;
  std::vector<double> i0;
};

namespace detail {

inline Eigen::Matrix2d eval_A(const FieldSet& fs, std::size_t c, const Point& x) {
  return fs.A ? fs.A(c, x) : Eigen::Matrix2d::Identity();
}
inline double eval_or_zero(const EdgeField& g, std::size_t e, const Point& x) { return g ? g(e, x) : 0.0; }
inline double eval_u0_hat(const FieldSet& fs, std::size_t e, const Point& x) {
  return fs.u0_hat ? fs.u0_hat(e, x) : eval_or_zero(fs.u0, e, x);
}

template <class Tag>
std::array<Point, 3> corners(const SimplicialMesh<Tag>& m, std::size_t c) {
  return cell_triangle(m, c);
}

// Rule for data integrals: collapsed Gauss of degree 10.
inline const std::vector<quad::TriNode>& data_rule() {
  static const auto rule = quad::collapsed_triangle_rule(6);
  return rule;
}

template <class Tag, class G>
double cell_integral(const SimplicialMesh<Tag>& m, std::size_t c, G&& g,
                     const std::vector<quad::TriNode>& rule = data_rule()) {
  const auto t = corners(m, c);
  double s = 0.0;
  for (const auto& q : rule) s += q.weight * g(quad::map_bary(t[0], t[1], t[2], q.bary));
  return s * cell_area(m, c);
}

template <class Tag, class G>
double edge_integral(const SimplicialMesh<Tag>& m, std::size_t e, G&& g,
                     const std::vector<quad::LineNode>& rule = quad::edge_rule()) {
  const auto& p = m.vertices[m.boundary[e].v[0]];
  const auto& q = m.vertices[m.boundary[e].v[1]];
  double s = 0.0;
  for (const auto& n : rule) s += n.weight * g(Point{p[0] + n.t * (q[0] - p[0]), p[1] + n.t * (q[1] - p[1])});
  return s * distance(p, q);
}

template <class Tag>
double edge_length(const SimplicialMesh<Tag>& m, std::size_t e) {
  return distance(m.vertices[m.boundary[e].v[0]], m.vertices[m.boundary[e].v[1]]);
}

inline double min_eigenvalue(const Eigen::Matrix2d& A) {
  const double a = A(0, 0), d = A(1, 1), b = 0.5 * (A(0, 1) + A(1, 0));
  return 0.5 * (a + d) - std::sqrt(0.25 * (a - d) * (a - d) + b * b);
}

// Cell owning each boundary entry, and its local edge index.
template <class Tag>
std::vector<std::array<int, 2>> boundary_owner(const SimplicialMesh<Tag>& m) {
  std::vector<std::array<int, 2>> owner(m.boundary.size(), {-1, -1});
  const auto idx = boundary_edge_index(m);
  for (std::size_t c = 0; c < m.cells.size(); ++c)
    for (int k = 0; k < 3; ++k)
      if (idx[c][k] >= 0) owner[idx[c][k]] = {static_cast<int>(c), k};
  return owner;
}

}  // namespace detail

/**
 * Interior, Dirichlet or Neumann class of every cell by its boundary edges.
 *
 * Contact with the boundary only at a vertex leaves a cell interior. Throws
 * MixedBoundaryCell, naming all offending cells, if a cell has edges on both
 * parts.
 */
inline std::vector<CellClass> classify_cells(const TriMesh& mesh) {
  validate_mesh(mesh);
  const auto idx = boundary_edge_index(mesh);
  std::vector<CellClass> cls(mesh.cells.size(), CellClass::Interior);
  std::vector<std::size_t> mixed;
  for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
    bool d = false, n = false;
    for (int k = 0; k < 3; ++k)
      if (idx[c][k] >= 0) (mesh.boundary[idx[c][k]].tag == BoundaryTag::Dirichlet ? d : n) = true;
    if (d && n) mixed.push_back(c);
    cls[c] = d ? CellClass::DirichletTouching : n ? CellClass::NeumannTouching : CellClass::Interior;
  }
  if (!mixed.empty()) {
    std::string ids;
    for (std::size_t i = 0; i < mixed.size(); ++i) ids += (i ? ", " : "") + std::to_string(mixed[i]);
    throw Error(ErrorCode::MixedBoundaryCell,
                "cells [" + ids + "] touch both the Dirichlet and the Neumann part; split them so that each "
                "cell meets only one part");
  }
  return cls;
}

/**
 * Constants of every cell. A Dirichlet cell whose two Gamma^D edges cannot be
 * mapped falls back to the single edge with the smaller C1, and I0 then uses
 * the mean over that edge only.
 */
inline std::vector<CellPlan> plan_cells(const TriMesh& mesh) {
  const auto cls = classify_cells(mesh);
  const auto idx = boundary_edge_index(mesh);
  std::vector<CellPlan> plans(mesh.cells.size());
  for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
    auto& p = plans[c];
    p.cls = cls[c];
    const Triangle t = cell_triangle(mesh, c);
    std::vector<int> local;
    for (int k = 0; k < 3; ++k)
      if (idx[c][k] >= 0) {
        local.push_back(k);
        p.gamma_edges.push_back(idx[c][k]);
      }
    switch (p.cls) {
      case CellClass::Interior: p.constant = poincare_cell_constant(t); break;
      case CellClass::NeumannTouching: {
        p.constant = poincare_cell_constant(t);
        if (local.size() <= 2) {
          try {
            p.c2_joint = cell_trace_constant(t, local);
          } catch (const Error& e) {
            if (e.code() != ErrorCode::UnmappableGammaPart) throw;
          }
        }
        for (int k : local) p.c2_edge.push_back(cell_trace_constant(t, {k}));
        break;
      }
      case CellClass::DirichletTouching: {
        std::optional<MappedConstant> joint;
        if (local.size() <= 2) {
          try {
            joint = mapped_constant(t, local, ConstantKind::C1);
          } catch (const Error& e) {
            if (e.code() != ErrorCode::UnmappableGammaPart) throw;
          }
        }
        if (joint) {
          p.constant = joint->value;
          p.mean_edges = p.gamma_edges;
        } else {
          std::size_t best = 0;
          double value = 0.0;
          for (std::size_t i = 0; i < local.size(); ++i) {
            const double v = mapped_constant(t, {local[i]}, ConstantKind::C1).value;
            if (i == 0 || v < value) {
              value = v;
              best = i;
            }
          }
          p.constant = value;
          p.mean_edges = {p.gamma_edges[best]};
        }
        // vanishing on more edges only lowers CF, so any subset of at most two edges is an upper bound
        double cf = mapped_constant(t, {local[0]}, ConstantKind::CF).value;
        for (std::size_t i = 0; i < local.size(); ++i)
          for (std::size_t j = i; j < local.size(); ++j) {
            std::vector<int> s{local[i]};
            if (j != i) s.push_back(local[j]);
            cf = std::min(cf, mapped_constant(t, s, ConstantKind::CF).value);
          }
        p.cf = cf;
        break;
      }
    }
  }
  return plans;
}

struct SimplifiedFields {
  std::vector<double> f_mean;  ///< per cell
  std::vector<double> F_mean;  ///< per boundary entry; zero off Gamma^N
  CellField f_hat;
  EdgeField F_hat;
};

/// Cellwise means of f and edgewise means of F on the Neumann edges.
inline SimplifiedFields simplify_fields(const TriMesh& mesh, const CellField& f, const EdgeField& F) {
  auto out = std::make_shared<SimplifiedFields>();
  out->f_mean.resize(mesh.cells.size(), 0.0);
  out->F_mean.resize(mesh.boundary.size(), 0.0);
  for (std::size_t c = 0; c < mesh.cells.size(); ++c)
    out->f_mean[c] = detail::cell_integral(mesh, c, [&](const Point& x) { return f(c, x); }) / cell_area(mesh, c);
  if (F)
    for (std::size_t e = 0; e < mesh.boundary.size(); ++e)
      if (mesh.boundary[e].tag == BoundaryTag::Neumann)
        out->F_mean[e] =
            detail::edge_integral(mesh, e, [&](const Point& x) { return F(e, x); }) / detail::edge_length(mesh, e);
  SimplifiedFields r{out->f_mean, out->F_mean, {}, {}};
  r.f_hat = [out](std::size_t c, const Point&) { return out->f_mean[c]; };
  r.F_hat = [out](std::size_t e, const Point&) { return out->F_mean[e]; };
  return r;
}

/// Replaces empty f_hat and F_hat by the means from simplify_fields.
inline FieldSet with_auto_simplification(const TriMesh& mesh, FieldSet fs) {
  if (!fs.f) throw Error(ErrorCode::DomainError, "the source term f is required");
  if (!fs.f_hat || !fs.F_hat) {
    auto s = simplify_fields(mesh, fs.f, fs.F);
    if (!fs.f_hat) fs.f_hat = s.f_hat;
    if (!fs.F_hat) fs.F_hat = s.F_hat;
  }
  return fs;
}

/**
 * Mean discrepancies of the simplified data. Passes iff every interior and
 * Neumann cell has |<f - f_hat>_T| <= tol (1 + |f|_Omega) and every Neumann
 * cell has |<F - F_hat>_{Gamma^N_i}| <= tol (1 + |F|_{Gamma^N}). Dirichlet
 * cells are not constrained.
 */
inline CompatibilityReport check_compatibility(const TriMesh& mesh, const std::vector<CellPlan>& plans,
                                               const FieldSet& fs, double tol = 1e-10) {
  CompatibilityReport rep;
  double f_norm2 = 0.0, F_norm2 = 0.0;
  for (std::size_t c = 0; c < mesh.cells.size(); ++c)
    f_norm2 += detail::cell_integral(mesh, c, [&](const Point& x) { return std::pow(fs.f(c, x), 2); });
  for (std::size_t e = 0; e < mesh.boundary.size(); ++e)
    if (mesh.boundary[e].tag == BoundaryTag::Neumann && fs.F)
      F_norm2 += detail::edge_integral(mesh, e, [&](const Point& x) { return std::pow(fs.F(e, x), 2); });
  const double tf = tol * (1.0 + std::sqrt(f_norm2)), tF = tol * (1.0 + std::sqrt(F_norm2));
  rep.tolerance = tf;
  rep.cell_discrepancy.assign(mesh.cells.size(), 0.0);
  rep.gamma_discrepancy.assign(mesh.cells.size(), 0.0);
  rep.edge_discrepancy.assign(mesh.boundary.size(), 0.0);
  auto edge_diff = [&](std::size_t e) {
    return detail::edge_integral(mesh, e, [&](const Point& x) {
      return detail::eval_or_zero(fs.F, e, x) - detail::eval_or_zero(fs.F_hat, e, x);
    });
  };
  for (std::size_t e = 0; e < mesh.boundary.size(); ++e)
    if (mesh.boundary[e].tag == BoundaryTag::Neumann)
      rep.edge_discrepancy[e] = std::abs(edge_diff(e)) / detail::edge_length(mesh, e);
  for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
    const auto& p = plans[c];
    if (p.cls == CellClass::DirichletTouching) continue;
    const double d =
        detail::cell_integral(mesh, c, [&](const Point& x) { return fs.f(c, x) - fs.f_hat(c, x); }) / cell_area(mesh, c);
    rep.cell_discrepancy[c] = std::abs(d);
    bool ok = std::abs(d) <= tf;
    if (p.cls == CellClass::NeumannTouching) {
      double sum = 0.0, len = 0.0;
      for (int e : p.gamma_edges) {
        sum += edge_diff(e);
        len += detail::edge_length(mesh, e);
      }
      rep.gamma_discrepancy[c] = std::abs(sum) / len;
      ok = ok && rep.gamma_discrepancy[c] <= tF;
    }
    if (!ok) {
      rep.pass = false;
      rep.failing_cells.push_back(c);
    }
  }
  return rep;
}

/**
 * D1 and D2. A Neumann cell contributes the smaller of
 * C2(T, Gamma^N_i) |F - F_hat|_{Gamma^N_i} (if the union is mappable) and
 * sum_E C2(T, E) |F - F_hat|_E (if F - F_hat has zero mean on each edge).
 *
 * Throws UnmappableGammaPart if neither form is available for some cell.
 */
inline DTerms compute_D(const TriMesh& mesh, const std::vector<CellPlan>& plans, const FieldSet& fs,
                        double edge_tol = 1e-10, bool friedrichs = false) {
  DTerms d;
  d.d1.assign(mesh.cells.size(), 0.0);
  d.d2.assign(mesh.cells.size(), 0.0);
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
    const auto& p = plans[c];
    const double n2 = detail::cell_integral(mesh, c, [&](const Point& x) { return std::pow(fs.f(c, x) - fs.f_hat(c, x), 2); });
    const double w = friedrichs && p.cf ? *p.cf : p.constant;
    d.d1[c] = w * std::sqrt(n2);
    s1 += d.d1[c] * d.d1[c];
    if (p.cls != CellClass::NeumannTouching) continue;
    double joint2 = 0.0, per_edge = 0.0;
    bool edges_zero = true;
    for (std::size_t i = 0; i < p.gamma_edges.size(); ++i) {
      const int e = p.gamma_edges[i];
      auto diff = [&](const Point& x) {
        return detail::eval_or_zero(fs.F, e, x) - detail::eval_or_zero(fs.F_hat, e, x);
      };
      const double ne2 = detail::edge_integral(mesh, e, [&](const Point& x) { return std::pow(diff(x), 2); });
      const double mean = detail::edge_integral(mesh, e, diff);
      joint2 += ne2;
      per_edge += p.c2_edge[i] * std::sqrt(ne2);
      if (std::abs(mean) > edge_tol * (1.0 + std::sqrt(ne2)) * std::sqrt(detail::edge_length(mesh, e)))
        edges_zero = false;
    }
    std::optional<double> term;
    if (p.c2_joint) term = *p.c2_joint * std::sqrt(joint2);
    if (edges_zero && p.gamma_edges.size() > 1) term = term ? std::min(*term, per_edge) : per_edge;
    if (!term)
      throw Error(ErrorCode::UnmappableGammaPart,
                  "cell " + std::to_string(c) + ": the Neumann edges cannot be mapped jointly and F - F_hat "
                  "does not have zero mean on each edge");
    d.d2[c] = *term;
    s2 += *term * *term;
  }
  d.D1 = std::sqrt(s1);
  d.D2 = std::sqrt(s2);
  return d;
}

/// Value and gradient of a P1 function given by nodal values on @p mesh.
template <class Tag>
PhiField p1_field(const SimplicialMesh<Tag>& mesh, const fem::Vec& nodal) {
  struct Data {
    std::vector<Cell> cells;
    std::vector<Point> vertices;
    std::vector<fem::P1Cell> geo;
    fem::Vec u;
  };
  auto d = std::make_shared<Data>();
  d->cells = mesh.cells;
  d->vertices = mesh.vertices;
  d->u = nodal;
  for (std::size_t c = 0; c < mesh.cells.size(); ++c) d->geo.push_back(fem::p1_cell(mesh, c));
  PhiField phi;
  phi.value = [d](std::size_t c, const Point& x) {
    const auto& t = d->cells[c];
    double s = 0.0;
    for (int i = 0; i < 3; ++i) {
      // barycentric coordinate i is affine with gradient grad[i] and value 1 at vertex i
      const auto& vi = d->vertices[t[i]];
      const double li = 1.0 + d->geo[c].grad[i].dot(Eigen::Vector2d(x[0] - vi[0], x[1] - vi[1]));
      s += d->u[t[i]] * li;
    }
    return s;
  };
  phi.grad = [d](std::size_t c, const Point&) {
    Eigen::Vector2d g = Eigen::Vector2d::Zero();
    for (int i = 0; i < 3; ++i) g += d->u[d->cells[c][i]] * d->geo[c].grad[i];
    return g;
  };
  return phi;
}

inline PhiField zero_phi() {
  return {[](std::size_t, const Point&) { return 0.0; },
          [](std::size_t, const Point&) { return Eigen::Vector2d::Zero().eval(); }};
}

/// Cell averages of A, the coefficient used by the P1 stiffness.
inline std::vector<fem::Mat2> cell_average_A(const TriMesh& mesh, const MatrixField& A) {
  std::vector<fem::Mat2> out;
  if (!A) return out;
  out.resize(mesh.cells.size());
  const auto& rule = quad::triangle_rule();
  for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
    const auto t = cell_triangle(mesh, c);
      fem::Mat2 s = fem::Mat2::Zero();
    for (const auto& q : rule) s += q.weight * A(c, quad::map_bary(t[0], t[1], t[2], q.bary));
    out[c] = s;
  }
  return out;
}

/// u0 - u0_hat at the nodes of the Dirichlet edges.
inline std::pair<std::vector<char>, fem::Vec> dirichlet_difference(const TriMesh& mesh, const FieldSet& fs) {
  auto on_d = [](const BoundaryEdge<BoundaryTag>& e) { return e.tag == BoundaryTag::Dirichlet; };
  const auto fixed = fem::boundary_nodes(mesh, on_d);
  fem::Vec g = fem::Vec::Zero(static_cast<Eigen::Index>(mesh.vertices.size()));
  for (std::size_t e = 0; e < mesh.boundary.size(); ++e) {
    if (!on_d(mesh.boundary[e])) continue;
    for (int v : mesh.boundary[e].v) {
      const auto& x = mesh.vertices[v];
      g[v] = detail::eval_or_zero(fs.u0, e, x) - detail::eval_u0_hat(fs, e, x);
    }
  }
  return {fixed, g};
}

/**
 * Discrete A-harmonic extension: the P1 function equal to u0 - u0_hat at the
 * Dirichlet nodes with the least energy. Zero when there is no Dirichlet part.
 */
inline PhiField default_phi(const TriMesh& mesh, const FieldSet& fs) {
  const auto [fixed, g] = dirichlet_difference(mesh, fs);
  if (std::none_of(fixed.begin(), fixed.end(), [](char c) { return c != 0; }) || g.cwiseAbs().maxCoeff() == 0.0)
    return p1_field(mesh, fem::Vec::Zero(g.size()));
  const auto K = fem::stiffness(mesh, cell_average_A(mesh, fs.A));
  return p1_field(mesh, fem::solve_dirichlet(K, fem::Vec::Zero(g.size()), fixed, g));
}

/// |||phi|||^2 = int A grad phi . grad phi.
inline double energy(const TriMesh& mesh, const FieldSet& fs, const PhiField& phi) {
  double s = 0.0;
  for (std::size_t c = 0; c < mesh.cells.size(); ++c)
    s += detail::cell_integral(mesh, c, [&](const Point& x) {
      const Eigen::Vector2d g = phi.grad(c, x);
      return g.dot(detail::eval_A(fs, c, x) * g);
    });
  return std::sqrt(std::max(s, 0.0));
}

/// Largest deviation of phi from u0 - u0_hat on the Dirichlet edges, relative to 1 + max|u0 - u0_hat|.
inline double trace_defect(const TriMesh& mesh, const FieldSet& fs, const PhiField& phi) {
  const auto owner = detail::boundary_owner(mesh);
  double defect = 0.0, scale = 0.0;
  std::vector<double> ts{0.0, 1.0};
  for (const auto& n : quad::edge_rule()) ts.push_back(n.t);
  for (std::size_t e = 0; e < mesh.boundary.size(); ++e) {
    if (mesh.boundary[e].tag != BoundaryTag::Dirichlet) continue;
    const auto& p = mesh.vertices[mesh.boundary[e].v[0]];
    const auto& q = mesh.vertices[mesh.boundary[e].v[1]];
    for (double t : ts) {
      const Point x{p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])};
      const double target = detail::eval_or_zero(fs.u0, e, x) - detail::eval_u0_hat(fs, e, x);
      defect = std::max(defect, std::abs(phi.value(owner[e][0], x) - target));
      scale = std::max(scale, std::abs(target));
    }
  }
  return defect / (1.0 + scale);
}

/**
 * I0, I1(phi), I2(phi). Throws TraceMismatch unless phi = u0 - u0_hat on the
 * Dirichlet edges to 1e-8.
 */
inline ITerms compute_I(const TriMesh& mesh, const std::vector<CellPlan>& plans, const FieldSet& fs,
                        const PhiField& phi, double trace_tol = 1e-8) {
  const double defect = trace_defect(mesh, fs, phi);
  if (defect > trace_tol)
    throw Error(ErrorCode::TraceMismatch, "phi differs from u0 - u0_hat on the Dirichlet part by " +
                                              std::to_string(defect) + " (relative)");
  ITerms r;
  r.i0.assign(mesh.cells.size(), 0.0);
  for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
    r.I1 += detail::cell_integral(mesh, c, [&](const Point& x) { return (fs.f(c, x) - fs.f_hat(c, x)) * phi.value(c, x); });
    const auto& p = plans[c];
    if (p.cls != CellClass::DirichletTouching) continue;
    double sum = 0.0, len = 0.0;
    for (int e : p.mean_edges) {
      sum += detail::edge_integral(mesh, e, [&](const Point& x) {
        return detail::eval_or_zero(fs.u0, e, x) - detail::eval_u0_hat(fs, e, x);
      });
      len += detail::edge_length(mesh, e);
    }
    const double df = detail::cell_integral(mesh, c, [&](const Point& x) { return fs.f(c, x) - fs.f_hat(c, x); });
    r.i0[c] = sum / len * df;
    r.I0 += r.i0[c];
  }
  const auto owner = detail::boundary_owner(mesh);
  for (std::size_t e = 0; e < mesh.boundary.size(); ++e)
    if (mesh.boundary[e].tag == BoundaryTag::Neumann)
      r.I2 += detail::edge_integral(mesh, e, [&](const Point& x) {
        return (detail::eval_or_zero(fs.F, e, x) - detail::eval_or_zero(fs.F_hat, e, x)) * phi.value(owner[e][0], x);
      });
  return r;
}

/// Smallest eigenvalue of A over the quadrature points of both rules, times (1 - 1e-12).
inline double ellipticity_constant(const TriMesh& mesh, const MatrixField& A) {
  if (!A) return 1.0 - 1e-12;
  double c = std::numeric_limits<double>::infinity();
  std::vector<quad::TriNode> rule = quad::triangle_rule();
  rule.insert(rule.end(), detail::data_rule().begin(), detail::data_rule().end());
  for (std::size_t k = 0; k < mesh.cells.size(); ++k) {
    const auto t = cell_triangle(mesh, k);
    for (const auto& q : rule) {
      const Eigen::Matrix2d a = A(k, quad::map_bary(t[0], t[1], t[2], q.bary));
      if (!a.allFinite() || std::abs(a(0, 1) - a(1, 0)) > 1e-12 * a.cwiseAbs().maxCoeff())
        throw Error(ErrorCode::DomainError, "A must be finite and symmetric");
      c = std::min(c, detail::min_eigenvalue(a));
    }
  }
  if (!(c > 0.0)) throw Error(ErrorCode::DomainError, "A is not uniformly elliptic");
  return c * (1.0 - 1e-12);
}

struct BoundInputs {
  double D1, D2, I0, I1, I2, c, phi_energy;
};

/**
 * rho1 = ((D1 + D2)/sqrt(c) + |||phi|||)/2, rho2 = I0 + I1 + I2 and
 * bound = rho1 + sqrt(rho2 + rho1^2).
 *
 * Throws NegativeRadicand if rho2 + rho1^2 is negative beyond rounding.
 */
inline SimplificationReport compute_bound(const BoundInputs& in) {
  if (!(in.c > 0.0)) throw Error(ErrorCode::DomainError, "ellipticity constant must be positive");
  SimplificationReport r;
  r.D1 = in.D1;
  r.D2 = in.D2;
  r.I0 = in.I0;
  r.I1 = in.I1;
  r.I2 = in.I2;
  r.c = in.c;
  r.phi_energy = in.phi_energy;
  r.rho1 = 0.5 * ((in.D1 + in.D2) / std::sqrt(in.c) + in.phi_energy);
  r.rho2 = in.I0 + in.I1 + in.I2;
  double radicand = r.rho2 + r.rho1 * r.rho1;
  const double scale = std::abs(in.I0) + std::abs(in.I1) + std::abs(in.I2) + r.rho1 * r.rho1;
  if (radicand < 0.0) {
    if (radicand < -1e-10 * scale)
      throw Error(ErrorCode::NegativeRadicand, "rho2 + rho1^2 = " + std::to_string(radicand));
    radicand = 0.0;
  }
  r.bound = r.rho1 + std::sqrt(radicand);
  return r;
}

/// True if u0_hat coincides with u0 on every Dirichlet edge quadrature point.
inline bool same_dirichlet_data(const TriMesh& mesh, const FieldSet& fs) {
  if (!fs.u0_hat) return true;
  for (std::size_t e = 0; e < mesh.boundary.size(); ++e) {
    if (mesh.boundary[e].tag != BoundaryTag::Dirichlet) continue;
    bool same = true;
    detail::edge_integral(mesh, e, [&](const Point& x) {
      if (detail::eval_or_zero(fs.u0, e, x) != fs.u0_hat(e, x)) same = false;
      return 0.0;
    });
    for (int v : mesh.boundary[e].v)
      if (detail::eval_or_zero(fs.u0, e, mesh.vertices[v]) != fs.u0_hat(e, mesh.vertices[v])) same = false;
    if (!same) return false;
  }
  return true;
}

/**
 * @brief The full bound for the simplification u -> u_hat on @p mesh.
 *
 * Empty f_hat / F_hat are replaced by means, phi defaults to the discrete
 * A-harmonic extension. Throws DomainError if the simplified data violate the
 * zero-mean conditions on interior and Neumann cells.
 */
inline SimplificationReport estimate(const TriMesh& mesh, const FieldSet& input, double compat_tol = 1e-10) {
  const FieldSet fs = with_auto_simplification(mesh, input);
  const auto plans = plan_cells(mesh);
  const auto compat = check_compatibility(mesh, plans, fs, compat_tol);
  if (!compat.pass)
    throw Error(ErrorCode::DomainError, "f_hat or F_hat violates the zero-mean condition on cell " +
                                            std::to_string(compat.failing_cells.front()));
  const PhiField phi = fs.phi ? *fs.phi : default_phi(mesh, fs);
  const auto D = compute_D(mesh, plans, fs);
  const auto I = compute_I(mesh, plans, fs, phi);
  const double c = ellipticity_constant(mesh, fs.A);
  auto rep = compute_bound({D.D1, D.D2, I.I0, I.I1, I.I2, c, energy(mesh, fs, phi)});
  if (same_dirichlet_data(mesh, fs)) {
    const auto DF = compute_D(mesh, plans, fs, 1e-10, true);
    rep.D1_friedrichs = DF.D1;
    rep.simplified_bound = (DF.D1 + DF.D2) / std::sqrt(c);
  }
  for (std::size_t k = 0; k < mesh.cells.size(); ++k)
    rep.per_cell.push_back({k, plans[k].cls, plans[k].constant, D.d1[k], D.d2[k], I.i0[k]});
  return rep;
}

struct VerificationResult {
  double bound = 0.0;
  std::optional<double> simplified_bound;
  double true_error = 0.0;     ///< |||u_h - u_hat_h||| on the finest mesh
  double extrapolated = 0.0;   ///< Richardson limit of the energy error
  double delta_h = 0.0;        ///< |extrapolated - true_error| / true_error
  double efficiency_index = 0.0;  ///< bound / true_error (infinite if the error vanishes and the bound does not)
  bool guaranteed = true;         ///< efficiency_index >= 1 - delta_h
  std::vector<double> level_errors;  ///< |||u_h - u_hat_h||| per refinement level
  std::vector<int> levels;
};

namespace detail {

// Fields of the coarse mesh read on a refinement of it.
inline FieldSet pull_back(const FieldSet& fs, const Refined<BoundaryTag>& r) {
  auto parent = std::make_shared<std::vector<int>>(r.parent);
  auto bparent = std::make_shared<std::vector<int>>(r.boundary_parent);
  auto cell = [parent](const CellField& g) -> CellField {
    if (!g) return {};
    return [g, parent](std::size_t c, const Point& x) { return g((*parent)[c], x); };
  };
  auto edge = [bparent](const EdgeField& g) -> EdgeField {
    if (!g) return {};
    return [g, bparent](std::size_t e, const Point& x) { return g((*bparent)[e], x); };
  };
  FieldSet out;
  if (fs.A) out.A = [A = fs.A, parent](std::size_t c, const Point& x) { return A((*parent)[c], x); };
  out.f = cell(fs.f);
  out.f_hat = cell(fs.f_hat);
  out.F = edge(fs.F);
  out.F_hat = edge(fs.F_hat);
  out.u0 = edge(fs.u0);
  out.u0_hat = edge(fs.u0_hat);
  return out;
}

// P1 solution of the mixed problem with data (f, F, u0) on a refined mesh.
inline fem::Vec solve_mixed(const TriMesh& m, const fem::SpMat& K, const CellField& f, const EdgeField& F,
                            const EdgeField& u0) {
  auto on_n = [](const BoundaryEdge<BoundaryTag>& e) { return e.tag == BoundaryTag::Neumann; };
  auto on_d = [](const BoundaryEdge<BoundaryTag>& e) { return e.tag == BoundaryTag::Dirichlet; };
  fem::Vec b = fem::load_vector(m, f);
  if (F) b += fem::boundary_load(m, on_n, F);
  const auto fixed = fem::boundary_nodes(m, on_d);
  fem::Vec g = fem::Vec::Zero(static_cast<Eigen::Index>(m.vertices.size()));
  for (std::size_t e = 0; e < m.boundary.size(); ++e)
    if (on_d(m.boundary[e]))
      for (int v : m.boundary[e].v) g[v] = u0 ? u0(e, m.vertices[v]) : 0.0;
  return fem::solve_dirichlet(K, b, fixed, g);
}

}  // namespace detail

/**
 * @brief Checks the bound against P1 solutions of both problems.
 *
 * Solves the original and the simplified problem on the meshes obtained by
 * refining @p mesh up to @p refinement times (the last three levels), takes
 * |||u_h - u_hat_h||| on the finest one and extrapolates the squared error in
 * the level to obtain the margin delta_h.
 */
inline VerificationResult verify_estimate(const TriMesh& mesh, const FieldSet& input, int refinement,
                                          double compat_tol = 1e-10) {
  if (refinement < 2) throw Error(ErrorCode::DomainError, "verification needs at least two refinement levels");
  const FieldSet fs = with_auto_simplification(mesh, input);
  const auto rep = estimate(mesh, fs, compat_tol);
  VerificationResult v;
  v.bound = rep.bound;
  v.simplified_bound = rep.simplified_bound;
  if (std::none_of(mesh.boundary.begin(), mesh.boundary.end(),
                   [](const auto& e) { return e.tag == BoundaryTag::Dirichlet; }))
    throw Error(ErrorCode::SolverFailure, "verification needs a nonempty Dirichlet part");
  for (int level = std::max(0, refinement - 2); level <= refinement; ++level) {
    const auto r = refine_red(mesh, level);
    const FieldSet rf = detail::pull_back(fs, r);
    const auto K = fem::stiffness(r.mesh, cell_average_A(r.mesh, rf.A));
    const fem::Vec u = detail::solve_mixed(r.mesh, K, rf.f, rf.F, rf.u0);
    const fem::Vec uh = detail::solve_mixed(r.mesh, K, rf.f_hat, rf.F_hat, rf.u0_hat ? rf.u0_hat : rf.u0);
    const fem::Vec e = u - uh;
    v.levels.push_back(level);
    v.level_errors.push_back(std::sqrt(std::max(0.0, e.dot(K * e))));
  }
  const std::size_t n = v.level_errors.size();
  const double e2 = std::pow(v.level_errors[n - 1], 2), e1 = std::pow(v.level_errors[n - 2], 2);
  const double d2 = e2 - e1;
  double tail = std::abs(d2) / 3.0;
  if (n >= 3) {
    const double d1 = e1 - std::pow(v.level_errors[n - 3], 2);
    // observed contraction of successive differences; fall back to the h^2 rate
    if (d1 != 0.0 && d2 != 0.0 && d1 / d2 > 1.0) tail = std::abs(d2) / (d1 / d2 - 1.0);
  }
  v.true_error = v.level_errors.back();
  v.extrapolated = std::sqrt(e2 + (d2 >= 0.0 ? tail : -std::min(tail, e2)));
  if (v.true_error > 0.0) {
    v.delta_h = std::abs(v.extrapolated - v.true_error) / v.true_error;
    v.efficiency_index = v.bound / v.true_error;
  } else {
    v.delta_h = 0.0;
    v.efficiency_index = v.bound > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  }
  v.guaranteed = v.efficiency_index >= 1.0 - v.delta_h;
  return v;
}

}  // namespace poincare
