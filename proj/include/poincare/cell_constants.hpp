#pragma once

// Poincare-type constants of single triangles obtained by mapping the right
// isosceles reference triangle.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "poincare/constants.hpp"
#include "poincare/error.hpp"
#include "poincare/mesh.hpp"

namespace poincare {

using Triangle = std::array<Point, 3>;

enum class CellClass { Interior, DirichletTouching, NeumannTouching };

inline const char* to_string(CellClass c) {
  switch (c) {
    case CellClass::Interior: return "interior";
    case CellClass::DirichletTouching: return "dirichlet";
    case CellClass::NeumannTouching: return "neumann";
  }
  return "?";
}

struct MappedConstant {
  double value;
  BoundarySelector selector;  ///< reference selector that was mapped
  std::array<int, 3> perm;    ///< cell vertex receiving reference vertex k
  double sigma_max;           ///< largest singular value of the affine part
};

namespace detail {

// Reference cell: right angle at r0 = (0,0), r1 = (1,0), r2 = (0,1).
inline double reference_constant(BoundarySelector g, ConstantKind kind) {
  static const auto table = [] {
    std::array<std::array<double, 3>, 3> t{};
    const BoundarySelector sel[3] = {BoundarySelector::OneLeg, BoundarySelector::TwoLegs,
                                     BoundarySelector::Hypotenuse};
    const ConstantKind kinds[3] = {ConstantKind::C1, ConstantKind::C2, ConstantKind::CF};
    for (int i = 0; i < 3; ++i)
      for (int k = 0; k < 3; ++k) t[i][k] = sharp_constant({RightIsoTriangle{1.0}, sel[i]}, kinds[k]).value;
    return t;
  }();
  const int i = g == BoundarySelector::OneLeg ? 0 : g == BoundarySelector::TwoLegs ? 1 : 2;
  const int k = kind == ConstantKind::C1 ? 0 : kind == ConstantKind::C2 ? 1 : 2;
  return table[i][k];
}

inline double reference_gamma_length(BoundarySelector g) {
  switch (g) {
    case BoundarySelector::OneLeg: return 1.0;
    case BoundarySelector::TwoLegs: return 2.0;
    default: return std::numbers::sqrt2;
  }
}

inline Eigen::Matrix2d affine_part(const Triangle& t, const std::array<int, 3>& p) {
  Eigen::Matrix2d B;
  B << t[p[1]][0] - t[p[0]][0], t[p[2]][0] - t[p[0]][0], t[p[1]][1] - t[p[0]][1], t[p[2]][1] - t[p[0]][1];
  return B;
}

inline double largest_singular_value(const Eigen::Matrix2d& B) {
  return Eigen::JacobiSVD<Eigen::Matrix2d>(B).singularValues()(0);
}

inline double edge_length(const Triangle& t, int k) { return distance(t[k], t[(k + 1) % 3]); }

inline void check_triangle(const Triangle& t) {
  double scale = 0.0;
  for (int k = 0; k < 3; ++k) scale = std::max(scale, edge_length(t, k));
  if (!(std::abs(signed_area(t[0], t[1], t[2])) > 1e-14 * scale * scale))
    throw Error(ErrorCode::DegenerateCell, "triangle is degenerate");
}

// Selector induced on the reference cell by the cell edges in @p edges under @p p,
// or nullopt if the image is not a reference selector.
inline std::optional<BoundarySelector> induced_selector(const std::array<int, 3>& p, const std::vector<int>& edges) {
  std::array<int, 3> inv{};
  for (int i = 0; i < 3; ++i) inv[p[i]] = i;
  int legs = 0, hyp = 0;
  for (int k : edges) {
    const int a = inv[k], b = inv[(k + 1) % 3];
    (a == 0 || b == 0 ? legs : hyp) += 1;
  }
  if (legs == 1 && hyp == 0) return BoundarySelector::OneLeg;
  if (legs == 2 && hyp == 0) return BoundarySelector::TwoLegs;
  if (legs == 0 && hyp == 1) return BoundarySelector::Hypotenuse;
  return std::nullopt;
}

inline std::string edge_list(const std::vector<int>& edges) {
  std::string s = "{";
  for (std::size_t i = 0; i < edges.size(); ++i) s += (i ? ", " : "") + std::to_string(edges[i]);
  return s + "}";
}

}  // namespace detail

/**
 * @brief Upper bound for C1, C2 or CF of a triangle with Gamma a set of its edges.
 *
 * Local edge k joins vertices k and k+1. Each of the six vertex assignments of
 * the reference cell that carries a reference selector onto @p gamma_edges gives
 *
 *   C1, CF:  C(ref) * sigma_max(B)
 *   C2:      C(ref) * sigma_max(B) * sqrt(|Gamma| / |Gamma_ref|) / sqrt(det B)
 *
 * and the smallest of them is returned. For C1 and C2 on two edges the edge
 * lengths must agree, since otherwise the mean over Gamma is not preserved by
 * the map.
 *
 * Throws DegenerateCell, or UnmappableGammaPart when no assignment applies.
 */
inline MappedConstant mapped_constant(const Triangle& t, const std::vector<int>& gamma_edges, ConstantKind kind) {
  if (kind != ConstantKind::C1 && kind != ConstantKind::C2 && kind != ConstantKind::CF)
    throw Error(ErrorCode::Unsupported, "only C1, C2 and CF are mapped");
  detail::check_triangle(t);
  std::vector<int> edges = gamma_edges;
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  if (edges.empty() || edges.size() > 2 || edges.front() < 0 || edges.back() > 2)
    throw Error(ErrorCode::UnmappableGammaPart, "Gamma part " + detail::edge_list(gamma_edges) +
                                                    " is not one or two edges of the cell");
  double gamma_length = 0.0;
  for (int k : edges) gamma_length += detail::edge_length(t, k);
  if (edges.size() == 2 && kind != ConstantKind::CF) {
    const double a = detail::edge_length(t, edges[0]), b = detail::edge_length(t, edges[1]);
    if (std::abs(a - b) > 1e-9 * std::max(a, b))
      throw Error(ErrorCode::UnmappableGammaPart,
                  "Gamma edges " + detail::edge_list(edges) + " have different lengths; the mean is not preserved");
  }

  std::optional<MappedConstant> best;
  std::array<int, 3> p{0, 1, 2};
  do {
    const auto sel = detail::induced_selector(p, edges);
    if (!sel) continue;
    const Eigen::Matrix2d B = detail::affine_part(t, p);
    const double s = detail::largest_singular_value(B);
    double v = detail::reference_constant(*sel, kind) * s;
    if (kind == ConstantKind::C2)
      v *= std::sqrt(gamma_length / detail::reference_gamma_length(*sel)) / std::sqrt(std::abs(B.determinant()));
    if (!best || v < best->value) best = MappedConstant{v, *sel, p, s};
  } while (std::next_permutation(p.begin(), p.end()));
  if (!best)
    throw Error(ErrorCode::UnmappableGammaPart,
                "Gamma part " + detail::edge_list(edges) + " matches no reference selector");
  return *best;
}

/// True if @p t is a right isosceles triangle up to relative tolerance @p tol.
inline bool is_right_isosceles(const Triangle& t, double tol = 1e-9) {
  std::array<double, 3> e{detail::edge_length(t, 0), detail::edge_length(t, 1), detail::edge_length(t, 2)};
  std::sort(e.begin(), e.end());
  return std::abs(e[1] - e[0]) <= tol * e[2] && std::abs(e[2] - std::numbers::sqrt2 * e[0]) <= tol * e[2];
}

/// CP of a triangle: leg/pi for right isosceles cells, diam/pi otherwise.
inline double poincare_cell_constant(const Triangle& t) {
  detail::check_triangle(t);
  std::array<double, 3> e{detail::edge_length(t, 0), detail::edge_length(t, 1), detail::edge_length(t, 2)};
  std::sort(e.begin(), e.end());
  if (is_right_isosceles(t)) return 0.5 * (e[0] + e[1]) / std::numbers::pi;
  return e[2] / std::numbers::pi;
}

/**
 * The weight of a cell in D1: CP for interior and Neumann cells, the mapped
 * C1(T, gamma_edges) for Dirichlet cells.
 */
inline double cell_constant(const Triangle& t, CellClass cls, const std::vector<int>& gamma_edges = {}) {
  if (cls != CellClass::DirichletTouching) return poincare_cell_constant(t);
  return mapped_constant(t, gamma_edges, ConstantKind::C1).value;
}

/// Mapped bound for C2(T, gamma_edges), the weight of a Neumann cell in D2.
inline double cell_trace_constant(const Triangle& t, const std::vector<int>& gamma_edges) {
  return mapped_constant(t, gamma_edges, ConstantKind::C2).value;
}

template <class Tag>
Triangle cell_triangle(const SimplicialMesh<Tag>& m, std::size_t c) {
  const auto& v = m.cells[c];
  return {m.vertices[v[0]], m.vertices[v[1]], m.vertices[v[2]]};
}

}  // namespace poincare
