#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <array>
#include <vector>

#include "poincare/error.hpp"
#include "poincare/mesh.hpp"
#include "poincare/quadrature.hpp"

namespace poincare::fem {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;
using Mat2 = Eigen::Matrix2d;

struct P1Cell {
  double area;
  std::array<Eigen::Vector2d, 3> grad;  ///< gradients of the barycentric coordinates
};

inline P1Cell p1_cell(const Point& a, const Point& b, const Point& c) {
  const double area = signed_area(a, b, c);
  const double s = 1.0 / (2.0 * area);
  P1Cell g{area, {}};
  g.grad[0] = {(b[1] - c[1]) * s, (c[0] - b[0]) * s};
  g.grad[1] = {(c[1] - a[1]) * s, (a[0] - c[0]) * s};
  g.grad[2] = {(a[1] - b[1]) * s, (b[0] - a[0]) * s};
  return g;
}

template <class Tag>
P1Cell p1_cell(const SimplicialMesh<Tag>& m, std::size_t c) {
  const auto& t = m.cells[c];
  return p1_cell(m.vertices[t[0]], m.vertices[t[1]], m.vertices[t[2]]);
}

template <class Tag>
void check_nondegenerate(const SimplicialMesh<Tag>& m) {
  const double tol = 1e-14 * bounding_box_area(m);
  for (std::size_t c = 0; c < m.cells.size(); ++c)
    if (cell_area(m, c) <= tol)
      throw Error(ErrorCode::DegenerateCell, "cell " + std::to_string(c) + " is degenerate");
}

/// Integral of A grad(phi_i) . grad(phi_j); @p coeff holds one matrix per cell or is empty for A = I.
template <class Tag>
SpMat stiffness(const SimplicialMesh<Tag>& m, const std::vector<Mat2>& coeff = {}) {
  check_nondegenerate(m);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(m.cells.size() * 9);
  for (std::size_t c = 0; c < m.cells.size(); ++c) {
    const auto g = p1_cell(m, c);
    const Mat2 A = coeff.empty() ? Mat2::Identity() : coeff[c];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        trip.emplace_back(m.cells[c][i], m.cells[c][j], g.area * g.grad[j].dot(A * g.grad[i]));
  }
  const int n = static_cast<int>(m.vertices.size());
  SpMat K(n, n);
  K.setFromTriplets(trip.begin(), trip.end());
  return K;
}

template <class Tag>
SpMat mass(const SimplicialMesh<Tag>& m) {
  check_nondegenerate(m);
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(m.cells.size() * 9);
  for (std::size_t c = 0; c < m.cells.size(); ++c) {
    const double a = cell_area(m, c);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) trip.emplace_back(m.cells[c][i], m.cells[c][j], a * (i == j ? 2.0 : 1.0) / 12.0);
  }
  const int n = static_cast<int>(m.vertices.size());
  SpMat M(n, n);
  M.setFromTriplets(trip.begin(), trip.end());
  return M;
}

/// Integral of phi_i phi_j over the boundary edges selected by @p on.
template <class Tag, class Pred>
SpMat boundary_mass(const SimplicialMesh<Tag>& m, Pred&& on) {
  std::vector<Eigen::Triplet<double>> trip;
  for (const auto& e : m.boundary) {
    if (!on(e)) continue;
    const double len = distance(m.vertices[e.v[0]], m.vertices[e.v[1]]);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) trip.emplace_back(e.v[i], e.v[j], len * (i == j ? 2.0 : 1.0) / 6.0);
  }
  const int n = static_cast<int>(m.vertices.size());
  SpMat M(n, n);
  M.setFromTriplets(trip.begin(), trip.end());
  return M;
}

/// Integral of phi_i over the selected boundary edges.
template <class Tag, class Pred>
Vec boundary_moments(const SimplicialMesh<Tag>& m, Pred&& on) {
  Vec c = Vec::Zero(static_cast<Eigen::Index>(m.vertices.size()));
  for (const auto& e : m.boundary) {
    if (!on(e)) continue;
    const double len = distance(m.vertices[e.v[0]], m.vertices[e.v[1]]);
    c[e.v[0]] += 0.5 * len;
    c[e.v[1]] += 0.5 * len;
  }
  return c;
}

/// Integral of f phi_i; f is called as f(cell, point).
template <class Tag, class F>
Vec load_vector(const SimplicialMesh<Tag>& m, F&& f, const std::vector<quad::TriNode>& rule = quad::triangle_rule()) {
  Vec b = Vec::Zero(static_cast<Eigen::Index>(m.vertices.size()));
  for (std::size_t c = 0; c < m.cells.size(); ++c) {
    const auto& t = m.cells[c];
    const auto& p0 = m.vertices[t[0]];
    const auto& p1 = m.vertices[t[1]];
    const auto& p2 = m.vertices[t[2]];
    const double area = cell_area(m, c);
    for (const auto& q : rule) {
      const double v = q.weight * area * f(c, quad::map_bary(p0, p1, p2, q.bary));
      for (int i = 0; i < 3; ++i) b[t[i]] += v * q.bary[i];
    }
  }
  return b;
}

/// Integral of g phi_i over the boundary edges; g is called as g(boundary index, point) and
/// contributes only where @p on holds.
template <class Tag, class Pred, class G>
Vec boundary_load(const SimplicialMesh<Tag>& m, Pred&& on, G&& g,
                  const std::vector<quad::LineNode>& rule = quad::edge_rule()) {
  Vec b = Vec::Zero(static_cast<Eigen::Index>(m.vertices.size()));
  for (std::size_t i = 0; i < m.boundary.size(); ++i) {
    const auto& e = m.boundary[i];
    if (!on(e)) continue;
    const auto& p = m.vertices[e.v[0]];
    const auto& q = m.vertices[e.v[1]];
    const double len = distance(p, q);
    for (const auto& n : rule) {
      const double v = n.weight * len * g(i, Point{p[0] + n.t * (q[0] - p[0]), p[1] + n.t * (q[1] - p[1])});
      b[e.v[0]] += v * (1.0 - n.t);
      b[e.v[1]] += v * n.t;
    }
  }
  return b;
}

/// Nodes touched by the selected boundary edges.
template <class Tag, class Pred>
std::vector<char> boundary_nodes(const SimplicialMesh<Tag>& m, Pred&& on) {
  std::vector<char> mark(m.vertices.size(), 0);
  for (const auto& e : m.boundary)
    if (on(e)) mark[e.v[0]] = mark[e.v[1]] = 1;
  return mark;
}

/// Symmetric submatrix K[rows, cols] for index lists.
inline SpMat submatrix(const SpMat& K, const std::vector<int>& rows, const std::vector<int>& cols) {
  std::vector<int> rmap(K.rows(), -1), cmap(K.cols(), -1);
  for (std::size_t i = 0; i < rows.size(); ++i) rmap[rows[i]] = static_cast<int>(i);
  for (std::size_t i = 0; i < cols.size(); ++i) cmap[cols[i]] = static_cast<int>(i);
  std::vector<Eigen::Triplet<double>> trip;
  for (int k = 0; k < K.outerSize(); ++k)
    for (SpMat::InnerIterator it(K, k); it; ++it)
      if (rmap[it.row()] >= 0 && cmap[it.col()] >= 0) trip.emplace_back(rmap[it.row()], cmap[it.col()], it.value());
  SpMat S(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
  S.setFromTriplets(trip.begin(), trip.end());
  return S;
}

/**
 * Solves K u = b with u fixed at the marked nodes.
 *
 * Throws SolverFailure if no node is fixed or the reduced matrix is not
 * positive definite.
 */
inline Vec solve_dirichlet(const SpMat& K, const Vec& b, const std::vector<char>& fixed, const Vec& values) {
  std::vector<int> free, bound;
  for (int i = 0; i < K.rows(); ++i) (fixed[i] ? bound : free).push_back(i);
  if (bound.empty()) throw Error(ErrorCode::SolverFailure, "no Dirichlet nodes: the problem is not uniquely solvable");
  Vec u = Vec::Zero(K.rows());
  for (int i : bound) u[i] = values[i];
  if (free.empty()) return u;
  const SpMat Kff = submatrix(K, free, free);
  const SpMat Kfb = submatrix(K, free, bound);
  Vec ub(static_cast<Eigen::Index>(bound.size())), bf(static_cast<Eigen::Index>(free.size()));
  for (std::size_t i = 0; i < bound.size(); ++i) ub[i] = values[bound[i]];
  for (std::size_t i = 0; i < free.size(); ++i) bf[i] = b[free[i]];
  Eigen::SimplicialLDLT<SpMat> ldlt(Kff);
  if (ldlt.info() != Eigen::Success) throw Error(ErrorCode::SolverFailure, "factorization failed");
  const Vec uf = ldlt.solve(bf - Kfb * ub);
  if (ldlt.info() != Eigen::Success || !uf.allFinite()) throw Error(ErrorCode::SolverFailure, "solve failed");
  for (std::size_t i = 0; i < free.size(); ++i) u[free[i]] = uf[i];
  return u;
}

}  // namespace poincare::fem
