#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <unordered_map>
#include <vector>

#include "poincare/domain.hpp"
#include "poincare/error.hpp"

namespace poincare {

using Point = std::array<double, 2>;
using Cell = std::array<int, 3>;

template <class Tag>
struct BoundaryEdge {
  std::array<int, 2> v;
  Tag tag;
};

/// Conforming 2-D triangulation with tagged boundary edges.
template <class Tag>
struct SimplicialMesh {
  std::vector<Point> vertices;
  std::vector<Cell> cells;
  std::vector<BoundaryEdge<Tag>> boundary;
};

enum class BoundaryTag { Dirichlet, Neumann };

/// Boundary edges carry an on-Gamma flag.
using FemMesh = SimplicialMesh<bool>;
/// Boundary edges carry a Dirichlet/Neumann tag.
using TriMesh = SimplicialMesh<BoundaryTag>;

inline const char* to_string(BoundaryTag t) { return t == BoundaryTag::Dirichlet ? "D" : "N"; }

namespace detail {

inline std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

}  // namespace detail

inline double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
}

inline double distance(const Point& a, const Point& b) { return std::hypot(b[0] - a[0], b[1] - a[1]); }

template <class Tag>
double cell_area(const SimplicialMesh<Tag>& m, std::size_t c) {
  const auto& t = m.cells[c];
  return signed_area(m.vertices[t[0]], m.vertices[t[1]], m.vertices[t[2]]);
}

template <class Tag>
double bounding_box_area(const SimplicialMesh<Tag>& m) {
  if (m.vertices.empty()) return 0.0;
  double x0 = m.vertices[0][0], x1 = x0, y0 = m.vertices[0][1], y1 = y0;
  for (const auto& p : m.vertices) {
    x0 = std::min(x0, p[0]);
    x1 = std::max(x1, p[0]);
    y0 = std::min(y0, p[1]);
    y1 = std::max(y1, p[1]);
  }
  return (x1 - x0) * (y1 - y0);
}

/// Local edge k of a cell joins vertices k and (k+1)%3.
inline std::array<int, 2> local_edge(const Cell& t, int k) { return {t[k], t[(k + 1) % 3]}; }

/// For each cell and local edge, the index into mesh.boundary or -1.
template <class Tag>
std::vector<std::array<int, 3>> boundary_edge_index(const SimplicialMesh<Tag>& m) {
  std::unordered_map<std::uint64_t, int> lookup;
  lookup.reserve(m.boundary.size() * 2);
  for (std::size_t i = 0; i < m.boundary.size(); ++i)
    lookup.emplace(detail::edge_key(m.boundary[i].v[0], m.boundary[i].v[1]), static_cast<int>(i));
  std::vector<std::array<int, 3>> out(m.cells.size(), {-1, -1, -1});
  for (std::size_t c = 0; c < m.cells.size(); ++c)
    for (int k = 0; k < 3; ++k) {
      const auto e = local_edge(m.cells[c], k);
      auto it = lookup.find(detail::edge_key(e[0], e[1]));
      if (it != lookup.end()) out[c][k] = it->second;
    }
  return out;
}

/**
 * Checks the mesh invariants: valid indices, positive areas, conformity and a
 * boundary list that covers exactly the edges owned by a single cell.
 *
 * Throws EmptyMesh, DegenerateCell or InvalidMesh.
 */
template <class Tag>
void validate_mesh(const SimplicialMesh<Tag>& m) {
  if (m.cells.empty() || m.vertices.empty()) throw Error(ErrorCode::EmptyMesh, "mesh has no cells");
  const int nv = static_cast<int>(m.vertices.size());
  for (const auto& p : m.vertices)
    if (!std::isfinite(p[0]) || !std::isfinite(p[1]))
      throw Error(ErrorCode::InvalidMesh, "non-finite vertex coordinate");
  const double tol = 1e-14 * bounding_box_area(m);
  std::unordered_map<std::uint64_t, int> count;
  count.reserve(m.cells.size() * 3);
  for (std::size_t c = 0; c < m.cells.size(); ++c) {
    const auto& t = m.cells[c];
    for (int v : t)
      if (v < 0 || v >= nv)
        throw Error(ErrorCode::InvalidMesh, "cell " + std::to_string(c) + " has a vertex index out of range");
    if (cell_area(m, c) <= tol)
      throw Error(ErrorCode::DegenerateCell,
                  "cell " + std::to_string(c) + " has nonpositive area or is clockwise");
    for (int k = 0; k < 3; ++k) {
      const auto e = local_edge(t, k);
      ++count[detail::edge_key(e[0], e[1])];
    }
  }
  std::unordered_map<std::uint64_t, int> listed;
  for (std::size_t i = 0; i < m.boundary.size(); ++i) {
    const auto& e = m.boundary[i].v;
    const auto key = detail::edge_key(e[0], e[1]);
    auto it = count.find(key);
    if (it == count.end() || it->second != 1)
      throw Error(ErrorCode::InvalidMesh, "boundary entry " + std::to_string(i) + " is not a boundary edge");
    if (++listed[key] > 1)
      throw Error(ErrorCode::InvalidMesh, "boundary entry " + std::to_string(i) + " is duplicated");
  }
  for (const auto& [key, n] : count) {
    if (n > 2) throw Error(ErrorCode::InvalidMesh, "non-manifold edge");
    if (n == 1 && !listed.count(key)) {
      const int a = static_cast<int>(key >> 32), b = static_cast<int>(key & 0xffffffffu);
      throw Error(ErrorCode::InvalidMesh,
                  "boundary edge [" + std::to_string(a) + ", " + std::to_string(b) + "] has no tag");
    }
  }
}

template <class Tag>
struct Refined {
  SimplicialMesh<Tag> mesh;
  std::vector<int> parent;           ///< parent cell of each child cell
  std::vector<int> boundary_parent;  ///< parent boundary entry of each boundary entry
};

/**
 * Red refinement: every cell is split into four by its edge midpoints.
 *
 * Children of cell c are 4c..4c+3; child 3 is the middle one. Boundary tags
 * pass to both halves of a split edge.
 */
template <class Tag>
Refined<Tag> refine_red(const SimplicialMesh<Tag>& m) {
  Refined<Tag> r;
  auto& out = r.mesh;
  out.vertices = m.vertices;
  std::unordered_map<std::uint64_t, int> mid;
  mid.reserve(m.cells.size() * 3);
  auto midpoint = [&](int a, int b) {
    auto [it, fresh] = mid.emplace(detail::edge_key(a, b), static_cast<int>(out.vertices.size()));
    if (fresh) {
      const auto& p = m.vertices[a];
      const auto& q = m.vertices[b];
      out.vertices.push_back({0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1])});
    }
    return it->second;
  };
  out.cells.reserve(m.cells.size() * 4);
  r.parent.reserve(m.cells.size() * 4);
  for (std::size_t c = 0; c < m.cells.size(); ++c) {
    const auto [a, b, d] = m.cells[c];
    const int ab = midpoint(a, b), bd = midpoint(b, d), da = midpoint(d, a);
    out.cells.push_back({a, ab, da});
    out.cells.push_back({ab, b, bd});
    out.cells.push_back({da, bd, d});
    out.cells.push_back({ab, bd, da});
    for (int k = 0; k < 4; ++k) r.parent.push_back(static_cast<int>(c));
  }
  out.boundary.reserve(m.boundary.size() * 2);
  for (const auto& e : m.boundary) {
    const int x = midpoint(e.v[0], e.v[1]);
    out.boundary.push_back({{e.v[0], x}, e.tag});
    out.boundary.push_back({{x, e.v[1]}, e.tag});
  }
  r.boundary_parent.resize(out.boundary.size());
  for (std::size_t i = 0; i < out.boundary.size(); ++i) r.boundary_parent[i] = static_cast<int>(i / 2);
  return r;
}

/// Applies refine_red @p levels times; parent maps to the original cells.
template <class Tag>
Refined<Tag> refine_red(const SimplicialMesh<Tag>& m, int levels) {
  Refined<Tag> r{m, {}, {}};
  r.parent.resize(m.cells.size());
  for (std::size_t i = 0; i < m.cells.size(); ++i) r.parent[i] = static_cast<int>(i);
  r.boundary_parent.resize(m.boundary.size());
  for (std::size_t i = 0; i < m.boundary.size(); ++i) r.boundary_parent[i] = static_cast<int>(i);
  for (int l = 0; l < levels; ++l) {
    auto next = refine_red(r.mesh);
    for (auto& p : next.parent) p = r.parent[p];
    for (auto& p : next.boundary_parent) p = r.boundary_parent[p];
    r = std::move(next);
  }
  return r;
}

/// Maps boundary tags onto another tag type.
template <class To, class From, class F>
SimplicialMesh<To> retag(const SimplicialMesh<From>& m, F&& f) {
  SimplicialMesh<To> out{m.vertices, m.cells, {}};
  out.boundary.reserve(m.boundary.size());
  for (const auto& e : m.boundary) out.boundary.push_back({e.v, f(e)});
  return out;
}

/**
 * Mesh from vertices and cells with the boundary found from edge counts.
 * Unused vertices are dropped; @p tag_of receives the two end points of each
 * boundary edge.
 */
template <class Tag, class TagOf>
SimplicialMesh<Tag> mesh_from_cells(const std::vector<Point>& vertices, const std::vector<Cell>& cells, TagOf&& tag_of) {
  std::vector<int> index(vertices.size(), -1);
  SimplicialMesh<Tag> m;
  for (const auto& t : cells) {
    Cell c{};
    for (int k = 0; k < 3; ++k) {
      int& i = index[t[k]];
      if (i < 0) {
        i = static_cast<int>(m.vertices.size());
        m.vertices.push_back(vertices[t[k]]);
      }
      c[k] = i;
    }
    m.cells.push_back(c);
  }
  std::unordered_map<std::uint64_t, int> count;
  for (const auto& t : m.cells)
    for (int k = 0; k < 3; ++k) {
      const auto e = local_edge(t, k);
      ++count[detail::edge_key(e[0], e[1])];
    }
  for (const auto& t : m.cells)
    for (int k = 0; k < 3; ++k) {
      const auto e = local_edge(t, k);
      if (count[detail::edge_key(e[0], e[1])] == 1)
        m.boundary.push_back({e, tag_of(m.vertices[e[0]], m.vertices[e[1]])});
    }
  return m;
}

/// Structured n x n grid on [x0, x0+w] x [y0, y0+h], squares split along the v00-v11 diagonal.
template <class Tag, class TagOf>
SimplicialMesh<Tag> structured_rectangle(double w, double h, int n, TagOf&& tag_of) {
  SimplicialMesh<Tag> m;
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  m.vertices.reserve((n + 1) * (n + 1));
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) m.vertices.push_back({w * i / n, h * j / n});
  m.cells.reserve(2 * n * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      m.cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      m.cells.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  // side: 0 bottom, 1 right, 2 top, 3 left; counterclockwise traversal
  for (int i = 0; i < n; ++i) m.boundary.push_back({{id(i, 0), id(i + 1, 0)}, tag_of(0)});
  for (int j = 0; j < n; ++j) m.boundary.push_back({{id(n, j), id(n, j + 1)}, tag_of(1)});
  for (int i = n; i > 0; --i) m.boundary.push_back({{id(i, n), id(i - 1, n)}, tag_of(2)});
  for (int j = n; j > 0; --j) m.boundary.push_back({{id(0, j), id(0, j - 1)}, tag_of(3)});
  return m;
}

/// Reference triangle coordinates: vertices (0,0), (L,0), (L,L); right angle at (L,0).
/// Edge 0 is the leg {x2 = 0}, edge 1 the leg {x1 = L}, edge 2 the hypotenuse.
template <class Tag, class TagOf>
SimplicialMesh<Tag> single_triangle(double leg, TagOf&& tag_of) {
  SimplicialMesh<Tag> m;
  m.vertices = {{0.0, 0.0}, {leg, 0.0}, {leg, leg}};
  m.cells = {{0, 1, 2}};
  m.boundary = {{{0, 1}, tag_of(0)}, {{1, 2}, tag_of(1)}, {{2, 0}, tag_of(2)}};
  return m;
}

inline constexpr int kMaxReferenceLevel = 9;

/**
 * Uniform mesh of a reference domain with Gamma edges flagged.
 *
 * Rectangle: (0,h1) x (0,h2), 2^level squares per side, 2*4^level cells;
 * OneSide is the side {x1 = 0}. Triangle: red refinement of one cell,
 * 4^level cells; OneLeg is {x1 = L}, TwoLegs adds {x2 = 0}, FullBoundary
 * takes all three edges.
 */
inline FemMesh build_reference_mesh(const DomainSpec& spec, int level) {
  // The full triangle boundary has no closed form but is a valid oracle input.
  if (is_triangle(spec.shape) && spec.gamma == BoundarySelector::FullBoundary)
    validate({spec.shape, BoundarySelector::OneLeg});
  else
    validate(spec);
  if (level < 0 || level > kMaxReferenceLevel)
    throw Error(ErrorCode::DomainError, "refinement level must lie in [0, 9]");
  if (const auto* r = std::get_if<Rectangle>(&spec.shape)) {
    const bool full = spec.gamma == BoundarySelector::FullBoundary;
    return structured_rectangle<bool>(r->h1, r->h2, 1 << level, [full](int side) { return full || side == 3; });
  }
  if (const auto* t = std::get_if<RightIsoTriangle>(&spec.shape)) {
    const auto g = spec.gamma;
    auto base = single_triangle<bool>(t->leg, [g](int edge) {
      switch (g) {
        case BoundarySelector::OneLeg: return edge == 1;
        case BoundarySelector::TwoLegs: return edge == 0 || edge == 1;
        case BoundarySelector::FullBoundary: return true;
        default: return edge == 2;
      }
    });
    return refine_red(base, level).mesh;
  }
  throw Error(ErrorCode::Unsupported, "finite-element meshes are two-dimensional only");
}

}  // namespace poincare
