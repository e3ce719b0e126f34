#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "poincare/cell_constants.hpp"
#include "poincare/eigen_oracle.hpp"

namespace poincare::testing {

/// Single triangle with the listed local edges on Gamma, refined @p level times.
inline FemMesh triangle_mesh(const Triangle& t, const std::vector<int>& gamma, int level) {
  SimplicialMesh<bool> m;
  m.vertices = {t[0], t[1], t[2]};
  m.cells = {{0, 1, 2}};
  for (int k = 0; k < 3; ++k)
    m.boundary.push_back({{k, (k + 1) % 3}, std::find(gamma.begin(), gamma.end(), k) != gamma.end()});
  return refine_red(m, level).mesh;
}

/// Discrete constant lambda_h^-1/2; a lower bound for the exact one on a conforming mesh.
inline double oracle_cell_constant(const Triangle& t, const std::vector<int>& gamma, ConstantKind kind, int level) {
  const auto a = assemble(triangle_mesh(t, gamma, level), problem_for(kind));
  return 1.0 / std::sqrt(smallest_positive_eigenvalue(a).lambda_min_positive);
}

/// Counterclockwise triangles with aspect ratio (longest edge^2 / (2 area)) at most @p max_aspect.
inline std::vector<Triangle> random_triangles(int count, unsigned seed, double max_aspect = 10.0) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Triangle> out;
  while (static_cast<int>(out.size()) < count) {
    Triangle t{Point{u(rng), u(rng)}, Point{u(rng), u(rng)}, Point{u(rng), u(rng)}};
    double area = signed_area(t[0], t[1], t[2]);
    if (area < 0) {
      std::swap(t[1], t[2]);
      area = -area;
    }
    double longest = 0.0;
    for (int k = 0; k < 3; ++k) longest = std::max(longest, distance(t[k], t[(k + 1) % 3]));
    if (area < 1e-3 || longest * longest / (2 * area) > max_aspect) continue;
    out.push_back(t);
  }
  return out;
}

}  // namespace poincare::testing
