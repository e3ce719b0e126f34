#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "poincare/mesh.hpp"

namespace poincare::quad {

/// Barycentric node (l1, l2, l3) with a weight normalised to sum 1.
struct TriNode {
  std::array<double, 3> bary;
  double weight;
};

/// Node on [0, 1] with weight normalised to sum 1.
struct LineNode {
  double t;
  double weight;
};

/// Symmetric 6-point rule, exact for degree 4.
inline const std::vector<TriNode>& triangle_rule() {
  static const std::vector<TriNode> rule = [] {
    const double a1 = 0.445948490915965, w1 = 0.223381589678011;
    const double a2 = 0.091576213509771, w2 = 0.109951743655322;
    std::vector<TriNode> r;
    for (auto [a, w] : {std::pair{a1, w1}, std::pair{a2, w2}}) {
      const double b = 1.0 - 2.0 * a;
      r.push_back({{b, a, a}, w});
      r.push_back({{a, b, a}, w});
      r.push_back({{a, a, b}, w});
    }
    return r;
  }();
  return rule;
}

/// n-point Gauss-Legendre rule mapped to [0, 1].
inline std::vector<LineNode> gauss_legendre(int n) {
  std::vector<LineNode> r(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r[i] = {0.5 * (1.0 - x), 1.0 / ((1.0 - x * x) * dp * dp)};
  }
  return r;
}

inline const std::vector<LineNode>& edge_rule() {
  static const std::vector<LineNode> rule = gauss_legendre(5);
  return rule;
}

/// Collapsed Gauss-Legendre product rule, exact for degree 2n-2 on triangles.
inline std::vector<TriNode> collapsed_triangle_rule(int n) {
  const auto g = gauss_legendre(n);
  std::vector<TriNode> r;
  r.reserve(n * n);
  for (const auto& u : g)
    for (const auto& v : g) {
      const double l2 = u.t * (1.0 - v.t), l3 = u.t * v.t;
      r.push_back({{1.0 - l2 - l3, l2, l3}, 2.0 * u.weight * v.weight * u.t});
    }
  return r;
}

inline Point map_bary(const Point& a, const Point& b, const Point& c, const std::array<double, 3>& l) {
  return {l[0] * a[0] + l[1] * b[0] + l[2] * c[0], l[0] * a[1] + l[1] * b[1] + l[2] * c[1]};
}

/// Integral of g over triangle (a, b, c).
template <class G>
double integrate_triangle(const Point& a, const Point& b, const Point& c, G&& g,
                          const std::vector<TriNode>& rule = triangle_rule()) {
  const double area = std::abs(signed_area(a, b, c));
  double s = 0.0;
  for (const auto& q : rule) s += q.weight * g(map_bary(a, b, c, q.bary));
  return area * s;
}

/// Integral of g along segment (a, b).
template <class G>
double integrate_segment(const Point& a, const Point& b, G&& g,
                         const std::vector<LineNode>& rule = edge_rule()) {
  double s = 0.0;
  for (const auto& q : rule) s += q.weight * g(Point{a[0] + q.t * (b[0] - a[0]), a[1] + q.t * (b[1] - a[1])});
  return distance(a, b) * s;
}

}  // namespace poincare::quad
