#pragma once

// Closed-form sharp constants for rectangles, boxes and right isosceles
// triangles.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "poincare/domain.hpp"
#include "poincare/error.hpp"
#include "poincare/roots.hpp"

namespace poincare {

struct Root {
  std::string name;
  double value;
  /// Characteristic equation evaluated at the root.
  double residual;
};

struct ConstantResult {
  ConstantKind kind;
  /// C1, CP, CF carry units of length; C2 carries length^(1/2).
  double value;
  /// value^-2
  double eigenvalue;
  std::vector<Root> roots;

  [[nodiscard]] std::vector<double> residuals() const {
    std::vector<double> r;
    r.reserve(roots.size());
    for (const auto& root : roots) r.push_back(root.residual);
    return r;
  }
};

namespace detail {

inline ConstantResult from_value(ConstantKind kind, double value, std::vector<Root> roots = {}) {
  return ConstantResult{kind, value, 1.0 / (value * value), std::move(roots)};
}

inline ConstantResult from_eigenvalue(ConstantKind kind, double lambda, std::vector<Root> roots = {}) {
  return ConstantResult{kind, 1.0 / std::sqrt(lambda), lambda, std::move(roots)};
}

inline Root cot1_root() {
  const double z = root_cot1();
  return {"z_cot1", z, characteristic::cot1(z)};
}

inline Root tan_tanh_root() {
  const double z = root_tan_tanh();
  return {"z_tan_tanh", z, characteristic::tan_tanh(z)};
}

inline Root tanh_tan_root(double alpha) {
  const double z = root_tanh_tan(alpha);
  return {"z0(alpha)", z, characteristic::tanh_tan(z, alpha)};
}

[[noreturn]] inline void unsupported(const DomainSpec& spec, ConstantKind kind) {
  throw Error(ErrorCode::Unsupported, std::string("no closed form for kind '") + to_string(kind) +
                                          "' on shape '" + shape_name(spec.shape) + "' with gamma '" +
                                          to_string(spec.gamma) + "'");
}

inline ConstantResult rectangle_constant(const Rectangle& r, BoundarySelector gamma, ConstantKind kind,
                                         const DomainSpec& spec) {
  constexpr double pi = std::numbers::pi;
  const double hmax = std::max(r.h1, r.h2), hmin = std::min(r.h1, r.h2);
  if (kind == ConstantKind::CP) return from_value(kind, hmax / pi);
  if (gamma == BoundarySelector::OneSide) {
    switch (kind) {
      case ConstantKind::C1: return from_value(kind, std::max(2.0 * r.h1, r.h2) / pi);
      case ConstantKind::C2:
        return from_eigenvalue(kind, pi / r.h2 * std::tanh(pi * r.h1 / r.h2));
      case ConstantKind::CF: return from_value(kind, 2.0 * r.h1 / pi);
      default: break;
    }
  } else if (gamma == BoundarySelector::FullBoundary) {
    switch (kind) {
      case ConstantKind::C1: {
        const double w0 = root_rect_cot(r.h1, r.h2);
        return from_value(kind, hmax / pi,
                          {{"omega0", w0, characteristic::rect_cot(w0, r.h1, r.h2)}});
      }
      case ConstantKind::C2: {
        const double alpha0 = std::sqrt(hmax / hmin);
        Root z0 = tanh_tan_root(alpha0);
        const double lambda = 2.0 * z0.value / std::sqrt(r.h1 * r.h2) * std::tanh(z0.value / alpha0);
        return from_eigenvalue(kind, lambda, {z0, {"alpha0", alpha0, 0.0}});
      }
      default: break;
    }
  }
  unsupported(spec, kind);
}

inline ConstantResult box_constant(const Box& b, BoundarySelector gamma, ConstantKind kind,
                                   const DomainSpec& spec) {
  constexpr double pi = std::numbers::pi;
  std::array<double, 3> h{b.h1, b.h2, b.h3};
  std::sort(h.begin(), h.end());
  if (kind == ConstantKind::CP) return from_value(kind, h[2] / pi);
  if (gamma == BoundarySelector::OneSide) {
    const double m = std::max(b.h2, b.h3);
    switch (kind) {
      case ConstantKind::C1: return from_value(kind, std::max({2.0 * b.h1, b.h2, b.h3}) / pi);
      case ConstantKind::C2: return from_eigenvalue(kind, pi / m * std::tanh(pi * b.h1 / m));
      default: break;
    }
  } else if (gamma == BoundarySelector::FullBoundary) {
    switch (kind) {
      case ConstantKind::C1: return from_value(kind, h[2] / pi);
      case ConstantKind::C2: {
        // Sorted ascending, so the odd axis is the longest edge.
        const BoxRoots roots = solve_box_system(h[0], h[1], h[2]);
        const double lambda = 2.0 * roots.z1 / h[0] * std::tanh(roots.z1);
        return from_eigenvalue(kind, lambda,
                               {{"z1", roots.z1, roots.residual_first},
                                {"z2", roots.z2, roots.residual_second},
                                {"mu0", roots.mu0, 0.0},
                                {"nu(mu0)", roots.nu0, 0.0}});
      }
      default: break;
    }
  }
  unsupported(spec, kind);
}

inline ConstantResult triangle_constant(const RightIsoTriangle& t, BoundarySelector gamma,
                                        ConstantKind kind, const DomainSpec& spec) {
  constexpr double pi = std::numbers::pi;
  const double leg = t.leg;
  if (kind == ConstantKind::CP) return from_value(kind, leg / pi);
  switch (gamma) {
    case BoundarySelector::OneLeg:
      switch (kind) {
        case ConstantKind::C1: {
          Root z = cot1_root();
          return from_value(kind, leg / z.value, {z});
        }
        case ConstantKind::C2: {
          Root z = tan_tanh_root();
          return from_eigenvalue(kind, z.value / leg * std::tanh(z.value), {z});
        }
        case ConstantKind::CF: return from_value(kind, std::numbers::sqrt2 * leg / pi);
        default: break;
      }
      break;
    case BoundarySelector::TwoLegs:
      switch (kind) {
        case ConstantKind::C1: return from_value(kind, leg / pi);
        case ConstantKind::C2: {
          Root z = tanh_tan_root(1.0);
          return from_eigenvalue(kind, 2.0 * z.value / leg * std::tanh(z.value), {z});
        }
        case ConstantKind::CF: return from_value(kind, leg / (std::numbers::sqrt2 * pi));
        default: break;
      }
      break;
    case BoundarySelector::Hypotenuse: {
      const double h = case_length(t, gamma);
      switch (kind) {
        case ConstantKind::C1: {
          Root z = cot1_root();
          return from_value(kind, h / z.value, {z});
        }
        case ConstantKind::C2: return from_value(kind, std::sqrt(h));
        case ConstantKind::CF: return from_value(kind, leg / pi);
        default: break;
      }
      break;
    }
    default: break;
  }
  unsupported(spec, kind);
}

}  // namespace detail

/**
 * @brief Sharp constant of the requested kind for a reference domain.
 *
 * | shape     | gamma | C1                 | C2                             | CF          |
 * |-----------|-------|--------------------|--------------------------------|-------------|
 * | rectangle | side  | max{2h1,h2}/pi     | (pi/h2 tanh(pi h1/h2))^-1/2    | 2h1/pi      |
 * | rectangle | full  | max{h1,h2}/pi      | via z0(alpha0)                 |             |
 * | box       | side  | max{2h1,h2,h3}/pi  | (pi/m tanh(pi h1/m))^-1/2      |             |
 * | box       | full  | max{h1,h2,h3}/pi   | via the box system             |             |
 * | triangle  | leg   | L/z_cot1           | (z_tan_tanh/L tanh z)^-1/2     | sqrt2 L/pi  |
 * | triangle  | legs  | L/pi               | (2 z0(1)/L tanh z0(1))^-1/2    | L/(sqrt2 pi)|
 * | triangle  | hyp   | h/z_cot1           | h^1/2                          | L/pi        |
 *
 * L is the leg length and h = L/sqrt(2). CP and CPUpperBound are available for
 * every shape. Triangle with the full boundary has no closed form.
 */
inline ConstantResult sharp_constant(const DomainSpec& spec, ConstantKind kind) {
  validate(spec);
  if (kind == ConstantKind::CPUpperBound)
    return detail::from_value(kind, diameter(spec.shape) / std::numbers::pi);
  return std::visit(
      [&](const auto& s) -> ConstantResult {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Rectangle>) return detail::rectangle_constant(s, spec.gamma, kind, spec);
        else if constexpr (std::is_same_v<T, Box>) return detail::box_constant(s, spec.gamma, kind, spec);
        else return detail::triangle_constant(s, spec.gamma, kind, spec);
      },
      spec.shape);
}

/// Per-cell list of edge constants C1(T_i, E_ij).
using CellEdgeConstants = std::vector<std::vector<double>>;

/// max over cells of the min over that cell's edge constants.
inline double mesh_global_constant(const CellEdgeConstants& cells) {
  if (cells.empty()) throw Error(ErrorCode::EmptyMesh, "mesh_global_constant: no cells");
  double result = 0.0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i].empty())
      throw Error(ErrorCode::EmptyMesh, "mesh_global_constant: cell " + std::to_string(i) + " has no edges");
    result = std::max(result, *std::min_element(cells[i].begin(), cells[i].end()));
  }
  return result;
}

}  // namespace poincare
