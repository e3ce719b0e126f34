#pragma once

#include <cmath>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "poincare/error.hpp"

namespace poincare {

/// (0,h1) x (0,h2). OneSide selects the side {x1 = 0}, of length h2.
struct Rectangle {
  double h1;
  double h2;
};

/// (0,h1) x (0,h2) x (0,h3). OneSide selects the face {x1 = 0}.
struct Box {
  double h1;
  double h2;
  double h3;
};

/// Right isosceles triangle given by its leg length.
struct RightIsoTriangle {
  double leg;
};

using Shape = std::variant<Rectangle, Box, RightIsoTriangle>;

enum class BoundarySelector { OneSide, FullBoundary, OneLeg, TwoLegs, Hypotenuse };

enum class ConstantKind {
  C1,            ///< L2(Omega) norm vs gradient, zero mean on Gamma
  C2,            ///< L2(Gamma) norm vs gradient, zero mean on Gamma
  CP,            ///< classical Poincare (zero mean on Omega)
  CF,            ///< Friedrichs: zero trace on Gamma
  CPUpperBound,  ///< diam/pi, valid for convex domains
};

struct DomainSpec {
  Shape shape;
  BoundarySelector gamma;
};

inline const char* to_string(BoundarySelector g) {
  switch (g) {
    case BoundarySelector::OneSide: return "side";
    case BoundarySelector::FullBoundary: return "full";
    case BoundarySelector::OneLeg: return "leg";
    case BoundarySelector::TwoLegs: return "legs";
    case BoundarySelector::Hypotenuse: return "hyp";
  }
  return "?";
}

inline const char* to_string(ConstantKind k) {
  switch (k) {
    case ConstantKind::C1: return "c1";
    case ConstantKind::C2: return "c2";
    case ConstantKind::CP: return "cp";
    case ConstantKind::CF: return "cf";
    case ConstantKind::CPUpperBound: return "pw";
  }
  return "?";
}

inline const char* shape_name(const Shape& s) {
  if (std::holds_alternative<Rectangle>(s)) return "rect";
  if (std::holds_alternative<Box>(s)) return "box";
  return "tri";
}

inline std::vector<double> dimensions(const Shape& s) {
  return std::visit(
      [](const auto& v) -> std::vector<double> {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Rectangle>) return {v.h1, v.h2};
        else if constexpr (std::is_same_v<T, Box>) return {v.h1, v.h2, v.h3};
        else return {v.leg};
      },
      s);
}

inline double diameter(const Shape& s) {
  return std::visit(
      [](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Rectangle>) return std::hypot(v.h1, v.h2);
        else if constexpr (std::is_same_v<T, Box>) return std::sqrt(v.h1 * v.h1 + v.h2 * v.h2 + v.h3 * v.h3);
        else return v.leg * std::sqrt(2.0);
      },
      s);
}

inline bool is_triangle(const Shape& s) { return std::holds_alternative<RightIsoTriangle>(s); }

/// Throws DomainError unless every length is positive and finite and the
/// selector belongs to the shape family.
inline void validate(const DomainSpec& spec) {
  for (double h : dimensions(spec.shape))
    if (!(h > 0.0) || !std::isfinite(h))
      throw Error(ErrorCode::DomainError, "edge lengths must be positive and finite");
  const bool tri_selector = spec.gamma == BoundarySelector::OneLeg ||
                            spec.gamma == BoundarySelector::TwoLegs ||
                            spec.gamma == BoundarySelector::Hypotenuse;
  if (tri_selector != is_triangle(spec.shape))
    throw Error(ErrorCode::DomainError, std::string("boundary selector '") + to_string(spec.gamma) +
                                            "' is not admissible for shape '" +
                                            shape_name(spec.shape) + "'");
}

/**
 * The triangle whose characteristic length for @p gamma equals @p h.
 *
 * For a leg or both legs that length is the leg itself. For the hypotenuse it
 * is half the hypotenuse, so the leg is h*sqrt(2).
 */
inline RightIsoTriangle triangle_from_case_length(double h, BoundarySelector gamma) {
  return RightIsoTriangle{gamma == BoundarySelector::Hypotenuse ? h * std::sqrt(2.0) : h};
}

/// Inverse of triangle_from_case_length.
inline double case_length(const RightIsoTriangle& t, BoundarySelector gamma) {
  return gamma == BoundarySelector::Hypotenuse ? t.leg / std::sqrt(2.0) : t.leg;
}

}  // namespace poincare
