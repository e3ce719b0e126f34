#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "poincare/cell_constants.hpp"
#include "support/cell_oracle.hpp"

using namespace poincare;
using Catch::Matchers::WithinRel;
using K = ConstantKind;

namespace {
// right angle at the origin, legs along the axes
Triangle unit_corner(double s = 1.0) { return {Point{0, 0}, Point{s, 0}, Point{0, s}}; }

Triangle moved(const Triangle& t, double angle, Point shift) {
  Triangle r;
  for (int i = 0; i < 3; ++i)
    r[i] = {std::cos(angle) * t[i][0] - std::sin(angle) * t[i][1] + shift[0],
            std::sin(angle) * t[i][0] + std::cos(angle) * t[i][1] + shift[1]};
  return r;
}

ErrorCode code_of(const Triangle& t, std::vector<int> e, K kind) {
  try {
    (void)mapped_constant(t, e, kind);
  } catch (const Error& err) {
    return err.code();
  }
  FAIL("mapping unexpectedly succeeded");
  return ErrorCode::InvalidMesh;
}
}  // namespace

TEST_CASE("reference cell reproduces the sharp constants", "[cells]") {
  const double z = root_cot1();
  const Triangle t = unit_corner();
  // local edge 0 is a leg, edge 2 the other leg, edge 1 the hypotenuse
  CHECK_THAT(cell_constant(t, CellClass::DirichletTouching, {0}), WithinRel(1 / z, 1e-12));
  CHECK_THAT(cell_constant(t, CellClass::DirichletTouching, {0}), WithinRel(0.49291, 1e-5));
  CHECK_THAT(cell_constant(unit_corner(2), CellClass::DirichletTouching, {0}), WithinRel(2 / z, 1e-12));
  CHECK_THAT(cell_constant(t, CellClass::DirichletTouching, {0, 2}), WithinRel(1 / std::numbers::pi, 1e-12));
  CHECK_THAT(cell_trace_constant(t, {1}), WithinRel(std::pow(0.5, 0.25), 1e-12));
  CHECK_THAT(cell_trace_constant(t, {0}),
             WithinRel(sharp_constant({RightIsoTriangle{1}, BoundarySelector::OneLeg}, K::C2).value, 1e-12));
  CHECK_THAT(mapped_constant(t, {0, 2}, K::CF).value,
             WithinRel(sharp_constant({RightIsoTriangle{1}, BoundarySelector::TwoLegs}, K::CF).value, 1e-12));
  CHECK_THAT(poincare_cell_constant(t), WithinRel(1 / std::numbers::pi, 1e-12));
  CHECK(cell_constant(t, CellClass::Interior) == poincare_cell_constant(t));
}

TEST_CASE("mapped constants are invariant under rigid motions", "[cells]") {
  for (const auto& t : testing::random_triangles(5, 11u)) {
    const Triangle m = moved(t, 0.7, {3.0, -2.0});
    for (int e = 0; e < 3; ++e) {
      CHECK_THAT(mapped_constant(m, {e}, K::C1).value, WithinRel(mapped_constant(t, {e}, K::C1).value, 1e-12));
      CHECK_THAT(mapped_constant(m, {e}, K::C2).value, WithinRel(mapped_constant(t, {e}, K::C2).value, 1e-12));
    }
    CHECK_THAT(poincare_cell_constant(m), WithinRel(poincare_cell_constant(t), 1e-12));
  }
}

TEST_CASE("mapped constants scale like the sharp ones", "[cells]") {
  for (const auto& t : testing::random_triangles(5, 12u)) {
    Triangle s;
    for (int i = 0; i < 3; ++i) s[i] = {2.5 * t[i][0], 2.5 * t[i][1]};
    for (int e = 0; e < 3; ++e) {
      CHECK_THAT(mapped_constant(s, {e}, K::C1).value, WithinRel(2.5 * mapped_constant(t, {e}, K::C1).value, 1e-12));
      CHECK_THAT(mapped_constant(s, {e}, K::C2).value,
                 WithinRel(std::sqrt(2.5) * mapped_constant(t, {e}, K::C2).value, 1e-12));
    }
  }
}

TEST_CASE("rotated reference cells are recognised as right isosceles", "[cells]") {
  const Triangle t = moved(unit_corner(0.3), 1.1, {0.2, 0.4});
  CHECK(is_right_isosceles(t));
  CHECK_THAT(poincare_cell_constant(t), WithinRel(0.3 / std::numbers::pi, 1e-9));
  const Triangle skew{Point{0, 0}, Point{1, 0}, Point{0.1, 1}};
  CHECK_FALSE(is_right_isosceles(skew));
  CHECK_THAT(poincare_cell_constant(skew), WithinRel(std::hypot(0.9, 1.0) / std::numbers::pi, 1e-12));
}

TEST_CASE("mapped bounds dominate the per-cell oracle", "[cells]") {
  for (const auto& t : testing::random_triangles(6, 2024u)) {
    for (int e = 0; e < 3; ++e) {
      CHECK(mapped_constant(t, {e}, K::C1).value >= testing::oracle_cell_constant(t, {e}, K::C1, 4));
      CHECK(mapped_constant(t, {e}, K::C2).value >= testing::oracle_cell_constant(t, {e}, K::C2, 4));
    }
    CHECK(mapped_constant(t, {0, 1}, K::CF).value >= testing::oracle_cell_constant(t, {0, 1}, K::CF, 4));
    CHECK(poincare_cell_constant(t) >= testing::oracle_cell_constant(t, {0}, K::CP, 4));
  }
}

TEST_CASE("two Gamma edges need equal lengths for mean-zero kinds", "[cells]") {
  const Triangle t{Point{0, 0}, Point{2, 0}, Point{0, 1}};
  CHECK(code_of(t, {0, 2}, K::C1) == ErrorCode::UnmappableGammaPart);
  CHECK(code_of(t, {0, 2}, K::C2) == ErrorCode::UnmappableGammaPart);
  CHECK(code_of(t, {0, 1, 2}, K::C1) == ErrorCode::UnmappableGammaPart);
  CHECK(code_of(t, {}, K::C1) == ErrorCode::UnmappableGammaPart);
  CHECK_NOTHROW(mapped_constant(t, {0, 2}, K::CF));
  const Triangle iso{Point{0, 0}, Point{1, 0}, Point{0.5, 1.2}};
  CHECK_NOTHROW(mapped_constant(iso, {1, 2}, K::C1));
  CHECK(mapped_constant(iso, {1, 2}, K::C1).selector == BoundarySelector::TwoLegs);
  CHECK(mapped_constant(iso, {1, 2}, K::C1).value >= testing::oracle_cell_constant(iso, {1, 2}, K::C1, 4));
  CHECK(mapped_constant(iso, {1, 2}, K::C2).value >= testing::oracle_cell_constant(iso, {1, 2}, K::C2, 4));
  const Triangle flat{Point{0, 0}, Point{1, 0}, Point{2, 1e-17}};
  CHECK(code_of(flat, {0}, K::C1) == ErrorCode::DegenerateCell);
}
