#include <catch_amalgamated.hpp>

#include "poincare/eigenfunctions.hpp"

using namespace poincare;
using B = BoundarySelector;

namespace {
template <int N>
void check_exact(const ClosedFormEigenfunction<N>& ef, const DomainSpec& spec) {
  const auto r = check_closed_form_eigenfunction(ef, spec);
  INFO(ef.id);
  CHECK(r.pde_residual <= 1e-8);
  CHECK(r.boundary_residual <= 1e-8);
  CHECK(r.mean_residual <= 1e-8);
  CHECK(r.interior_points == region::kInteriorSamples);
  CHECK(r.boundary_points > 0);
}
}  // namespace

TEST_CASE("closed-form eigenfunctions solve their problems", "[eigenfunctions]") {
  namespace ef = eigenfunctions;
  for (double L : {1.0, 2.5}) {
    const DomainSpec leg{RightIsoTriangle{L}, B::OneLeg}, legs{RightIsoTriangle{L}, B::TwoLegs},
        hyp{RightIsoTriangle{L}, B::Hypotenuse};
    check_exact(ef::leg_domain(leg), leg);
    check_exact(ef::leg_trace(leg), leg);
    check_exact(ef::legs_domain(legs), legs);
    check_exact(ef::legs_trace(legs), legs);
    check_exact(ef::hyp_odd_domain(hyp), hyp);
    check_exact(ef::hyp_odd_trace(hyp), hyp);
    const DomainSpec full{Rectangle{L, 1.7}, B::FullBoundary}, side{Rectangle{L, 1.7}, B::OneSide};
    check_exact(ef::rect_full_even(full), full);
    check_exact(ef::rect_full_odd(full), full);
    for (int k : {1, 2, 3}) check_exact(ef::rect_side_trace(side, k), side);
    const DomainSpec box{Box{0.7, 1.1, 1.6 * L}, B::FullBoundary};
    check_exact(ef::box_full_odd(box), box);
  }
}

TEST_CASE("eigenvalues of the closed forms match the sharp constants", "[eigenfunctions]") {
  using K = ConstantKind;
  namespace ef = eigenfunctions;
  const DomainSpec leg{RightIsoTriangle{1.3}, B::OneLeg}, legs{RightIsoTriangle{1.3}, B::TwoLegs},
      hyp{RightIsoTriangle{1.3}, B::Hypotenuse}, full{Rectangle{0.8, 1.9}, B::FullBoundary},
      side{Rectangle{0.8, 1.9}, B::OneSide}, box{Box{0.7, 1.1, 1.6}, B::FullBoundary};
  using Catch::Matchers::WithinRel;
  CHECK_THAT(ef::leg_domain(leg).lambda, WithinRel(sharp_constant(leg, K::C1).eigenvalue, 1e-12));
  CHECK_THAT(ef::leg_trace(leg).lambda, WithinRel(sharp_constant(leg, K::C2).eigenvalue, 1e-12));
  CHECK_THAT(ef::legs_domain(legs).lambda, WithinRel(sharp_constant(legs, K::C1).eigenvalue, 1e-12));
  CHECK_THAT(ef::legs_trace(legs).lambda, WithinRel(sharp_constant(legs, K::C2).eigenvalue, 1e-12));
  CHECK_THAT(ef::hyp_odd_trace(hyp).lambda, WithinRel(sharp_constant(hyp, K::C2).eigenvalue, 1e-12));
  CHECK_THAT(ef::rect_full_even(full).lambda, WithinRel(std::pow(root_rect_cot(0.8, 1.9), 2), 1e-12));
  CHECK_THAT(ef::rect_full_odd(full).lambda, WithinRel(sharp_constant(full, K::C2).eigenvalue, 1e-12));
  CHECK_THAT(ef::rect_side_trace(side).lambda, WithinRel(sharp_constant(side, K::C2).eigenvalue, 1e-12));
  CHECK_THAT(ef::box_full_odd(box).lambda, WithinRel(sharp_constant(box, K::C2).eigenvalue, 1e-12));
}

TEST_CASE("a wrong eigenvalue is detected", "[eigenfunctions]") {
  const DomainSpec leg{RightIsoTriangle{1}, B::OneLeg}, side{Rectangle{1, 1}, B::OneSide};
  auto a = eigenfunctions::leg_domain(leg);
  a.lambda *= 1.001;
  CHECK(check_closed_form_eigenfunction(a, leg).pde_residual > 1e-4);
  auto b = eigenfunctions::rect_side_trace(side);
  b.lambda *= 1.001;
  CHECK(check_closed_form_eigenfunction(b, side).boundary_residual > 1e-4);
  auto c = eigenfunctions::leg_domain(leg);
  c.f = [](const std::array<Jet<2>, 2>& x) { return cos(2.0 * x[0]) + cos(2.0 * x[1]); };
  const auto rc = check_closed_form_eigenfunction(c, leg);
  CHECK(std::max({rc.pde_residual, rc.boundary_residual, rc.mean_residual}) > 1e-3);
}

TEST_CASE("eigenfunction checks reject a different domain", "[eigenfunctions]") {
  const DomainSpec leg{RightIsoTriangle{1}, B::OneLeg};
  const auto ef = eigenfunctions::leg_domain(leg);
  for (const DomainSpec& other : {DomainSpec{RightIsoTriangle{1.1}, B::OneLeg}, DomainSpec{RightIsoTriangle{1}, B::TwoLegs},
                                 DomainSpec{Rectangle{1, 1}, B::OneSide}}) {
    try {
      (void)check_closed_form_eigenfunction(ef, other);
      FAIL();
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::MismatchedDomain);
    }
  }
  try {
    (void)eigenfunctions::leg_trace({RightIsoTriangle{1}, B::Hypotenuse});
    FAIL();
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MismatchedDomain);
  }
}
