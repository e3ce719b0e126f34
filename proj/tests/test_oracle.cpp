#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "poincare/constants.hpp"
#include "poincare/eigen_oracle.hpp"

using namespace poincare;
using Catch::Matchers::WithinRel;
using B = BoundarySelector;
using K = ConstantKind;

namespace {
constexpr double pi = std::numbers::pi;

EigenResult solve(const DomainSpec& spec, EigenProblemKind kind, int level, const EigenOptions& opt = {}) {
  return smallest_positive_eigenvalue(assemble(build_reference_mesh(spec, level), kind), opt);
}
}  // namespace

TEST_CASE("oracle reproduces documented eigenvalues at level 5", "[oracle]") {
  CHECK_THAT(solve({Rectangle{1, 1}, B::FullBoundary}, EigenProblemKind::DomainNorm, 5).lambda_min_positive,
             WithinRel(pi * pi, 0.01));
  CHECK_THAT(solve({Rectangle{1, 1}, B::OneSide}, EigenProblemKind::TraceNorm, 5).lambda_min_positive,
             WithinRel(pi * std::tanh(pi), 0.01));
  CHECK_THAT(solve(DomainSpec{triangle_from_case_length(1.0, B::Hypotenuse), B::Hypotenuse},
                   EigenProblemKind::TraceNorm, 5)
                 .lambda_min_positive,
             WithinRel(1.0, 0.01));
}

TEST_CASE("oracle convergence tables approach the closed forms from above", "[oracle]") {
  const double z = root_cot1();
  const auto leg = verify_constant({RightIsoTriangle{1}, B::OneLeg}, K::C1, 2, 5);
  REQUIRE(leg.size() == 4);
  for (std::size_t i = 0; i < leg.size(); ++i) {
    CHECK(leg[i].lambda_h >= z * z - 1e-9);
    if (i > 0) CHECK(leg[i].relative_gap < leg[i - 1].relative_gap);
  }
  CHECK(leg.back().relative_gap < 0.01);
  CHECK_THAT(leg.back().lambda_closed, WithinRel(4.11587, 1e-5));

  const auto rect = verify_constant({Rectangle{1, 2}, B::FullBoundary}, K::C1, 2, 5);
  CHECK_THAT(rect.back().lambda_h, WithinRel(pi * pi / 4, 0.01));

  const auto legs = verify_constant({RightIsoTriangle{1}, B::TwoLegs}, K::C2, 2, 5);
  const double z0 = root_tanh_tan(1.0);
  CHECK_THAT(legs.back().lambda_closed, WithinRel(2 * z0 * std::tanh(z0), 1e-12));
  CHECK_THAT(legs.back().lambda_h, WithinRel(2 * z0 * std::tanh(z0), 0.01));
}

TEST_CASE("friedrichs and neumann kinds", "[oracle]") {
  const auto cf = verify_constant({Rectangle{1, 1.4}, B::OneSide}, K::CF, 1, 5);
  CHECK(cf.back().relative_gap >= 0.0);
  CHECK(cf.back().relative_gap < 0.01);
  const auto cp = verify_constant({RightIsoTriangle{1.5}, B::OneLeg}, K::CP, 1, 5);
  CHECK(cp.back().relative_gap < 0.01);
  // every node of the unrefined triangle lies on the two legs
  CHECK_THROWS_AS(verify_constant({RightIsoTriangle{1}, B::TwoLegs}, K::CF, 0, 0), Error);
}

TEST_CASE("eigenvectors satisfy the mean constraint", "[oracle]") {
  for (auto kind : {EigenProblemKind::DomainNorm, EigenProblemKind::TraceNorm})
    for (const DomainSpec& spec : {DomainSpec{Rectangle{1, 0.6}, B::OneSide}, DomainSpec{RightIsoTriangle{1}, B::TwoLegs},
                                   DomainSpec{RightIsoTriangle{1}, B::Hypotenuse}}) {
      const auto mesh = build_reference_mesh(spec, 4);
      const auto a = assemble(mesh, kind);
      const auto r = smallest_positive_eigenvalue(a);
      CHECK(r.constraint_violation <= 1e-10);
      const auto Mg = fem::boundary_mass(mesh, [](const BoundaryEdge<bool>& e) { return e.tag; });
      const double norm_gamma = std::sqrt(r.eigenvector.dot(Mg * r.eigenvector));
      CHECK(std::abs(a.constraint->dot(r.eigenvector)) <= 1e-10 * norm_gamma);
      // Rayleigh quotient matches the reported eigenvalue
      const double q = r.eigenvector.dot(a.stiffness * r.eigenvector) / r.eigenvector.dot(a.gram * r.eigenvector);
      CHECK_THAT(q, WithinRel(r.lambda_min_positive, 1e-10));
    }
}

TEST_CASE("dense and Lanczos routes agree", "[oracle]") {
  EigenOptions lanczos;
  lanczos.dense_threshold = 0;
  for (auto [spec, kind] : {std::pair{DomainSpec{RightIsoTriangle{1}, B::OneLeg}, EigenProblemKind::DomainNorm},
                            std::pair{DomainSpec{Rectangle{1, 2}, B::FullBoundary}, EigenProblemKind::DomainNorm},
                            std::pair{DomainSpec{RightIsoTriangle{1}, B::TwoLegs}, EigenProblemKind::DirichletOnGamma},
                            std::pair{DomainSpec{Rectangle{1.2, 1}, B::OneSide}, EigenProblemKind::NeumannFree}}) {
    const auto a = assemble(build_reference_mesh(spec, 4), kind);
    const double dense = smallest_positive_eigenvalue(a).lambda_min_positive;
    const double krylov = smallest_positive_eigenvalue(a, lanczos).lambda_min_positive;
    CHECK_THAT(krylov, WithinRel(dense, 1e-9));
  }
}

TEST_CASE("trace constant decreases when the domain grows behind Gamma", "[oracle]") {
  // (0,1)x(0,1) is contained in (0,2)x(0,1) and both share Gamma = {x1 = 0}
  for (int level : {2, 3, 4}) {
    const double small = solve({Rectangle{1, 1}, B::OneSide}, EigenProblemKind::TraceNorm, level).lambda_min_positive;
    const double large = solve({Rectangle{2, 1}, B::OneSide}, EigenProblemKind::TraceNorm, level).lambda_min_positive;
    CHECK(1 / std::sqrt(small) >= 1 / std::sqrt(large));
  }
}

TEST_CASE("triangle with the full boundary gives a stable one-sided estimate", "[oracle]") {
  const DomainSpec spec{RightIsoTriangle{1}, B::FullBoundary};
  std::vector<double> lam;
  for (int level = 1; level <= 5; ++level)
    lam.push_back(solve(spec, EigenProblemKind::TraceNorm, level).lambda_min_positive);
  for (std::size_t i = 1; i < lam.size(); ++i) CHECK(lam[i] <= lam[i - 1] + 1e-12);
  // successive differences contract like a convergent sequence
  const double d1 = lam[3] - lam[4], d0 = lam[2] - lam[3];
  CHECK(d1 < 0.5 * d0);
  const double limit = lam[4] - d1 * d1 / (d0 - d1);
  CHECK(limit <= lam[4]);
  CHECK((lam[4] - limit) / limit < 0.01);
}

TEST_CASE("oracle rejects unsupported inputs", "[oracle]") {
  CHECK_THROWS_AS(verify_constant({Box{1, 1, 1}, B::OneSide}, K::C1, 1, 2), Error);
  CHECK_THROWS_AS(problem_for(K::CPUpperBound), Error);
  CHECK_THROWS_AS(verify_constant({Rectangle{1, 1}, B::OneSide}, K::C1, 3, 2), Error);
}
