#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "poincare/constants.hpp"
#include "poincare/domain.hpp"
#include "poincare/jet.hpp"
#include "poincare/quadrature.hpp"
#include "poincare/roots.hpp"

namespace poincare {

enum class Pde {
  Helmholtz,  ///< -Laplace u = lambda u
  Laplace,    ///< Laplace u = 0
};

enum class FacetCondition {
  Neumann,    ///< d_n u = 0
  Dirichlet,  ///< u = 0
  Steklov,    ///< d_n u = lambda u
  Flux,       ///< d_n u = mu = -(lambda / |Gamma|) int u over the region
};

template <int N>
using Coord = std::array<double, N>;

template <int N>
struct WeightedPoint {
  Coord<N> x;
  double w;
};

/// Flat piece of the region boundary with its outward normal and samples.
template <int N>
struct Facet {
  Coord<N> normal;
  FacetCondition condition;
  bool on_gamma;
  std::vector<Coord<N>> samples;
  std::vector<WeightedPoint<N>> quadrature;
};

template <int N>
struct Region {
  std::vector<Coord<N>> interior_samples;
  std::vector<WeightedPoint<N>> interior_quadrature;
  std::vector<Facet<N>> facets;
};

/// An explicit eigenfunction together with the region and the problem it solves.
template <int N>
struct ClosedFormEigenfunction {
  std::string id;
  DomainSpec spec;  ///< the domain whose constant this function realises
  std::function<Jet<N>(const std::array<Jet<N>, N>&)> f;
  double lambda;
  Pde pde;
  Region<N> region;  ///< coordinates of the (possibly reduced) region it solves on
};

struct EigenfunctionReport {
  double pde_residual;       ///< max |PDE| / max |lambda u| (max Hessian entry for Laplace)
  double boundary_residual;  ///< max flux defect / max |grad u|, value defect / max |u|
  double mean_residual;      ///< |int_Gamma u| / (sqrt|Gamma| |u|_Gamma)
  int interior_points;
  int boundary_points;
};

namespace region {

inline constexpr int kInteriorSamples = 200;
inline constexpr int kFacetSamples = 100;

inline double halton(int index, int base) {
  double f = 1.0, r = 0.0;
  for (int i = index; i > 0; i /= base) {
    f /= base;
    r += f * (i % base);
  }
  return r;
}

/// Convex polygon given counterclockwise; one facet per edge.
inline Region<2> polygon(const std::vector<Coord<2>>& v, const std::vector<FacetCondition>& cond,
                         const std::vector<bool>& on_gamma) {
  Region<2> r;
  const std::size_t n = v.size();
  std::vector<double> cum;
  double total = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    total += signed_area(v[0], v[i], v[i + 1]);
    cum.push_back(total);
  }
  for (int k = 1; k <= kInteriorSamples; ++k) {
    const double z = halton(k, 5) * total;
    std::size_t t = 0;
    while (t + 1 < cum.size() && cum[t] < z) ++t;
    double s = halton(k, 2), u = halton(k, 3);
    if (s + u > 1.0) {
      s = 1.0 - s;
      u = 1.0 - u;
    }
    r.interior_samples.push_back(quad::map_bary(v[0], v[t + 1], v[t + 2], {1.0 - s - u, s, u}));
  }
  const auto rule = quad::collapsed_triangle_rule(24);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double a = signed_area(v[0], v[i], v[i + 1]);
    for (const auto& q : rule) r.interior_quadrature.push_back({quad::map_bary(v[0], v[i], v[i + 1], q.bary), a * q.weight});
  }
  const auto gl = quad::gauss_legendre(32);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = v[i];
    const auto& b = v[(i + 1) % n];
    const double len = distance(a, b);
    Facet<2> f{{(b[1] - a[1]) / len, -(b[0] - a[0]) / len}, cond[i], on_gamma[i], {}, {}};
    for (int k = 0; k < kFacetSamples; ++k) {
      const double t = (k + 0.5) / kFacetSamples;
      f.samples.push_back({a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])});
    }
    for (const auto& q : gl) f.quadrature.push_back({{a[0] + q.t * (b[0] - a[0]), a[1] + q.t * (b[1] - a[1])}, len * q.weight});
    r.facets.push_back(std::move(f));
  }
  return r;
}

/// Axis-aligned box [lo, hi]; facets ordered -x1, +x1, -x2, +x2, -x3, +x3.
inline Region<3> box(const Coord<3>& lo, const Coord<3>& hi, const std::array<FacetCondition, 6>& cond,
                     const std::array<bool, 6>& on_gamma) {
  Region<3> r;
  for (int k = 1; k <= kInteriorSamples; ++k) {
    const double t[3] = {halton(k, 2), halton(k, 3), halton(k, 5)};
    Coord<3> x{};
    for (int i = 0; i < 3; ++i) x[i] = lo[i] + t[i] * (hi[i] - lo[i]);
    r.interior_samples.push_back(x);
  }
  const auto gl = quad::gauss_legendre(16);
  double vol = 1.0;
  for (int i = 0; i < 3; ++i) vol *= hi[i] - lo[i];
  for (const auto& a : gl)
    for (const auto& b : gl)
      for (const auto& c : gl)
        r.interior_quadrature.push_back({{lo[0] + a.t * (hi[0] - lo[0]), lo[1] + b.t * (hi[1] - lo[1]),
                                          lo[2] + c.t * (hi[2] - lo[2])},
                                         vol * a.weight * b.weight * c.weight});
  for (int face = 0; face < 6; ++face) {
    const int axis = face / 2;
    const bool upper = face % 2 == 1;
    const int p = (axis + 1) % 3, q = (axis + 2) % 3;
    Facet<3> f{{0.0, 0.0, 0.0}, cond[face], on_gamma[face], {}, {}};
    f.normal[axis] = upper ? 1.0 : -1.0;
    auto point = [&](double s, double t) {
      Coord<3> x{};
      x[axis] = upper ? hi[axis] : lo[axis];
      x[p] = lo[p] + s * (hi[p] - lo[p]);
      x[q] = lo[q] + t * (hi[q] - lo[q]);
      return x;
    };
    for (int i = 0; i < 10; ++i)
      for (int j = 0; j < 10; ++j) f.samples.push_back(point((i + 0.5) / 10, (j + 0.5) / 10));
    const double area = (hi[p] - lo[p]) * (hi[q] - lo[q]);
    for (const auto& a : gl)
      for (const auto& b : gl) f.quadrature.push_back({point(a.t, b.t), area * a.weight * b.weight});
    r.facets.push_back(std::move(f));
  }
  return r;
}

}  // namespace region

template <int N, class X>
Jet<N> evaluate_jet(const ClosedFormEigenfunction<N>& ef, const X& x) {
  std::array<Jet<N>, N> vars;
  for (int i = 0; i < N; ++i) vars[i] = Jet<N>::variable(x[i], i);
  return ef.f(vars);
}

namespace detail {

inline bool same_spec(const DomainSpec& a, const DomainSpec& b) {
  if (a.gamma != b.gamma || a.shape.index() != b.shape.index()) return false;
  const auto da = dimensions(a.shape), db = dimensions(b.shape);
  for (std::size_t i = 0; i < da.size(); ++i)
    if (std::abs(da[i] - db[i]) > 1e-12 * std::max(std::abs(da[i]), std::abs(db[i]))) return false;
  return true;
}

inline void require(const DomainSpec& spec, bool ok, const char* what) {
  validate(spec);
  if (!ok) throw Error(ErrorCode::MismatchedDomain, std::string(what) + " does not live on this domain");
}

}  // namespace detail

/**
 * Evaluates the PDE, boundary-condition and mean-zero residuals of @p ef at
 * quasi-random interior points and uniform facet points.
 *
 * Throws MismatchedDomain if @p spec is not the domain @p ef belongs to.
 */
template <int N>
EigenfunctionReport check_closed_form_eigenfunction(const ClosedFormEigenfunction<N>& ef, const DomainSpec& spec) {
  if (!detail::same_spec(ef.spec, spec))
    throw Error(ErrorCode::MismatchedDomain, ef.id + " does not belong to the requested domain");
  EigenfunctionReport rep{0.0, 0.0, 0.0, 0, 0};
  double pde_scale = 0.0, grad_scale = 0.0;
  for (const auto& x : ef.region.interior_samples) {
    const auto j = evaluate_jet(ef, x);
    const double res = ef.pde == Pde::Helmholtz ? j.laplacian() + ef.lambda * j.v : j.laplacian();
    rep.pde_residual = std::max(rep.pde_residual, std::abs(res));
    if (ef.pde == Pde::Helmholtz) {
      pde_scale = std::max(pde_scale, std::abs(ef.lambda * j.v));
    } else {
      for (int i = 0; i < N; ++i)
        for (int k = 0; k < N; ++k) pde_scale = std::max(pde_scale, std::abs(j.h[i][k]));
    }
    ++rep.interior_points;
  }
  rep.pde_residual /= std::max(pde_scale, 1e-300);

  double gamma_measure = 0.0, integral_u = 0.0;
  for (const auto& q : ef.region.interior_quadrature) integral_u += q.w * evaluate_jet(ef, q.x).v;
  for (const auto& f : ef.region.facets)
    if (f.on_gamma)
      for (const auto& q : f.quadrature) gamma_measure += q.w;
  const double mu = gamma_measure > 0.0 ? -ef.lambda * integral_u / gamma_measure : 0.0;

  double flux_defect = 0.0, value_defect = 0.0, value_scale = 0.0;
  for (const auto& f : ef.region.facets)
    for (const auto& x : f.samples) {
      const auto j = evaluate_jet(ef, x);
      double dn = 0.0, gnorm = 0.0;
      for (int i = 0; i < N; ++i) {
        dn += f.normal[i] * j.g[i];
        gnorm += j.g[i] * j.g[i];
      }
      grad_scale = std::max(grad_scale, std::sqrt(gnorm));
      value_scale = std::max(value_scale, std::abs(j.v));
      switch (f.condition) {
        case FacetCondition::Neumann: flux_defect = std::max(flux_defect, std::abs(dn)); break;
        case FacetCondition::Dirichlet: value_defect = std::max(value_defect, std::abs(j.v)); break;
        case FacetCondition::Steklov: flux_defect = std::max(flux_defect, std::abs(dn - ef.lambda * j.v)); break;
        case FacetCondition::Flux: flux_defect = std::max(flux_defect, std::abs(dn - mu)); break;
      }
      ++rep.boundary_points;
    }
  rep.boundary_residual = std::max(flux_defect / std::max(grad_scale, 1e-300),
                                   value_defect / std::max(value_scale, 1e-300));

  double mean = 0.0, norm2 = 0.0;
  for (const auto& f : ef.region.facets)
    if (f.on_gamma)
      for (const auto& q : f.quadrature) {
        const double u = evaluate_jet(ef, q.x).v;
        mean += q.w * u;
        norm2 += q.w * u * u;
      }
  rep.mean_residual = gamma_measure > 0.0 ? std::abs(mean) / std::sqrt(gamma_measure * norm2) : 0.0;
  return rep;
}

namespace eigenfunctions {

using FC = FacetCondition;

/// cos(z x1/h) + cos(z x2/h) on {0 < x2 < x1 < h}, Gamma = {x1 = h}, z the root of z cot z + 1 = 0.
inline ClosedFormEigenfunction<2> leg_domain(const DomainSpec& spec) {
  const auto* t = std::get_if<RightIsoTriangle>(&spec.shape);
  detail::require(spec, t && spec.gamma == BoundarySelector::OneLeg, "leg_domain");
  const double h = t->leg, z = root_cot1();
  return {"v0_tilde", spec,
          [h, z](const std::array<Jet<2>, 2>& x) { return cos(z * x[0] / h) + cos(z * x[1] / h); },
          (z / h) * (z / h), Pde::Helmholtz,
          region::polygon({{0, 0}, {h, 0}, {h, h}}, {FC::Neumann, FC::Flux, FC::Neumann}, {false, true, false})};
}

/// cos(z x1/h) cosh(z x2/h) + cosh(z x1/h) cos(z x2/h), z the root of tan z + tanh z = 0.
inline ClosedFormEigenfunction<2> leg_trace(const DomainSpec& spec) {
  const auto* t = std::get_if<RightIsoTriangle>(&spec.shape);
  detail::require(spec, t && spec.gamma == BoundarySelector::OneLeg, "leg_trace");
  const double h = t->leg, z = root_tan_tanh();
  return {"v1_tilde", spec,
          [h, z](const std::array<Jet<2>, 2>& x) {
            const auto a = z * x[0] / h, b = z * x[1] / h;
            return cos(a) * cosh(b) + cosh(a) * cos(b);
          },
          z / h * std::tanh(z), Pde::Laplace,
          region::polygon({{0, 0}, {h, 0}, {h, h}}, {FC::Neumann, FC::Steklov, FC::Neumann}, {false, true, false})};
}

/// cos(pi x1/h) + cos(pi x2/h) with Gamma the two legs.
inline ClosedFormEigenfunction<2> legs_domain(const DomainSpec& spec) {
  const auto* t = std::get_if<RightIsoTriangle>(&spec.shape);
  detail::require(spec, t && spec.gamma == BoundarySelector::TwoLegs, "legs_domain");
  const double h = t->leg, k = std::numbers::pi / h;
  return {"legs_cos", spec, [k](const std::array<Jet<2>, 2>& x) { return cos(k * x[0]) + cos(k * x[1]); }, k * k,
          Pde::Helmholtz,
          region::polygon({{0, 0}, {h, 0}, {h, h}}, {FC::Flux, FC::Flux, FC::Neumann}, {true, true, false})};
}

/// sin(xi1) cosh(xi2) + cosh(xi1) sin(xi2), xi = z0 (2x/h - 1), z0 = z0(1).
inline ClosedFormEigenfunction<2> legs_trace(const DomainSpec& spec) {
  const auto* t = std::get_if<RightIsoTriangle>(&spec.shape);
  detail::require(spec, t && spec.gamma == BoundarySelector::TwoLegs, "legs_trace");
  const double h = t->leg, z = root_tanh_tan(1.0);
  return {"legs_sin_cosh", spec,
          [h, z](const std::array<Jet<2>, 2>& x) {
            const auto a = z * (2.0 * x[0] / h - 1.0), b = z * (2.0 * x[1] / h - 1.0);
            return sin(a) * cosh(b) + cosh(a) * sin(b);
          },
          2.0 * z / h * std::tanh(z), Pde::Laplace,
          region::polygon({{0, 0}, {h, 0}, {h, h}}, {FC::Steklov, FC::Steklov, FC::Neumann}, {true, true, false})};
}

/// sin(pi x1/2h) sin(pi x2/2h) on {0 < x2 < x1 < h}, zero on {x2 = 0}; h is half the hypotenuse.
inline ClosedFormEigenfunction<2> hyp_odd_domain(const DomainSpec& spec) {
  const auto* t = std::get_if<RightIsoTriangle>(&spec.shape);
  detail::require(spec, t && spec.gamma == BoundarySelector::Hypotenuse, "hyp_odd_domain");
  const double h = case_length(*t, spec.gamma), k = std::numbers::pi / (2.0 * h);
  return {"u0_hat", spec, [k](const std::array<Jet<2>, 2>& x) { return sin(k * x[0]) * sin(k * x[1]); },
          2.0 * k * k, Pde::Helmholtz,
          region::polygon({{0, 0}, {h, 0}, {h, h}}, {FC::Dirichlet, FC::Neumann, FC::Neumann}, {false, false, false})};
}

/// x1 x2 on {0 < x2 < x1 < h}: zero on {x2 = 0}, Steklov on {x1 = h}; h is half the hypotenuse.
inline ClosedFormEigenfunction<2> hyp_odd_trace(const DomainSpec& spec) {
  const auto* t = std::get_if<RightIsoTriangle>(&spec.shape);
  detail::require(spec, t && spec.gamma == BoundarySelector::Hypotenuse, "hyp_odd_trace");
  const double h = case_length(*t, spec.gamma);
  return {"x1x2", spec, [](const std::array<Jet<2>, 2>& x) { return x[0] * x[1]; }, 1.0 / h, Pde::Laplace,
          region::polygon({{0, 0}, {h, 0}, {h, h}}, {FC::Dirichlet, FC::Steklov, FC::Neumann}, {false, false, false})};
}

/**
 * cos(w x1)/sin(w h1/2) + cos(w x2)/sin(w h2/2) on the quarter (0, h1/2) x (0, h2/2)
 * of the centred rectangle, flux condition on the outer sides.
 */
inline ClosedFormEigenfunction<2> rect_full_even(const DomainSpec& spec) {
  const auto* r = std::get_if<Rectangle>(&spec.shape);
  detail::require(spec, r && spec.gamma == BoundarySelector::FullBoundary, "rect_full_even");
  const double h1 = r->h1, h2 = r->h2, w = root_rect_cot(h1, h2);
  const double s1 = std::sin(w * h1 / 2), s2 = std::sin(w * h2 / 2);
  return {"v0", spec, [w, s1, s2](const std::array<Jet<2>, 2>& x) { return cos(w * x[0]) / s1 + cos(w * x[1]) / s2; },
          w * w, Pde::Helmholtz,
          region::polygon({{0, 0}, {h1 / 2, 0}, {h1 / 2, h2 / 2}, {0, h2 / 2}},
                          {FC::Neumann, FC::Flux, FC::Flux, FC::Neumann}, {false, true, true, false})};
}

/**
 * sin(w s) cosh(w t) on the half of the centred rectangle with s > 0, where s
 * runs along the longer side; w = 2 z0(alpha0)/sqrt(h1 h2).
 */
inline ClosedFormEigenfunction<2> rect_full_odd(const DomainSpec& spec) {
  const auto* r = std::get_if<Rectangle>(&spec.shape);
  detail::require(spec, r && spec.gamma == BoundarySelector::FullBoundary, "rect_full_odd");
  const double h1 = r->h1, h2 = r->h2;
  const double a = std::max(h1, h2), b = std::min(h1, h2);
  const double alpha = std::sqrt(a / b), w = 2.0 * root_tanh_tan(alpha) / std::sqrt(h1 * h2);
  const std::vector<FC> cond{FC::Steklov, FC::Steklov, FC::Steklov, FC::Dirichlet};
  const std::vector<bool> none(4, false);
  if (h1 >= h2)
    return {"v1", spec, [w](const std::array<Jet<2>, 2>& x) { return sin(w * x[0]) * cosh(w * x[1]); },
            w * std::tanh(w * h2 / 2), Pde::Laplace,
            region::polygon({{0, -h2 / 2}, {h1 / 2, -h2 / 2}, {h1 / 2, h2 / 2}, {0, h2 / 2}}, cond, none)};
  return {"v1", spec, [w](const std::array<Jet<2>, 2>& x) { return sin(w * x[1]) * cosh(w * x[0]); },
          w * std::tanh(w * h1 / 2), Pde::Laplace,
          region::polygon({{h1 / 2, 0}, {h1 / 2, h2 / 2}, {-h1 / 2, h2 / 2}, {-h1 / 2, 0}}, cond, none)};
}

/// cos(pi k x2/h2) cosh(pi k (x1 - h1)/h2) on (0, h1) x (0, h2), Gamma = {x1 = 0}.
inline ClosedFormEigenfunction<2> rect_side_trace(const DomainSpec& spec, int k = 1) {
  const auto* r = std::get_if<Rectangle>(&spec.shape);
  detail::require(spec, r && spec.gamma == BoundarySelector::OneSide && k >= 1, "rect_side_trace");
  const double h1 = r->h1, h2 = r->h2, a = std::numbers::pi * k / h2;
  return {"u_" + std::to_string(k), spec,
          [a, h1](const std::array<Jet<2>, 2>& x) { return cos(a * x[1]) * cosh(a * (x[0] - h1)); },
          a * std::tanh(a * h1), Pde::Laplace,
          region::polygon({{0, 0}, {h1, 0}, {h1, h2}, {0, h2}}, {FC::Neumann, FC::Neumann, FC::Neumann, FC::Steklov},
                          {false, false, false, true})};
}

/// cosh(mu x1) cosh(nu x2) sin(s x3) on the half box {x3 > 0} of the centred box with h3 longest.
inline ClosedFormEigenfunction<3> box_full_odd(const DomainSpec& spec) {
  const auto* b = std::get_if<Box>(&spec.shape);
  detail::require(spec, b && spec.gamma == BoundarySelector::FullBoundary, "box_full_odd");
  const auto r = solve_box_system(b->h1, b->h2, b->h3);
  const double mu = r.mu0, nu = r.nu0, s = std::sqrt(mu * mu + nu * nu);
  return {"U1", spec,
          [mu, nu, s](const std::array<Jet<3>, 3>& x) { return cosh(mu * x[0]) * cosh(nu * x[1]) * sin(s * x[2]); },
          mu * std::tanh(mu * b->h1 / 2), Pde::Laplace,
          region::box({-b->h1 / 2, -b->h2 / 2, 0.0}, {b->h1 / 2, b->h2 / 2, b->h3 / 2},
                      {FC::Steklov, FC::Steklov, FC::Steklov, FC::Steklov, FC::Dirichlet, FC::Steklov},
                      {false, false, false, false, false, false})};
}

}  // namespace eigenfunctions

}  // namespace poincare
