#pragma once

// Bracketed scalar root finding and the characteristic equations whose roots
// determine the sharp constants.

#include <cmath>
#include <concepts>
#include <limits>
#include <numbers>
#include <string>

#include "poincare/error.hpp"

namespace poincare {

template <class G>
concept ScalarFunction = requires(G g, double x) {
  { g(x) } -> std::convertible_to<double>;
};

struct RootOptions {
  /// Absolute width at which the bracket is considered collapsed.
  double x_tol = 1e-13;
  int max_iterations = 400;
};

/**
 * @brief Find a root of @p g inside the bracket [lo, hi].
 *
 * Illinois-modified regula falsi, with a bisection step forced whenever the
 * bracket fails to halve over two consecutive iterations. The bracket is
 * shrunk until its width drops below `opt.x_tol` (or a few ulps), and the best
 * interior point is returned.
 *
 * Throws NoSignChange if g(lo)·g(hi) >= 0, NonFinite if g produces NaN/inf,
 * and NoConvergence if the final point still has |g| > tol.
 */
template <ScalarFunction G>
double solve_bracketed(G&& g, double lo, double hi, double tol, RootOptions opt = {}) {
  if (!(tol > 0.0)) throw Error(ErrorCode::DomainError, "solve_bracketed: tol must be positive");
  if (!(lo < hi)) throw Error(ErrorCode::DomainError, "solve_bracketed: empty bracket");
  auto eval = [&](double x) {
    const double v = static_cast<double>(g(x));
    if (!std::isfinite(v))
      throw Error(ErrorCode::NonFinite, "solve_bracketed: g(" + std::to_string(x) + ") is not finite");
    return v;
  };

  double a = lo, b = hi;
  double fa = eval(a), fb = eval(b);
  if (!(fa * fb < 0.0))
    throw Error(ErrorCode::NoSignChange, "solve_bracketed: g(lo) and g(hi) do not differ in sign");

  // side = +1 if the last update replaced b, -1 if it replaced a.
  int side = 0;
  double width_two_ago = b - a, width_prev = b - a;
  double best_x = std::numeric_limits<double>::quiet_NaN();
  double best_f = std::numeric_limits<double>::infinity();

  for (int it = 0; it < opt.max_iterations; ++it) {
    const double width = b - a;
    const double mid = a + 0.5 * width;
    if (width <= std::max(opt.x_tol, 4.0 * std::numeric_limits<double>::epsilon() * std::abs(mid))) break;

    double x = b - fb * (b - a) / (fb - fa);
    const bool slow = it >= 2 && width > 0.5 * width_two_ago;
    if (!(x > a && x < b) || slow) x = mid;

    const double fx = eval(x);
    if (std::abs(fx) < best_f) {
      best_f = std::abs(fx);
      best_x = x;
    }
    if (fx == 0.0) return x;

    width_two_ago = width_prev;
    width_prev = width;
    if ((fx < 0.0) == (fa < 0.0)) {
      a = x;
      fa = fx;
      if (side == -1) fb *= 0.5;
      side = -1;
    } else {
      b = x;
      fb = fx;
      if (side == +1) fa *= 0.5;
      side = +1;
    }
  }

  const double mid = a + 0.5 * (b - a);
  const double fmid = std::abs(eval(mid));
  if (fmid <= best_f || !std::isfinite(best_x)) {
    best_x = mid;
    best_f = fmid;
  }
  if (best_f > tol)
    throw Error(ErrorCode::NoConvergence,
                "solve_bracketed: residual " + std::to_string(best_f) + " exceeds tolerance");
  return best_x;
}

/// Plain bisection, kept separate from solve_bracketed so tests can use it as
/// an independent reference.
template <ScalarFunction G>
double bisect(G&& g, double lo, double hi, int halvings) {
  double glo = g(lo);
  for (int i = 0; i < halvings; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if ((gm < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Characteristic equations
// ---------------------------------------------------------------------------

namespace characteristic {

/// z cot z + 1
inline double cot1(double z) { return z / std::tan(z) + 1.0; }

/// tan z + tanh z
inline double tan_tanh(double z) { return std::tan(z) + std::tanh(z); }

/// tanh(z/alpha) tan(z alpha) - 1
inline double tanh_tan(double z, double alpha) {
  return std::tanh(z / alpha) * std::tan(z * alpha) - 1.0;
}

/// (h1/2) cot(w h2/2) + (h2/2) cot(w h1/2) + 2/w
inline double rect_cot(double w, double h1, double h2) {
  return 0.5 * h1 / std::tan(0.5 * w * h2) + 0.5 * h2 / std::tan(0.5 * w * h1) + 2.0 / w;
}

}  // namespace characteristic

inline constexpr double kResidualTol = 1e-11;

/// Root of z cot z + 1 = 0 in (0, pi); about 2.02876.
inline double root_cot1() {
  // z cos z + sin z has the same root and no pole on [pi/2, pi].
  constexpr double pi = std::numbers::pi;
  return solve_bracketed([](double z) { return z * std::cos(z) + std::sin(z); }, 0.5 * pi, pi, 1e-14);
}

/// Root of tan z + tanh z = 0 in (0, pi); about 2.3650.
inline double root_tan_tanh() {
  constexpr double pi = std::numbers::pi;
  return solve_bracketed(
      [](double z) { return std::sin(z) * std::cosh(z) + std::cos(z) * std::sinh(z); }, 0.5 * pi, pi,
      1e-13);
}

/// z0(alpha): the root of tanh(z/alpha) tan(z alpha) = 1 with 0 < z alpha < pi/2.
inline double root_tanh_tan(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw Error(ErrorCode::DomainError, "root_tanh_tan: alpha must be positive and finite");
  constexpr double pi = std::numbers::pi;
  const double a2 = alpha * alpha;
  // Solve in w = z alpha. tanh(w/a2) sin w - cos w is smooth on [pi/4, pi/2]
  // and changes sign there since tanh < 1.
  const double w = solve_bracketed(
      [a2](double t) { return std::tanh(t / a2) * std::sin(t) - std::cos(t); }, 0.25 * pi, 0.5 * pi,
      1e-14);
  return w / alpha;
}

namespace detail {

struct TanhTanOffset {
  double eps;  ///< z0 alpha - pi/4
  double u;    ///< coth(z0/alpha) - 1
};

// With w = z0 alpha and x = w/alpha^2 the equation reads tan w = coth x.
// Writing coth x = 1 + u gives w - pi/4 = atan(u / (2 + u)), a contraction in
// eps = w - pi/4 that keeps full relative precision when eps is tiny.
inline TanhTanOffset tanh_tan_offset_parts(double alpha) {
  constexpr double quarter_pi = std::numbers::pi / 4;
  const double a2 = alpha * alpha;
  auto u_of = [a2](double eps) { return 2.0 / std::expm1(2.0 * (quarter_pi + eps) / a2); };
  double eps = root_tanh_tan(alpha) * alpha - quarter_pi;
  if (!(eps > 0.0)) eps = 0.0;
  for (int it = 0; it < 500; ++it) {
    const double u = u_of(eps);
    const double next = std::atan(u / (2.0 + u));
    const bool done = std::abs(next - eps) <= 4 * std::numeric_limits<double>::epsilon() * next;
    eps = next;
    if (done) break;
  }
  return {eps, u_of(eps)};
}

}  // namespace detail

/// z0(alpha) alpha - pi/4, accurate where z0 alpha itself rounds to pi/4.
inline double tanh_tan_offset(double alpha) { return detail::tanh_tan_offset_parts(alpha).eps; }

/// alpha z0 tanh(z0/alpha) - pi/4 without cancellation.
inline double alpha_f_offset(double alpha) {
  constexpr double quarter_pi = std::numbers::pi / 4;
  const auto [eps, u] = detail::tanh_tan_offset_parts(alpha);
  // alpha f = w tanh x = w / (1 + u)
  return (eps - quarter_pi * u) / (1.0 + u);
}

/// omega0: the root of (h1/2)cot(w h2/2) + (h2/2)cot(w h1/2) + 2/w = 0 in
/// (0, min{2pi/h1, 2pi/h2}).
inline double root_rect_cot(double h1, double h2) {
  if (!(h1 > 0.0 && h2 > 0.0) || !std::isfinite(h1) || !std::isfinite(h2))
    throw Error(ErrorCode::DomainError, "root_rect_cot: lengths must be positive and finite");
  constexpr double pi = std::numbers::pi;
  const double w_max = std::min(2.0 * pi / h1, 2.0 * pi / h2);
  const double lo = 1e-9 * w_max;
  const double hi = w_max * (1.0 - 1e-9);
  const double scale = std::max(h1, h2);
  return solve_bracketed([h1, h2](double w) { return characteristic::rect_cot(w, h1, h2); }, lo, hi,
                         1e-11 * scale);
}

/// Solution of the box system in the variables of its reduced form.
struct BoxRoots {
  double z1;
  double z2;
  double mu0;
  double nu0;
  /// Residuals of the two equalities of the reduced system in (z1, z2).
  double residual_first;
  double residual_second;
};

namespace detail {

/// nu(mu): positive solution of mu tanh(mu h1/2) = nu tanh(nu h2/2).
inline double box_nu_of_mu(double mu, double h1, double h2) {
  const double target = mu * std::tanh(0.5 * mu * h1);
  if (target == 0.0) return 0.0;
  auto g = [=](double nu) { return nu * std::tanh(0.5 * nu * h2) - target; };
  double hi = target + 2.0 / h2 + 1.0;
  while (g(hi) <= 0.0) hi *= 2.0;
  return solve_bracketed(g, 0.0, hi, 1e-14 * std::max(1.0, target), {1e-16, 400});
}

/// Evaluates both equalities of the reduced system at (z1, z2).
inline void box_residuals(double z1, double z2, double h1, double h2, double h3, double& r1, double& r2) {
  const double t1 = std::tanh(z1), t2 = std::tanh(z2);
  const double lhs = z1 / h1 * t1;
  const double root = std::sqrt(1.0 + t1 * t1 / (t2 * t2));
  r1 = lhs - z2 / h2 * t2;
  r2 = lhs - z1 / h1 * root / std::tan(z1 * h3 / h1 * root);
}

/**
 * Solves the box system with x3 as the odd axis, without requiring h3 to be
 * the longest edge. The eigenvalue of that odd family is (2 z1/h1) tanh z1.
 */
inline BoxRoots solve_box_odd_family(double h1, double h2, double h3) {
  constexpr double pi = std::numbers::pi;
  auto s_of = [=](double mu) {
    const double nu = box_nu_of_mu(mu, h1, h2);
    return std::sqrt(mu * mu + nu * nu);
  };
  const double s_cap = pi / h3;
  // mu at which sqrt(mu^2 + nu^2) h3 / 2 reaches pi/2; s(mu) >= mu so mu <= pi/h3.
  const double mu_cap =
      solve_bracketed([&](double mu) { return s_of(mu) - s_cap; }, 1e-12 * s_cap, s_cap, 1e-13 * s_cap,
                      {1e-16, 400});
  auto outer = [&](double mu) {
    const double nu = box_nu_of_mu(mu, h1, h2);
    const double s = std::sqrt(mu * mu + nu * nu);
    return mu * std::tanh(0.5 * mu * h1) - s / std::tan(0.5 * s * h3);
  };
  const double mu0 = solve_bracketed(outer, 1e-8 * mu_cap, mu_cap, 1e-12 / h3, {1e-16, 400});
  const double nu0 = box_nu_of_mu(mu0, h1, h2);
  BoxRoots out{0.5 * mu0 * h1, 0.5 * nu0 * h2, mu0, nu0, 0.0, 0.0};
  box_residuals(out.z1, out.z2, h1, h2, h3, out.residual_first, out.residual_second);
  return out;
}

}  // namespace detail

/// Unique solution (z1, z2) of the box system. The caller must pass h3 as the
/// longest edge.
inline BoxRoots solve_box_system(double h1, double h2, double h3) {
  for (double h : {h1, h2, h3})
    if (!(h > 0.0) || !std::isfinite(h))
      throw Error(ErrorCode::DomainError, "solve_box_system: lengths must be positive and finite");
  if (h3 < h1 || h3 < h2)
    throw Error(ErrorCode::DomainError, "solve_box_system: h3 must be the longest edge");
  return detail::solve_box_odd_family(h1, h2, h3);
}

}  // namespace poincare
