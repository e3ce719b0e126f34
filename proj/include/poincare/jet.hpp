#pragma once

#include <array>
#include <cmath>

namespace poincare {

/// Second-order forward-mode jet in N variables: value, gradient and Hessian.
template <int N>
struct Jet {
  double v = 0.0;
  std::array<double, N> g{};
  std::array<std::array<double, N>, N> h{};

  Jet() = default;
  Jet(double c) : v(c) {}  // NOLINT(google-explicit-constructor)

  static Jet variable(double x, int i) {
    Jet j(x);
    j.g[i] = 1.0;
    return j;
  }

  [[nodiscard]] double laplacian() const {
    double s = 0.0;
    for (int i = 0; i < N; ++i) s += h[i][i];
    return s;
  }
};

namespace jet_detail {

// f(u) with f, f', f'' evaluated at u.v
template <int N>
Jet<N> chain(const Jet<N>& u, double f0, double f1, double f2) {
  Jet<N> r(f0);
  for (int i = 0; i < N; ++i) r.g[i] = f1 * u.g[i];
  for (int i = 0; i < N; ++i)
    for (int k = 0; k < N; ++k) r.h[i][k] = f1 * u.h[i][k] + f2 * u.g[i] * u.g[k];
  return r;
}

}  // namespace jet_detail

template <int N>
Jet<N> operator+(const Jet<N>& a, const Jet<N>& b) {
  Jet<N> r(a.v + b.v);
  for (int i = 0; i < N; ++i) {
    r.g[i] = a.g[i] + b.g[i];
    for (int k = 0; k < N; ++k) r.h[i][k] = a.h[i][k] + b.h[i][k];
  }
  return r;
}

template <int N>
Jet<N> operator-(const Jet<N>& a) {
  Jet<N> r(-a.v);
  for (int i = 0; i < N; ++i) {
    r.g[i] = -a.g[i];
    for (int k = 0; k < N; ++k) r.h[i][k] = -a.h[i][k];
  }
  return r;
}

template <int N>
Jet<N> operator-(const Jet<N>& a, const Jet<N>& b) {
  return a + (-b);
}

template <int N>
Jet<N> operator*(const Jet<N>& a, const Jet<N>& b) {
  Jet<N> r(a.v * b.v);
  for (int i = 0; i < N; ++i) {
    r.g[i] = a.g[i] * b.v + a.v * b.g[i];
    for (int k = 0; k < N; ++k)
      r.h[i][k] = a.h[i][k] * b.v + a.g[i] * b.g[k] + a.g[k] * b.g[i] + a.v * b.h[i][k];
  }
  return r;
}

template <int N>
Jet<N> operator/(const Jet<N>& a, const Jet<N>& b) {
  const double iv = 1.0 / b.v;
  return a * jet_detail::chain(b, iv, -iv * iv, 2.0 * iv * iv * iv);
}

template <int N> Jet<N> operator+(const Jet<N>& a, double b) { return a + Jet<N>(b); }
template <int N> Jet<N> operator+(double a, const Jet<N>& b) { return Jet<N>(a) + b; }
template <int N> Jet<N> operator-(const Jet<N>& a, double b) { return a - Jet<N>(b); }
template <int N> Jet<N> operator-(double a, const Jet<N>& b) { return Jet<N>(a) - b; }
template <int N> Jet<N> operator*(const Jet<N>& a, double b) { return a * Jet<N>(b); }
template <int N> Jet<N> operator*(double a, const Jet<N>& b) { return Jet<N>(a) * b; }
template <int N> Jet<N> operator/(const Jet<N>& a, double b) { return a * (1.0 / b); }
template <int N> Jet<N> operator/(double a, const Jet<N>& b) { return Jet<N>(a) / b; }

template <int N>
Jet<N> sin(const Jet<N>& u) {
  const double s = std::sin(u.v), c = std::cos(u.v);
  return jet_detail::chain(u, s, c, -s);
}

template <int N>
Jet<N> cos(const Jet<N>& u) {
  const double s = std::sin(u.v), c = std::cos(u.v);
  return jet_detail::chain(u, c, -s, -c);
}

template <int N>
Jet<N> exp(const Jet<N>& u) {
  const double e = std::exp(u.v);
  return jet_detail::chain(u, e, e, e);
}

template <int N>
Jet<N> sinh(const Jet<N>& u) {
  const double s = std::sinh(u.v), c = std::cosh(u.v);
  return jet_detail::chain(u, s, c, s);
}

template <int N>
Jet<N> cosh(const Jet<N>& u) {
  const double s = std::sinh(u.v), c = std::cosh(u.v);
  return jet_detail::chain(u, c, s, c);
}

template <int N>
Jet<N> tanh(const Jet<N>& u) {
  const double t = std::tanh(u.v), d = 1.0 - t * t;
  return jet_detail::chain(u, t, d, -2.0 * t * d);
}

template <int N>
Jet<N> sqrt(const Jet<N>& u) {
  const double s = std::sqrt(u.v);
  return jet_detail::chain(u, s, 0.5 / s, -0.25 / (s * u.v));
}

}  // namespace poincare
