#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "poincare/constants.hpp"
#include "poincare/fem.hpp"
#include "poincare/mesh.hpp"

namespace poincare {

enum class EigenProblemKind {
  DomainNorm,        ///< |grad v|^2 / |v|^2 on functions with zero mean on Gamma
  TraceNorm,         ///< |grad v|^2 / |v|^2_Gamma on functions with zero mean on Gamma
  NeumannFree,       ///< |grad v|^2 / |v|^2 on functions with zero mean on Omega
  DirichletOnGamma,  ///< |grad v|^2 / |v|^2 on functions vanishing on Gamma
};

inline const char* to_string(EigenProblemKind k) {
  switch (k) {
    case EigenProblemKind::DomainNorm: return "domain";
    case EigenProblemKind::TraceNorm: return "trace";
    case EigenProblemKind::NeumannFree: return "neumann";
    case EigenProblemKind::DirichletOnGamma: return "dirichlet";
  }
  return "?";
}

/// Discrete pencil (K, M) on the unknowns @c dofs, with an optional mean constraint c.u = 0.
struct Assembled {
  fem::SpMat stiffness;
  fem::SpMat gram;
  std::optional<fem::Vec> constraint;
  std::vector<int> dofs;  ///< mesh vertex of each unknown
};

struct EigenResult {
  double lambda_min_positive = 0.0;
  fem::Vec eigenvector;  ///< on the unknowns, normalised to unit gram norm
  int refinement_level = -1;
  double constraint_violation = 0.0;  ///< |c.u| / (sqrt(sum c) |u|_gram)
};

struct EigenOptions {
  int dense_threshold = 1500;  ///< largest unknown count for the dense route
  double positive_floor = 1e-9;
  int max_lanczos_steps = 400;
  double lanczos_tol = 1e-13;
  unsigned seed = 20240531u;
};

inline Assembled assemble(const FemMesh& mesh, EigenProblemKind kind) {
  auto on_gamma = [](const BoundaryEdge<bool>& e) { return e.tag; };
  Assembled a;
  a.stiffness = fem::stiffness(mesh);
  const int n = static_cast<int>(mesh.vertices.size());
  switch (kind) {
    case EigenProblemKind::DomainNorm:
      a.gram = fem::mass(mesh);
      a.constraint = fem::boundary_moments(mesh, on_gamma);
      break;
    case EigenProblemKind::TraceNorm:
      a.gram = fem::boundary_mass(mesh, on_gamma);
      a.constraint = fem::boundary_moments(mesh, on_gamma);
      break;
    case EigenProblemKind::NeumannFree:
      a.gram = fem::mass(mesh);
      a.constraint = fem::Vec(a.gram * fem::Vec::Ones(n));
      break;
    case EigenProblemKind::DirichletOnGamma: {
      const auto fixed = fem::boundary_nodes(mesh, on_gamma);
      for (int i = 0; i < n; ++i)
        if (!fixed[i]) a.dofs.push_back(i);
      if (a.dofs.empty()) throw Error(ErrorCode::SolverFailure, "every node lies on Gamma");
      a.gram = fem::submatrix(fem::mass(mesh), a.dofs, a.dofs);
      a.stiffness = fem::submatrix(a.stiffness, a.dofs, a.dofs);
      return a;
    }
  }
  if (a.constraint && a.constraint->sum() <= 0.0) throw Error(ErrorCode::InvalidMesh, "Gamma is empty");
  a.dofs.resize(n);
  for (int i = 0; i < n; ++i) a.dofs[i] = i;
  return a;
}

namespace detail {

struct DenseEig {
  double lambda;
  Eigen::VectorXd u;
};

// Smallest eigenvalue above floor of K u = lambda M u on {c.u = 0}, M positive definite.
// The constraint is removed with a Householder reflector H mapping c onto e0.
inline DenseEig dense_constrained(const Eigen::MatrixXd& K, const Eigen::MatrixXd& M,
                                  const std::optional<Eigen::VectorXd>& c, double floor) {
  const Eigen::Index n = K.rows();
  Eigen::MatrixXd Kt, Mt;
  Eigen::VectorXd w;
  double beta = 0.0;
  if (c) {
    if (n < 2) throw Error(ErrorCode::SolverFailure, "constrained space is empty");
    w = *c;
    const double nc = c->norm();
    w[0] += (w[0] >= 0.0 ? nc : -nc);
    beta = 2.0 / w.squaredNorm();
    auto reflect = [&](const Eigen::MatrixXd& A) {
      const Eigen::VectorXd p = beta * (A * w);
      const double s = beta * w.dot(p);
      Eigen::MatrixXd B = A - w * p.transpose() - p * w.transpose() + s * w * w.transpose();
      return Eigen::MatrixXd(B.bottomRightCorner(n - 1, n - 1));
    };
    Kt = reflect(K);
    Mt = reflect(M);
  } else {
    Kt = K;
    Mt = M;
  }
  Kt = 0.5 * (Kt + Kt.transpose()).eval();
  Mt = 0.5 * (Mt + Mt.transpose()).eval();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Kt, Mt);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::SolverFailure, "dense generalized eigensolver failed");
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const double lam = es.eigenvalues()[k];
    if (lam > floor) {
      Eigen::VectorXd y = es.eigenvectors().col(k);
      Eigen::VectorXd u(n);
      if (c) {
        u[0] = 0.0;
        u.tail(n - 1) = y;
        u -= beta * w * w.dot(u);
      } else {
        u = y;
      }
      return {lam, u};
    }
  }
  throw Error(ErrorCode::SolverFailure, "no positive eigenvalue found");
}

// Lanczos on T = K^{-1} M restricted to {c.u = 0}, with full reorthogonalisation in the M inner product.
inline DenseEig lanczos_constrained(const fem::SpMat& K, const fem::SpMat& M, const std::optional<fem::Vec>& c,
                                    const EigenOptions& opt) {
  const Eigen::Index n = K.rows();
  Eigen::SparseLU<fem::SpMat> lu;
  fem::SpMat B;
  if (c) {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(K.nonZeros() + 2 * n);
    for (int k = 0; k < K.outerSize(); ++k)
      for (fem::SpMat::InnerIterator it(K, k); it; ++it) trip.emplace_back(it.row(), it.col(), it.value());
    for (Eigen::Index i = 0; i < n; ++i)
      if ((*c)[i] != 0.0) {
        trip.emplace_back(i, n, (*c)[i]);
        trip.emplace_back(n, i, (*c)[i]);
      }
    B.resize(n + 1, n + 1);
    B.setFromTriplets(trip.begin(), trip.end());
  } else {
    B = K;
  }
  B.makeCompressed();
  lu.compute(B);
  if (lu.info() != Eigen::Success) throw Error(ErrorCode::SolverFailure, "sparse factorization failed");
  auto apply = [&](const fem::Vec& v) {
    fem::Vec rhs = fem::Vec::Zero(B.rows());
    rhs.head(n) = M * v;
    fem::Vec x = lu.solve(rhs);
    if (!x.allFinite()) throw Error(ErrorCode::SolverFailure, "sparse solve failed");
    fem::Vec out = x.head(n);
    if (c) out -= (*c) * (c->dot(out) / c->squaredNorm());
    return out;
  };
  auto mnorm = [&](const fem::Vec& v) { return std::sqrt(std::max(0.0, v.dot(M * v))); };

  std::mt19937 rng(opt.seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  fem::Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = uni(rng);
  v = apply(v);
  v /= mnorm(v);

  const int m = static_cast<int>(std::min<Eigen::Index>(opt.max_lanczos_steps, n - (c ? 1 : 0)));
  Eigen::MatrixXd V(n, m + 1), MV(n, m + 1);
  std::vector<double> alpha, betas;
  V.col(0) = v;
  MV.col(0) = M * v;
  double theta = 0.0;
  Eigen::VectorXd s;
  int steps = 0;
  for (int j = 0; j < m; ++j) {
    fem::Vec w = apply(V.col(j));
    const double a = MV.col(j).dot(w);
    alpha.push_back(a);
    w -= a * V.col(j);
    if (j > 0) w -= betas.back() * V.col(j - 1);
    for (int pass = 0; pass < 2; ++pass) {
      const Eigen::VectorXd h = MV.leftCols(j + 1).transpose() * w;
      w -= V.leftCols(j + 1) * h;
    }
    const double b = mnorm(w);
    steps = j + 1;
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(steps, steps);
    for (int i = 0; i < steps; ++i) {
      T(i, i) = alpha[i];
      if (i + 1 < steps) T(i, i + 1) = T(i + 1, i) = betas[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    theta = es.eigenvalues()[steps - 1];
    s = es.eigenvectors().col(steps - 1);
    const bool breakdown = b <= 1e-14 * std::abs(theta);
    if (breakdown || (steps >= 3 && b * std::abs(s[steps - 1]) <= opt.lanczos_tol * theta)) break;
    betas.push_back(b);
    V.col(j + 1) = w / b;
    MV.col(j + 1) = M * V.col(j + 1);
    if (j + 1 == m) throw Error(ErrorCode::SolverFailure, "Lanczos iteration did not converge");
  }
  if (!(theta > 0.0)) throw Error(ErrorCode::SolverFailure, "no positive eigenvalue found");
  fem::Vec u = V.leftCols(steps) * s;
  if (c) u -= (*c) * (c->dot(u) / c->squaredNorm());
  const double lam = u.dot(K * u) / u.dot(M * u);
  if (!(lam > opt.positive_floor)) throw Error(ErrorCode::SolverFailure, "no positive eigenvalue found");
  return {lam, u};
}

inline double constraint_violation(const std::optional<fem::Vec>& c, const fem::Vec& u, const fem::SpMat& M) {
  if (!c) return 0.0;
  const double scale = std::sqrt(c->sum()) * std::sqrt(u.dot(M * u));
  return std::abs(c->dot(u)) / scale;
}

}  // namespace detail

/**
 * Smallest eigenvalue above the positive floor of K u = lambda M u on
 * {c.u = 0}.
 *
 * Unknowns with zero gram diagonal (interior nodes of a trace gram) are
 * removed by a Schur complement, so zero-trace vectors never appear.
 * Throws SolverFailure if no positive eigenvalue is found.
 */
inline EigenResult smallest_positive_eigenvalue(const fem::SpMat& K, const fem::SpMat& M,
                                                const std::optional<fem::Vec>& c, const EigenOptions& opt = {}) {
  const Eigen::Index n = K.rows();
  if (M.rows() != n || (c && c->size() != n)) throw Error(ErrorCode::SolverFailure, "operator sizes differ");
  const fem::Vec diag = M.diagonal();
  const double dmax = diag.cwiseAbs().maxCoeff();
  if (!(dmax > 0.0)) throw Error(ErrorCode::SolverFailure, "gram operator has zero trace");
  std::vector<int> support, rest;
  for (Eigen::Index i = 0; i < n; ++i) (diag[i] > 1e-14 * dmax ? support : rest).push_back(static_cast<int>(i));

  EigenResult r;
  if (rest.empty()) {
    detail::DenseEig d = n <= opt.dense_threshold
                             ? detail::dense_constrained(Eigen::MatrixXd(K), Eigen::MatrixXd(M), c, opt.positive_floor)
                             : detail::lanczos_constrained(K, M, c, opt);
    r.lambda_min_positive = d.lambda;
    r.eigenvector = d.u / std::sqrt(d.u.dot(M * d.u));
  } else {
    if (c)
      for (int i : rest)
        if ((*c)[i] != 0.0) throw Error(ErrorCode::SolverFailure, "constraint acts outside the gram support");
    const fem::SpMat Kss = fem::submatrix(K, support, support);
    const fem::SpMat Ksr = fem::submatrix(K, support, rest);
    const fem::SpMat Krr = fem::submatrix(K, rest, rest);
    Eigen::SimplicialLDLT<fem::SpMat> ldlt(Krr);
    if (ldlt.info() != Eigen::Success) throw Error(ErrorCode::SolverFailure, "interior factorization failed");
    const Eigen::MatrixXd X = ldlt.solve(Eigen::MatrixXd(Ksr.transpose()));
    if (ldlt.info() != Eigen::Success || !X.allFinite())
      throw Error(ErrorCode::SolverFailure, "interior solve failed");
    const Eigen::MatrixXd S = Eigen::MatrixXd(Kss) - Eigen::MatrixXd(Ksr) * X;
    const Eigen::MatrixXd Ms = Eigen::MatrixXd(fem::submatrix(M, support, support));
    std::optional<Eigen::VectorXd> cs;
    if (c) {
      cs = Eigen::VectorXd(support.size());
      for (std::size_t i = 0; i < support.size(); ++i) (*cs)[i] = (*c)[support[i]];
    }
    const auto d = detail::dense_constrained(S, Ms, cs, opt.positive_floor);
    const Eigen::VectorXd ur = -X * d.u;
    fem::Vec u(n);
    for (std::size_t i = 0; i < support.size(); ++i) u[support[i]] = d.u[i];
    for (std::size_t i = 0; i < rest.size(); ++i) u[rest[i]] = ur[i];
    r.lambda_min_positive = d.lambda;
    r.eigenvector = u / std::sqrt(u.dot(M * u));
  }
  r.constraint_violation = detail::constraint_violation(c, r.eigenvector, M);
  return r;
}

inline EigenResult smallest_positive_eigenvalue(const Assembled& a, const EigenOptions& opt = {}) {
  return smallest_positive_eigenvalue(a.stiffness, a.gram, a.constraint, opt);
}

inline EigenProblemKind problem_for(ConstantKind kind) {
  switch (kind) {
    case ConstantKind::C1: return EigenProblemKind::DomainNorm;
    case ConstantKind::C2: return EigenProblemKind::TraceNorm;
    case ConstantKind::CP: return EigenProblemKind::NeumannFree;
    case ConstantKind::CF: return EigenProblemKind::DirichletOnGamma;
    case ConstantKind::CPUpperBound: break;
  }
  throw Error(ErrorCode::Unsupported, "the Payne-Weinberger bound is not an eigenvalue");
}

struct ConvergenceRow {
  int level;
  double lambda_h;
  double lambda_closed;
  double relative_gap;  ///< (lambda_h - lambda_closed) / lambda_closed
};

/// Oracle eigenvalues at each level in [level_lo, level_hi] against the closed form.
inline std::vector<ConvergenceRow> verify_constant(const DomainSpec& spec, ConstantKind kind, int level_lo,
                                                   int level_hi, const EigenOptions& opt = {}) {
  if (level_lo > level_hi) throw Error(ErrorCode::DomainError, "empty level range");
  const auto problem = problem_for(kind);
  if (std::holds_alternative<Box>(spec.shape))
    throw Error(ErrorCode::Unsupported, "finite-element meshes are two-dimensional only");
  const double closed = sharp_constant(spec, kind).eigenvalue;
  std::vector<ConvergenceRow> rows;
  for (int level = level_lo; level <= level_hi; ++level) {
    const auto mesh = build_reference_mesh(spec, level);
    auto res = smallest_positive_eigenvalue(assemble(mesh, problem), opt);
    rows.push_back({level, res.lambda_min_positive, closed, (res.lambda_min_positive - closed) / closed});
  }
  return rows;
}

}  // namespace poincare
