#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "specrange/operator.hpp"

namespace specrange {

struct EigenPair {
  cplx value;
  Vector vector;   // unit 2-norm
  double residual;  // ||A v - value v||_2, recomputed from A
};

struct EigOptions {
  double tol = 1e-9;        // residual contract, relative to 1 + ||A||_F
  int sweeps_per_row = 100;  // iteration cap = sweeps_per_row * dim
};

inline double residual_norm(const Matrix& a, cplx value, const Vector& v) { return (a * v - value * v).norm(); }

/// Full spectrum of a general complex matrix, sorted by (Re, Im), each pair
/// carrying its recomputed residual.
inline std::vector<EigenPair> eig_general(const Matrix& a, const EigOptions& opts = {}) {
  const auto n = a.rows();
  if (n != a.cols()) detail::fail(ErrorKind::invalid_input, "linalg", "eig_general", "matrix must be square");
  if (!a.allFinite()) detail::fail(ErrorKind::invalid_input, "linalg", "eig_general", "matrix has non-finite entries");
  if (!std::isfinite(a.norm()))
    detail::fail(ErrorKind::numerical, "linalg", "eig_general", "Frobenius norm overflows; entries are too large to certify residuals");
  std::vector<EigenPair> out;
  if (n == 0) return out;

  Eigen::ComplexEigenSolver<Matrix> solver;
  solver.setMaxIterations(static_cast<Eigen::Index>(opts.sweeps_per_row) * n);
  solver.compute(a, true);
  if (solver.info() != Eigen::Success)
    detail::fail(ErrorKind::numerical, "linalg", "eig_general",
                 "QR iteration did not converge within " + std::to_string(opts.sweeps_per_row * n) + " iterations");

  const double bound = opts.tol * (1.0 + a.norm());
  double worst = 0.0;
  out.reserve(static_cast<std::size_t>(n));
  for (Eigen::Index m = 0; m < n; ++m) {
    Vector v = solver.eigenvectors().col(m);
    const double nv = v.norm();
    if (nv > 0.0) v /= nv;
    const cplx lambda = solver.eigenvalues()(m);
    const double r = residual_norm(a, lambda, v);
    worst = std::max(worst, r);
    out.push_back({lambda, std::move(v), r});
  }
  if (!(worst <= bound))
    detail::fail(ErrorKind::numerical, "linalg", "eig_general",
                 "residual contract violated: worst residual " + std::to_string(worst) + " > " + std::to_string(bound));
  std::stable_sort(out.begin(), out.end(), [](const EigenPair& x, const EigenPair& y) {
    if (x.value.real() != y.value.real()) return x.value.real() < y.value.real();
    return x.value.imag() < y.value.imag();
  });
  return out;
}

inline std::vector<EigenPair> eig_general(const OperatorMatrix& a, const EigOptions& opts = {}) {
  return eig_general(a.entries(), opts);
}

struct HermitianEigen {
  Eigen::VectorXd values;  // ascending
  Matrix vectors;          // orthonormal columns
};

/// Largest |A - A*| entry, relative to max(1, max |a_ij|).
inline double hermitian_defect(const Matrix& a) {
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return (a - a.adjoint()).cwiseAbs().maxCoeff() / scale;
}

inline HermitianEigen eig_hermitian(const Matrix& a, const EigOptions& opts = {}) {
  if (a.rows() != a.cols()) detail::fail(ErrorKind::invalid_input, "linalg", "eig_hermitian", "matrix must be square");
  if (a.rows() == 0) return {};
  if (const double d = hermitian_defect(a); !(d <= 1e-12))
    detail::fail(ErrorKind::invalid_input, "linalg", "eig_hermitian",
                 "input is not hermitian (relative defect " + std::to_string(d) + ")");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a);  // Eigen's own cap: 30 * dim QR sweeps
  if (solver.info() != Eigen::Success)
    detail::fail(ErrorKind::numerical, "linalg", "eig_hermitian", "tridiagonal QR did not converge");
  HermitianEigen out{solver.eigenvalues(), solver.eigenvectors()};
  const double bound = opts.tol * (1.0 + a.norm());
  double worst = 0.0;
  for (Eigen::Index m = 0; m < a.rows(); ++m)
    worst = std::max(worst, residual_norm(a, out.values(m), out.vectors.col(m)));
  if (!(worst <= bound))
    detail::fail(ErrorKind::numerical, "linalg", "eig_hermitian",
                 "residual contract violated: worst residual " + std::to_string(worst));
  return out;
}

inline HermitianEigen eig_hermitian(const OperatorMatrix& a, const EigOptions& opts = {}) {
  return eig_hermitian(a.entries(), opts);
}

namespace detail {

inline bool is_tridiagonal(const Matrix& a) {
  const auto n = a.rows();
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i)
      if ((i > j + 1 || j > i + 1) && a(i, j) != cplx{}) return false;
  return true;
}

/// Solves (T - sigma) x = b in place for the real symmetric tridiagonal T
/// given by (diag, off). Gaussian elimination with partial pivoting; exact
/// zero pivots are nudged so that inverse iteration at an eigenvalue works.
inline void tridiagonal_shifted_solve(const Eigen::VectorXd& diag, const Eigen::VectorXd& off, double sigma,
                                      Eigen::VectorXd& b) {
  const Eigen::Index n = diag.size();
  Eigen::VectorXd dd = diag.array() - sigma;
  if (n == 1) {
    b(0) /= dd(0) == 0.0 ? std::numeric_limits<double>::epsilon() : dd(0);
    return;
  }
  Eigen::VectorXd dl = off, du = off, du2 = Eigen::VectorXd::Zero(std::max<Eigen::Index>(n - 2, 0));
  std::vector<bool> swapped(static_cast<std::size_t>(n - 1), false);
  const double tiny = std::numeric_limits<double>::epsilon() * std::max(1.0, diag.cwiseAbs().maxCoeff() + 2.0 * off.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < n - 1; ++i) {
    if (std::abs(dd(i)) >= std::abs(dl(i))) {
      if (dd(i) == 0.0) dd(i) = tiny;
      const double fact = dl(i) / dd(i);
      dl(i) = fact;
      dd(i + 1) -= fact * du(i);
    } else {
      const double fact = dd(i) / dl(i);
      dd(i) = dl(i);
      dl(i) = fact;
      const double temp = du(i);
      du(i) = dd(i + 1);
      dd(i + 1) = temp - fact * dd(i + 1);
      if (i < n - 2) {
        du2(i) = du(i + 1);
        du(i + 1) = -fact * du(i + 1);
      }
      swapped[static_cast<std::size_t>(i)] = true;
    }
  }
  if (dd(n - 1) == 0.0) dd(n - 1) = tiny;
  for (Eigen::Index i = 0; i < n - 1; ++i) {
    if (!swapped[static_cast<std::size_t>(i)]) {
      b(i + 1) -= dl(i) * b(i);
    } else {
      const double temp = b(i);
      b(i) = b(i + 1);
      b(i + 1) = temp - dl(i) * b(i);
    }
  }
  b(n - 1) /= dd(n - 1);
  b(n - 2) = (b(n - 2) - du(n - 2) * b(n - 1)) / dd(n - 2);
  for (Eigen::Index i = n - 3; i >= 0; --i) b(i) = (b(i) - du(i) * b(i + 1) - du2(i) * b(i + 2)) / dd(i);
}

}  // namespace detail

/// Largest eigenvalue of a hermitian matrix with a unit eigenvector.
/// Hermitian tridiagonal input (every 1D truncation) is reduced to a real
/// tridiagonal by a diagonal phase similarity, solved without vectors, and
/// the vector recovered by inverse iteration; everything else goes through
/// the dense solver.
inline std::pair<double, Vector> top_eigenpair(const Matrix& h, const EigOptions& opts = {}) {
  const auto n = h.rows();
  if (n == 0) detail::fail(ErrorKind::invalid_input, "linalg", "top_eigenpair", "empty matrix");
  const double bound = opts.tol * (1.0 + h.norm());
  if (n > 2 && detail::is_tridiagonal(h) && hermitian_defect(h) <= 1e-12) {
    Eigen::VectorXd diag(n), off(n - 1);
    Vector phase(n);
    phase(0) = 1.0;
    for (Eigen::Index i = 0; i < n; ++i) diag(i) = h(i, i).real();
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      const cplx e = h(i + 1, i);
      off(i) = std::abs(e);
      phase(i + 1) = off(i) == 0.0 ? phase(i) : phase(i) * (e / off(i));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
    if (solver.info() == Eigen::Success) {
      const double top = solver.eigenvalues()(n - 1);
      Eigen::VectorXd x(n);
      for (Eigen::Index i = 0; i < n; ++i) x(i) = 1.0 + 0.01 * static_cast<double>(i % 7);  // generic start
      for (int it = 0; it < 3; ++it) {
        detail::tridiagonal_shifted_solve(diag, off, top, x);
        x /= x.norm();
      }
      Vector v = phase.cwiseProduct(x.cast<cplx>());
      if (residual_norm(h, top, v) <= bound) return {top, std::move(v)};
    }
  }
  auto e = eig_hermitian(h, opts);
  return {e.values(n - 1), e.vectors.col(n - 1)};
}

inline double spectral_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

}  // namespace specrange
