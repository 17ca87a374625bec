#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "tetra/matrix.hpp"

namespace tetra {

// Full spectrum of a real symmetric matrix.  Eigenvalues ascending,
// eigenvectors as orthonormal columns.
struct SpectralDecomposition {
  std::vector<double> eigenvalues;
  Matrix eigenvectors;  // empty when computed values-only
};

namespace detail {

// One cyclic sweep of Jacobi rotations over the strict upper triangle.
inline void jacobi_sweep(Matrix& a, Matrix* v) {
  const int n = a.rows();
  for (int p = 0; p < n - 1; ++p) {
    for (int q = p + 1; q < n; ++q) {
      const double apq = a(p, q);
      if (apq == 0.0) continue;
      const double app = a(p, p);
      const double aqq = a(q, q);
      const double theta = (aqq - app) / (2.0 * apq);
      const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
      const double c = 1.0 / std::sqrt(t * t + 1.0);
      const double s = t * c;
      for (int k = 0; k < n; ++k) {
        const double akp = a(k, p);
        const double akq = a(k, q);
        a(k, p) = c * akp - s * akq;
        a(k, q) = s * akp + c * akq;
      }
      for (int k = 0; k < n; ++k) {
        const double apk = a(p, k);
        const double aqk = a(q, k);
        a(p, k) = c * apk - s * aqk;
        a(q, k) = s * apk + c * aqk;
      }
      if (v) {
        for (int k = 0; k < n; ++k) {
          const double vkp = (*v)(k, p);
          const double vkq = (*v)(k, q);
          (*v)(k, p) = c * vkp - s * vkq;
          (*v)(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
}

inline double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = i + 1; j < a.cols(); ++j) s += 2.0 * a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace detail

// Cyclic Jacobi diagonalization.  Threshold 1e-13 * ||M||_F, cap 100 sweeps.
// Throws on non-convergence; never returns a partial spectrum silently.
inline SpectralDecomposition sym_eigen(const Matrix& m, bool want_vectors = true) {
  if (m.rows() != m.cols()) throw std::invalid_argument("sym_eigen: matrix not square");
  const int n = m.rows();
  Matrix a = m;
  Matrix v;
  if (want_vectors) v = Matrix::identity(n);
  const double tol = 1e-13 * std::max(a.frobenius_norm(), 1e-300);
  constexpr int kMaxSweeps = 100;
  bool converged = false;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (detail::off_diagonal_norm(a) <= tol) {
      converged = true;
      break;
    }
    detail::jacobi_sweep(a, want_vectors ? &v : nullptr);
  }
  if (!converged && detail::off_diagonal_norm(a) > tol)
    throw std::runtime_error("sym_eigen: Jacobi iteration did not converge in 100 sweeps");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) < a(j, j); });

  SpectralDecomposition out;
  out.eigenvalues.resize(n);
  for (int i = 0; i < n; ++i) out.eigenvalues[i] = a(order[i], order[i]);
  if (want_vectors) {
    out.eigenvectors = Matrix(n, n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) out.eigenvectors(i, j) = v(i, order[j]);
  }
  return out;
}

inline std::vector<double> sym_eigenvalues(const Matrix& m) { return sym_eigen(m, false).eigenvalues; }

}  // namespace tetra
