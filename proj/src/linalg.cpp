#include "curvlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "curvlab/errors.hpp"

namespace curvlab {

namespace {

double off_diagonal_norm2(const Eigen::MatrixXd& a) {
  double s = 0.0;
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = i + 1; j < a.cols(); ++j) s += a(i, j) * a(i, j);
  }
  return 2.0 * s;
}

// Rotation angle from Golub & Van Loan, Algorithm 8.4.1 (symmetric Schur).
template <bool WithVectors>
int jacobi_sweeps(Eigen::MatrixXd& a, Eigen::MatrixXd* v, double tol, int max_sweeps) {
  const int n = static_cast<int>(a.rows());
  const double scale2 = std::max(a.squaredNorm(), std::numeric_limits<double>::min());
  int sweep = 0;
  for (; sweep < max_sweeps; ++sweep) {
    if (off_diagonal_norm2(a) <= tol * tol * scale2) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        if constexpr (WithVectors) {
          for (int k = 0; k < n; ++k) {
            const double vkp = (*v)(k, p), vkq = (*v)(k, q);
            (*v)(k, p) = c * vkp - s * vkq;
            (*v)(k, q) = s * vkp + c * vkq;
          }
        }
      }
    }
  }
  if (off_diagonal_norm2(a) > 1e4 * tol * tol * scale2 + 1e-300) {
    throw NumericalError("Jacobi eigensolver did not converge");
  }
  return sweep;
}

void check_square(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw PreconditionError("eigensolver needs a square matrix");
}

}  // namespace

SymmetricEigen jacobi_eigen(const Eigen::MatrixXd& symmetric, double tol, int max_sweeps) {
  check_square(symmetric);
  const int n = static_cast<int>(symmetric.rows());
  Eigen::MatrixXd a = 0.5 * (symmetric + symmetric.transpose());
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  SymmetricEigen out;
  out.sweeps = jacobi_sweeps<true>(a, &v, tol, max_sweeps);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) < a(j, j); });
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (int k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    out.vectors.col(k) = v.col(order[k]);
  }
  return out;
}

double jacobi_min_eigenvalue(const Eigen::MatrixXd& symmetric, double tol, int max_sweeps) {
  check_square(symmetric);
  if (symmetric.rows() == 1) return symmetric(0, 0);
  Eigen::MatrixXd a = 0.5 * (symmetric + symmetric.transpose());
  jacobi_sweeps<false>(a, nullptr, tol, max_sweeps);
  return a.diagonal().minCoeff();
}

}  // namespace curvlab
