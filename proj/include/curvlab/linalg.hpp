#pragma once

#include <Eigen/Dense>

namespace curvlab {

struct SymmetricEigen {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // column k belongs to values[k]
  int sweeps = 0;
};

/// Cyclic Jacobi rotations on a dense symmetric matrix. Converges when the
/// off-diagonal Frobenius norm falls below tol * ||A||_F.
SymmetricEigen jacobi_eigen(const Eigen::MatrixXd& symmetric, double tol = 1e-15, int max_sweeps = 100);

/// Smallest eigenvalue only (same algorithm, no vector accumulation).
double jacobi_min_eigenvalue(const Eigen::MatrixXd& symmetric, double tol = 1e-15, int max_sweeps = 100);

}  // namespace curvlab
