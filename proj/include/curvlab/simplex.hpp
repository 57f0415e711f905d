#pragma once

#include <Eigen/Dense>

namespace curvlab {

enum class LpStatus { optimal, unbounded, iteration_limit };

struct LpResult {
  LpStatus status = LpStatus::optimal;
  double value = 0.0;
  Eigen::VectorXd x;
  int pivots = 0;
};

/// Dense tableau simplex for  max c.x  s.t.  A x <= b, x >= 0  with b >= 0,
/// so the slack basis is feasible from the start. Bland's rule prevents
/// cycling on degenerate vertices.
LpResult maximize_origin_feasible(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                  const Eigen::VectorXd& c, double eps = 1e-12,
                                  int max_pivots = 200000);

}  // namespace curvlab
