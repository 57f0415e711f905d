#include "curvlab/simplex.hpp"

#include <limits>
#include <vector>

#include "curvlab/errors.hpp"

namespace curvlab {

LpResult maximize_origin_feasible(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                  const Eigen::VectorXd& c, double eps, int max_pivots) {
  const int rows = static_cast<int>(A.rows());
  const int vars = static_cast<int>(A.cols());
  if (b.size() != rows || c.size() != vars) throw PreconditionError("LP dimension mismatch");
  for (int i = 0; i < rows; ++i) {
    if (b[i] < -eps) throw PreconditionError("LP right-hand side must be nonnegative");
  }

  // Tableau columns: vars, slacks, rhs. Last row holds reduced costs -c.
  const int cols = vars + rows + 1;
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(rows + 1, cols);
  t.topLeftCorner(rows, vars) = A;
  for (int i = 0; i < rows; ++i) {
    t(i, vars + i) = 1.0;
    t(i, cols - 1) = std::max(b[i], 0.0);
  }
  t.row(rows).head(vars) = -c.transpose();

  std::vector<int> basis(rows);
  for (int i = 0; i < rows; ++i) basis[i] = vars + i;

  LpResult res;
  for (;;) {
    if (res.pivots >= max_pivots) {
      res.status = LpStatus::iteration_limit;
      break;
    }
    int enter = -1;
    for (int j = 0; j < vars + rows; ++j) {
      if (t(rows, j) < -eps) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;

    int leave = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < rows; ++i) {
      if (t(i, enter) > eps) {
        const double ratio = t(i, cols - 1) / t(i, enter);
        if (leave < 0 || ratio < best - eps) {
          best = ratio;
          leave = i;
        } else if (ratio <= best + eps && basis[i] < basis[leave]) {
          best = std::min(best, ratio);
          leave = i;
        }
      }
    }
    if (leave < 0) {
      res.status = LpStatus::unbounded;
      break;
    }

    t.row(leave) /= t(leave, enter);
    for (int i = 0; i <= rows; ++i) {
      if (i != leave && t(i, enter) != 0.0) t.row(i) -= t(i, enter) * t.row(leave);
    }
    for (int i = 0; i < rows; ++i) {
      if (t(i, cols - 1) < 0.0) t(i, cols - 1) = 0.0;  // round-off from near-tied ratios
    }
    basis[leave] = enter;
    ++res.pivots;
  }

  res.x = Eigen::VectorXd::Zero(vars);
  for (int i = 0; i < rows; ++i) {
    if (basis[i] < vars) res.x[basis[i]] = t(i, cols - 1);
  }
  res.value = c.dot(res.x);
  return res;
}

}  // namespace curvlab
