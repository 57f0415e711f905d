#include "curvlab/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "curvlab/errors.hpp"
#include "curvlab/simplex.hpp"

namespace curvlab {

namespace {

void require_edge(const MarkovChain& chain, int x, int y) {
  const int n = chain.size();
  if (x < 0 || y < 0 || x >= n || y >= n) throw PreconditionError("vertex index out of range");
  if (!chain.adjacent(x, y)) {
    throw PreconditionError("curvature needs a support pair, got (" + chain.labels()[x] + ", " +
                            chain.labels()[y] + ")");
  }
}

void require_lazy(const MarkovChain& chain) {
  if (!chain.is_lazy(1e-10)) {
    throw PreconditionError("sectional curvature is defined for lazy probability kernels only");
  }
}

Eigen::VectorXd row(const MarkovChain& chain, int x) { return chain.kernel().row(x).transpose(); }

double kappa_objective(const MarkovChain& chain, int x, int y, const VertexFunction& f) {
  const VertexFunction lf = laplacian(chain, f);
  return (lf[x] - lf[y]) / chain.dist(x, y);
}

// sum_z P(v,z) expm1(s (f(z) - f(v))) = Delta e^{sf}(v) / e^{sf}(v).
double exp_ratio(const MarkovChain& chain, int v, const VertexFunction& f, double s) {
  double acc = 0.0;
  for (const auto& nb : chain.neighbors(v)) acc += nb.rate * std::expm1(s * (f[nb.vertex] - f[v]));
  return acc;
}

}  // namespace

KappaResult kappa(const MarkovChain& chain, int x, int y) {
  require_edge(chain, x, y);
  const int n = chain.size();
  const Eigen::MatrixXd& D = chain.distances();
  const double dxy = D(x, y);

  // Shift by the smallest admissible function so that g = f - L = 0 is feasible.
  VertexFunction L(n);
  for (int v = 0; v < n; ++v) L[v] = std::max(-D(x, v), dxy - D(y, v));

  std::vector<int> var(n, -1);
  int nv = 0;
  for (int v = 0; v < n; ++v) {
    if (v != x && v != y) var[v] = nv++;
  }

  std::vector<std::pair<int, int>> rows;
  for (const auto& e : chain.edges()) {
    if (var[e.x] < 0 && var[e.y] < 0) continue;
    rows.emplace_back(e.x, e.y);
    rows.emplace_back(e.y, e.x);
  }
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), nv);
  Eigen::VectorXd b(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto [u, v] = rows[r];  // g(u) - g(v) <= D(u,v) - L(u) + L(v)
    if (var[u] >= 0) A(static_cast<Eigen::Index>(r), var[u]) += 1.0;
    if (var[v] >= 0) A(static_cast<Eigen::Index>(r), var[v]) -= 1.0;
    b[static_cast<Eigen::Index>(r)] = std::max(0.0, D(u, v) - L[u] + L[v]);
  }
  // minimise sum_v (P(x,v) - P(y,v)) g(v) / d  <=>  maximise its negation.
  Eigen::VectorXd c(nv);
  for (int v = 0; v < n; ++v) {
    if (var[v] >= 0) c[var[v]] = -(chain.rate(x, v) - chain.rate(y, v)) / dxy;
  }

  KappaResult res;
  if (nv == 0) {
    res.witness = L;
    res.value = res.audit_value = kappa_objective(chain, x, y, L);
    return res;
  }
  const LpResult lp = maximize_origin_feasible(A, b, c);
  if (lp.status != LpStatus::optimal) throw NumericalError("curvature LP did not reach an optimum");

  res.pivots = lp.pivots;
  res.witness = L;
  for (int v = 0; v < n; ++v) {
    if (var[v] >= 0) res.witness[v] += lp.x[var[v]];
  }
  res.audit_value = kappa_objective(chain, x, y, L) - lp.value;
  res.value = kappa_objective(chain, x, y, res.witness);
  return res;
}

double kappa_lazy_crosscheck(const MarkovChain& chain, int x, int y) {
  require_edge(chain, x, y);
  require_lazy(chain);
  const W1Result w = w1(chain, row(chain, x), row(chain, y));
  return 1.0 - w.value / chain.dist(x, y);
}

SectionalResult sectional_nonneg(const MarkovChain& chain, int x, int y) {
  require_edge(chain, x, y);
  require_lazy(chain);
  ThresholdFeasibility f = threshold_feasible(chain.distances(), row(chain, x), row(chain, y), chain.dist(x, y));
  SectionalResult res;
  res.nonneg = f.feasible;
  res.plan = std::move(f.plan);
  res.hall_violator = std::move(f.hall_violator);
  res.violator_mass = f.violator_mass;
  res.neighbourhood_mass = f.neighbourhood_mass;
  return res;
}

double kappa_inf(const MarkovChain& chain, int x, int y) {
  require_edge(chain, x, y);
  require_lazy(chain);
  return 1.0 - winf(chain, row(chain, x), row(chain, y)).value / chain.dist(x, y);
}

std::vector<EdgeCurvature> edge_curvatures(const MarkovChain& chain) {
  const bool lazy = chain.is_lazy(1e-10);
  std::vector<EdgeCurvature> out;
  out.reserve(chain.edges().size());
  for (const auto& e : chain.edges()) {
    EdgeCurvature ec;
    ec.edge = e;
    KappaResult k = kappa(chain, e.x, e.y);
    ec.kappa = k.value;
    ec.witness = std::move(k.witness);
    if (lazy) {
      ec.kappa_inf = kappa_inf(chain, e.x, e.y);
      ec.sectional_nonneg = sectional_nonneg(chain, e.x, e.y).nonneg;
    }
    out.push_back(std::move(ec));
  }
  return out;
}

double min_kappa(const MarkovChain& chain, Edge* argmin) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& e : chain.edges()) {
    // kappa(x,y) = kappa(y,x) via f -> -f, so one orientation suffices.
    const double k = kappa(chain, e.x, e.y).value;
    if (k < best) {
      best = k;
      if (argmin) *argmin = e;
    }
  }
  return best;
}

double lipschitz_contraction_margin(const MarkovChain& chain, const VertexFunction& f, double t, double K) {
  return std::exp(-K * t) * lipschitz_constant(chain, f) - lipschitz_constant(chain, heat_apply(chain, f, t));
}

double gradient_commutation_margin(const MarkovChain& chain, const VertexFunction& f, double t,
                                   CommutationVariant variant) {
  require_lazy(chain);
  if (variant != CommutationVariant::pointwise && (f.array() <= 0.0).any()) {
    throw PreconditionError("log and sqrt gradient estimates need a positive function");
  }
  const Eigen::MatrixXd Pt = heat_operator(chain, t);
  switch (variant) {
    case CommutationVariant::log_inf: {
      const VertexFunction u = (Pt * f).array().log().matrix();
      return gradients(chain, f.array().log().matrix()).lip - gradients(chain, u).lip;
    }
    case CommutationVariant::pointwise: {
      const VertexFunction rhs = Pt * gradients(chain, f).grad_abs;
      const VertexFunction lhs = gradients(chain, Pt * f).grad_abs;
      return (rhs - lhs).minCoeff();
    }
    case CommutationVariant::sqrt: {
      const VertexFunction rhs = Pt * gradients(chain, f.array().sqrt().matrix()).grad_abs;
      const VertexFunction lhs = gradients(chain, (Pt * f).array().sqrt().matrix()).grad_abs;
      return (rhs - lhs).minCoeff();
    }
  }
  return 0.0;
}

double exp_ratio_margin(const MarkovChain& chain, int x, int y, const VertexFunction& f, double lambda) {
  require_edge(chain, x, y);
  require_lazy(chain);
  if (lambda < 0.0) throw PreconditionError("exp_ratio_margin needs lambda >= 0");
  if (!is_lipschitz(chain, f)) throw PreconditionError("exp_ratio_margin needs f in Lip(1)");
  if (std::abs(f[y] - f[x] - 1.0) > 1e-9) throw PreconditionError("exp_ratio_margin needs f(y) - f(x) = 1");
  const double plus = exp_ratio(chain, x, f, lambda) - exp_ratio(chain, y, f, lambda);
  const double minus = exp_ratio(chain, y, f, -lambda) - exp_ratio(chain, x, f, -lambda);
  return std::min(plus, minus);
}

}  // namespace curvlab
