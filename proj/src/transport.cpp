#include "curvlab/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "curvlab/errors.hpp"

namespace curvlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_marginals(const Eigen::VectorXd& mu, const Eigen::VectorXd& nu, Eigen::Index n, double tol) {
  if (mu.size() != n || nu.size() != n) throw PreconditionError("measure length does not match vertex count");
  if ((mu.array() < -tol).any() || (nu.array() < -tol).any()) {
    throw PreconditionError("transport marginals must be nonnegative");
  }
  const double a = mu.sum(), b = nu.sum();
  if (std::abs(a - b) > tol * std::max({1.0, a, b})) {
    throw PreconditionError("transport marginals have unequal mass");
  }
}

std::vector<int> support(const Eigen::VectorXd& v, double tol) {
  std::vector<int> s;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] > tol) s.push_back(static_cast<int>(i));
  }
  return s;
}

}  // namespace

double TransportPlan::cost(const Eigen::MatrixXd& distances) const {
  return (coupling.array() * distances.array()).sum();
}

double TransportPlan::max_displacement(const Eigen::MatrixXd& distances, double tol) const {
  double r = 0.0;
  for (Eigen::Index i = 0; i < coupling.rows(); ++i) {
    for (Eigen::Index j = 0; j < coupling.cols(); ++j) {
      if (coupling(i, j) > tol) r = std::max(r, distances(i, j));
    }
  }
  return r;
}

bool TransportPlan::is_valid(double tol) const {
  if ((coupling.array() < -tol).any()) return false;
  const double scale = std::max(1.0, source.sum());
  return (coupling.rowwise().sum() - source).cwiseAbs().maxCoeff() <= tol * scale &&
         (coupling.colwise().sum().transpose() - target).cwiseAbs().maxCoeff() <= tol * scale;
}

W1Result min_cost_transport(const Eigen::MatrixXd& cost, const Eigen::VectorXd& mu,
                            const Eigen::VectorXd& nu, double tol_flow) {
  const Eigen::Index n = cost.rows();
  check_marginals(mu, nu, n, tol_flow);
  const double total = std::max(1.0, mu.sum());
  const double eps = tol_flow * total * 1e-3;

  const std::vector<int> src = support(mu, eps);
  const std::vector<int> dst = support(nu, eps);
  const int a = static_cast<int>(src.size());
  const int b = static_cast<int>(dst.size());

  W1Result res;
  res.plan.coupling = Eigen::MatrixXd::Zero(n, n);
  res.plan.source = mu;
  res.plan.target = nu;
  if (a == 0 || b == 0) return res;

  Eigen::MatrixXd c(a, b);
  for (int i = 0; i < a; ++i) {
    for (int j = 0; j < b; ++j) c(i, j) = cost(src[i], dst[j]);
  }
  Eigen::MatrixXd flow = Eigen::MatrixXd::Zero(a, b);
  Eigen::VectorXd supply(a), demand(b);
  for (int i = 0; i < a; ++i) supply[i] = mu[src[i]];
  for (int j = 0; j < b; ++j) demand[j] = nu[dst[j]];

  // Nodes 0..a-1 are sources, a..a+b-1 sinks.
  const int k = a + b;
  Eigen::VectorXd pot = Eigen::VectorXd::Zero(k);
  std::vector<double> dist(k);
  std::vector<int> parent(k);
  std::vector<char> done(k);

  auto dijkstra = [&]() {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(parent.begin(), parent.end(), -1);
    std::fill(done.begin(), done.end(), 0);
    for (int i = 0; i < a; ++i) {
      if (supply[i] > eps) dist[i] = 0.0;
    }
    for (;;) {
      int u = -1;
      for (int v = 0; v < k; ++v) {
        if (!done[v] && dist[v] < kInf && (u < 0 || dist[v] < dist[u])) u = v;
      }
      if (u < 0) break;
      done[u] = 1;
      if (u < a) {
        for (int j = 0; j < b; ++j) {
          const double nd = dist[u] + c(u, j) + pot[u] - pot[a + j];
          if (nd < dist[a + j]) {
            dist[a + j] = nd;
            parent[a + j] = u;
          }
        }
      } else {
        const int j = u - a;
        for (int i = 0; i < a; ++i) {
          if (flow(i, j) <= eps) continue;
          const double nd = dist[u] - c(i, j) + pot[u] - pot[i];
          if (nd < dist[i]) {
            dist[i] = nd;
            parent[i] = u;
          }
        }
      }
    }
  };

  int guard = 0;
  const int max_rounds = 4 * (a + 1) * (b + 1) + 1000;
  while (supply.sum() > eps && demand.sum() > eps) {
    if (++guard > max_rounds) throw NumericalError("min-cost flow failed to terminate");
    dijkstra();
    int best = -1;
    for (int j = 0; j < b; ++j) {
      if (demand[j] > eps && dist[a + j] < kInf && (best < 0 || dist[a + j] < dist[best])) best = a + j;
    }
    if (best < 0) throw NumericalError("min-cost flow: no augmenting path");
    const double reach = dist[best];
    for (int v = 0; v < k; ++v) pot[v] += std::min(dist[v], reach);

    double amount = demand[best - a];
    int v = best;
    while (parent[v] >= 0) {
      const int u = parent[v];
      if (u >= a) amount = std::min(amount, flow(v, u - a));  // backward arc sink u -> source v
      v = u;
    }
    amount = std::min(amount, supply[v]);

    demand[best - a] -= amount;
    supply[v] -= amount;
    v = best;
    while (parent[v] >= 0) {
      const int u = parent[v];
      if (u < a) {
        flow(u, v - a) += amount;
      } else {
        flow(v, u - a) -= amount;
        if (flow(v, u - a) < eps) flow(v, u - a) = 0.0;
      }
      v = u;
    }
  }

  for (int i = 0; i < a; ++i) {
    for (int j = 0; j < b; ++j) res.plan.coupling(src[i], dst[j]) = flow(i, j);
  }
  res.value = (flow.array() * c.array()).sum();

  // Feasible dual: u_i from the potentials, v_j its c-transform.
  double dual = 0.0;
  for (int j = 0; j < b; ++j) {
    double vj = kInf;
    for (int i = 0; i < a; ++i) vj = std::min(vj, c(i, j) + pot[i]);
    dual += nu[dst[j]] * vj;
  }
  for (int i = 0; i < a; ++i) dual -= mu[src[i]] * pot[i];
  res.dual_value = dual;
  return res;
}

W1Result w1(const MarkovChain& chain, const Eigen::VectorXd& mu, const Eigen::VectorXd& nu, double tol_flow) {
  return min_cost_transport(chain.distances(), mu, nu, tol_flow);
}

ThresholdFeasibility threshold_feasible(const Eigen::MatrixXd& distances, const Eigen::VectorXd& mu,
                                        const Eigen::VectorXd& nu, double r, double tol_flow) {
  const Eigen::Index n = distances.rows();
  check_marginals(mu, nu, n, tol_flow);
  const double total = std::max(1.0, mu.sum());
  const double eps = tol_flow * total * 1e-3;
  const std::vector<int> src = support(mu, eps);
  const std::vector<int> dst = support(nu, eps);
  const int a = static_cast<int>(src.size());
  const int b = static_cast<int>(dst.size());

  // Node layout: 0 = source, 1..a, a+1..a+b, a+b+1 = sink.
  const int k = a + b + 2;
  const int s = 0, t = k - 1;
  Eigen::MatrixXd cap = Eigen::MatrixXd::Zero(k, k);
  for (int i = 0; i < a; ++i) cap(s, 1 + i) = mu[src[i]];
  for (int j = 0; j < b; ++j) cap(1 + a + j, t) = nu[dst[j]];
  const double big = 2.0 * total;
  const double rtol = 1e-12 * std::max(1.0, std::abs(r));
  for (int i = 0; i < a; ++i) {
    for (int j = 0; j < b; ++j) {
      if (distances(src[i], dst[j]) <= r + rtol) cap(1 + i, 1 + a + j) = big;
    }
  }
  const Eigen::MatrixXd original = cap;

  double flow_value = 0.0;
  std::vector<int> parent(k);
  for (;;) {
    std::fill(parent.begin(), parent.end(), -1);
    parent[s] = s;
    std::queue<int> q;
    q.push(s);
    while (!q.empty() && parent[t] < 0) {
      const int u = q.front();
      q.pop();
      for (int v = 0; v < k; ++v) {
        if (parent[v] < 0 && cap(u, v) > eps) {
          parent[v] = u;
          q.push(v);
        }
      }
    }
    if (parent[t] < 0) break;
    double amount = kInf;
    for (int v = t; v != s; v = parent[v]) amount = std::min(amount, cap(parent[v], v));
    for (int v = t; v != s; v = parent[v]) {
      cap(parent[v], v) -= amount;
      cap(v, parent[v]) += amount;
    }
    flow_value += amount;
  }

  ThresholdFeasibility res;
  res.transported = flow_value;
  res.feasible = flow_value >= mu.sum() - tol_flow * total;
  res.plan.coupling = Eigen::MatrixXd::Zero(n, n);
  res.plan.source = mu;
  res.plan.target = nu;
  for (int i = 0; i < a; ++i) {
    for (int j = 0; j < b; ++j) {
      const double f = original(1 + i, 1 + a + j) - cap(1 + i, 1 + a + j);
      if (f > 0.0) res.plan.coupling(src[i], dst[j]) = f;
    }
  }
  if (!res.feasible) {
    // Source-side of the minimum cut: sources reachable from s in the residual graph.
    std::vector<char> reach(k, 0);
    std::queue<int> q;
    q.push(s);
    reach[s] = 1;
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int v = 0; v < k; ++v) {
        if (!reach[v] && cap(u, v) > eps) {
          reach[v] = 1;
          q.push(v);
        }
      }
    }
    for (int i = 0; i < a; ++i) {
      if (reach[1 + i]) {
        res.hall_violator.push_back(src[i]);
        res.violator_mass += mu[src[i]];
      }
    }
    for (int j = 0; j < b; ++j) {
      bool hit = false;
      for (int i : res.hall_violator) hit = hit || distances(i, dst[j]) <= r + rtol;
      if (hit) res.neighbourhood_mass += nu[dst[j]];
    }
  }
  return res;
}

WinfResult winf(const MarkovChain& chain, const Eigen::VectorXd& mu, const Eigen::VectorXd& nu, double tol_flow) {
  const Eigen::MatrixXd& D = chain.distances();
  check_marginals(mu, nu, D.rows(), tol_flow);
  const double eps = tol_flow * std::max(1.0, mu.sum()) * 1e-3;
  std::vector<double> thresholds{0.0};
  for (int i : support(mu, eps)) {
    for (int j : support(nu, eps)) thresholds.push_back(D(i, j));
  }
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  std::size_t lo = 0, hi = thresholds.size() - 1;  // thresholds[hi] is always feasible
  ThresholdFeasibility best = threshold_feasible(D, mu, nu, thresholds[hi], tol_flow);
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    ThresholdFeasibility probe = threshold_feasible(D, mu, nu, thresholds[mid], tol_flow);
    if (probe.feasible) {
      hi = mid;
      best = std::move(probe);
    } else {
      lo = mid + 1;
    }
  }
  if (best.plan.coupling.size() == 0 || hi != lo) best = threshold_feasible(D, mu, nu, thresholds[hi], tol_flow);
  return {thresholds[hi], best.plan};
}

}  // namespace curvlab
