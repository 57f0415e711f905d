#include "curvlab/capacity.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "curvlab/errors.hpp"
#include "curvlab/parallel.hpp"
#include "curvlab/spectral.hpp"

namespace curvlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Harmonic potential for the membership codes 0 = free, 1 = A, 2 = B.
VertexFunction harmonic(const Eigen::MatrixXd& L, const std::vector<int>& code) {
  const int n = static_cast<int>(code.size());
  VertexFunction h = VertexFunction::Zero(n);
  std::vector<int> interior;
  for (int x = 0; x < n; ++x) {
    if (code[x] == 2) h[x] = 1.0;
    if (code[x] == 0) interior.push_back(x);
  }
  const auto k = static_cast<Eigen::Index>(interior.size());
  if (k == 0) return h;
  Eigen::MatrixXd M(k, k);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const int x = interior[i];
    for (Eigen::Index j = 0; j < k; ++j) M(i, j) = L(x, interior[j]);
    for (int y = 0; y < n; ++y) {
      if (code[y] == 2) rhs[i] -= L(x, y);
    }
  }
  const Eigen::VectorXd sol = M.partialPivLu().solve(rhs);
  for (Eigen::Index i = 0; i < k; ++i) h[interior[i]] = sol[i];
  return h;
}

double log_weight(double mass) { return mass * std::log1p(std::exp(2.0) / mass); }

void check_cap(const MarkovChain& chain, int max_vertices) {
  if (chain.size() > max_vertices) {
    throw EnumerationLimit("capacity constants enumerate 3^n pairs; n = " + std::to_string(chain.size()) +
                           " exceeds the cap of " + std::to_string(max_vertices));
  }
}

}  // namespace

CapacityResult capacity(const MarkovChain& chain, const VertexSubset& A, const VertexSubset& B) {
  const int n = chain.size();
  if (A.universe_size() != n || B.universe_size() != n) throw PreconditionError("subset does not match the chain");
  if (A.empty() || B.empty()) throw PreconditionError("capacity needs nonempty sets");
  std::vector<int> code(n, 0);
  for (int x = 0; x < n; ++x) {
    if (A.contains(x) && B.contains(x)) throw PreconditionError("capacity needs disjoint sets");
    code[x] = A.contains(x) ? 1 : B.contains(x) ? 2 : 0;
  }
  CapacityResult res;
  res.potential = harmonic(chain.generator(), code);
  const VertexFunction lh = laplacian(chain, res.potential);
  res.value = -inner(chain, lh, res.potential);
  for (int x = 0; x < n; ++x) {
    if (code[x] == 0) res.harmonic_residual = std::max(res.harmonic_residual, std::abs(lh[x]));
  }
  return res;
}

CapacityConstants capacity_constants(const MarkovChain& chain, int max_vertices) {
  check_cap(chain, max_vertices);
  const int n = chain.size();
  const Eigen::MatrixXd L = chain.generator();
  const Eigen::VectorXd& m = chain.measure();
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= 3;

  struct Best {
    double cap_value = kInf, theta_value = kInf;
    std::vector<int> cap_code, theta_code;
    double cap_cap = 0.0, theta_cap = 0.0;
  };
  std::vector<Best> partial(static_cast<std::size_t>(worker_count()));
  parallel_ranges(total, [&](std::size_t lo, std::size_t hi, int w) {
    Best& best = partial[static_cast<std::size_t>(w)];
    std::vector<int> code(n);
    for (std::size_t c = lo; c < hi; ++c) {
      std::size_t r = c;
      double ma = 0.0, mb = 0.0;
      for (int x = 0; x < n; ++x) {
        code[x] = static_cast<int>(r % 3);
        r /= 3;
        if (code[x] == 1) ma += m[x];
        if (code[x] == 2) mb += m[x];
      }
      if (ma == 0.0 || mb == 0.0) continue;
      const VertexFunction h = harmonic(L, code);
      const double cap = energy(chain, h);
      const double th = log_mean(cap / ma, cap / mb);
      if (th < best.theta_value) {
        best.theta_value = th;
        best.theta_code = code;
        best.theta_cap = cap;
      }
      if (mb >= 0.5 - 1e-12) {
        const double v = cap / log_weight(ma);
        if (v < best.cap_value) {
          best.cap_value = v;
          best.cap_code = code;
          best.cap_cap = cap;
        }
      }
    }
  });

  Best best;
  for (const auto& p : partial) {  // worker order keeps ties deterministic
    if (p.cap_value < best.cap_value) {
      best.cap_value = p.cap_value;
      best.cap_code = p.cap_code;
      best.cap_cap = p.cap_cap;
    }
    if (p.theta_value < best.theta_value) {
      best.theta_value = p.theta_value;
      best.theta_code = p.theta_code;
      best.theta_cap = p.theta_cap;
    }
  }
  auto subset = [&](const std::vector<int>& code, int tag) {
    std::vector<int> members;
    for (int x = 0; x < static_cast<int>(code.size()); ++x) {
      if (code[x] == tag) members.push_back(x);
    }
    return VertexSubset(chain, members);
  };
  CapacityConstants out;
  out.alpha_cap.value = best.cap_value;
  out.alpha_cap.cap = best.cap_cap;
  if (!best.cap_code.empty()) {
    out.alpha_cap.A = subset(best.cap_code, 1);
    out.alpha_cap.B = subset(best.cap_code, 2);
  }
  out.alpha_cap_theta.value = best.theta_value;
  out.alpha_cap_theta.cap = best.theta_cap;
  if (!best.theta_code.empty()) {
    out.alpha_cap_theta.A = subset(best.theta_code, 1);
    out.alpha_cap_theta.B = subset(best.theta_code, 2);
  }
  return out;
}

CapacityConstant alpha_cap(const MarkovChain& chain, int max_vertices) {
  return capacity_constants(chain, max_vertices).alpha_cap;
}

CapacityConstant alpha_cap_theta(const MarkovChain& chain, int max_vertices) {
  return capacity_constants(chain, max_vertices).alpha_cap_theta;
}

}  // namespace curvlab
