#include "curvlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "curvlab/errors.hpp"
#include "curvlab/linalg.hpp"
#include "curvlab/parallel.hpp"

namespace curvlab {

namespace {

void require_proper(const MarkovChain& chain, const VertexSubset& W) {
  if (W.universe_size() != chain.size()) throw PreconditionError("subset does not match the chain");
  const int c = W.count();
  if (c == 0 || c == chain.size()) throw PreconditionError("Dirichlet eigenvalue needs a proper nonempty subset");
}

Eigen::MatrixXd block(const Eigen::MatrixXd& S, const std::vector<int>& idx) {
  const auto k = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXd out(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) out(i, j) = S(idx[i], idx[j]);
  }
  return out;
}

}  // namespace

Eigen::MatrixXd symmetrized_operator(const MarkovChain& chain) {
  const int n = chain.size();
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n);
  for (int x = 0; x < n; ++x) {
    S(x, x) = chain.degree(x);
    for (const auto& nb : chain.neighbors(x)) S(x, nb.vertex) = -std::sqrt(nb.rate * chain.rate(nb.vertex, x));
  }
  return S;
}

SpectralSummary spectrum(const MarkovChain& chain) {
  const SymmetricEigen eig = jacobi_eigen(symmetrized_operator(chain), 1e-15);
  SpectralSummary s;
  s.eigenvalues = eig.values;
  const Eigen::VectorXd inv_sqrt_m = chain.measure().array().rsqrt();
  s.eigenfunctions = inv_sqrt_m.asDiagonal() * eig.vectors;
  s.lambda = chain.size() > 1 ? eig.values[1] : 0.0;
  return s;
}

double dirichlet_eigenvalue(const MarkovChain& chain, const VertexSubset& W) {
  require_proper(chain, W);
  return jacobi_min_eigenvalue(block(symmetrized_operator(chain), W.members()));
}

VertexFunction dirichlet_eigenfunction(const MarkovChain& chain, const VertexSubset& W) {
  require_proper(chain, W);
  const std::vector<int> idx = W.members();
  const SymmetricEigen eig = jacobi_eigen(block(symmetrized_operator(chain), idx));
  Eigen::VectorXd v = eig.vectors.col(0);
  if (v.sum() < 0.0) v = -v;
  VertexFunction f = VertexFunction::Zero(chain.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    f[idx[i]] = std::max(0.0, v[static_cast<Eigen::Index>(i)]) / std::sqrt(chain.mass(idx[i]));
  }
  return f;
}

double log_mean(double s, double t) {
  if (!(s > 0.0) || !(t > 0.0)) throw PreconditionError("logarithmic mean needs positive arguments");
  if (s == t) return s;
  if (std::abs(s / t - 1.0) < 1e-6) {
    const double d = std::log(s / t);
    return 0.5 * (s + t) * (1.0 - d * d / 24.0);
  }
  return (s - t) / (std::log(s) - std::log(t));
}

AlphaSpectral alpha_spectral(const MarkovChain& chain, int max_vertices) {
  const int n = chain.size();
  if (n > max_vertices || n > 30) {
    throw EnumerationLimit("alpha_spectral enumerates 2^n subsets; n = " + std::to_string(n) +
                           " exceeds the cap of " + std::to_string(max_vertices));
  }
  if (n < 2) throw PreconditionError("alpha_spectral needs at least two vertices");
  const Eigen::MatrixXd S = symmetrized_operator(chain);
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;

  // Every proper subset's eigenvalue once; then pair X with its complement.
  std::vector<double> lam(full + 1, 0.0);
  parallel_ranges(full - 1, [&](std::size_t lo, std::size_t hi, int) {
    std::vector<int> idx;
    for (std::size_t k = lo; k < hi; ++k) {
      const std::uint64_t mask = k + 1;
      idx.clear();
      for (int v = 0; v < n; ++v) {
        if (mask >> v & 1U) idx.push_back(v);
      }
      lam[mask] = jacobi_min_eigenvalue(block(S, idx));
    }
  });

  AlphaSpectral best;
  best.value = std::numeric_limits<double>::infinity();
  std::uint64_t arg = 1;
  for (std::uint64_t mask = 1; mask < full; ++mask) {
    if (!(mask & 1U)) continue;  // X contains vertex 0; X <-> X^c symmetry
    const double v = log_mean(lam[mask], lam[full ^ mask]);
    if (v < best.value) {
      best.value = v;
      arg = mask;
    }
  }
  best.argmin = VertexSubset::from_mask(chain, arg);
  best.lambda_x = lam[arg];
  best.lambda_complement = lam[full ^ arg];
  return best;
}

double supersolution_bound(const MarkovChain& chain, const VertexSubset& W, const VertexFunction& f) {
  if (f.size() != chain.size()) throw PreconditionError("function length does not match vertex count");
  if ((f.array() < 0.0).any()) throw PreconditionError("supersolution must be nonnegative");
  const std::vector<int> members = W.members();
  bool nonzero = false;
  for (int x : members) nonzero = nonzero || f[x] > 0.0;
  if (!nonzero) throw PreconditionError("supersolution vanishes on W");

  const VertexFunction lf = laplacian(chain, f);
  double lam = std::numeric_limits<double>::infinity();
  for (int x : members) {
    if (f[x] > 0.0) {
      lam = std::min(lam, -lf[x] / f[x]);
    } else if (lf[x] > 0.0) {
      return -std::numeric_limits<double>::infinity();
    }
  }
  return lam;
}

}  // namespace curvlab
