#pragma once

#include <cstddef>

#include "curvlab/chain.hpp"

namespace curvlab {

/// Spectrum of -Delta in l2(m).
struct SpectralSummary {
  Eigen::VectorXd eigenvalues;     // ascending, eigenvalues[0] ~ 0
  Eigen::MatrixXd eigenfunctions;  // columns m-orthonormal, matching eigenvalues
  double lambda = 0.0;             // smallest positive eigenvalue
};

/// Symmetrised generator: S(x,x) = Deg(x), S(x,y) = -sqrt(P(x,y) P(y,x)).
Eigen::MatrixXd symmetrized_operator(const MarkovChain& chain);

SpectralSummary spectrum(const MarkovChain& chain);

/// Principal eigenvalue of -Delta_W = -1_W Delta 1_W on functions supported in W.
double dirichlet_eigenvalue(const MarkovChain& chain, const VertexSubset& W);

/// Principal Dirichlet eigenfunction on W (nonnegative, zero outside W, ||.||_{2,m} = 1).
VertexFunction dirichlet_eigenfunction(const MarkovChain& chain, const VertexSubset& W);

/// Logarithmic mean (s - t) / (log s - log t), theta(s, s) = s.
double log_mean(double s, double t);

struct AlphaSpectral {
  double value = 0.0;
  VertexSubset argmin;
  double lambda_x = 0.0;
  double lambda_complement = 0.0;
};

/// inf over proper nonempty X of theta(lambda_X, lambda_{X^c}), exhaustively.
AlphaSpectral alpha_spectral(const MarkovChain& chain, int max_vertices = 16);

/// Largest lambda with Delta f <= -lambda f on W (negative infinity when no
/// lambda works). Requires f >= 0 and f not identically 0 on W.
double supersolution_bound(const MarkovChain& chain, const VertexSubset& W, const VertexFunction& f);

}  // namespace curvlab
