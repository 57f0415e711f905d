#pragma once

#include <cstdint>
#include <limits>
#include <string>

#include "curvlab/chain.hpp"

namespace curvlab {

struct OptimizerConfig {
  int restarts = 64;
  int max_iters = 2000;
  double opt_tol = 1e-10;
  std::uint64_t seed = 20240611;
  /// Dense angle grid for n <= 3 (10^6 points on the circle, 1000 x 1000 on the 2-sphere octant).
  bool grid = true;
  int grid_points_circle = 1000000;
  int grid_points_sphere = 1000;
};

/// Result of a ratio minimisation. `value` is an upper bound for the constant:
/// the smaller of the best witness ratio and the constant-direction limit.
struct FunctionalResult {
  double value = 0.0;
  double witness_value = 0.0;
  VertexFunction witness;  // normalised (||f||_{2,m} = 1 for alpha, ||f||_{1,m} = 1 for alpha_mod)
  double limit_value = 0.0;  // lambda/2 for alpha, 2 lambda for alpha_mod
  bool converged = false;    // first-order stationarity of the witness
  bool grid_certified = false;
  int restarts_used = 0;
  double el_residual = std::numeric_limits<double>::quiet_NaN();
};

/// Ent of f / ||f||_{1,m}. Requires f > 0.
double entropy(const MarkovChain& chain, const VertexFunction& f);

/// E(f,f) / Ent(f^2) after normalising ||f||_{2,m} = 1. Zero entries allowed.
double logsob_ratio(const MarkovChain& chain, const VertexFunction& f);
/// E(f, log f) / Ent(f) after normalising ||f||_{1,m} = 1. Requires f > 0.
double mod_ratio(const MarkovChain& chain, const VertexFunction& f);

FunctionalResult alpha_logsob(const MarkovChain& chain, const OptimizerConfig& cfg = {});
FunctionalResult alpha_mod(const MarkovChain& chain, const OptimizerConfig& cfg = {});

/// Grid minimum of the log-Sobolev ratio over the positive part of the unit
/// sphere, polished by descent, capped by lambda/2. n must be 2 or 3.
FunctionalResult alpha_logsob_grid(const MarkovChain& chain, const OptimizerConfig& cfg = {});
/// Same for the modified ratio (interior grid, capped by 2 lambda).
FunctionalResult alpha_mod_grid(const MarkovChain& chain, const OptimizerConfig& cfg = {});

/// max_x | Delta f / f + Delta log f + alpha log f |  with f scaled to ||f||_{1,m} = 1.
double el_residual(const MarkovChain& chain, const VertexFunction& f, double alpha);

struct MixingTime {
  double tau = 0.0;
  int worst_vertex = 0;
};

/// inf { t : max_x ||P_t u_x - 1||_{2,m} <= 1/e } with u_x = 1_x / m(x).
MixingTime mixing_time(const MarkovChain& chain, double tol = 1e-9);

/// Three-vertex chain with w(1,2) = 10, w(2,3) = 1 and raw measure (1/eps, 1, 1/20).
MarkovChain counterexample_chain(double eps);

/// Modified log-Sobolev ratio of f = (eps, 1, -log eps) on counterexample_chain(eps).
double counterexample_ratio(double eps);

}  // namespace curvlab
