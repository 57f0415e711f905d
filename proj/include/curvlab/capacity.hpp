#pragma once

#include "curvlab/chain.hpp"

namespace curvlab {

struct CapacityResult {
  double value = 0.0;
  /// Harmonic potential: 0 on A, 1 on B, Delta h = 0 elsewhere.
  VertexFunction potential;
  double harmonic_residual = 0.0;
};

/// cap(A,B) = min { E(f) : f|_A = 0, f|_B = 1 }.
CapacityResult capacity(const MarkovChain& chain, const VertexSubset& A, const VertexSubset& B);

struct CapacityConstant {
  double value = 0.0;
  VertexSubset A;
  VertexSubset B;
  double cap = 0.0;
};

/// inf over disjoint A, B with m(B) >= 1/2 of cap(A,B) / (m(A) log(1 + e^2/m(A))).
CapacityConstant alpha_cap(const MarkovChain& chain, int max_vertices = 12);

/// inf over disjoint nonempty A, B of theta(cap/m(A), cap/m(B)).
CapacityConstant alpha_cap_theta(const MarkovChain& chain, int max_vertices = 12);

struct CapacityConstants {
  CapacityConstant alpha_cap;
  CapacityConstant alpha_cap_theta;
};

/// Both constants from a single 3^n enumeration.
CapacityConstants capacity_constants(const MarkovChain& chain, int max_vertices = 12);

}  // namespace curvlab
