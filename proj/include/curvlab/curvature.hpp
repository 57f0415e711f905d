#pragma once

#include <optional>
#include <vector>

#include "curvlab/chain.hpp"
#include "curvlab/transport.hpp"

namespace curvlab {

struct KappaResult {
  double value = 0.0;
  /// Optimal 1-Lipschitz f with f(x) = 0 and f(y) = d(x,y).
  VertexFunction witness;
  /// Objective recomputed from the witness through the Laplacian.
  double audit_value = 0.0;
  int pivots = 0;
};

/// Ollivier curvature of a support pair as the exact LP
///   inf { (Delta f(x) - Delta f(y)) / d(x,y) : f in Lip(1), f(y) - f(x) = d(x,y) }.
KappaResult kappa(const MarkovChain& chain, int x, int y);

/// 1 - W1(P(x,.), P(y,.)) / d(x,y); lazy kernels only.
double kappa_lazy_crosscheck(const MarkovChain& chain, int x, int y);

struct SectionalResult {
  bool nonneg = false;
  /// Plan moving every point by at most d(x,y) when nonneg.
  TransportPlan plan;
  /// Otherwise, vertices x' whose d(x,y)-neighbourhood cannot absorb P(x, x').
  std::vector<int> hall_violator;
  double violator_mass = 0.0;
  double neighbourhood_mass = 0.0;
};

SectionalResult sectional_nonneg(const MarkovChain& chain, int x, int y);

/// 1 - W_inf(P(x,.), P(y,.)) / d(x,y); lazy kernels only.
double kappa_inf(const MarkovChain& chain, int x, int y);

struct EdgeCurvature {
  Edge edge;
  double kappa = 0.0;
  std::optional<double> kappa_inf;
  std::optional<bool> sectional_nonneg;
  VertexFunction witness;
};

/// Curvature data for every support pair. Sectional quantities are filled
/// only for lazy chains.
std::vector<EdgeCurvature> edge_curvatures(const MarkovChain& chain);

/// min over support pairs of kappa; also reports the minimising edge.
double min_kappa(const MarkovChain& chain, Edge* argmin = nullptr);

/// e^{-Kt} Lip(f) - Lip(P_t f).
double lipschitz_contraction_margin(const MarkovChain& chain, const VertexFunction& f, double t, double K);

enum class CommutationVariant { log_inf, pointwise, sqrt };

/// Smallest (rhs - lhs) of the chosen heat-semigroup gradient estimate:
///   log_inf:   ||grad log f||_inf - ||grad log P_t f||_inf
///   pointwise: P_t|grad f| - |grad P_t f|           (minimised over vertices)
///   sqrt:      P_t|grad sqrt f| - |grad sqrt P_t f| (minimised over vertices)
double gradient_commutation_margin(const MarkovChain& chain, const VertexFunction& f, double t,
                                   CommutationVariant variant);

/// min of  Delta e^{lf}/e^{lf}(x) - Delta e^{lf}/e^{lf}(y)  and the mirrored
/// inequality for -l. Requires f in Lip(1) with f(y) - f(x) = 1.
double exp_ratio_margin(const MarkovChain& chain, int x, int y, const VertexFunction& f, double lambda);

}  // namespace curvlab
