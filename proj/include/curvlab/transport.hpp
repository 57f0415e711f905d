#pragma once

#include <vector>

#include <Eigen/Dense>

#include "curvlab/chain.hpp"

namespace curvlab {

/// Coupling pi(x', y') between a source and a target measure on the vertices.
struct TransportPlan {
  Eigen::MatrixXd coupling;
  Eigen::VectorXd source;
  Eigen::VectorXd target;

  double cost(const Eigen::MatrixXd& distances) const;
  /// Largest distance moved by a positive entry (entries <= tol are ignored).
  double max_displacement(const Eigen::MatrixXd& distances, double tol = 1e-13) const;
  /// Nonnegative with the prescribed marginals.
  bool is_valid(double tol = 1e-11) const;
};

struct W1Result {
  double value = 0.0;
  double dual_value = 0.0;  // value of a feasible dual pair; equals value at optimality
  TransportPlan plan;
};

/// Min-cost transport for an arbitrary nonnegative cost matrix, by successive
/// shortest augmenting paths with reduced-cost potentials.
W1Result min_cost_transport(const Eigen::MatrixXd& cost, const Eigen::VectorXd& mu,
                            const Eigen::VectorXd& nu, double tol_flow = 1e-11);

/// 1-Wasserstein distance under the chain's path metric.
W1Result w1(const MarkovChain& chain, const Eigen::VectorXd& mu, const Eigen::VectorXd& nu,
            double tol_flow = 1e-11);

struct ThresholdFeasibility {
  bool feasible = false;
  double transported = 0.0;
  TransportPlan plan;
  /// When infeasible: source vertices whose r-neighbourhood cannot absorb
  /// their mass (a Hall violator from the minimum cut).
  std::vector<int> hall_violator;
  double violator_mass = 0.0;
  double neighbourhood_mass = 0.0;
};

/// Is there a plan moving mu to nu supported on pairs with D <= r?
ThresholdFeasibility threshold_feasible(const Eigen::MatrixXd& distances, const Eigen::VectorXd& mu,
                                        const Eigen::VectorXd& nu, double r, double tol_flow = 1e-11);

struct WinfResult {
  double value = 0.0;
  TransportPlan plan;
};

/// l-infinity Wasserstein distance: the smallest realised distance r with a
/// plan supported on {D <= r}.
WinfResult winf(const MarkovChain& chain, const Eigen::VectorXd& mu, const Eigen::VectorXd& nu,
                double tol_flow = 1e-11);

}  // namespace curvlab
