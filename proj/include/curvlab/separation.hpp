#pragma once

#include <string>

#include "curvlab/chain.hpp"

namespace curvlab {

/// Named after the formula used:
///   min: f(x) = min_k (fK(k) + D(x,k))   (the largest 1-Lipschitz extension)
///   max: f(x) = max_k (fK(k) - D(x,k))   (the smallest 1-Lipschitz extension)
enum class Extension { min, max };

/// Extends the values of fK on K to all vertices; fK is read on K only.
VertexFunction lipschitz_extension(const MarkovChain& chain, const VertexSubset& K, const VertexFunction& fK,
                                   Extension direction, double tol = 1e-9);

enum class SeparationStep { euler, semigroup };

struct SeparationConfig {
  SeparationStep step = SeparationStep::semigroup;
  double eps = 0.0;  // 0 selects 0.5 / Deg_max
  double tol = 1e-9;
  int max_iters = 200000;
  int stall_window = 50;
  int max_halvings = 10;
  int polish_every = 10;
  bool check_curvature = true;
};

struct SeparationSolution {
  VertexFunction f;
  double C = 0.0;         // mean of Delta f over K
  double residual = 0.0;  // max_K Delta f - min_K Delta f
  int iterations = 0;
  bool converged = false;
  bool polished = false;   // finished by the active-set linear solve
  double step_lipschitz = 0.0;  // largest Lip of an intermediate step
  std::string message;
};

/// Searches f in Lip(1) with Delta f constant on K, smallest extension of f|K
/// on X and largest on Y. Non-convergence is reported, not thrown.
SeparationSolution separation_solve(const MarkovChain& chain, const CutPartition& cut, const SeparationConfig& cfg = {});

struct SeparationVerdict {
  double lipschitz = 0.0;
  double residual = 0.0;
  double x_extension_gap = 0.0;  // max |f - smallest extension| on X
  double y_extension_gap = 0.0;  // max |f - largest extension| on Y
  double moreover_x = 0.0;       // min over X of Delta f - C
  double moreover_y = 0.0;       // min over Y of C - Delta f
  bool lipschitz_ok = false;
  bool constant_ok = false;
  bool extensions_ok = false;
  bool moreover_ok = false;
  bool all() const { return lipschitz_ok && constant_ok && extensions_ok && moreover_ok; }
};

/// Independent recomputation of every conclusion for a returned solution.
SeparationVerdict verify_separation(const MarkovChain& chain, const CutPartition& cut, const SeparationSolution& sol,
                                    double tol = 1e-9);

enum class PhiCase { exp_positive, quadratic, identity };

/// Increasing concave reparametrisation used with the chain rule.
class PhiProfile {
 public:
  PhiProfile(double C, double P0, double R);

  PhiCase kind() const { return kind_; }
  double C() const { return C_; }
  double P0() const { return P0_; }
  double R() const { return R_; }
  double beta() const { return beta_; }

  double value(double s) const;
  double d1(double s) const;
  /// Second derivative; the interior formula holds on the closed interval [0, R].
  double d2(double s) const;
  double d3(double s) const;
  /// C phi'(s) + (P0/2) phi''(s) on [0, R].
  double drift(double s) const;
  /// Uniform upper bound for drift on [0, R]: -C/(e^{beta R} - 1), -P0/(2R) or C.
  double drift_bound() const;

 private:
  PhiCase kind_;
  double C_, P0_, R_, beta_;
  bool small_beta_ = false;
};

PhiProfile build_phi(double C, double P0, double R);

/// min over x in W of  phi'(u)Delta u + (P0/2) phi''(u) (grad_- u)^2 - Delta(phi o u).
/// Throws when phi''' >= 0 fails on a realised interval (a neighbour below 0
/// while 0 <= u(x) <= R, outside the identity case).
double chain_rule_margin(const MarkovChain& chain, const VertexFunction& u, const VertexSubset& W, const PhiProfile& phi);

struct DirichletBounds {
  VertexSubset A, B;
  double lambda_A_bound = 0.0;  // P0/(4R^2) * x e^x / (e^x - 1), x = beta R
  double lambda_B_bound = 0.0;  // P0/(4R^2) * x / (e^x - 1)
  double theta_bound = 0.0;     // log mean of the two bounds
  double super_A = 0.0;         // certified bound from an explicit supersolution
  double super_B = 0.0;
  double lambda_A = 0.0;        // true Dirichlet eigenvalues
  double lambda_B = 0.0;
  double C = 0.0;
  double R = 0.0;
  SeparationSolution separation;
};

/// Dirichlet eigenvalue bounds for the partition V = A u B through the
/// separation solution on K = supp(Delta 1_A), X = A \ K, Y = B \ K.
DirichletBounds dirichlet_from_separation(const MarkovChain& chain, const VertexSubset& A,
                                          const SeparationConfig& cfg = {});
/// Convenience: A = X u K, B = Y.
DirichletBounds dirichlet_from_separation(const MarkovChain& chain, const CutPartition& cut,
                                          const SeparationConfig& cfg = {});

}  // namespace curvlab
