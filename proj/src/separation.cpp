#include "curvlab/separation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "curvlab/curvature.hpp"
#include "curvlab/errors.hpp"
#include "curvlab/spectral.hpp"

namespace curvlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool compatible_on(const MarkovChain& chain, const std::vector<int>& K, const VertexFunction& g, double tol) {
  for (int a : K) {
    for (int b : K) {
      if (g[a] - g[b] > chain.dist(a, b) + tol) return false;
    }
  }
  return true;
}

// Smallest extension on X, largest on Y, g itself on K.
VertexFunction separate_extend(const MarkovChain& chain, const CutPartition& cut, const std::vector<int>& K,
                               const VertexFunction& g) {
  const Eigen::MatrixXd& D = chain.distances();
  VertexFunction f = g;
  for (int x = 0; x < chain.size(); ++x) {
    if (cut.X.contains(x)) {
      double v = -kInf;
      for (int k : K) v = std::max(v, g[k] - D(x, k));
      f[x] = v;
    } else if (cut.Y.contains(x)) {
      double v = kInf;
      for (int k : K) v = std::min(v, g[k] + D(x, k));
      f[x] = v;
    }
  }
  return f;
}

void spread_on(const VertexFunction& lf, const std::vector<int>& K, double& lo, double& hi, double& mean) {
  lo = kInf;
  hi = -kInf;
  mean = 0.0;
  for (int k : K) {
    lo = std::min(lo, lf[k]);
    hi = std::max(hi, lf[k]);
    mean += lf[k];
  }
  mean /= static_cast<double>(K.size());
}

// Freezes the active anchor of every X and Y vertex and solves the resulting
// linear system  Delta f = C on K,  f(k0) = 0.
bool active_set_polish(const MarkovChain& chain, const CutPartition& cut, const std::vector<int>& K,
                       const VertexFunction& f, double tol, VertexFunction& out) {
  const int n = chain.size();
  const Eigen::MatrixXd& D = chain.distances();
  std::vector<int> slot(n, -1);
  for (std::size_t i = 0; i < K.size(); ++i) slot[K[i]] = static_cast<int>(i);

  std::vector<int> anchor(n, -1);
  std::vector<double> offset(n, 0.0);
  for (int x = 0; x < n; ++x) {
    if (slot[x] >= 0) continue;
    const bool lower = cut.X.contains(x);
    double best = lower ? -kInf : kInf;
    for (int k : K) {
      const double v = lower ? f[k] - D(x, k) : f[k] + D(x, k);
      if ((lower && v > best) || (!lower && v < best)) {
        best = v;
        anchor[x] = k;
      }
    }
    offset[x] = lower ? -D(x, anchor[x]) : D(x, anchor[x]);
  }

  const int m = static_cast<int>(K.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m + 1, m + 1);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(m + 1);
  for (int i = 0; i < m; ++i) {
    const int k = K[i];
    for (const auto& nb : chain.neighbors(k)) {
      const int z = nb.vertex;
      const int col = slot[z] >= 0 ? slot[z] : slot[anchor[z]];
      A(i, col) += nb.rate;
      A(i, i) -= nb.rate;
      b[i] -= nb.rate * offset[z];
    }
    A(i, m) = -1.0;
  }
  A(m, 0) = 1.0;
  const Eigen::VectorXd sol = A.completeOrthogonalDecomposition().solve(b);
  if (!sol.allFinite()) return false;

  VertexFunction g = f;
  for (int i = 0; i < m; ++i) g[K[i]] = sol[i];
  if (!compatible_on(chain, K, g, 1e-12)) return false;
  out = separate_extend(chain, cut, K, g);
  double lo, hi, mean;
  spread_on(laplacian(chain, out), K, lo, hi, mean);
  return hi - lo <= tol;
}

}  // namespace

VertexFunction lipschitz_extension(const MarkovChain& chain, const VertexSubset& K, const VertexFunction& fK,
                                   Extension direction, double tol) {
  if (K.universe_size() != chain.size() || fK.size() != chain.size()) {
    throw PreconditionError("extension data must live on the chain's vertex set");
  }
  if (K.empty()) throw PreconditionError("extension needs a nonempty anchor set");
  const std::vector<int> members = K.members();
  if (!compatible_on(chain, members, fK, tol)) {
    throw PreconditionError("anchor values are not 1-Lipschitz on K");
  }
  const Eigen::MatrixXd& D = chain.distances();
  VertexFunction f(chain.size());
  for (int x = 0; x < chain.size(); ++x) {
    if (K.contains(x)) {
      f[x] = fK[x];
      continue;
    }
    double v = direction == Extension::min ? kInf : -kInf;
    for (int k : members) {
      v = direction == Extension::min ? std::min(v, fK[k] + D(x, k)) : std::max(v, fK[k] - D(x, k));
    }
    f[x] = v;
  }
  return f;
}

SeparationSolution separation_solve(const MarkovChain& chain, const CutPartition& cut, const SeparationConfig& cfg) {
  make_cut(chain, cut.X, cut.K, cut.Y);
  if (cfg.check_curvature) {
    Edge e{};
    const double k = min_kappa(chain, &e);
    if (k < -1e-10) {
      throw PreconditionError("separation needs nonnegative curvature; kappa(" + chain.labels()[e.x] + ", " +
                              chain.labels()[e.y] + ") = " + std::to_string(k));
    }
  }
  const std::vector<int> K = cut.K.members();
  const int k0 = K.front();
  const ChainConstants cc = chain_constants(chain);
  double eps = cfg.eps > 0.0 ? cfg.eps : 0.5 / cc.deg_max;

  SeparationSolution sol;
  VertexFunction f = separate_extend(chain, cut, K, VertexFunction::Zero(chain.size()));
  Eigen::MatrixXd heat;
  if (cfg.step == SeparationStep::semigroup) heat = heat_operator(chain, eps);

  double best = kInf;
  int since_best = 0;
  int halvings = 0;
  for (int it = 0; it <= cfg.max_iters; ++it) {
    const VertexFunction lf = laplacian(chain, f);
    double lo, hi, mean;
    spread_on(lf, K, lo, hi, mean);
    sol.iterations = it;
    sol.residual = hi - lo;
    sol.C = mean;
    if (sol.residual <= cfg.tol) {
      sol.converged = true;
      break;
    }
    if (cfg.polish_every > 0 && it % cfg.polish_every == 0) {
      VertexFunction polished;
      if (active_set_polish(chain, cut, K, f, cfg.tol, polished)) {
        f = polished - VertexFunction::Constant(f.size(), polished[k0]);
        spread_on(laplacian(chain, f), K, lo, hi, mean);
        sol.residual = hi - lo;
        sol.C = mean;
        sol.converged = sol.residual <= cfg.tol;
        sol.polished = sol.converged;
        if (sol.converged) break;
      }
    }
    if (sol.residual < best * 0.999) {
      best = sol.residual;
      since_best = 0;
    } else if (++since_best >= cfg.stall_window) {
      if (++halvings > cfg.max_halvings) {
        sol.message = "stalled after " + std::to_string(cfg.max_halvings) + " step halvings";
        break;
      }
      eps *= 0.5;
      if (cfg.step == SeparationStep::semigroup) heat = heat_operator(chain, eps);
      since_best = 0;
      best = sol.residual;
    }

    VertexFunction g = cfg.step == SeparationStep::euler ? VertexFunction(f + eps * lf) : VertexFunction(heat * f);
    sol.step_lipschitz = std::max(sol.step_lipschitz, lipschitz_constant(chain, g));
    if (!compatible_on(chain, K, g, 1e-12)) {
      if (++halvings > cfg.max_halvings) {
        sol.message = "step left Lip(1) on K";
        break;
      }
      eps *= 0.5;
      if (cfg.step == SeparationStep::semigroup) heat = heat_operator(chain, eps);
      continue;
    }
    f = separate_extend(chain, cut, K, g);
    f.array() -= f[k0];
  }
  if (!sol.converged && sol.message.empty()) sol.message = "iteration budget exhausted";
  sol.f = std::move(f);
  return sol;
}

SeparationVerdict verify_separation(const MarkovChain& chain, const CutPartition& cut, const SeparationSolution& sol,
                                    double tol) {
  SeparationVerdict v;
  const VertexFunction& f = sol.f;
  const double scale = std::max(1.0, f.cwiseAbs().maxCoeff());
  const VertexFunction lf = laplacian(chain, f);
  const std::vector<int> K = cut.K.members();
  double lo, hi, C;
  spread_on(lf, K, lo, hi, C);
  v.residual = hi - lo;
  v.lipschitz = lipschitz_constant(chain, f);

  const VertexFunction lower = lipschitz_extension(chain, cut.K, f, Extension::max, 1e-9);
  const VertexFunction upper = lipschitz_extension(chain, cut.K, f, Extension::min, 1e-9);
  v.moreover_x = kInf;
  v.moreover_y = kInf;
  for (int x = 0; x < chain.size(); ++x) {
    if (cut.X.contains(x)) {
      v.x_extension_gap = std::max(v.x_extension_gap, std::abs(f[x] - lower[x]));
      v.moreover_x = std::min(v.moreover_x, lf[x] - C);
    } else if (cut.Y.contains(x)) {
      v.y_extension_gap = std::max(v.y_extension_gap, std::abs(f[x] - upper[x]));
      v.moreover_y = std::min(v.moreover_y, C - lf[x]);
    }
  }
  v.lipschitz_ok = v.lipschitz <= 1.0 + tol;
  v.constant_ok = v.residual <= tol * std::max(1.0, std::abs(C));
  v.extensions_ok = v.x_extension_gap <= 1e-12 * scale && v.y_extension_gap <= 1e-12 * scale;
  v.moreover_ok = v.moreover_x >= -tol * std::max(1.0, std::abs(C)) && v.moreover_y >= -tol * std::max(1.0, std::abs(C));
  return v;
}

// ---------------------------------------------------------------------------

PhiProfile::PhiProfile(double C, double P0, double R) : C_(C), P0_(P0), R_(R), beta_(0.0) {
  if (!(P0 > 0.0) || !(R > 0.0)) throw PreconditionError("phi profile needs P0 > 0 and R > 0");
  if (C > 0.0) {
    kind_ = PhiCase::exp_positive;
    beta_ = 2.0 * C / P0;
    small_beta_ = beta_ * R < 1e-10;
  } else if (C >= -P0 / (2.0 * R)) {
    kind_ = PhiCase::quadratic;
  } else {
    kind_ = PhiCase::identity;
  }
}

PhiProfile build_phi(double C, double P0, double R) { return PhiProfile(C, P0, R); }

double PhiProfile::value(double s) const {
  if (kind_ == PhiCase::identity || s < 0.0) return s;
  const double t = std::min(s, R_);
  if (kind_ == PhiCase::quadratic || small_beta_) return (2.0 * R_ * t - t * t) / (2.0 * R_);
  const double den = -beta_ * std::expm1(-beta_ * R_);
  return (-std::expm1(-beta_ * t) - beta_ * t * std::exp(-beta_ * R_)) / den;
}

double PhiProfile::d1(double s) const {
  if (kind_ == PhiCase::identity || s < 0.0) return 1.0;
  if (s > R_) return 0.0;
  if (kind_ == PhiCase::quadratic || small_beta_) return (R_ - s) / R_;
  return -std::expm1(-beta_ * (R_ - s)) * std::exp(-beta_ * s) / -std::expm1(-beta_ * R_);
}

double PhiProfile::d2(double s) const {
  if (kind_ == PhiCase::identity || s < 0.0 || s > R_) return 0.0;
  if (kind_ == PhiCase::quadratic || small_beta_) return -1.0 / R_;
  return -beta_ * std::exp(-beta_ * s) / -std::expm1(-beta_ * R_);
}

double PhiProfile::d3(double s) const {
  if (kind_ != PhiCase::exp_positive || small_beta_ || s < 0.0 || s > R_) return 0.0;
  return beta_ * beta_ * std::exp(-beta_ * s) / -std::expm1(-beta_ * R_);
}

double PhiProfile::drift(double s) const { return C_ * d1(s) + 0.5 * P0_ * d2(s); }

double PhiProfile::drift_bound() const {
  switch (kind_) {
    case PhiCase::exp_positive:
      return small_beta_ ? -P0_ / (2.0 * R_) : -C_ / std::expm1(beta_ * R_);
    case PhiCase::quadratic:
      return -P0_ / (2.0 * R_);
    case PhiCase::identity:
      return C_;
  }
  return C_;
}

double chain_rule_margin(const MarkovChain& chain, const VertexFunction& u, const VertexSubset& W, const PhiProfile& phi) {
  if (u.size() != chain.size() || W.universe_size() != chain.size()) {
    throw PreconditionError("chain rule data must live on the chain's vertex set");
  }
  const double P0 = chain_constants(chain).p0;
  const VertexFunction lu = laplacian(chain, u);
  VertexFunction pu(u.size());
  for (int x = 0; x < u.size(); ++x) pu[x] = phi.value(u[x]);
  const VertexFunction lpu = laplacian(chain, pu);
  const VertexFunction gm = gradients(chain, u).grad_minus;

  double margin = kInf;
  for (int x : W.members()) {
    if (phi.kind() != PhiCase::identity && u[x] >= 0.0 && u[x] <= phi.R()) {
      for (const auto& nb : chain.neighbors(x)) {
        if (u[nb.vertex] < 0.0) {
          throw PreconditionError("phi''' >= 0 fails between " + chain.labels()[nb.vertex] + " and " +
                                  chain.labels()[x]);
        }
      }
    }
    const double lhs = phi.d1(u[x]) * lu[x] + 0.5 * P0 * phi.d2(u[x]) * gm[x] * gm[x];
    margin = std::min(margin, lhs - lpu[x]);
  }
  return margin;
}

// ---------------------------------------------------------------------------

namespace {

double constructive_bound(const MarkovChain& chain, const VertexSubset& W, const VertexFunction& u,
                          const PhiProfile& phi) {
  VertexFunction F = VertexFunction::Zero(chain.size());
  for (int x : W.members()) F[x] = phi.value(u[x]);
  if ((F.array() < 0.0).any() || F.maxCoeff() <= 0.0) return 0.0;
  const double b = supersolution_bound(chain, W, F);
  return std::isfinite(b) ? std::max(0.0, b) : 0.0;
}

}  // namespace

DirichletBounds dirichlet_from_separation(const MarkovChain& chain, const VertexSubset& A, const SeparationConfig& cfg) {
  const int n = chain.size();
  if (A.universe_size() != n) throw PreconditionError("A must be a subset of the chain's vertex set");
  if (A.empty() || A.count() == n) throw PreconditionError("A must be a proper nonempty subset");

  DirichletBounds out;
  out.A = A;
  out.B = A.complement(chain);
  std::vector<char> kf(n, 0), xf(n, 0), yf(n, 0);
  for (const auto& e : chain.edges()) {
    if (A.contains(e.x) != A.contains(e.y)) kf[e.x] = kf[e.y] = 1;
  }
  for (int x = 0; x < n; ++x) {
    if (kf[x]) continue;
    (A.contains(x) ? xf : yf)[x] = 1;
  }
  const CutPartition cut = make_cut(chain, VertexSubset::from_flags(chain, xf), VertexSubset::from_flags(chain, kf),
                                    VertexSubset::from_flags(chain, yf));
  out.separation = separation_solve(chain, cut, cfg);
  const ChainConstants cc = chain_constants(chain);
  out.C = out.separation.C;
  out.R = 2.0 * cc.diam;

  const double base = cc.p0 / (4.0 * out.R * out.R);
  const double x = 2.0 * out.C / cc.p0 * out.R;
  // x / (e^x - 1) and x e^x / (e^x - 1), both -> 1 at x = 0.
  const double low = std::abs(x) < 1e-12 ? 1.0 : x / std::expm1(x);
  const double high = std::abs(x) < 1e-12 ? 1.0 : -x / std::expm1(-x);
  out.lambda_B_bound = base * low;
  out.lambda_A_bound = base * high;
  out.theta_bound = log_mean(out.lambda_A_bound, out.lambda_B_bound);

  const VertexFunction& f = out.separation.f;
  double kmin = kInf, kmax = -kInf;
  for (int k : cut.K.members()) {
    kmin = std::min(kmin, f[k]);
    kmax = std::max(kmax, f[k]);
  }
  const VertexFunction uB = (f.array() - kmin).matrix();
  const VertexFunction uA = (kmax - f.array()).matrix();
  out.super_B = constructive_bound(chain, out.B, uB, build_phi(out.C, cc.p0, out.R));
  out.super_A = constructive_bound(chain, out.A, uA, build_phi(-out.C, cc.p0, out.R));

  out.lambda_A = dirichlet_eigenvalue(chain, out.A);
  out.lambda_B = dirichlet_eigenvalue(chain, out.B);
  return out;
}

DirichletBounds dirichlet_from_separation(const MarkovChain& chain, const CutPartition& cut, const SeparationConfig& cfg) {
  std::vector<char> flags(chain.size(), 0);
  for (int x = 0; x < chain.size(); ++x) flags[x] = cut.X.contains(x) || cut.K.contains(x);
  return dirichlet_from_separation(chain, VertexSubset::from_flags(chain, std::move(flags)), cfg);
}

}  // namespace curvlab
