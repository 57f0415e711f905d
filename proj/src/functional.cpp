#include "curvlab/functional.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <random>
#include <vector>

#include "curvlab/errors.hpp"
#include "curvlab/parallel.hpp"
#include "curvlab/spectral.hpp"

namespace curvlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// psi(v) = v e^v - e^v + 1 >= 0, the entropy density of g = e^v relative to 1.
double psi(double v) {
  if (v == -kInf) return 1.0;
  const double a = std::abs(v);
  if (a < 1e-2) {
    // sum_{j>=2} (j-1)/j! v^j
    return v * v * (1.0 / 2 + v * (1.0 / 3 + v * (1.0 / 8 + v * (1.0 / 30 + v * (1.0 / 144 + v / 840)))));
  }
  if (v < -1.0) return 1.0 - std::exp(v) * (1.0 - v);
  if (v > 1.0) return std::exp(v) * (v - 1.0) + 1.0;
  return std::expm1(v) * (v - 1.0) + v;
}

// v = u - log <e^u>_m, accurate to relative precision when u is nearly constant.
Eigen::VectorXd normalized_log(const Eigen::VectorXd& m, const Eigen::VectorXd& u) {
  const Eigen::VectorXd delta = u.array() - m.dot(u);
  const double top = delta.maxCoeff();
  if (top > 30.0) {
    const double s = (m.array() * (delta.array() - top).exp()).sum();
    return delta.array() - top - std::log(s);
  }
  double s = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) s += m[i] * std::expm1(delta[i]);
  return delta.array() - std::log1p(s);
}

enum class Kind { logsob, mod };

// Ratio as a function of u, where f = e^{u/2} (logsob) or f = e^u (mod). The
// ratio is invariant under u -> u + c.
class Objective {
 public:
  Objective(const MarkovChain& chain, Kind kind) : chain_(chain), kind_(kind) {}

  double eval(const Eigen::VectorXd& u, Eigen::VectorXd* grad) const {
    const Eigen::VectorXd& m = chain_.measure();
    const Eigen::VectorXd v = normalized_log(m, u);
    if (!v.allFinite()) return kInf;
    const Eigen::VectorXd ev = v.array().exp();
    double D = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) D += m[i] * psi(v[i]);
    double N = 0.0;
    Eigen::VectorXd gN;
    if (grad) gN = Eigen::VectorXd::Zero(v.size());
    for (const auto& e : chain_.edges()) {
      const int x = e.x, y = e.y;
      const double w = m[x] * chain_.rate(x, y);
      const double d = v[y] - v[x];
      if (kind_ == Kind::mod) {
        N += w * ev[x] * std::expm1(d) * d;
        if (grad) {
          gN[x] += w * ev[x] * (-d - std::expm1(d));
          gN[y] += w * ev[y] * (d - std::expm1(-d));
        }
      } else {
        const double h = std::expm1(0.5 * d);
        N += w * ev[x] * h * h;
        if (grad) {
          gN[x] -= w * ev[x] * h;
          gN[y] -= w * ev[y] * std::expm1(-0.5 * d);
        }
      }
    }
    if (!(D > 0.0) || !std::isfinite(N)) return kInf;
    const double R = N / D;
    if (grad) {
      const Eigen::VectorXd gD = (m.array() * ev.array() * v.array()).matrix();
      *grad = (gN - R * gD) / D;
      if (!grad->allFinite()) return kInf;
    }
    return R;
  }

 private:
  const MarkovChain& chain_;
  Kind kind_;
};

struct Descent {
  Eigen::VectorXd u;
  double value = kInf;
  double stationarity = kInf;
  bool converged = false;
};

double spread(const Eigen::VectorXd& u) { return u.maxCoeff() - u.minCoeff(); }

// Gradient norm scaled by the distance from the constant direction, where the
// ratio behaves like a quotient of quadratic forms.
double stationarity(const Eigen::VectorXd& g, const Eigen::VectorXd& u) {
  return g.cwiseAbs().maxCoeff() * std::min(1.0, spread(u));
}

// L-BFGS with Armijo backtracking.
Descent minimize(const Objective& obj, Eigen::VectorXd u, int max_iters, double tol) {
  constexpr int kMemory = 8;
  Descent out;
  u.array() -= u.mean();
  Eigen::VectorXd g;
  double R = obj.eval(u, &g);
  if (!std::isfinite(R)) return out;
  std::deque<Eigen::VectorXd> S, Y;
  int flat = 0;
  for (int it = 0; it < max_iters; ++it) {
    if (stationarity(g, u) <= tol * std::max(1.0, std::abs(R))) {
      out.converged = true;
      break;
    }
    Eigen::VectorXd q = -g;
    std::vector<double> alpha(S.size());
    for (int i = static_cast<int>(S.size()) - 1; i >= 0; --i) {
      alpha[i] = S[i].dot(q) / Y[i].dot(S[i]);
      q -= alpha[i] * Y[i];
    }
    if (!S.empty()) q *= S.back().dot(Y.back()) / Y.back().squaredNorm();
    for (std::size_t i = 0; i < S.size(); ++i) {
      const double beta = Y[i].dot(q) / Y[i].dot(S[i]);
      q += S[i] * (alpha[i] - beta);
    }
    Eigen::VectorXd dir = q;
    double slope = g.dot(dir);
    if (!(slope < 0.0)) {
      S.clear();
      Y.clear();
      dir = -g;
      slope = -g.squaredNorm();
    }
    double step = 1.0;
    if (S.empty()) step = std::min(1.0, 0.1 * std::max(spread(u), 1e-3) / dir.cwiseAbs().maxCoeff());
    const double cap = 5.0 / dir.cwiseAbs().maxCoeff();
    step = std::min(step, cap);

    Eigen::VectorXd u_new, g_new;
    double R_new = kInf;
    bool ok = false;
    for (int k = 0; k < 60; ++k) {
      u_new = u + step * dir;
      R_new = obj.eval(u_new, &g_new);
      if (std::isfinite(R_new) && R_new <= R + 1e-4 * step * slope) {
        ok = true;
        break;
      }
      step *= 0.5;
    }
    if (!ok) {
      if (S.empty()) break;
      S.clear();
      Y.clear();
      continue;
    }
    const Eigen::VectorXd s = u_new - u;
    const Eigen::VectorXd y = g_new - g;
    if (s.dot(y) > 1e-300) {
      S.push_back(s);
      Y.push_back(y);
      if (static_cast<int>(S.size()) > kMemory) {
        S.pop_front();
        Y.pop_front();
      }
    }
    flat = (R - R_new <= 1e-15 * std::abs(R)) ? flat + 1 : 0;
    u = u_new;
    u.array() -= u.mean();
    g = g_new;
    R = R_new;
    if (flat >= 10) break;
  }
  out.u = u;
  out.value = R;
  out.stationarity = stationarity(g, u);
  out.converged = out.converged || out.stationarity <= tol * std::max(1.0, std::abs(R));
  return out;
}

std::vector<Eigen::VectorXd> starting_points(const SpectralSummary& spec, const OptimizerConfig& cfg, int n) {
  std::vector<Eigen::VectorXd> starts;
  const int budget = std::max(cfg.restarts, 1);
  const double amps[] = {0.05, 0.5, 2.0};
  for (int k = 1; k < n && static_cast<int>(starts.size()) < budget / 2; ++k) {
    for (double a : amps) {
      for (double sign : {1.0, -1.0}) {
        if (static_cast<int>(starts.size()) < budget / 2) starts.push_back(sign * a * spec.eigenfunctions.col(k));
      }
    }
  }
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double scales[] = {0.3, 1.0, 3.0};
  int r = 0;
  while (static_cast<int>(starts.size()) < budget) {
    Eigen::VectorXd u(n);
    for (int i = 0; i < n; ++i) u[i] = scales[r % 3] * normal(rng);
    // a perturbed eigenfunction every other random start
    if (r % 2 == 1 && n > 1) u += 2.0 * spec.eigenfunctions.col(1 + (r / 2) % (n - 1));
    starts.push_back(u);
    ++r;
  }
  return starts;
}

VertexFunction to_witness(const MarkovChain& chain, Kind kind, const Eigen::VectorXd& u) {
  const Eigen::VectorXd v = normalized_log(chain.measure(), u);
  if (kind == Kind::mod) return v.array().exp();  // ||.||_{1,m} = 1
  return (0.5 * v.array()).exp();                 // ||.||_{2,m} = 1
}

FunctionalResult run_multistart(const MarkovChain& chain, Kind kind, const OptimizerConfig& cfg) {
  const int n = chain.size();
  if (n < 2) throw PreconditionError("functional constants need at least two vertices");
  const SpectralSummary spec = spectrum(chain);
  const Objective obj(chain, kind);
  const std::vector<Eigen::VectorXd> starts = starting_points(spec, cfg, n);

  std::vector<Descent> runs(starts.size());
  parallel_ranges(starts.size(), [&](std::size_t lo, std::size_t hi, int) {
    for (std::size_t i = lo; i < hi; ++i) runs[i] = minimize(obj, starts[i], cfg.max_iters, cfg.opt_tol);
  });

  FunctionalResult res;
  res.restarts_used = static_cast<int>(starts.size());
  res.limit_value = kind == Kind::mod ? 2.0 * spec.lambda : 0.5 * spec.lambda;
  res.witness_value = kInf;
  for (const auto& d : runs) {
    if (d.value < res.witness_value) {
      res.witness_value = d.value;
      res.witness = to_witness(chain, kind, d.u);
      res.converged = d.converged;
    }
  }
  if (!std::isfinite(res.witness_value)) {
    res.witness = to_witness(chain, kind, 1e-3 * spec.eigenfunctions.col(1));
    res.witness_value = obj.eval(kind == Kind::mod ? Eigen::VectorXd(res.witness.array().log())
                                                   : Eigen::VectorXd(2.0 * res.witness.array().log()),
                                 nullptr);
  }
  res.value = std::min(res.witness_value, res.limit_value);
  return res;
}

// Positive-orthant points of the unit sphere in l2(m) for n = 2, 3.
template <class Visit>
void sphere_grid(const Eigen::VectorXd& m, int circle_points, int sphere_points, bool interior, Visit&& visit) {
  const int n = static_cast<int>(m.size());
  const double half_pi = 0.5 * std::numbers::pi;
  Eigen::VectorXd f(n);
  const Eigen::VectorXd inv = m.array().rsqrt();
  auto angle = [&](int i, int count) {
    return interior ? half_pi * (i + 0.5) / count : half_pi * i / (count - 1);
  };
  if (n == 2) {
    for (int i = 0; i < circle_points; ++i) {
      const double t = angle(i, circle_points);
      f << std::cos(t) * inv[0], std::sin(t) * inv[1];
      visit(f);
    }
  } else {
    for (int i = 0; i < sphere_points; ++i) {
      const double th = angle(i, sphere_points);
      for (int j = 0; j < sphere_points; ++j) {
        const double ph = angle(j, sphere_points);
        f << std::sin(th) * std::cos(ph) * inv[0], std::sin(th) * std::sin(ph) * inv[1], std::cos(th) * inv[2];
        visit(f);
      }
    }
  }
}

double logsob_ratio_direct(const MarkovChain& chain, const VertexFunction& f) {
  const Eigen::VectorXd& m = chain.measure();
  const double norm2 = (m.array() * f.array().square()).sum();
  if (!(norm2 > 0.0)) throw PreconditionError("log-Sobolev ratio of the zero function");
  double D = 0.0;
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    const double g = f[i] * f[i] / norm2;
    D += m[i] * (g > 0.0 ? psi(std::log(g)) : 1.0);
  }
  if (!(D > 0.0)) return kInf;
  return energy(chain, f) / norm2 / D;
}

FunctionalResult run_grid(const MarkovChain& chain, Kind kind, const OptimizerConfig& cfg) {
  const int n = chain.size();
  if (n != 2 && n != 3) throw PreconditionError("grid certification is available for n = 2 or 3 only");
  const Objective obj(chain, kind);
  const SpectralSummary spec = spectrum(chain);
  double best = kInf;
  VertexFunction arg;
  sphere_grid(chain.measure(), cfg.grid_points_circle, cfg.grid_points_sphere, kind == Kind::mod,
              [&](const VertexFunction& f) {
                double r;
                if ((f.array() > 0.0).all()) {
                  const Eigen::VectorXd lf = f.array().log();
                  r = obj.eval(kind == Kind::mod ? lf : Eigen::VectorXd(2.0 * lf), nullptr);
                } else {
                  r = logsob_ratio_direct(chain, f);
                }
                if (r < best) {
                  best = r;
                  arg = f;
                }
              });

  FunctionalResult res;
  res.grid_certified = true;
  res.restarts_used = 1;
  res.limit_value = kind == Kind::mod ? 2.0 * spec.lambda : 0.5 * spec.lambda;
  res.witness_value = best;
  const double norm = kind == Kind::mod ? chain.measure().dot(arg)
                                        : std::sqrt((chain.measure().array() * arg.array().square()).sum());
  res.witness = arg / norm;
  if ((arg.array() > 0.0).all()) {
    const Eigen::VectorXd lf = arg.array().log();
    const Descent d = minimize(obj, kind == Kind::mod ? lf : Eigen::VectorXd(2.0 * lf), cfg.max_iters, cfg.opt_tol);
    if (d.value < res.witness_value) {
      res.witness_value = d.value;
      res.witness = to_witness(chain, kind, d.u);
    }
    res.converged = d.converged;
  }
  res.value = std::min(res.witness_value, res.limit_value);
  return res;
}

FunctionalResult combine(FunctionalResult a, const FunctionalResult& b) {
  if (b.witness_value < a.witness_value) {
    a.witness_value = b.witness_value;
    a.witness = b.witness;
    a.converged = b.converged;
  }
  a.value = std::min(a.value, b.value);
  a.grid_certified = a.grid_certified || b.grid_certified;
  a.restarts_used += b.restarts_used;
  return a;
}

void require_positive(const VertexFunction& f, const char* what) {
  if (!(f.array() > 0.0).all() || !f.allFinite()) throw PreconditionError(std::string(what) + " needs a positive function");
}

}  // namespace

double entropy(const MarkovChain& chain, const VertexFunction& f) {
  require_positive(f, "entropy");
  const Eigen::VectorXd v = normalized_log(chain.measure(), f.array().log());
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += chain.mass(static_cast<int>(i)) * psi(v[i]);
  return s;
}

double logsob_ratio(const MarkovChain& chain, const VertexFunction& f) {
  if ((f.array() > 0.0).all() || (f.array() < 0.0).all()) {
    const Eigen::VectorXd u = 2.0 * f.array().abs().log();
    return Objective(chain, Kind::logsob).eval(u, nullptr);
  }
  return logsob_ratio_direct(chain, f);
}

double mod_ratio(const MarkovChain& chain, const VertexFunction& f) {
  require_positive(f, "modified log-Sobolev ratio");
  return Objective(chain, Kind::mod).eval(f.array().log(), nullptr);
}

FunctionalResult alpha_logsob(const MarkovChain& chain, const OptimizerConfig& cfg) {
  FunctionalResult res = run_multistart(chain, Kind::logsob, cfg);
  if (cfg.grid && chain.size() <= 3) res = combine(res, run_grid(chain, Kind::logsob, cfg));
  return res;
}

FunctionalResult alpha_mod(const MarkovChain& chain, const OptimizerConfig& cfg) {
  FunctionalResult res = run_multistart(chain, Kind::mod, cfg);
  if (cfg.grid && chain.size() <= 3) res = combine(res, run_grid(chain, Kind::mod, cfg));
  const double lambda = res.limit_value / 2.0;
  if (res.witness_value < std::min(lambda / 2.0, 2.0 * lambda)) {
    res.el_residual = el_residual(chain, res.witness, res.witness_value);
  }
  return res;
}

FunctionalResult alpha_logsob_grid(const MarkovChain& chain, const OptimizerConfig& cfg) {
  return run_grid(chain, Kind::logsob, cfg);
}

FunctionalResult alpha_mod_grid(const MarkovChain& chain, const OptimizerConfig& cfg) {
  return run_grid(chain, Kind::mod, cfg);
}

double el_residual(const MarkovChain& chain, const VertexFunction& f, double alpha) {
  require_positive(f, "Euler-Lagrange residual");
  const VertexFunction g = f / chain.measure().dot(f);
  const VertexFunction lg = g.array().log();
  const VertexFunction r = laplacian(chain, g).cwiseQuotient(g) + laplacian(chain, lg) + alpha * lg;
  return r.cwiseAbs().maxCoeff();
}

MixingTime mixing_time(const MarkovChain& chain, double tol) {
  const int n = chain.size();
  const Eigen::VectorXd& m = chain.measure();
  const double target = std::exp(-1.0);
  int worst = 0;
  auto distance = [&](double t, int* arg) {
    const Eigen::MatrixXd Pt = heat_operator(chain, t);
    double best = -1.0;
    for (int x = 0; x < n; ++x) {
      const Eigen::VectorXd h = Pt.col(x).array() / m[x] - 1.0;
      const double d = std::sqrt((m.array() * h.array().square()).sum());
      if (d > best) {
        best = d;
        if (arg) *arg = x;
      }
    }
    return best;
  };
  if (distance(0.0, &worst) <= target) return {0.0, worst};
  double lo = 0.0, hi = 1.0;
  while (distance(hi, nullptr) > target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) throw NumericalError("mixing time bracket diverged");
  }
  while (hi - lo > tol * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    (distance(mid, nullptr) > target ? lo : hi) = mid;
  }
  distance(hi, &worst);
  return {hi, worst};
}

MarkovChain counterexample_chain(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw PreconditionError("counterexample needs 0 < eps < 1");
  GraphDescription g;
  g.mode = DescriptionMode::weights;
  g.labels = {"1", "2", "3"};
  EdgeDescription a;
  a.u = 0;
  a.v = 1;
  a.w = 10.0;
  EdgeDescription b;
  b.u = 1;
  b.v = 2;
  b.w = 1.0;
  g.edges = {a, b};
  g.measure = std::vector<double>{1.0 / eps, 1.0, 1.0 / 20.0};
  return build_chain(g);
}

double counterexample_ratio(double eps) {
  const MarkovChain chain = counterexample_chain(eps);
  VertexFunction f(3);
  f << eps, 1.0, -std::log(eps);
  return mod_ratio(chain, f);
}

}  // namespace curvlab
