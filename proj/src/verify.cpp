#include "curvlab/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include "curvlab/capacity.hpp"
#include "curvlab/curvature.hpp"
#include "curvlab/errors.hpp"
#include "curvlab/generators.hpp"
#include "curvlab/isoperimetry.hpp"
#include "curvlab/parallel.hpp"
#include "curvlab/spectral.hpp"

namespace curvlab {

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass:
      return "pass";
    case CheckStatus::fail:
      return "fail";
    case CheckStatus::skip:
      return "skip";
  }
  return "?";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// lhs <= rhs up to tol, relative once the quantities exceed 1.
void settle(TheoremCheckResult& r, double lhs, double rhs, double tol) {
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = rhs - lhs;
  if (std::isnan(r.margin) && lhs == kInf && rhs == kInf) r.margin = 0.0;
  double scale = 1.0;
  if (std::isfinite(lhs)) scale = std::max(scale, std::abs(lhs));
  if (std::isfinite(rhs)) scale = std::max(scale, std::abs(rhs));
  r.status = r.margin >= -tol * scale ? CheckStatus::pass : CheckStatus::fail;
}

// Keeps the worst (relative) margin over many sub-cases.
struct Worst {
  double tol;
  double norm = kInf;
  double lhs = std::numeric_limits<double>::quiet_NaN();
  double rhs = std::numeric_limits<double>::quiet_NaN();
  std::string where;
  long count = 0;
  long violations = 0;

  explicit Worst(double t) : tol(t) {}

  void add(double l, double r, const std::function<std::string()>& describe) {
    ++count;
    double scale = 1.0;
    if (std::isfinite(l)) scale = std::max(scale, std::abs(l));
    if (std::isfinite(r)) scale = std::max(scale, std::abs(r));
    double margin = r - l;
    if (std::isnan(margin)) margin = (l == kInf && r == kInf) ? 0.0 : -kInf;
    const double n = margin / scale;
    if (n < -tol) ++violations;
    if (n < norm) {
      norm = n;
      lhs = l;
      rhs = r;
      where = describe();
    }
  }

  void finish(TheoremCheckResult& res, const std::string& unit) const {
    if (count == 0) {
      res.status = CheckStatus::skip;
      res.detail = "no " + unit + " to check";
      return;
    }
    res.lhs = lhs;
    res.rhs = rhs;
    res.margin = rhs - lhs;
    res.status = violations == 0 ? CheckStatus::pass : CheckStatus::fail;
    res.detail = std::to_string(count) + " " + unit + ", " + std::to_string(violations) + " violations; worst at " + where;
  }
};

std::string subset_name(const MarkovChain& chain, const VertexSubset& W) {
  std::string s = "{";
  bool first = true;
  for (int x : W.members()) {
    if (!first) s += ",";
    s += chain.labels()[x];
    first = false;
  }
  return s + "}";
}

std::string edge_name(const MarkovChain& chain, const Edge& e) {
  return "(" + chain.labels()[e.x] + "," + chain.labels()[e.y] + ")";
}

class Context {
 public:
  Context(const Instance& inst, const VerifyConfig& cfg) : id(inst.id), chain(build_chain(inst.spec.description)), cfg(cfg) {}

  const std::string id;
  const MarkovChain chain;
  const VerifyConfig& cfg;

  int n() const { return chain.size(); }

  double kmin() {
    if (!kmin_) kmin_ = min_kappa(chain, &kedge_);
    return *kmin_;
  }

  // Returns the hypothesis text; ok tells whether min kappa >= 0.
  std::string curvature_hypothesis(bool& ok) {
    const double k = kmin();
    ok = k >= -1e-10;
    if (ok) return "min kappa = " + num(k) + " >= 0: satisfied";
    return "min kappa = " + num(k) + " < 0 on " + edge_name(chain, kedge_) + ": failed";
  }

  const ChainConstants& constants() {
    if (!cc_) cc_ = chain_constants(chain);
    return *cc_;
  }

  const ObsDiameterTable& obs() {
    if (!obs_) obs_.emplace(chain, ObsMode::exact, cfg.enum_cap);
    return *obs_;
  }

  const ConcentrationProfile& profile() {
    if (!profile_) profile_ = concentration_profile(chain, cfg.enum_cap);
    return *profile_;
  }

  const CheegerResult& cheeger_value(CheegerWeight w) {
    auto& slot = cheeger_[static_cast<int>(w)];
    if (!slot) slot = cheeger(chain, w, cfg.enum_cap);
    return *slot;
  }

  const SpectralSummary& spectral() {
    if (!spectrum_) spectrum_ = spectrum(chain);
    return *spectrum_;
  }

  const AlphaSpectral& aspec() {
    if (!aspec_) aspec_ = alpha_spectral(chain, cfg.enum_cap);
    return *aspec_;
  }

  const CapacityConstants& caps() {
    if (!caps_) caps_ = capacity_constants(chain, cfg.capacity_cap);
    return *caps_;
  }

  const FunctionalResult& alpha() {
    if (!alpha_) alpha_ = alpha_logsob(chain, cfg.opt);
    return *alpha_;
  }

  const FunctionalResult& amod() {
    if (!amod_) amod_ = alpha_mod(chain, cfg.opt);
    return *amod_;
  }

  // Lazy kernel used for sectional curvature: the chain itself when lazy,
  // otherwise I + Delta / (2 Deg_max), which only rescales time.
  const MarkovChain& sectional_kernel(bool& rescaled) {
    rescaled = !chain.is_lazy(1e-10);
    if (!rescaled) return chain;
    if (!lazy_) {
      const double c = 2.0 * constants().deg_max;
      GraphDescription d;
      d.mode = DescriptionMode::kernel;
      d.labels = chain.labels();
      for (int x = 0; x < n(); ++x) {
        EdgeDescription e;
        e.u = e.v = x;
        e.p_uv = e.p_vu = 1.0 - chain.degree(x) / c;
        if (e.p_uv > 0.0) d.edges.push_back(e);
      }
      for (const auto& edge : chain.edges()) {
        EdgeDescription e;
        e.u = edge.x;
        e.v = edge.y;
        e.p_uv = chain.rate(edge.x, edge.y) / c;
        e.p_vu = chain.rate(edge.y, edge.x) / c;
        if (edge.length != 1.0) e.length = edge.length;
        d.edges.push_back(e);
      }
      d.measure = std::vector<double>(chain.measure().data(), chain.measure().data() + n());
      lazy_ = build_chain(d);
    }
    return *lazy_;
  }

  // Empty string when every edge is sectional-nonneg; otherwise the reason.
  std::string sectional_failure(bool& rescaled) {
    const MarkovChain& L = sectional_kernel(rescaled);
    if (!sectional_checked_) {
      sectional_checked_ = true;
      for (const auto& e : L.edges()) {
        const SectionalResult s = sectional_nonneg(L, e.x, e.y);
        if (!s.nonneg) {
          sectional_reason_ = "sectional curvature negative on " + edge_name(L, e) + ": Hall violator " +
                              subset_name(L, VertexSubset(L, s.hall_violator)) + " mass " + num(s.violator_mass) +
                              " > neighbourhood mass " + num(s.neighbourhood_mass);
          break;
        }
      }
    }
    return sectional_reason_;
  }

  std::mt19937_64 rng(const std::string& salt) const { return std::mt19937_64(cfg.seed ^ fnv1a(id + "/" + salt)); }

 private:
  std::optional<double> kmin_;
  Edge kedge_{};
  std::optional<ChainConstants> cc_;
  std::optional<ObsDiameterTable> obs_;
  std::optional<ConcentrationProfile> profile_;
  std::optional<CheegerResult> cheeger_[3];
  std::optional<SpectralSummary> spectrum_;
  std::optional<AlphaSpectral> aspec_;
  std::optional<CapacityConstants> caps_;
  std::optional<FunctionalResult> alpha_, amod_;
  std::optional<MarkovChain> lazy_;
  bool sectional_checked_ = false;
  std::string sectional_reason_;
};

using Results = std::vector<TheoremCheckResult>;

TheoremCheckResult base(const Context& c, const std::string& theorem, const std::string& hyp) {
  TheoremCheckResult r;
  r.theorem = theorem;
  r.instance = c.id;
  r.hypothesis = hyp;
  return r;
}

Results skip(const Context& c, const std::vector<std::string>& names, const std::string& hyp) {
  Results out;
  for (const auto& name : names) {
    TheoremCheckResult r = base(c, name, hyp);
    r.status = CheckStatus::skip;
    out.push_back(std::move(r));
  }
  return out;
}

std::string cap_reason(int n, int cap) {
  return "n = " + std::to_string(n) + " exceeds enumeration cap " + std::to_string(cap) + ": skipped";
}

bool combinatorial(const Context& c, std::string& hyp) {
  if (c.chain.has_combinatorial_distance()) {
    hyp = "combinatorial distance: satisfied";
    return true;
  }
  hyp = "distance is not combinatorial: failed";
  return false;
}

// ---------------------------------------------------------------------------

Results check_T1(Context& c) {
  std::string hyp;
  if (!combinatorial(c, hyp)) return skip(c, {"T1"}, hyp);
  bool rescaled = false;
  const std::string why = c.sectional_failure(rescaled);
  const std::string kernel = rescaled ? " (kernel rescaled to I + Delta/(2 Deg_max))" : "";
  if (!why.empty()) return skip(c, {"T1"}, why + kernel + ": failed");
  TheoremCheckResult r = base(c, "T1", "sectional curvature nonnegative on every edge" + kernel + ": satisfied");
  const FunctionalResult& am = c.amod();
  settle(r, c.kmin(), am.value, c.cfg.check_tol);
  r.detail = "alpha_mod witness ratio " + num(am.witness_value) + ", limit 2 lambda = " + num(am.limit_value) +
             ", restarts " + std::to_string(am.restarts_used);
  return {r};
}

Results check_T2(Context& c) {
  bool ok = false;
  const std::string hyp = c.curvature_hypothesis(ok);
  if (!ok) return skip(c, {"T2"}, hyp);
  if (c.n() > c.cfg.enum_cap) return skip(c, {"T2"}, cap_reason(c.n(), c.cfg.enum_cap));
  TheoremCheckResult r = base(c, "T2", hyp);
  const ChainConstants& cc = c.constants();
  const AlphaSpectral& a = c.aspec();
  settle(r, cc.p0 / (16.0 * cc.diam * cc.diam), a.value, c.cfg.check_tol);
  r.detail = "argmin X = " + subset_name(c.chain, a.argmin) + ", lambda_X = " + num(a.lambda_x) +
             ", lambda_Xc = " + num(a.lambda_complement);
  return {r};
}

Results check_T3(Context& c) {
  const std::vector<std::string> names = {"T3[eps=1/8]", "T3[eps=m/4]", "T3[cor]"};
  bool ok = false;
  const std::string hyp = c.curvature_hypothesis(ok);
  if (!ok) return skip(c, names, hyp);
  if (c.n() > c.cfg.enum_cap) return skip(c, names, cap_reason(c.n(), c.cfg.enum_cap));
  const double P0 = c.constants().p0;
  const ObsDiameterTable& obs = c.obs();
  const double obs8 = obs.query(0.125).value;
  const std::uint64_t full = (std::uint64_t{1} << c.n()) - 1;
  Worst w8(c.cfg.check_tol), wm(c.cfg.check_tol), wc(c.cfg.check_tol);
  for (std::uint64_t mask = 1; mask < full; ++mask) {
    const VertexSubset W = VertexSubset::from_mask(c.chain, mask);
    const double m = W.mass();
    if (m > 0.5 + 1e-12) continue;
    const double bd = boundary_measure(c.chain, W);
    auto name = [&] { return subset_name(c.chain, W); };
    auto bound = [&](double eps, double od) { return P0 * std::min(m, eps) * std::log(1.0 / eps) / (6.0 * od); };
    const double eps_m = m / 4.0;
    const double obsm = obs.query(eps_m).value;
    w8.add(bound(0.125, obs8), bd, name);
    wm.add(bound(eps_m, obsm), bd, name);
    wc.add(P0 * std::log(8.0) / (24.0 * obs8), bd / m, name);
    wc.add(P0 * std::log(1.0 / eps_m) / (24.0 * obsm), bd / m, name);
  }
  Results out;
  for (auto [name, w] : {std::pair{names[0], &w8}, std::pair{names[1], &wm}, std::pair{names[2], &wc}}) {
    TheoremCheckResult r = base(c, name, hyp);
    w->finish(r, "subsets");
    out.push_back(std::move(r));
  }
  return out;
}

Results check_T4(Context& c) {
  bool ok = false;
  const std::string hyp = c.curvature_hypothesis(ok);
  if (!ok) return skip(c, {"T4"}, hyp);
  if (c.n() > c.cfg.enum_cap) return skip(c, {"T4"}, cap_reason(c.n(), c.cfg.enum_cap));
  TheoremCheckResult r = base(c, "T4", hyp);
  const ObsDiameter od = c.obs().query(0.125);
  const CheegerResult& h = c.cheeger_value(CheegerWeight::plain);
  settle(r, c.constants().p0 / (12.0 * od.value), h.value, c.cfg.check_tol);
  r.detail = "diam_obs(1/8) = " + num(od.value) + ", h witness " + subset_name(c.chain, h.witness);
  return {r};
}

Results check_T5(Context& c) {
  std::string hyp;
  if (!combinatorial(c, hyp)) return skip(c, {"T5"}, hyp);
  if (c.n() > c.cfg.enum_cap) return skip(c, {"T5"}, cap_reason(c.n(), c.cfg.enum_cap));
  TheoremCheckResult r = base(c, "T5", hyp + " (no curvature assumption)");
  const ObsDiameter od = c.obs().query(0.125);
  const CheegerResult& h = c.cheeger_value(CheegerWeight::plain);
  settle(r, h.value, od.value > 0.0 ? 57.0 * c.constants().deg_max / od.value : kInf, c.cfg.check_tol);
  r.detail = "diam_obs(1/8) = " + num(od.value) + ", Deg_max = " + num(c.constants().deg_max);
  return {r};
}

Results check_T6(Context& c) {
  bool ok = false;
  const std::string hyp = c.curvature_hypothesis(ok);
  if (!ok) return skip(c, {"T6"}, hyp);
  if (c.n() > c.cfg.enum_cap) return skip(c, {"T6"}, cap_reason(c.n(), c.cfg.enum_cap));
  const double P0 = c.constants().p0;
  const std::uint64_t full = (std::uint64_t{1} << c.n()) - 1;
  Worst w(c.cfg.check_tol);
  for (std::uint64_t mask = 1; mask < full; ++mask) {
    const VertexSubset W = VertexSubset::from_mask(c.chain, mask);
    const double m = W.mass();
    const double dcl = subset_diameter(c.chain, closure(c.chain, W));
    w.add(P0 * m * (1.0 - m) / dcl, boundary_measure(c.chain, W), [&] { return subset_name(c.chain, W); });
  }
  TheoremCheckResult r = base(c, "T6", hyp);
  w.finish(r, "subsets");
  return {r};
}

Results check_T7(Context& c) {
  bool ok = false;
  std::string hyp = c.curvature_hypothesis(ok);
  if (!ok) return skip(c, {"T7"}, hyp);
  std::string comb;
  if (!combinatorial(c, comb)) return skip(c, {"T7"}, comb);
  if (c.n() > c.cfg.enum_cap) return skip(c, {"T7"}, cap_reason(c.n(), c.cfg.enum_cap));
  const double rho = gaussian_rho(c.profile());
  if (!std::isfinite(rho)) {
    return skip(c, {"T7"}, "rho = +inf (far set d(x,A) > r empty from r = 1): vacuous");
  }
  TheoremCheckResult r = base(c, "T7", hyp + "; " + comb);
  const CheegerResult& h = c.cheeger_value(CheegerWeight::sqrtlog);
  settle(r, c.constants().p0 / 48.0 * std::sqrt(rho), h.value, c.cfg.check_tol);
  r.detail = "rho = " + num(rho) + " from far-set masses m{d(x,A) > r}; witness " + subset_name(c.chain, h.witness);
  return {r};
}

Results check_T8(Context& c) {
  std::string hyp;
  if (!combinatorial(c, hyp)) return skip(c, {"T8"}, hyp);
  if (c.n() > c.cfg.enum_cap) return skip(c, {"T8"}, cap_reason(c.n(), c.cfg.enum_cap));
  const ConcentrationProfile& prof = c.profile();
  const ObsDiameterTable& obs = c.obs();
  Worst w(c.cfg.check_tol);
  const int rmax = std::max(1, static_cast<int>(prof.conc.size()));
  for (int r = 1; r <= rmax; ++r) {
    std::vector<double> grid;
    for (int k = 1; k <= 16; ++k) grid.push_back(k / 16.0);
    for (double v : prof.conc) {
      if (v + 1e-9 <= 1.0) grid.push_back(v + 1e-9);
    }
    for (double eps : grid) {
      if (!(prof.at(r) < eps)) continue;
      w.add(obs.query(eps).value, 2.0 * r, [&] { return "r = " + std::to_string(r) + ", eps = " + num(eps); });
    }
  }
  TheoremCheckResult r = base(c, "T8", hyp + "; far-set convention A_r = {d(x,A) > r}");
  w.finish(r, "(r, eps) pairs");
  return {r};
}

Results check_T9(Context& c) {
  const std::vector<std::string> names = {"T9[4alpha<=alpha_mod]", "T9[alpha_mod<=2lambda]"};
  if (c.n() > 3) return skip(c, names, "n = " + std::to_string(c.n()) + " > 3: no grid certificate for alpha");
  const FunctionalResult& a = c.alpha();
  const FunctionalResult& am = c.amod();
  if (!a.grid_certified || !am.grid_certified) return skip(c, names, "grid certification disabled");
  const std::string hyp = "n = " + std::to_string(c.n()) + " <= 3: grid-certified";
  TheoremCheckResult lo = base(c, names[0], hyp);
  settle(lo, 4.0 * a.value, am.value, c.cfg.check_tol);
  lo.detail = "alpha = " + num(a.value) + ", alpha_mod = " + num(am.value);
  TheoremCheckResult hi = base(c, names[1], hyp);
  settle(hi, am.value, 2.0 * c.spectral().lambda, c.cfg.check_tol);
  hi.detail = "lambda = " + num(c.spectral().lambda);
  return {lo, hi};
}

Results check_T10(Context& c) {
  const std::vector<std::string> names = {"T10[lower]", "T10[upper]"};
  if (c.n() > c.cfg.capacity_cap) return skip(c, names, cap_reason(c.n(), c.cfg.capacity_cap));
  const CapacityConstants& k = c.caps();
  const std::string hyp = "none";
  TheoremCheckResult lo = base(c, names[0], hyp);
  settle(lo, 0.5 * k.alpha_cap.value, k.alpha_cap_theta.value, c.cfg.check_tol);
  TheoremCheckResult hi = base(c, names[1], hyp);
  settle(hi, k.alpha_cap_theta.value, 3.0 * k.alpha_cap.value, c.cfg.check_tol);
  const std::string detail = "alpha_cap = " + num(k.alpha_cap.value) + ", alpha_cap_theta = " + num(k.alpha_cap_theta.value);
  lo.detail = hi.detail = detail;
  return {lo, hi};
}

Results check_T11(Context& c) {
  const std::vector<std::string> names = {"T11[lower]", "T11[upper]"};
  const int cap = std::min(c.cfg.capacity_cap, c.cfg.enum_cap);
  if (c.n() > cap) return skip(c, names, cap_reason(c.n(), cap));
  const double th = c.caps().alpha_cap_theta.value;
  const double as = c.aspec().value;
  TheoremCheckResult lo = base(c, names[0], "none");
  settle(lo, 0.25 * th, as, c.cfg.check_tol);
  TheoremCheckResult hi = base(c, names[1], "none");
  settle(hi, as, 2.0 * th, c.cfg.check_tol);
  lo.detail = hi.detail = "alpha_spectral = " + num(as) + ", alpha_cap_theta = " + num(th);
  return {lo, hi};
}

Results check_T12(Context& c) {
  const std::vector<std::string> names = {"T12[lower]", "T12[upper]"};
  if (c.n() > 3) return skip(c, names, "n = " + std::to_string(c.n()) + " > 3: no grid certificate for alpha");
  const FunctionalResult& a = c.alpha();
  if (!a.grid_certified) return skip(c, names, "grid certification disabled");
  const MixingTime mt = mixing_time(c.chain);
  const double pistar = c.chain.measure().minCoeff();
  const std::string hyp = "n = " + std::to_string(c.n()) + " <= 3: grid-certified";
  TheoremCheckResult lo = base(c, names[0], hyp);
  settle(lo, 1.0 / (2.0 * a.value), mt.tau, c.cfg.check_tol);
  TheoremCheckResult hi = base(c, names[1], hyp);
  settle(hi, mt.tau, (4.0 + std::log(std::log(1.0 / pistar))) / (4.0 * a.value), c.cfg.check_tol);
  lo.detail = hi.detail = "alpha = " + num(a.value) + ", tau = " + num(mt.tau) + " (worst start " +
                          c.chain.labels()[mt.worst_vertex] + "), pi_* = " + num(pistar);
  return {lo, hi};
}

Results check_T13(Context& c) {
  Results out;
  const double ts[] = {0.1, 1.0, 10.0};
  const double K = c.kmin();
  {
    auto rng = c.rng("decay");
    std::normal_distribution<double> N;
    Worst w(c.cfg.commutation_tol);
    for (double t : ts) {
      const Eigen::MatrixXd Pt = heat_operator(c.chain, t);
      for (int i = 0; i < c.cfg.random_functions; ++i) {
        VertexFunction f(c.n());
        for (int x = 0; x < c.n(); ++x) f[x] = N(rng);
        w.add(lipschitz_constant(c.chain, Pt * f), std::exp(-K * t) * lipschitz_constant(c.chain, f),
              [&] { return "t = " + num(t) + ", sample " + std::to_string(i); });
      }
    }
    TheoremCheckResult r = base(c, "T13[decay]", "K = min kappa = " + num(K) + " (no sign assumption)");
    w.finish(r, "(f, t) samples");
    out.push_back(std::move(r));
  }

  const std::vector<std::pair<std::string, CommutationVariant>> variants = {
      {"T13[log]", CommutationVariant::log_inf},
      {"T13[pointwise]", CommutationVariant::pointwise},
      {"T13[sqrt]", CommutationVariant::sqrt}};
  std::string hyp;
  std::string reason;
  if (!combinatorial(c, hyp)) {
    reason = hyp;
  } else if (!c.chain.is_lazy(1e-10)) {
    reason = "kernel is not lazy: failed";
  } else {
    bool rescaled = false;
    const std::string why = c.sectional_failure(rescaled);
    if (!why.empty()) reason = why + ": failed";
  }
  if (!reason.empty()) {
    for (const auto& v : variants) out.push_back(skip(c, {v.first}, reason).front());
    return out;
  }
  for (const auto& [name, variant] : variants) {
    auto rng = c.rng(name);
    std::normal_distribution<double> N;
    Worst w(c.cfg.commutation_tol);
    for (double t : ts) {
      for (int i = 0; i < c.cfg.random_functions; ++i) {
        VertexFunction f(c.n());
        for (int x = 0; x < c.n(); ++x) f[x] = variant == CommutationVariant::pointwise ? N(rng) : std::exp(N(rng));
        const double margin = gradient_commutation_margin(c.chain, f, t, variant);
        w.add(-margin, 0.0, [&] { return "t = " + num(t) + ", sample " + std::to_string(i); });
      }
    }
    TheoremCheckResult r = base(c, name, "lazy, combinatorial, sectional curvature nonnegative: satisfied");
    w.finish(r, "(f, t) samples");
    out.push_back(std::move(r));
  }
  return out;
}

// Vertex order of a path-shaped support graph, or empty.
std::vector<int> path_order(const MarkovChain& chain) {
  const int n = chain.size();
  int start = -1;
  for (int x = 0; x < n; ++x) {
    const auto deg = chain.neighbors(x).size();
    if (deg > 2) return {};
    if (deg == 1 && start < 0) start = x;
  }
  if (start < 0) return {};
  std::vector<int> order{start};
  int prev = -1, cur = start;
  while (static_cast<int>(order.size()) < n) {
    int next = -1;
    for (const auto& nb : chain.neighbors(cur)) {
      if (nb.vertex != prev) next = nb.vertex;
    }
    if (next < 0) return {};
    order.push_back(next);
    prev = cur;
    cur = next;
  }
  return order;
}

Results check_T14(Context& c) {
  const std::vector<int> order = path_order(c.chain);
  if (order.size() < 2) return skip(c, {"T14"}, "support graph is not a path: not a birth-death chain");
  if (!c.chain.is_lazy(1e-10)) return skip(c, {"T14"}, "kernel is not lazy: failed");
  std::string hyp;
  if (!combinatorial(c, hyp)) return skip(c, {"T14"}, hyp);
  const int n = c.n();
  bool monotone = true;
  for (int i = 0; i + 2 < n; ++i) {
    const int a = order[i], b = order[i + 1], d = order[i + 2];
    const double up0 = c.chain.rate(a, b), up1 = c.chain.rate(b, d);
    const double down0 = c.chain.rate(b, a), down1 = c.chain.rate(d, b);
    if (up1 > up0 + 1e-15 || down0 > down1 + 1e-15) monotone = false;
  }
  bool sectional = true;
  std::string failing;
  for (const auto& e : c.chain.edges()) {
    if (!sectional_nonneg(c.chain, e.x, e.y).nonneg) {
      sectional = false;
      failing = edge_name(c.chain, e);
      break;
    }
  }
  TheoremCheckResult r = base(c, "T14", "lazy birth-death chain, combinatorial distance: satisfied");
  r.lhs = monotone ? 1.0 : 0.0;
  r.rhs = sectional ? 1.0 : 0.0;
  r.margin = monotone == sectional ? 0.0 : -1.0;
  r.status = monotone == sectional ? CheckStatus::pass : CheckStatus::fail;
  r.detail = std::string("rates ") + (monotone ? "monotone" : "not monotone") + ", sectional curvature " +
             (sectional ? "nonnegative" : "negative on " + failing);
  return {r};
}

using Check = Results (*)(Context&);

const std::map<std::string, Check>& registry() {
  static const std::map<std::string, Check> r = {
      {"T1", check_T1},   {"T2", check_T2},   {"T3", check_T3},   {"T4", check_T4},   {"T5", check_T5},
      {"T6", check_T6},   {"T7", check_T7},   {"T8", check_T8},   {"T9", check_T9},   {"T10", check_T10},
      {"T11", check_T11}, {"T12", check_T12}, {"T13", check_T13}, {"T14", check_T14}};
  return r;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

const std::vector<std::string>& theorem_ids() {
  static const std::vector<std::string> ids = {"T1", "T2",  "T3",  "T4",  "T5",  "T6",  "T7", "T8",
                                               "T9", "T10", "T11", "T12", "T13", "T14", "CX"};
  return ids;
}

std::vector<std::string> parse_theorem_list(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (item == "all") {
      for (const auto& id : theorem_ids()) out.push_back(id);
      continue;
    }
    if (std::find(theorem_ids().begin(), theorem_ids().end(), item) == theorem_ids().end()) {
      throw PreconditionError("unknown theorem id '" + item + "'");
    }
    out.push_back(item);
  }
  return out;
}

std::vector<TheoremCheckResult> verify(const Instance& instance, const std::vector<std::string>& theorems,
                                       const VerifyConfig& cfg) {
  Results out;
  std::optional<Context> ctx;
  try {
    ctx.emplace(instance, cfg);
  } catch (const std::exception& e) {
    TheoremCheckResult r;
    r.theorem = "build";
    r.instance = instance.id;
    r.hypothesis = "valid chain: failed";
    r.status = CheckStatus::fail;
    r.detail = e.what();
    return {r};
  }
  for (const auto& id : theorems) {
    if (id == "CX") {
      for (auto& r : verify_counterexample_program(cfg)) out.push_back(std::move(r));
      continue;
    }
    const auto it = registry().find(id);
    if (it == registry().end()) throw PreconditionError("unknown theorem id '" + id + "'");
    const auto t0 = std::chrono::steady_clock::now();
    Results rs;
    try {
      rs = it->second(*ctx);
    } catch (const EnumerationLimit& e) {
      rs = skip(*ctx, {id}, std::string("enumeration cap: ") + e.what());
    } catch (const std::exception& e) {
      TheoremCheckResult r = base(*ctx, id, "evaluation error");
      r.status = CheckStatus::fail;
      r.detail = e.what();
      rs = {r};
    }
    const double dt = seconds_since(t0);
    for (auto& r : rs) {
      r.runtime = dt;
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<TheoremCheckResult> verify_counterexample_program(const VerifyConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  Results out;
  std::vector<double> ratios;
  for (int k = 1; k <= 8; ++k) {
    const double eps = std::pow(10.0, -k);
    const std::string inst = "geps-1e-" + std::to_string(k);
    const MarkovChain chain = counterexample_chain(eps);
    TheoremCheckResult r;
    r.theorem = "CX[kappa]";
    r.instance = inst;
    r.hypothesis = "none";
    Edge e{};
    const double kmin = min_kappa(chain, &e);
    settle(r, 1.0, kmin, 1e-9);
    r.detail = "min kappa on " + edge_name(chain, e);
    out.push_back(std::move(r));
    ratios.push_back(counterexample_ratio(eps));
  }
  {
    TheoremCheckResult r;
    r.theorem = "CX[decreasing]";
    r.instance = "geps-sweep";
    r.hypothesis = "none";
    double worst = -kInf;
    std::string seq;
    for (std::size_t i = 0; i < ratios.size(); ++i) {
      if (i) worst = std::max(worst, ratios[i] - ratios[i - 1]);
      seq += (i ? ", " : "") + num(ratios[i]);
    }
    r.lhs = worst;
    r.rhs = 0.0;
    r.margin = -worst;
    r.status = worst < 0.0 ? CheckStatus::pass : CheckStatus::fail;
    r.detail = "ratios " + seq;
    out.push_back(std::move(r));
  }
  {
    TheoremCheckResult r;
    r.theorem = "CX[ratio<1]";
    r.instance = "geps-1e-8";
    r.hypothesis = "none";
    r.lhs = ratios.back();
    r.rhs = 1.0;
    r.margin = r.rhs - r.lhs;
    r.status = r.lhs < r.rhs ? CheckStatus::pass : CheckStatus::fail;
    r.detail = "modified log-Sobolev ratio of f = (eps, 1, -log eps) at eps = 1e-8";
    out.push_back(std::move(r));
  }
  const double dt = seconds_since(t0);
  for (auto& r : out) r.runtime = dt;
  (void)cfg;
  return out;
}

std::vector<Instance> default_battery(std::uint64_t seed) {
  std::vector<Instance> out;
  auto add = [&](std::string id, GraphSpec s) { out.push_back({std::move(id), std::move(s)}); };
  for (int n = 2; n <= 8; ++n) add("path-" + std::to_string(n), make_path(n));
  for (int n = 3; n <= 12; ++n) add("cycle-" + std::to_string(n), make_cycle(n));
  for (int d = 1; d <= 4; ++d) add("hypercube-" + std::to_string(d), make_hypercube(d));
  for (int n = 2; n <= 8; ++n) add("complete-" + std::to_string(n), make_complete(n));
  for (int n = 2; n <= 10; ++n) {
    add("bd-monotone-" + std::to_string(n), make_random_birth_death(n, seed + static_cast<std::uint64_t>(n), true));
  }
  for (int n = 4; n <= 8; n += 2) {
    add("bd-mixed-" + std::to_string(n), make_random_birth_death(n, seed + 100 + static_cast<std::uint64_t>(n), false));
  }
  for (int n = 3; n <= 8; ++n) add("lazy-path-" + std::to_string(n), make_lazify(make_path(n)));
  for (int n = 4; n <= 8; ++n) add("lazy-cycle-" + std::to_string(n), make_lazify(make_cycle(n)));
  for (int d = 1; d <= 4; ++d) add("lazy-hypercube-" + std::to_string(d), make_lazify(make_hypercube(d)));
  for (int n = 3; n <= 6; ++n) add("lazy-complete-" + std::to_string(n), make_lazify(make_complete(n)));
  for (int k = 1; k <= 8; ++k) {
    const double eps = std::pow(10.0, -k);
    add("geps-1e-" + std::to_string(k), make_counterexample(eps));
  }
  for (int n = 8; n <= 12; n += 2) {
    add("er-" + std::to_string(n), make_erdos_renyi(n, 0.3, seed + 200 + static_cast<std::uint64_t>(n)));
  }
  return out;
}

std::vector<TheoremCheckResult> verify_battery(const std::vector<Instance>& instances,
                                               const std::vector<std::string>& theorems, const VerifyConfig& cfg) {
  std::vector<std::string> per_instance;
  bool cx = false;
  for (const auto& t : theorems) {
    if (t == "CX") {
      cx = true;
    } else {
      per_instance.push_back(t);
    }
  }
  std::vector<Results> slots(instances.size());
  parallel_ranges(instances.size(), [&](std::size_t lo, std::size_t hi, int) {
    for (std::size_t i = lo; i < hi; ++i) slots[i] = verify(instances[i], per_instance, cfg);
  });
  Results out;
  for (auto& s : slots) {
    for (auto& r : s) out.push_back(std::move(r));
  }
  if (cx) {
    for (auto& r : verify_counterexample_program(cfg)) out.push_back(std::move(r));
  }
  return out;
}

bool any_failure(const std::vector<TheoremCheckResult>& results) {
  return std::any_of(results.begin(), results.end(), [](const auto& r) { return r.status == CheckStatus::fail; });
}

}  // namespace curvlab
