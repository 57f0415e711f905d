// Acceptance criteria. One line per criterion:  criterion N: PASS|FAIL  <summary>
#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "curvlab/capacity.hpp"
#include "curvlab/curvature.hpp"
#include "curvlab/errors.hpp"
#include "curvlab/functional.hpp"
#include "curvlab/generators.hpp"
#include "curvlab/isoperimetry.hpp"
#include "curvlab/linalg.hpp"
#include "curvlab/separation.hpp"
#include "curvlab/spectral.hpp"
#include "curvlab/verify.hpp"

using namespace curvlab;

namespace {

constexpr std::uint64_t kSeed = 20240611;

struct Outcome {
  bool pass = true;
  std::ostringstream note;
  void fail(const std::string& why) {
    if (pass) note << why;
    pass = false;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

MarkovChain chain_of(const GraphSpec& s) { return build_chain(s.description); }

std::string base_name(const std::string& theorem) { return theorem.substr(0, theorem.find('[')); }

// Instances from the default battery plus a few larger ones, filtered by size.
std::vector<Instance> fixtures(int max_n) {
  std::vector<Instance> out;
  auto keep = [&](Instance inst) {
    if (chain_of(inst.spec).size() <= max_n) out.push_back(std::move(inst));
  };
  for (auto& inst : default_battery(kSeed)) keep(std::move(inst));
  for (int n = 9; n <= 14; ++n) keep({"path-" + std::to_string(n), make_path(n)});
  for (int n = 13; n <= 14; ++n) keep({"cycle-" + std::to_string(n), make_cycle(n)});
  for (int n = 11; n <= 14; ++n) {
    keep({"bd-monotone-" + std::to_string(n), make_random_birth_death(n, kSeed + 300 + n, true)});
  }
  keep({"path2xpath6", make_product(make_path(2), make_path(6))});
  keep({"cycle3xpath4", make_product(make_cycle(3), make_path(4))});
  keep({"complete3xcomplete4", make_product(make_complete(3), make_complete(4))});
  return out;
}

// Runs the registry on every instance and tallies results whose base id is listed.
struct Tally {
  int pass = 0, fail = 0, skip = 0;
  std::vector<std::string> failures;
};

Tally run_registry(const std::vector<Instance>& instances, const std::vector<std::string>& ids,
                   const std::function<bool(const TheoremCheckResult&)>& counted = nullptr, const VerifyConfig& cfg = {}) {
  std::vector<std::string> bases;
  for (const auto& id : ids) bases.push_back(base_name(id));
  std::sort(bases.begin(), bases.end());
  bases.erase(std::unique(bases.begin(), bases.end()), bases.end());
  Tally t;
  for (const auto& r : verify_battery(instances, bases, cfg)) {
    if (std::find(ids.begin(), ids.end(), r.theorem) == ids.end() &&
        std::find(ids.begin(), ids.end(), base_name(r.theorem)) == ids.end()) {
      continue;
    }
    if (counted && !counted(r)) continue;
    switch (r.status) {
      case CheckStatus::pass: ++t.pass; break;
      case CheckStatus::skip: ++t.skip; break;
      case CheckStatus::fail:
        ++t.fail;
        if (t.failures.size() < 3) {
          std::ostringstream s;
          s << r.theorem << "@" << r.instance << " margin " << r.margin;
          t.failures.push_back(s.str());
        }
        break;
    }
  }
  return t;
}

void absorb(Outcome& o, const Tally& t, const std::string& what) {
  o.note << what << ": " << t.pass << " pass, " << t.fail << " fail, " << t.skip << " skip";
  if (t.fail > 0) {
    o.pass = false;
    o.note << " (";
    for (std::size_t i = 0; i < t.failures.size(); ++i) o.note << (i ? "; " : "") << t.failures[i];
    o.note << ")";
  }
  if (t.pass == 0) {
    o.pass = false;
    o.note << " (nothing checked)";
  }
}

bool nonneg_kappa(const MarkovChain& c) { return min_kappa(c) >= -1e-10; }

bool all_sectional(const MarkovChain& c) {
  for (const Edge& e : c.edges()) {
    if (!sectional_nonneg(c, e.x, e.y).nonneg) return false;
  }
  return true;
}

Outcome criterion1() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  double worst_kappa = 1e300, prev = 1e300, last = 0;
  bool decreasing = true;
  for (int k = 1; k <= 8; ++k) {
    const double eps = std::pow(10.0, -k);
    const MarkovChain c = chain_of(make_counterexample(eps));
    for (const Edge& e : c.edges()) worst_kappa = std::min(worst_kappa, kappa(c, e.x, e.y).value);
    last = counterexample_ratio(eps);
    decreasing = decreasing && last < prev;
    prev = last;
  }
  const double t = seconds_since(t0);
  o.note << "min kappa " << worst_kappa << ", ratio strictly decreasing " << (decreasing ? "yes" : "no")
         << ", ratio(1e-8) = " << last << ", " << t << " s";
  if (worst_kappa < 1 - 1e-9) o.pass = false;
  if (!decreasing) o.pass = false;
  if (!(last < 1)) o.pass = false;
  if (t >= 1.0) o.pass = false;
  return o;
}

Outcome criterion2() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<GraphSpec> specs;
  std::mt19937_64 rng(kSeed);
  for (int i = 0; i < 50; ++i) {
    const int n = 2 + static_cast<int>(rng() % 9);
    specs.push_back(make_random_birth_death(n, kSeed + 1000 + i, true));
  }
  for (int d = 1; d <= 4; ++d) specs.push_back(make_lazify(make_hypercube(d)));
  OptimizerConfig opt;
  opt.restarts = 64;
  int checked = 0, uncertified = 0;
  double worst = 1e300;
  for (const auto& s : specs) {
    const MarkovChain c = chain_of(s);
    if (!c.is_lazy() || !all_sectional(c)) {
      ++uncertified;
      continue;
    }
    const double k = min_kappa(c);
    const double a = alpha_mod(c, opt).value;
    worst = std::min(worst, a - k);
    ++checked;
  }
  const double t = seconds_since(t0);
  o.note << checked << " chains certified, " << uncertified << " not; min(alpha_mod - min kappa) = " << worst << ", "
         << t << " s";
  if (uncertified > 0 || checked < 54) o.pass = false;
  if (worst < -1e-8) o.pass = false;
  if (t >= 120) o.pass = false;
  return o;
}

Outcome criterion3() {
  Outcome o;
  int checked = 0;
  double worst = 1e300, slowest = 0;
  for (const auto& inst : fixtures(14)) {
    const MarkovChain c = chain_of(inst.spec);
    if (!nonneg_kappa(c)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    const ChainConstants k = chain_constants(c);
    const double a = alpha_spectral(c).value;
    slowest = std::max(slowest, seconds_since(t0));
    const double rhs = k.p0 / (16 * k.diam * k.diam);
    if (a < rhs - 1e-8 * std::max(1.0, rhs)) o.fail(inst.id + " below bound; ");
    worst = std::min(worst, a / rhs);
    ++checked;
  }
  o.note << checked << " fixtures, min alpha_spectral / bound = " << worst << ", slowest " << slowest << " s";
  if (checked == 0 || slowest >= 300) o.pass = false;
  return o;
}

std::vector<Instance> small(int max_n, bool need_nonneg) {
  std::vector<Instance> out;
  for (auto& inst : fixtures(max_n)) {
    if (!need_nonneg || nonneg_kappa(chain_of(inst.spec))) out.push_back(std::move(inst));
  }
  return out;
}

Outcome criterion4() {
  Outcome o;
  absorb(o, run_registry(small(12, true), {"T3[eps=1/8]", "T3[eps=m/4]", "T3[cor]", "T4", "T6"}), "T3/T4/T6");
  return o;
}

Outcome criterion5() {
  Outcome o;
  auto inst = small(12, false);
  for (int n = 6; n <= 12; n += 2) {
    inst.push_back({"er-neg-" + std::to_string(n), make_erdos_renyi(n, 0.25, kSeed + 500 + n)});
  }
  int negative = 0;
  for (const auto& i : inst) negative += min_kappa(chain_of(i.spec)) < 0;
  absorb(o, run_registry(inst, {"T5"}), "T5");
  o.note << ", " << negative << " negatively curved";
  if (negative == 0) o.pass = false;
  return o;
}

Outcome criterion6() {
  Outcome o;
  std::vector<Instance> tiny;
  for (auto& i : small(3, false)) tiny.push_back(std::move(i));
  tiny.push_back({"bd-3-a", make_random_birth_death(3, kSeed + 7, false)});
  tiny.push_back({"lazy-bd-3", make_lazify(make_random_birth_death(3, kSeed + 8, true))});
  absorb(o, run_registry(tiny, {"T9"}), "T9");
  o.note << "; ";
  absorb(o, run_registry(small(10, false), {"T10", "T11"}), "T10/T11");
  return o;
}

Outcome criterion7() {
  Outcome o;
  std::vector<Instance> tiny = small(3, false);
  tiny.push_back({"bd-3-b", make_random_birth_death(3, kSeed + 9, false)});
  absorb(o, run_registry(tiny, {"T12"}), "T12");
  const double tau = mixing_time(chain_of(make_path(2))).tau;
  o.note << "; tau(T2) = " << tau;
  if (std::abs(tau - 0.5) > 1e-6) o.pass = false;
  return o;
}

Outcome criterion8() {
  Outcome o;
  absorb(o, run_registry(small(16, false), {"T13"}), "T13");
  return o;
}

Outcome criterion9() {
  Outcome o;
  // Closed forms on the three-vertex path.
  {
    const MarkovChain p3 = chain_of(make_path(3));
    const CutPartition cut = make_cut(p3, VertexSubset(p3, {0}), VertexSubset(p3, {1}), VertexSubset(p3, {2}));
    const auto s = separation_solve(p3, cut);
    if (!(s.converged && s.f[0] == -1.0 && s.f[1] == 0.0 && s.f[2] == 1.0 && std::abs(s.C) <= 1e-15)) {
      o.fail("symmetric path closed form not reproduced; ");
    }
    GraphDescription d;
    d.mode = DescriptionMode::kernel;
    d.labels = {"a", "b", "c"};
    d.edges = {{0, 1, 0, 1.0, 2.0, {}}, {1, 2, 0, 1.0, 1.0, {}}};
    d.measure = std::vector<double>{2, 1, 1};
    const MarkovChain q = build_chain(d);
    const CutPartition qc = make_cut(q, VertexSubset(q, {0}), VertexSubset(q, {1}), VertexSubset(q, {2}));
    const auto t = separation_solve(q, qc);
    if (!(t.converged && t.f[0] == -1.0 && t.f[2] == 1.0 && std::abs(t.C + 1.0) <= 1e-15 &&
          verify_separation(q, qc, t).all())) {
      o.fail("asymmetric path closed form not reproduced; ");
    }
  }
  std::vector<MarkovChain> pool;
  for (const auto& inst : small(12, true)) pool.push_back(chain_of(inst.spec));
  std::mt19937_64 rng(kSeed);
  int solved = 0, nonconverged = 0, unverified = 0;
  double worst_residual = 0;
  for (int trial = 0; trial < 100;) {
    const MarkovChain& c = pool[rng() % pool.size()];
    const int n = c.size();
    if (n < 3) continue;
    // A random side A; K is where Delta 1_A is supported.
    std::vector<char> a(n);
    for (auto& v : a) v = static_cast<char>(rng() & 1);
    int in = 0;
    for (char v : a) in += v;
    if (in == 0 || in == n) continue;
    std::vector<int> X, K, Y;
    for (int x = 0; x < n; ++x) {
      bool boundary = false;
      for (const auto& nb : c.neighbors(x)) boundary = boundary || a[nb.vertex] != a[x];
      (boundary ? K : (a[x] ? X : Y)).push_back(x);
    }
    if (X.empty() && Y.empty()) continue;
    ++trial;
    const CutPartition cut = make_cut(c, VertexSubset(c, X), VertexSubset(c, K), VertexSubset(c, Y));
    const auto sol = separation_solve(c, cut);
    if (!sol.converged || sol.residual > 1e-9) {
      ++nonconverged;
      continue;
    }
    worst_residual = std::max(worst_residual, sol.residual);
    if (!verify_separation(c, cut, sol).all()) {
      ++unverified;
      continue;
    }
    ++solved;
  }
  o.note << solved << "/100 solved and verified, " << nonconverged << " non-converged, " << unverified
         << " failed verification, worst residual " << worst_residual;
  if (solved != 100) o.pass = false;
  return o;
}

Outcome criterion10() {
  Outcome o;
  auto inst = small(12, false);
  absorb(o, run_registry(inst, {"T8"}), "T8");
  o.note << "; ";
  std::vector<Instance> cubes;
  for (int d = 1; d <= 4; ++d) cubes.push_back({"hypercube-" + std::to_string(d), make_hypercube(d)});
  absorb(o, run_registry(cubes, {"T7"}), "T7");
  int profiles = 0;
  for (const auto& i : inst) {
    const auto prof = concentration_profile(chain_of(i.spec));
    profiles += !prof.conc.empty();
  }
  o.note << "; " << profiles << " profiles";
  return o;
}

Outcome criterion11() {
  Outcome o;
  double kappa_gap = 0, cap_gap = 0, eig_gap = 0;
  int lazy = 0;
  for (const auto& inst : fixtures(12)) {
    const MarkovChain c = chain_of(inst.spec);
    if (!c.is_lazy()) continue;
    ++lazy;
    for (const Edge& e : c.edges()) {
      kappa_gap = std::max(kappa_gap, std::abs(kappa(c, e.x, e.y).value - kappa_lazy_crosscheck(c, e.x, e.y)));
    }
  }
  std::mt19937_64 rng(kSeed);
  for (const auto& inst : fixtures(10)) {
    const MarkovChain c = chain_of(inst.spec);
    const int n = c.size();
    for (int k = 0; k < 5; ++k) {
      std::vector<int> A, B;
      for (int x = 0; x < n; ++x) {
        const auto r = rng() % 3;
        if (r == 0) A.push_back(x);
        if (r == 1) B.push_back(x);
      }
      if (A.empty() || B.empty()) continue;
      const auto cap = capacity(c, VertexSubset(c, A), VertexSubset(c, B));
      cap_gap = std::max(cap_gap, std::abs(cap.value - energy(c, cap.potential)));
    }
  }
  // Characteristic polynomials: T2 is s(s - 2), P3 is s(s - 1)(s - 3).
  const auto t2 = spectrum(chain_of(make_path(2))).eigenvalues;
  const auto p3 = spectrum(chain_of(make_path(3))).eigenvalues;
  const double roots_t2[] = {0, 2}, roots_p3[] = {0, 1, 3};
  for (int i = 0; i < 2; ++i) eig_gap = std::max(eig_gap, std::abs(t2[i] - roots_t2[i]));
  for (int i = 0; i < 3; ++i) eig_gap = std::max(eig_gap, std::abs(p3[i] - roots_p3[i]));
  o.note << lazy << " lazy fixtures, kappa gap " << kappa_gap << ", capacity gap " << cap_gap << ", eigenvalue gap "
         << eig_gap;
  if (lazy == 0 || kappa_gap > 1e-9 || cap_gap > 1e-10 || eig_gap > 1e-10) o.pass = false;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  int which = 0;
  app.add_option("--criterion", which, "1..11, or 0 for all")->check(CLI::Range(0, 11));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                        criterion5, criterion6, criterion7, criterion8,
                                                        criterion9, criterion10, criterion11};
  bool all = true;
  for (int i = 1; i <= 11; ++i) {
    if (which != 0 && which != i) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i - 1]();
    } catch (const std::exception& e) {
      o.pass = false;
      o.note << "exception: " << e.what();
    }
    std::cout << "criterion " << i << ": " << (o.pass ? "PASS" : "FAIL") << "  " << o.note.str() << "  ["
              << seconds_since(t0) << " s]" << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
