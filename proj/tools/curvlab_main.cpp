#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "curvlab/capacity.hpp"
#include "curvlab/curvature.hpp"
#include "curvlab/errors.hpp"
#include "curvlab/functional.hpp"
#include "curvlab/generators.hpp"
#include "curvlab/graph_io.hpp"
#include "curvlab/isoperimetry.hpp"
#include "curvlab/report.hpp"
#include "curvlab/separation.hpp"
#include "curvlab/spectral.hpp"
#include "curvlab/verify.hpp"

using namespace curvlab;
using nlohmann::ordered_json;

namespace {

struct Common {
  std::string output;
  std::string format = "table";
  double tol_rev = 1e-10;
  double tol_sum = 1e-10;
};

ordered_json jnum(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return nullptr;
  return v > 0 ? "inf" : "-inf";
}

ordered_json jvec(const Eigen::VectorXd& v) {
  ordered_json a = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(jnum(v[i]));
  return a;
}

ordered_json jset(const MarkovChain& chain, const VertexSubset& W) {
  ordered_json a = ordered_json::array();
  for (int x : W.members()) a.push_back(chain.labels()[x]);
  return a;
}

MarkovChain load(const std::string& path, const Common& c) {
  Tolerances tol;
  tol.reversibility = c.tol_rev;
  tol.mass_sum = c.tol_sum;
  return build_chain(read_spec(path).description, tol);
}

void emit(const std::string& text, const Common& c) {
  if (c.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(c.output);
  if (!out) throw PreconditionError("cannot write " + c.output);
  out << text;
}

// Flat key/value rendering of a JSON document for the table format.
void flatten(const ordered_json& j, const std::string& prefix, std::ostringstream& os) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, os);
  } else {
    os << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

std::string render_doc(const ordered_json& doc, const Common& c) {
  if (c.format == "json" || c.format == "json-lines" || c.format == "structured") return doc.dump(2) + "\n";
  std::ostringstream os;
  flatten(doc, "", os);
  return os.str();
}

std::vector<int> parse_vertices(const MarkovChain& chain, const std::string& csv) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(chain.index_of(item));
  }
  return out;
}

std::vector<int> json_vertices(const MarkovChain& chain, const ordered_json& a) {
  std::vector<int> out;
  for (const auto& v : a) out.push_back(v.is_number_integer() ? v.get<int>() : chain.index_of(v.get<std::string>()));
  return out;
}

int run_curvature(const std::string& path, const Common& c) {
  const MarkovChain chain = load(path, c);
  const auto rows = edge_curvatures(chain);
  if (c.format == "csv") {
    std::ostringstream os;
    os << "x,y,kappa,kappa_inf,sectional_nonneg\n";
    for (const auto& r : rows) {
      os << chain.labels()[r.edge.x] << ',' << chain.labels()[r.edge.y] << ',' << r.kappa << ','
         << (r.kappa_inf ? std::to_string(*r.kappa_inf) : "") << ','
         << (r.sectional_nonneg ? (*r.sectional_nonneg ? "1" : "0") : "") << "\n";
    }
    emit(os.str(), c);
    return 0;
  }
  ordered_json doc;
  ordered_json edges = ordered_json::array();
  double kmin = INFINITY;
  for (const auto& r : rows) {
    ordered_json e;
    e["x"] = chain.labels()[r.edge.x];
    e["y"] = chain.labels()[r.edge.y];
    e["kappa"] = r.kappa;
    if (r.kappa_inf) e["kappa_inf"] = *r.kappa_inf;
    if (r.sectional_nonneg) e["sectional_nonneg"] = *r.sectional_nonneg;
    e["witness"] = jvec(r.witness);
    edges.push_back(e);
    kmin = std::min(kmin, r.kappa);
  }
  doc["min_kappa"] = jnum(kmin);
  doc["lazy"] = chain.is_lazy(1e-10);
  if (c.format == "json" || c.format == "json-lines") {
    doc["edges"] = edges;
    emit(doc.dump(2) + "\n", c);
    return 0;
  }
  std::ostringstream os;
  os << "edge            kappa         kappa_inf     sectional\n";
  for (const auto& e : edges) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-15s %-13.10g %-13s %s\n",
                  (e["x"].get<std::string>() + "-" + e["y"].get<std::string>()).c_str(), e["kappa"].get<double>(),
                  e.contains("kappa_inf") ? std::to_string(e["kappa_inf"].get<double>()).c_str() : "-",
                  e.contains("sectional_nonneg") ? (e["sectional_nonneg"].get<bool>() ? "nonneg" : "negative") : "-");
    os << buf;
  }
  os << "min kappa: " << kmin << "\n";
  emit(os.str(), c);
  return 0;
}

int run_spectral(const std::string& path, const Common& c, int enum_cap) {
  const MarkovChain chain = load(path, c);
  const SpectralSummary s = spectrum(chain);
  ordered_json doc;
  doc["eigenvalues"] = jvec(s.eigenvalues);
  doc["lambda"] = s.lambda;
  if (chain.size() <= enum_cap) {
    const AlphaSpectral a = alpha_spectral(chain, enum_cap);
    doc["alpha_spectral"] = {{"value", a.value},
                             {"argmin", jset(chain, a.argmin)},
                             {"lambda_X", a.lambda_x},
                             {"lambda_complement", a.lambda_complement}};
  } else {
    doc["alpha_spectral"] = "skipped: n exceeds enumeration cap";
  }
  if (chain.size() <= 12) {
    const CapacityConstants k = capacity_constants(chain, 12);
    doc["alpha_cap"] = k.alpha_cap.value;
    doc["alpha_cap_theta"] = k.alpha_cap_theta.value;
  }
  emit(render_doc(doc, c), c);
  return 0;
}

ordered_json functional_doc(const MarkovChain& chain, const FunctionalResult& r) {
  ordered_json j;
  j["value"] = r.value;
  j["witness_value"] = r.witness_value;
  j["limit_value"] = r.limit_value;
  j["converged"] = r.converged;
  j["grid_certified"] = r.grid_certified;
  j["restarts_used"] = r.restarts_used;
  j["el_residual"] = jnum(r.el_residual);
  ordered_json w = ordered_json::object();
  for (int x = 0; x < chain.size(); ++x) w[chain.labels()[x]] = jnum(r.witness[x]);
  j["witness"] = w;
  return j;
}

int run_logsob(const std::string& path, const Common& c, const OptimizerConfig& opt) {
  const MarkovChain chain = load(path, c);
  ordered_json doc;
  doc["lambda"] = spectrum(chain).lambda;
  doc["alpha"] = functional_doc(chain, alpha_logsob(chain, opt));
  doc["alpha_mod"] = functional_doc(chain, alpha_mod(chain, opt));
  const MixingTime mt = mixing_time(chain);
  doc["tau"] = mt.tau;
  doc["tau_worst_start"] = chain.labels()[mt.worst_vertex];
  emit(render_doc(doc, c), c);
  return 0;
}

int run_isoperimetry(const std::string& path, const Common& c, int enum_cap, const std::vector<double>& eps_list) {
  const MarkovChain chain = load(path, c);
  ordered_json doc;
  const char* names[] = {"h", "h_log", "h_sqrtlog"};
  const CheegerWeight weights[] = {CheegerWeight::plain, CheegerWeight::log, CheegerWeight::sqrtlog};
  for (int i = 0; i < 3; ++i) {
    const CheegerResult r = cheeger(chain, weights[i], enum_cap);
    doc[names[i]] = {{"value", r.value}, {"witness", jset(chain, r.witness)}};
  }
  const ObsDiameterTable table(chain, ObsMode::exact, enum_cap);
  ordered_json obs = ordered_json::array();
  for (double eps : eps_list) {
    const ObsDiameter od = table.query(eps);
    obs.push_back({{"eps", eps}, {"value", od.value}, {"A", jset(chain, od.A)}, {"B", jset(chain, od.B)}});
  }
  doc["diam_obs"] = obs;
  const ConcentrationProfile prof = concentration_profile(chain, enum_cap);
  ordered_json conc = ordered_json::array();
  for (std::size_t r = 0; r < prof.conc.size(); ++r) conc.push_back(prof.conc[r]);
  doc["concentration"] = conc;
  doc["far_set_convention"] = "A_r = {x : d(x,A) > r}";
  doc["rho"] = jnum(gaussian_rho(prof));
  if (c.format == "csv") {
    std::ostringstream os;
    os << "r,conc\n";
    for (std::size_t r = 0; r < prof.conc.size(); ++r) os << r << ',' << prof.conc[r] << "\n";
    emit(os.str(), c);
    return 0;
  }
  emit(render_doc(doc, c), c);
  return 0;
}

int run_separate(const std::string& path, const Common& c, const std::string& cut_file, const std::string& xs,
                 const std::string& ks, const std::string& ys, const SeparationConfig& cfg) {
  const MarkovChain chain = load(path, c);
  std::vector<int> X, K, Y;
  if (!cut_file.empty()) {
    std::ifstream in(cut_file);
    if (!in) throw PreconditionError("cannot open " + cut_file);
    const ordered_json j = ordered_json::parse(in);
    X = json_vertices(chain, j.value("X", ordered_json::array()));
    K = json_vertices(chain, j.at("K"));
    Y = json_vertices(chain, j.value("Y", ordered_json::array()));
  } else {
    X = parse_vertices(chain, xs);
    K = parse_vertices(chain, ks);
    Y = parse_vertices(chain, ys);
  }
  const CutPartition cut =
      make_cut(chain, VertexSubset(chain, X), VertexSubset(chain, K), VertexSubset(chain, Y));
  const SeparationSolution sol = separation_solve(chain, cut, cfg);
  const SeparationVerdict v = verify_separation(chain, cut, sol, std::max(cfg.tol, 1e-9));
  ordered_json doc;
  ordered_json f = ordered_json::object();
  for (int x = 0; x < chain.size(); ++x) f[chain.labels()[x]] = sol.f[x];
  doc["f"] = f;
  doc["C"] = sol.C;
  doc["residual"] = sol.residual;
  doc["iterations"] = sol.iterations;
  doc["converged"] = sol.converged;
  doc["polished"] = sol.polished;
  if (!sol.message.empty()) doc["message"] = sol.message;
  doc["verdicts"] = {{"lipschitz", v.lipschitz_ok},     {"constant_on_K", v.constant_ok},
                     {"extensions", v.extensions_ok},  {"separated", v.moreover_ok},
                     {"lip", v.lipschitz},             {"x_extension_gap", v.x_extension_gap},
                     {"y_extension_gap", v.y_extension_gap}, {"moreover_x", jnum(v.moreover_x)},
                     {"moreover_y", jnum(v.moreover_y)}};
  emit(render_doc(doc, c), c);
  return sol.converged && v.all() ? 0 : 1;
}

std::vector<double> parse_doubles(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curvlab: curvature, functional inequalities and isoperimetry on finite Markov chains"};
  app.set_version_flag("--version", CURVLAB_VERSION);
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-o,--output", common.output, "Write to this file instead of stdout");
    sub->add_option("--format", common.format, "table, csv, json or json-lines");
    sub->add_option("--tol-rev", common.tol_rev, "Reversibility tolerance")->capture_default_str();
    sub->add_option("--tol-sum", common.tol_sum, "Mass-sum tolerance")->capture_default_str();
  };

  OptimizerConfig opt;
  std::uint64_t seed = opt.seed;
  bool no_grid = false;
  auto add_opt = [&](CLI::App* sub) {
    sub->add_option("--restarts", opt.restarts)->capture_default_str();
    sub->add_option("--max-iters", opt.max_iters)->capture_default_str();
    sub->add_option("--opt-tol", opt.opt_tol)->capture_default_str();
    sub->add_option("--seed", seed)->capture_default_str();
    sub->add_flag("--no-grid", no_grid, "Disable the dense grid for n <= 3");
  };
  int enum_cap = 16;

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a graph description");
  std::string family;
  std::vector<std::string> gen_params;
  std::vector<std::string> gen_inputs;
  gen->add_option("family", family, "path, cycle, complete, hypercube, birth_death, product, lazify, "
                                    "counterexample, counterexample_combinatorial, erdos_renyi")
      ->required();
  gen->add_option("params", gen_params, "key=value parameters");
  gen->add_option("-i,--input", gen_inputs, "Input specs for product and lazify");
  gen->add_option("--seed", seed)->capture_default_str();
  gen->add_option("-o,--output", common.output, "Output file");

  std::string spec_path;
  auto* curv = app.add_subcommand("curvature", "Edge curvatures");
  curv->add_option("spec", spec_path)->required();
  add_common(curv);

  auto* spec_cmd = app.add_subcommand("spectral", "Spectrum, alpha_spectral and capacity constants");
  spec_cmd->add_option("spec", spec_path)->required();
  spec_cmd->add_option("--enum-cap", enum_cap)->capture_default_str();
  add_common(spec_cmd);

  auto* ls = app.add_subcommand("logsob", "Log-Sobolev constants and mixing time");
  ls->add_option("spec", spec_path)->required();
  add_common(ls);
  add_opt(ls);

  std::string eps_csv = "0.125,0.25,0.5";
  auto* iso = app.add_subcommand("isoperimetry", "Cheeger constants, observable diameter, concentration");
  iso->add_option("spec", spec_path)->required();
  iso->add_option("--eps", eps_csv, "Comma-separated eps values for the observable diameter")->capture_default_str();
  iso->add_option("--enum-cap", enum_cap)->capture_default_str();
  add_common(iso);

  SeparationConfig scfg;
  std::string cut_file, xs, ks, ys, step = "semigroup";
  auto* sep = app.add_subcommand("separate", "Solve the Laplacian separation problem on a cut");
  sep->add_option("spec", spec_path)->required();
  sep->add_option("--cut", cut_file, "JSON file {X: [...], K: [...], Y: [...]}");
  sep->add_option("--X", xs, "Comma-separated labels");
  sep->add_option("--K", ks, "Comma-separated labels");
  sep->add_option("--Y", ys, "Comma-separated labels");
  sep->add_option("--step", step, "euler or semigroup")->capture_default_str();
  sep->add_option("--eps", scfg.eps, "Step size (0 = 0.5/Deg_max)")->capture_default_str();
  sep->add_option("--sep-tol", scfg.tol)->capture_default_str();
  sep->add_option("--max-iters", scfg.max_iters)->capture_default_str();
  add_common(sep);

  VerifyConfig vcfg;
  std::string target, theorems = "all";
  auto* ver = app.add_subcommand("verify", "Run theorem checks on a spec or on the built-in battery");
  ver->add_option("target", target, "Graph description file or 'battery'")->required();
  ver->add_option("--theorems", theorems, "Comma-separated ids (T1..T14, CX) or 'all'")->capture_default_str();
  ver->add_option("--check-tol", vcfg.check_tol)->capture_default_str();
  ver->add_option("--commutation-tol", vcfg.commutation_tol)->capture_default_str();
  ver->add_option("--enum-cap", vcfg.enum_cap)->capture_default_str();
  ver->add_option("--capacity-cap", vcfg.capacity_cap)->capture_default_str();
  ver->add_option("--random-functions", vcfg.random_functions)->capture_default_str();
  add_common(ver);
  add_opt(ver);

  CLI11_PARSE(app, argc, argv);

  try {
    opt.seed = seed;
    opt.grid = !no_grid;
    if (gen->parsed()) {
      std::map<std::string, std::string> params;
      for (const auto& p : gen_params) {
        const auto eq = p.find('=');
        if (eq == std::string::npos) throw PreconditionError("parameter '" + p + "' must look like key=value");
        params[p.substr(0, eq)] = p.substr(eq + 1);
      }
      std::vector<GraphSpec> inputs;
      for (const auto& path : gen_inputs) inputs.push_back(read_spec(path));
      const GraphSpec spec = generate(family, params, seed, inputs);
      build_chain(spec.description);
      emit(to_json(spec), common);
      return 0;
    }
    if (curv->parsed()) return run_curvature(spec_path, common);
    if (spec_cmd->parsed()) return run_spectral(spec_path, common, enum_cap);
    if (ls->parsed()) return run_logsob(spec_path, common, opt);
    if (iso->parsed()) return run_isoperimetry(spec_path, common, enum_cap, parse_doubles(eps_csv));
    if (sep->parsed()) {
      if (step == "euler") {
        scfg.step = SeparationStep::euler;
      } else if (step == "semigroup") {
        scfg.step = SeparationStep::semigroup;
      } else {
        throw PreconditionError("--step must be euler or semigroup");
      }
      return run_separate(spec_path, common, cut_file, xs, ks, ys, scfg);
    }
    if (ver->parsed()) {
      vcfg.opt = opt;
      vcfg.seed = seed;
      const ReportFormat format = parse_format(common.format);
      const std::vector<std::string> ids = parse_theorem_list(theorems);
      std::vector<Instance> instances;
      if (target == "battery") {
        instances = default_battery(seed);
      } else {
        Instance inst;
        inst.spec = read_spec(target);
        inst.id = target;
        instances.push_back(std::move(inst));
      }
      const auto results = verify_battery(instances, ids, vcfg);
      ReportMeta meta;
      meta.cfg = vcfg;
      for (const auto& inst : instances) meta.instances.emplace_back(inst.id, inst.spec.provenance);
      emit(render_report(results, format, meta), common);
      return any_failure(results) ? 1 : 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "curvlab: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
