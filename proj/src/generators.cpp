#include "curvlab/generators.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "curvlab/errors.hpp"

namespace curvlab {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::vector<std::string> index_labels(int n) {
  std::vector<std::string> out(n);
  for (int i = 0; i < n; ++i) out[i] = std::to_string(i);
  return out;
}

EdgeDescription kernel_edge(int u, int v, double p_uv, double p_vu) {
  EdgeDescription e;
  e.u = u;
  e.v = v;
  e.p_uv = p_uv;
  e.p_vu = p_vu;
  return e;
}

void add_holding(GraphDescription& d, int x, double h) {
  if (h > 0.0) d.edges.push_back(kernel_edge(x, x, h, h));
}

GraphSpec kernel_spec(std::vector<std::string> labels, Provenance prov) {
  GraphSpec s;
  s.description.mode = DescriptionMode::kernel;
  s.description.labels = std::move(labels);
  s.provenance = std::move(prov);
  return s;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw PreconditionError(what);
}

}  // namespace

GraphSpec make_path(int n, double p) {
  require(n >= 2, "path needs n >= 2");
  require(p > 0.0, "path needs p > 0");
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) labels.push_back(n <= 26 ? std::string(1, static_cast<char>('a' + i)) : std::to_string(i));
  GraphSpec s = kernel_spec(labels, {"path", {{"n", std::to_string(n)}, {"p", fmt(p)}}, 0});
  for (int i = 0; i + 1 < n; ++i) s.description.edges.push_back(kernel_edge(i, i + 1, p, p));
  return s;
}

GraphSpec make_cycle(int n, double p) {
  require(n >= 3, "cycle needs n >= 3");
  require(p > 0.0, "cycle needs p > 0");
  GraphSpec s = kernel_spec(index_labels(n), {"cycle", {{"n", std::to_string(n)}, {"p", fmt(p)}}, 0});
  for (int i = 0; i < n; ++i) s.description.edges.push_back(kernel_edge(i, (i + 1) % n, p, p));
  for (int i = 0; i < n; ++i) add_holding(s.description, i, 1.0 - 2.0 * p);
  return s;
}

GraphSpec make_complete(int n, double p) {
  require(n >= 2, "complete graph needs n >= 2");
  if (p <= 0.0) p = 1.0 / (n - 1);
  GraphSpec s = kernel_spec(index_labels(n), {"complete", {{"n", std::to_string(n)}, {"p", fmt(p)}}, 0});
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) s.description.edges.push_back(kernel_edge(i, j, p, p));
  }
  return s;
}

GraphSpec make_hypercube(int d) {
  require(d >= 1 && d <= 12, "hypercube needs 1 <= d <= 12");
  const int n = 1 << d;
  std::vector<std::string> labels(n);
  for (int x = 0; x < n; ++x) {
    for (int b = d - 1; b >= 0; --b) labels[x] += ((x >> b) & 1) ? '1' : '0';
  }
  GraphSpec s = kernel_spec(labels, {"hypercube", {{"d", std::to_string(d)}}, 0});
  const double p = 1.0 / d;
  for (int x = 0; x < n; ++x) {
    for (int b = 0; b < d; ++b) {
      const int y = x ^ (1 << b);
      if (x < y) s.description.edges.push_back(kernel_edge(x, y, p, p));
    }
  }
  return s;
}

GraphSpec make_birth_death(const std::vector<double>& up, const std::vector<double>& down, bool lazy) {
  require(!up.empty() && up.size() == down.size(), "birth_death needs equally many up and down rates");
  const int n = static_cast<int>(up.size()) + 1;
  std::ostringstream us, ds;
  for (std::size_t i = 0; i < up.size(); ++i) {
    require(up[i] > 0.0 && down[i] > 0.0, "birth_death rates must be positive");
    us << (i ? "," : "") << fmt(up[i]);
    ds << (i ? "," : "") << fmt(down[i]);
  }
  GraphSpec s = kernel_spec(index_labels(n), {"birth_death", {{"up", us.str()}, {"down", ds.str()}, {"lazy", lazy ? "1" : "0"}}, 0});
  std::vector<double> measure(n, 1.0);
  for (int i = 0; i + 1 < n; ++i) {
    s.description.edges.push_back(kernel_edge(i, i + 1, up[i], down[i]));
    measure[i + 1] = measure[i] * up[i] / down[i];
  }
  if (lazy) {
    for (int x = 0; x < n; ++x) {
      const double out = (x + 1 < n ? up[x] : 0.0) + (x > 0 ? down[x - 1] : 0.0);
      require(out <= 0.5 + 1e-15, "lazy birth_death needs total rate <= 1/2 at every vertex");
      add_holding(s.description, x, 1.0 - out);
    }
  }
  double total = 0.0;
  for (double v : measure) total += v;
  for (double& v : measure) v /= total;
  s.description.measure = measure;
  return s;
}

GraphSpec make_random_birth_death(int n, std::uint64_t seed, bool monotone) {
  require(n >= 2, "birth_death needs n >= 2");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.02, 0.25);
  std::vector<double> up(n - 1), down(n - 1);
  for (auto& v : up) v = U(rng);
  for (auto& v : down) v = U(rng);
  if (monotone) {
    std::sort(up.begin(), up.end(), std::greater<>());
    std::sort(down.begin(), down.end());
  }
  GraphSpec s = make_birth_death(up, down, true);
  s.provenance.params.insert(s.provenance.params.begin(), {{"n", std::to_string(n)}, {"monotone", monotone ? "1" : "0"}});
  s.provenance.seed = seed;
  return s;
}

GraphSpec make_product(const GraphSpec& a, const GraphSpec& b) {
  const MarkovChain A = build_chain(a.description);
  const MarkovChain B = build_chain(b.description);
  const int na = A.size(), nb = B.size();
  std::vector<std::string> labels;
  for (int i = 0; i < na; ++i) {
    for (int j = 0; j < nb; ++j) labels.push_back("(" + A.labels()[i] + "," + B.labels()[j] + ")");
  }
  GraphSpec s = kernel_spec(labels, {"product", {{"left", a.provenance.family}, {"right", b.provenance.family}}, 0});
  auto id = [nb](int i, int j) { return i * nb + j; };
  std::vector<double> measure;
  for (int i = 0; i < na; ++i) {
    for (int j = 0; j < nb; ++j) {
      measure.push_back(A.mass(i) * B.mass(j));
      add_holding(s.description, id(i, j), A.rate(i, i) + B.rate(j, j));
    }
  }
  for (const auto& e : A.edges()) {
    for (int j = 0; j < nb; ++j) {
      EdgeDescription d = kernel_edge(id(e.x, j), id(e.y, j), A.rate(e.x, e.y), A.rate(e.y, e.x));
      if (e.length != 1.0) d.length = e.length;
      s.description.edges.push_back(d);
    }
  }
  for (const auto& e : B.edges()) {
    for (int i = 0; i < na; ++i) {
      EdgeDescription d = kernel_edge(id(i, e.x), id(i, e.y), B.rate(e.x, e.y), B.rate(e.y, e.x));
      if (e.length != 1.0) d.length = e.length;
      s.description.edges.push_back(d);
    }
  }
  s.description.measure = measure;
  return s;
}

GraphSpec make_lazify(const GraphSpec& g) {
  const MarkovChain C = build_chain(g.description);
  const int n = C.size();
  GraphSpec s = kernel_spec(C.labels(), g.provenance);
  s.provenance.params.insert(s.provenance.params.begin(), {"base", g.provenance.family});
  s.provenance.family = "lazify";
  std::vector<double> measure(n);
  double total = 0.0;
  for (int x = 0; x < n; ++x) {
    measure[x] = C.mass(x) * C.degree(x);
    total += measure[x];
    add_holding(s.description, x, 0.5);
  }
  for (double& v : measure) v /= total;
  for (const auto& e : C.edges()) {
    EdgeDescription d =
        kernel_edge(e.x, e.y, 0.5 * C.rate(e.x, e.y) / C.degree(e.x), 0.5 * C.rate(e.y, e.x) / C.degree(e.y));
    if (e.length != 1.0) d.length = e.length;
    s.description.edges.push_back(d);
  }
  s.description.measure = measure;
  return s;
}

GraphSpec make_counterexample(double eps) {
  require(eps > 0.0 && eps < 1.0, "counterexample needs 0 < eps < 1");
  GraphSpec s;
  s.description.mode = DescriptionMode::weights;
  s.description.labels = {"1", "2", "3"};
  EdgeDescription e12, e23;
  e12.u = 0;
  e12.v = 1;
  e12.w = 10.0;
  e23.u = 1;
  e23.v = 2;
  e23.w = 1.0;
  s.description.edges = {e12, e23};
  s.description.measure = std::vector<double>{1.0 / eps, 1.0, 1.0 / 20.0};
  s.provenance = {"counterexample", {{"eps", fmt(eps)}}, 0};
  return s;
}

GraphSpec make_counterexample_combinatorial(int n, double p) {
  require(n >= 1, "counterexample_combinatorial needs n >= 1");
  require(p > 0.0, "counterexample_combinatorial needs p > 0");
  const int k = 2 * n;
  std::vector<std::string> labels;
  for (int i = 1; i <= k; ++i) {
    for (int j = 1; j <= k; ++j) labels.push_back("(" + std::to_string(i) + "," + std::to_string(j) + ")");
  }
  for (int j = 1; j <= n; ++j) labels.push_back("k" + std::to_string(j));
  GraphSpec s = kernel_spec(labels, {"counterexample_combinatorial", {{"n", std::to_string(n)}, {"p", fmt(p)}}, 0});
  auto id = [k](int i, int j) { return i * k + j; };
  auto& edges = s.description.edges;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      for (int j2 = j + 1; j2 < k; ++j2) edges.push_back(kernel_edge(id(i, j), id(i, j2), p, p));
      for (int i2 = i + 1; i2 < k; ++i2) edges.push_back(kernel_edge(id(i, j), id(i2, j), p, p));
    }
  }
  const int base = k * k;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) edges.push_back(kernel_edge(base + a, base + b, p, p));
    for (int j = 0; j < k; ++j) edges.push_back(kernel_edge(id(0, j), base + a, p, p));
  }
  return s;
}

GraphSpec make_erdos_renyi(int n, double prob, std::uint64_t seed) {
  require(n >= 2, "erdos_renyi needs n >= 2");
  require(prob > 0.0 && prob <= 1.0, "erdos_renyi needs 0 < prob <= 1");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(prob);
  const double p = 1.0 / (n - 1);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (coin(rng)) pairs.emplace_back(i, j);
      }
    }
    // connectivity by union-find
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    int comps = n;
    for (auto [a, b] : pairs) {
      const int ra = find(a), rb = find(b);
      if (ra != rb) {
        parent[ra] = rb;
        --comps;
      }
    }
    if (comps != 1) continue;
    GraphSpec s = kernel_spec(index_labels(n), {"erdos_renyi", {{"n", std::to_string(n)}, {"prob", fmt(prob)}}, seed});
    for (auto [a, b] : pairs) s.description.edges.push_back(kernel_edge(a, b, p, p));
    return s;
  }
  throw PreconditionError("erdos_renyi: no connected sample in 10000 attempts");
}

namespace {

double num(const std::map<std::string, std::string>& params, const std::string& key, double def, bool required) {
  const auto it = params.find(key);
  if (it == params.end()) {
    if (required) throw PreconditionError("missing parameter '" + key + "'");
    return def;
  }
  try {
    std::size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::logic_error&) {
    throw PreconditionError("parameter '" + key + "' is not a number: " + it->second);
  }
}

int integer(const std::map<std::string, std::string>& params, const std::string& key, int def, bool required) {
  const double v = num(params, key, def, required);
  if (v != std::floor(v)) throw PreconditionError("parameter '" + key + "' must be an integer");
  return static_cast<int>(v);
}

std::vector<double> list(const std::map<std::string, std::string>& params, const std::string& key) {
  const auto it = params.find(key);
  if (it == params.end()) return {};
  std::vector<double> out;
  std::stringstream ss(it->second);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::logic_error&) {
      throw PreconditionError("bad entry in '" + key + "': " + item);
    }
  }
  return out;
}

}  // namespace

GraphSpec generate(const std::string& family, const std::map<std::string, std::string>& params, std::uint64_t seed,
                   const std::vector<GraphSpec>& inputs) {
  if (family == "path") return make_path(integer(params, "n", 0, true), num(params, "p", 1.0, false));
  if (family == "cycle") return make_cycle(integer(params, "n", 0, true), num(params, "p", 0.5, false));
  if (family == "complete") return make_complete(integer(params, "n", 0, true), num(params, "p", 0.0, false));
  if (family == "hypercube") return make_hypercube(integer(params, "d", 0, true));
  if (family == "birth_death") {
    if (params.count("up") || params.count("down")) {
      return make_birth_death(list(params, "up"), list(params, "down"), num(params, "lazy", 0, false) != 0.0);
    }
    return make_random_birth_death(integer(params, "n", 0, true), seed, num(params, "monotone", 1, false) != 0.0);
  }
  if (family == "product") {
    require(inputs.size() == 2, "product needs two input specs");
    return make_product(inputs[0], inputs[1]);
  }
  if (family == "lazify") {
    require(inputs.size() == 1, "lazify needs one input spec");
    return make_lazify(inputs[0]);
  }
  if (family == "counterexample") return make_counterexample(num(params, "eps", 0.0, true));
  if (family == "counterexample_combinatorial") {
    return make_counterexample_combinatorial(integer(params, "n", 0, true), num(params, "p", 1.0, false));
  }
  if (family == "erdos_renyi") {
    return make_erdos_renyi(integer(params, "n", 0, true), num(params, "prob", 0.5, false), seed);
  }
  throw PreconditionError("unknown family '" + family + "'");
}

}  // namespace curvlab
