#include "curvlab/chain.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "curvlab/errors.hpp"

namespace curvlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string pair_name(const GraphDescription& spec, int u, int v) {
  return "(" + spec.labels[u] + ", " + spec.labels[v] + ")";
}

// Dijkstra from every source; edge lists are small so a binary heap suffices.
Eigen::MatrixXd all_pairs_distances(const std::vector<std::vector<Neighbor>>& adj) {
  const int n = static_cast<int>(adj.size());
  Eigen::MatrixXd dist = Eigen::MatrixXd::Constant(n, n, kInf);
  using Item = std::pair<double, int>;
  for (int s = 0; s < n; ++s) {
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist(s, s) = 0.0;
    heap.emplace(0.0, s);
    while (!heap.empty()) {
      auto [d, x] = heap.top();
      heap.pop();
      if (d > dist(s, x)) continue;
      for (const auto& nb : adj[x]) {
        const double nd = d + nb.length;
        if (nd < dist(s, nb.vertex)) {
          dist(s, nb.vertex) = nd;
          heap.emplace(nd, nb.vertex);
        }
      }
    }
  }
  return dist;
}

}  // namespace

int MarkovChain::index_of(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw PreconditionError("unknown vertex label '" + label + "'");
  return static_cast<int>(it - labels_.begin());
}

double MarkovChain::edge_length(int x, int y) const {
  if (!adjacent(x, y)) {
    throw PreconditionError("vertices " + labels_[x] + " and " + labels_[y] + " are not adjacent");
  }
  return lengths_(x, y);
}

Eigen::MatrixXd MarkovChain::generator() const {
  Eigen::MatrixXd L = kernel_;
  for (int x = 0; x < size(); ++x) L(x, x) = -degree_[x];
  return L;
}

bool MarkovChain::is_lazy(double tol) const {
  for (int x = 0; x < size(); ++x) {
    if (std::abs(kernel_.row(x).sum() - 1.0) > tol) return false;
    if (kernel_(x, x) < 0.5 - tol) return false;
  }
  return true;
}

bool MarkovChain::has_combinatorial_distance(double tol) const {
  return std::all_of(edges_.begin(), edges_.end(),
                     [tol](const Edge& e) { return std::abs(e.length - 1.0) <= tol; });
}

MarkovChain build_chain(const GraphDescription& spec, const Tolerances& tol) {
  const int n = static_cast<int>(spec.labels.size());
  if (n < 1) throw InvalidChain("graph description has no vertices");

  // Directed rates (kernel mode) or directed weights (weights mode) as given.
  Eigen::MatrixXd given = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXi explicit_entry = Eigen::MatrixXi::Zero(n, n);
  Eigen::MatrixXd lengths = Eigen::MatrixXd::Zero(n, n);

  auto check_index = [n](int v) {
    if (v < 0 || v >= n) throw InvalidChain("edge endpoint index " + std::to_string(v) + " out of range");
  };

  for (const auto& e : spec.edges) {
    check_index(e.u);
    check_index(e.v);
    if (e.length && !(*e.length > 0.0 && std::isfinite(*e.length))) {
      throw InvalidChain("nonpositive edge length on " + pair_name(spec, e.u, e.v));
    }
    if (spec.mode == DescriptionMode::weights) {
      if (!(e.w >= 0.0) || !std::isfinite(e.w)) {
        throw InvalidChain("nonpositive weight on " + pair_name(spec, e.u, e.v));
      }
      if (explicit_entry(e.u, e.v)) throw InvalidChain("duplicate edge " + pair_name(spec, e.u, e.v));
      given(e.u, e.v) = e.w;
      explicit_entry(e.u, e.v) = 1;
      if (e.u != e.v && !explicit_entry(e.v, e.u)) given(e.v, e.u) = e.w;
    } else {
      if (!(e.p_uv >= 0.0) || !(e.p_vu >= 0.0) || !std::isfinite(e.p_uv) || !std::isfinite(e.p_vu)) {
        throw InvalidChain("negative rate on " + pair_name(spec, e.u, e.v));
      }
      if (explicit_entry(e.u, e.v)) throw InvalidChain("duplicate edge " + pair_name(spec, e.u, e.v));
      explicit_entry(e.u, e.v) = 1;
      given(e.u, e.v) = e.p_uv;
      if (e.u != e.v) {
        explicit_entry(e.v, e.u) = 1;
        given(e.v, e.u) = e.p_vu;
      }
    }
    if (e.u != e.v) {
      const double len = e.length.value_or(1.0);
      lengths(e.u, e.v) = len;
      lengths(e.v, e.u) = len;
    }
  }

  for (int x = 0; x < n; ++x) {
    for (int y = x + 1; y < n; ++y) {
      if ((given(x, y) > 0.0) != (given(y, x) > 0.0)) {
        throw InvalidChain("asymmetric support on " + pair_name(spec, x, y));
      }
    }
  }

  Eigen::VectorXd m(n);
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);

  if (spec.measure) {
    if (static_cast<int>(spec.measure->size()) != n) {
      throw InvalidChain("measure has " + std::to_string(spec.measure->size()) + " entries for " +
                         std::to_string(n) + " vertices");
    }
    for (int x = 0; x < n; ++x) {
      const double v = (*spec.measure)[x];
      if (!(v > 0.0) || !std::isfinite(v)) throw InvalidChain("nonpositive measure at " + spec.labels[x]);
      m[x] = v;
    }
  }

  if (spec.mode == DescriptionMode::weights) {
    for (int x = 0; x < n; ++x) {
      for (int y = x + 1; y < n; ++y) {
        const double a = given(x, y), b = given(y, x);
        if (std::abs(a - b) > tol.reversibility * std::max(a, b)) {
          throw InvalidChain("reversibility violation: weights differ on " + pair_name(spec, x, y));
        }
      }
    }
    if (!spec.measure) {
      for (int x = 0; x < n; ++x) {
        double s = 0.0;
        for (int y = 0; y < n; ++y) {
          if (y != x) s += given(x, y);
        }
        if (!(s > 0.0)) throw InvalidChain("disconnected graph: vertex " + spec.labels[x] + " is isolated");
        m[x] = s;
      }
    }
    for (int x = 0; x < n; ++x) {
      for (int y = 0; y < n; ++y) P(x, y) = given(x, y) / m[x];
    }
  } else {
    P = given;
    if (!spec.measure) {
      // Reversible measure along a BFS tree; reversibility is validated below.
      std::vector<char> seen(n, 0);
      m.setZero();
      m[0] = 1.0;
      seen[0] = 1;
      std::queue<int> q;
      q.push(0);
      while (!q.empty()) {
        const int x = q.front();
        q.pop();
        for (int y = 0; y < n; ++y) {
          if (y != x && P(x, y) > 0.0 && !seen[y]) {
            m[y] = m[x] * P(x, y) / P(y, x);
            seen[y] = 1;
            q.push(y);
          }
        }
      }
      for (int x = 0; x < n; ++x) {
        if (!seen[x]) throw InvalidChain("disconnected graph: vertex " + spec.labels[x] + " is unreachable");
      }
    }
  }

  const double total = m.sum();
  m /= total;
  if (std::abs(m.sum() - 1.0) > tol.mass_sum) throw InvalidChain("measure does not normalize");

  for (int x = 0; x < n; ++x) {
    for (int y = x + 1; y < n; ++y) {
      const double a = m[x] * P(x, y), b = m[y] * P(y, x);
      if (std::abs(a - b) > tol.reversibility * std::max(a, b)) {
        std::ostringstream msg;
        msg << "reversibility violation on " << pair_name(spec, x, y) << ": m(x)P(x,y)=" << a
            << " vs m(y)P(y,x)=" << b;
        throw InvalidChain(msg.str());
      }
    }
  }

  MarkovChain chain;
  chain.labels_ = spec.labels;
  chain.kernel_ = P;
  chain.lengths_ = lengths;
  chain.measure_ = m;
  chain.degree_ = Eigen::VectorXd::Zero(n);
  chain.adjacency_.assign(n, {});
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (y == x || P(x, y) <= 0.0) continue;
      if (!(lengths(x, y) > 0.0)) lengths(x, y) = lengths(y, x) = 1.0;
      chain.adjacency_[x].push_back({y, P(x, y), lengths(x, y)});
      chain.degree_[x] += P(x, y);
      if (x < y) chain.edges_.push_back({x, y, lengths(x, y)});
    }
  }
  chain.lengths_ = lengths;
  chain.dist_ = all_pairs_distances(chain.adjacency_);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (!std::isfinite(chain.dist_(x, y))) {
        throw InvalidChain("disconnected graph: no path between " + spec.labels[x] + " and " + spec.labels[y]);
      }
    }
  }
  chain.description_ = spec;
  return chain;
}

// ---------------------------------------------------------------------------

VertexSubset::VertexSubset(const MarkovChain& chain, const std::vector<int>& members)
    : flags_(chain.size(), 0) {
  for (int x : members) {
    if (x < 0 || x >= chain.size()) throw PreconditionError("subset member out of range");
    flags_[x] = 1;
  }
  for (int x = 0; x < chain.size(); ++x) {
    if (flags_[x]) mass_ += chain.mass(x);
  }
}

VertexSubset VertexSubset::from_mask(const MarkovChain& chain, std::uint64_t mask) {
  std::vector<char> flags(chain.size(), 0);
  for (int x = 0; x < chain.size() && x < 64; ++x) flags[x] = static_cast<char>((mask >> x) & 1U);
  return from_flags(chain, std::move(flags));
}

VertexSubset VertexSubset::from_flags(const MarkovChain& chain, std::vector<char> flags) {
  if (static_cast<int>(flags.size()) != chain.size()) throw PreconditionError("subset size mismatch");
  VertexSubset s;
  s.flags_ = std::move(flags);
  for (int x = 0; x < chain.size(); ++x) {
    if (s.flags_[x]) s.mass_ += chain.mass(x);
  }
  return s;
}

int VertexSubset::count() const {
  return static_cast<int>(std::count(flags_.begin(), flags_.end(), 1));
}

std::vector<int> VertexSubset::members() const {
  std::vector<int> out;
  for (int x = 0; x < universe_size(); ++x) {
    if (flags_[x]) out.push_back(x);
  }
  return out;
}

std::uint64_t VertexSubset::mask() const {
  if (universe_size() > 64) throw EnumerationLimit("subset masks need at most 64 vertices");
  std::uint64_t m = 0;
  for (int x = 0; x < universe_size(); ++x) {
    if (flags_[x]) m |= std::uint64_t{1} << x;
  }
  return m;
}

VertexSubset VertexSubset::complement(const MarkovChain& chain) const {
  std::vector<char> flags(flags_.size());
  for (std::size_t i = 0; i < flags_.size(); ++i) flags[i] = flags_[i] ? 0 : 1;
  return from_flags(chain, std::move(flags));
}

CutPartition make_cut(const MarkovChain& chain, const VertexSubset& X, const VertexSubset& K,
                      const VertexSubset& Y) {
  const int n = chain.size();
  if (X.universe_size() != n || K.universe_size() != n || Y.universe_size() != n) {
    throw PreconditionError("cut parts must be subsets of the chain's vertex set");
  }
  if (K.empty()) throw PreconditionError("cut set K must be nonempty");
  for (int x = 0; x < n; ++x) {
    const int hits = X.contains(x) + K.contains(x) + Y.contains(x);
    if (hits != 1) {
      throw PreconditionError("X, K, Y must partition the vertex set (vertex " + chain.labels()[x] + ")");
    }
  }
  for (const auto& e : chain.edges()) {
    if ((X.contains(e.x) && Y.contains(e.y)) || (Y.contains(e.x) && X.contains(e.y))) {
      throw PreconditionError("edge between X and Y: " + chain.labels()[e.x] + " - " + chain.labels()[e.y]);
    }
  }
  return {X, K, Y};
}

// ---------------------------------------------------------------------------

VertexFunction laplacian(const MarkovChain& chain, const VertexFunction& f) {
  const int n = chain.size();
  VertexFunction out = VertexFunction::Zero(n);
  for (int x = 0; x < n; ++x) {
    double s = 0.0;
    for (const auto& nb : chain.neighbors(x)) s += nb.rate * (f[nb.vertex] - f[x]);
    out[x] = s;
  }
  return out;
}

double inner(const MarkovChain& chain, const VertexFunction& f, const VertexFunction& g) {
  return (chain.measure().array() * f.array() * g.array()).sum();
}

double dirichlet_form(const MarkovChain& chain, const VertexFunction& f, const VertexFunction& g) {
  return -inner(chain, laplacian(chain, f), g);
}

double energy(const MarkovChain& chain, const VertexFunction& f) {
  double s = 0.0;
  for (const auto& e : chain.edges()) {
    const double d = f[e.y] - f[e.x];
    s += chain.mass(e.x) * chain.rate(e.x, e.y) * d * d;
  }
  return s;
}

Gradients gradients(const MarkovChain& chain, const VertexFunction& f) {
  const int n = chain.size();
  Gradients g;
  g.grad_abs = VertexFunction::Zero(n);
  g.grad_minus = VertexFunction::Zero(n);
  for (int x = 0; x < n; ++x) {
    for (const auto& nb : chain.neighbors(x)) {
      const double diff = f[nb.vertex] - f[x];
      const double d = chain.dist(x, nb.vertex);
      g.grad_abs[x] = std::max(g.grad_abs[x], std::abs(diff) / d);
      g.grad_minus[x] = std::max(g.grad_minus[x], std::max(-diff, 0.0) / d);
    }
  }
  g.lip = n > 0 ? g.grad_abs.maxCoeff() : 0.0;
  return g;
}

double lipschitz_constant(const MarkovChain& chain, const VertexFunction& f) {
  double lip = 0.0;
  for (const auto& e : chain.edges()) {
    lip = std::max(lip, std::abs(f[e.y] - f[e.x]) / chain.dist(e.x, e.y));
  }
  return lip;
}

bool is_lipschitz(const MarkovChain& chain, const VertexFunction& f, double tol) {
  return lipschitz_constant(chain, f) <= 1.0 + tol;
}

Eigen::MatrixXd heat_operator(const MarkovChain& chain, double t) {
  if (!(t >= 0.0)) throw PreconditionError("heat semigroup needs t >= 0");
  if (t == 0.0) return Eigen::MatrixXd::Identity(chain.size(), chain.size());
  const Eigen::MatrixXd tL = t * chain.generator();
  return tL.exp();
}

VertexFunction heat_apply(const MarkovChain& chain, const VertexFunction& f, double t) {
  if (t == 0.0) return f;
  return heat_operator(chain, t) * f;
}

ChainConstants chain_constants(const MarkovChain& chain) {
  ChainConstants c;
  c.p0 = std::numeric_limits<double>::infinity();
  for (const auto& e : chain.edges()) {
    const double d = chain.dist(e.x, e.y);
    c.p0 = std::min({c.p0, chain.rate(e.x, e.y) * d * d, chain.rate(e.y, e.x) * d * d});
  }
  if (chain.edges().empty()) c.p0 = 0.0;
  for (int x = 0; x < chain.size(); ++x) c.deg_max = std::max(c.deg_max, chain.degree(x));
  c.diam = chain.distances().maxCoeff();
  return c;
}

}  // namespace curvlab
