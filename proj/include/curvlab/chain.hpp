#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace curvlab {

/// One real value per vertex.
using VertexFunction = Eigen::VectorXd;

/// Numerical tolerances shared by the chain-level operations.
struct Tolerances {
  double reversibility = 1e-10;
  double mass_sum = 1e-10;
  double lipschitz = 1e-9;
  double expm = 1e-12;
};

enum class DescriptionMode { kernel, weights };

/// One line of a graph description. In weights mode `w` is the symmetric edge
/// weight m(x)P(x,y); in kernel mode `p_uv`/`p_vu` are the two rates. A
/// kernel-mode entry with u == v sets the holding rate P(u,u).
struct EdgeDescription {
  int u = 0;
  int v = 0;
  double w = 0.0;
  double p_uv = 0.0;
  double p_vu = 0.0;
  std::optional<double> length;
};

/// In-memory form of the on-disk graph description.
struct GraphDescription {
  DescriptionMode mode = DescriptionMode::weights;
  std::vector<std::string> labels;
  std::vector<EdgeDescription> edges;
  std::optional<std::vector<double>> measure;
};

struct Neighbor {
  int vertex;
  double rate;    // P(x, vertex)
  double length;  // edge length of the support pair
};

struct Edge {
  int x;
  int y;
  double length;
};

/// A finite, connected, reversible metric Markov chain. Immutable once built.
class MarkovChain {
 public:
  int size() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  int index_of(const std::string& label) const;

  /// Dense kernel including the holding rates on the diagonal.
  const Eigen::MatrixXd& kernel() const { return kernel_; }
  double rate(int x, int y) const { return kernel_(x, y); }
  /// Support neighbours y != x.
  const std::vector<Neighbor>& neighbors(int x) const { return adjacency_[x]; }
  bool adjacent(int x, int y) const { return x != y && kernel_(x, y) > 0.0; }
  /// Unordered support pairs with x < y.
  const std::vector<Edge>& edges() const { return edges_; }
  double edge_length(int x, int y) const;

  const Eigen::VectorXd& measure() const { return measure_; }
  double mass(int x) const { return measure_[x]; }

  /// All-pairs path metric generated by the edge lengths.
  const Eigen::MatrixXd& distances() const { return dist_; }
  double dist(int x, int y) const { return dist_(x, y); }

  /// Total jump rate sum_{y != x} P(x,y).
  double degree(int x) const { return degree_[x]; }

  /// Generator matrix L with L(x,y) = P(x,y) off the diagonal and rows summing to 0.
  Eigen::MatrixXd generator() const;

  /// Row sums equal 1 and P(x,x) >= 1/2 everywhere.
  bool is_lazy(double tol = 1e-12) const;
  /// Every support pair has unit length.
  bool has_combinatorial_distance(double tol = 1e-12) const;

  const GraphDescription& description() const { return description_; }

 private:
  friend MarkovChain build_chain(const GraphDescription&, const Tolerances&);

  std::vector<std::string> labels_;
  Eigen::MatrixXd kernel_;
  Eigen::MatrixXd lengths_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<Edge> edges_;
  Eigen::VectorXd measure_;
  Eigen::VectorXd degree_;
  Eigen::MatrixXd dist_;
  GraphDescription description_;
};

/// Validates a description and builds the chain. The measure is always
/// rescaled to a probability; the kernel is left untouched.
MarkovChain build_chain(const GraphDescription& spec, const Tolerances& tol = {});

/// A set of vertices together with its m-mass.
class VertexSubset {
 public:
  VertexSubset() = default;
  VertexSubset(const MarkovChain& chain, const std::vector<int>& members);
  static VertexSubset from_mask(const MarkovChain& chain, std::uint64_t mask);
  static VertexSubset from_flags(const MarkovChain& chain, std::vector<char> flags);

  bool contains(int x) const { return flags_[x] != 0; }
  int count() const;
  bool empty() const { return count() == 0; }
  int universe_size() const { return static_cast<int>(flags_.size()); }
  double mass() const { return mass_; }
  std::vector<int> members() const;
  const std::vector<char>& flags() const { return flags_; }
  std::uint64_t mask() const;
  VertexSubset complement(const MarkovChain& chain) const;

  friend bool operator==(const VertexSubset& a, const VertexSubset& b) {
    return a.flags_ == b.flags_;
  }

 private:
  std::vector<char> flags_;
  double mass_ = 0.0;
};

/// Disjoint cover V = X u K u Y with no X-Y support pair and K nonempty.
struct CutPartition {
  VertexSubset X;
  VertexSubset K;
  VertexSubset Y;
};

CutPartition make_cut(const MarkovChain& chain, const VertexSubset& X, const VertexSubset& K,
                      const VertexSubset& Y);

// ---------------------------------------------------------------------------
// Operators on vertex functions

/// (Delta f)(x) = sum_y P(x,y) (f(y) - f(x)).
VertexFunction laplacian(const MarkovChain& chain, const VertexFunction& f);

/// <f, g>_m
double inner(const MarkovChain& chain, const VertexFunction& f, const VertexFunction& g);

/// E(f,g) = -<Delta f, g>_m.
double dirichlet_form(const MarkovChain& chain, const VertexFunction& f, const VertexFunction& g);

/// E(f,f) from the edge sum 1/2 sum_{x,y} m(x)P(x,y)(f(y)-f(x))^2.
double energy(const MarkovChain& chain, const VertexFunction& f);

struct Gradients {
  double lip = 0.0;
  VertexFunction grad_abs;
  VertexFunction grad_minus;
};

Gradients gradients(const MarkovChain& chain, const VertexFunction& f);
double lipschitz_constant(const MarkovChain& chain, const VertexFunction& f);
bool is_lipschitz(const MarkovChain& chain, const VertexFunction& f, double tol = 1e-9);

/// exp(t L) as a dense matrix (scaling and squaring with a Pade approximant).
Eigen::MatrixXd heat_operator(const MarkovChain& chain, double t);
/// P_t f = exp(t Delta) f.
VertexFunction heat_apply(const MarkovChain& chain, const VertexFunction& f, double t);

struct ChainConstants {
  double p0 = 0.0;       // min over support pairs of P(x,y) d(x,y)^2
  double deg_max = 0.0;  // max_x sum_{y != x} P(x,y)
  double diam = 0.0;     // max_{x,y} D(x,y)
};

ChainConstants chain_constants(const MarkovChain& chain);

}  // namespace curvlab
