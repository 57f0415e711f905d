#pragma once

#include <cstdint>
#include <vector>

#include "curvlab/chain.hpp"

namespace curvlab {

/// |dW| = sum_{x in W, y not in W} P(x,y) m(x) d(x,y).
double boundary_measure(const MarkovChain& chain, const VertexSubset& W);

/// -E(1_W, d(W, .)); equals boundary_measure under the combinatorial distance.
double boundary_measure_dirichlet(const MarkovChain& chain, const VertexSubset& W);

/// B together with its outer vertex boundary.
VertexSubset closure(const MarkovChain& chain, const VertexSubset& B);

/// max_{x,y in W} D(x,y) in the ambient metric.
double subset_diameter(const MarkovChain& chain, const VertexSubset& W);

enum class CheegerWeight { plain, log, sqrtlog };

struct CheegerResult {
  double value = 0.0;
  VertexSubset witness;
};

/// Exhaustive inf over 0 < m(W) <= 1/2 of |dW| / weight(m(W)).
CheegerResult cheeger(const MarkovChain& chain, CheegerWeight weight, int max_vertices = 16);

enum class ObsMode { exact, heuristic };

struct ObsDiameter {
  double value = 0.0;
  VertexSubset A;
  VertexSubset B;
};

/// Answers observable-diameter queries for many eps from one enumeration of B.
class ObsDiameterTable {
 public:
  ObsDiameterTable(const MarkovChain& chain, ObsMode mode = ObsMode::exact, int max_vertices = 16);
  ObsDiameter query(double eps) const;
  ObsMode mode() const { return mode_; }

 private:
  struct Entry {
    double mass;  // min(m(A), m(cl B))
    double distance;
    std::vector<char> b;
  };
  const MarkovChain* chain_;
  ObsMode mode_;
  std::vector<Entry> entries_;   // sorted by mass, descending
  std::vector<std::size_t> best_;  // index of the largest distance within each prefix
};

/// sup d(A,B) over m(A) >= eps, m(cl B) >= eps.
ObsDiameter obs_diameter(const MarkovChain& chain, double eps, ObsMode mode = ObsMode::exact,
                         int max_vertices = 16);

struct ConcentrationProfile {
  /// conc[r] = max over m(A) >= 1/2 of m({x : d(x,A) > r}), r = 0, 1, ..., until it vanishes.
  std::vector<double> conc;
  std::vector<VertexSubset> witness;
  double at(int r) const { return r < static_cast<int>(conc.size()) ? conc[r] : 0.0; }
};

ConcentrationProfile concentration_profile(const MarkovChain& chain, int max_vertices = 16);

/// min over r >= 1 with conc(r) > 0 of -log(conc(r)) / r^2; +inf when the far mass vanishes at r = 1.
double gaussian_rho(const ConcentrationProfile& profile);

}  // namespace curvlab
