#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "curvlab/graph_io.hpp"

namespace curvlab {

/// Path a-b-c-... with rate p per directed adjacent pair; m uniform.
GraphSpec make_path(int n, double p = 1.0);
/// Cycle with rate p to each neighbour and holding 1 - 2p when that is positive.
GraphSpec make_cycle(int n, double p = 0.5);
/// K_n with rate p per neighbour (default 1/(n-1)).
GraphSpec make_complete(int n, double p = 0.0);
/// {0,1}^d with rate 1/d per neighbour.
GraphSpec make_hypercube(int d);
/// up[i] = P(i, i+1), down[i] = P(i+1, i). With `lazy`, holding rates fill
/// each row to 1 (requires row sums <= 1/2).
GraphSpec make_birth_death(const std::vector<double>& up, const std::vector<double>& down, bool lazy);
/// Seeded lazy birth-death chain with up + down <= 1/2 at every vertex. With
/// `monotone`, up rates are nonincreasing and down rates nondecreasing.
GraphSpec make_random_birth_death(int n, std::uint64_t seed, bool monotone = true);
/// Cartesian product with rate-sum semantics and product measure.
GraphSpec make_product(const GraphSpec& a, const GraphSpec& b);
/// 1/2 I + 1/2 row-normalised P, with m proportional to m Deg.
GraphSpec make_lazify(const GraphSpec& g);
/// Three-vertex chain: w(1,2) = 10, w(2,3) = 1, raw measure (1/eps, 1, 1/20).
GraphSpec make_counterexample(double eps);
/// K_{2n} x K_{2n} plus K_n, joined by all edges between (1, i) and the K_n
/// vertices; rate p on every edge, m uniform.
GraphSpec make_counterexample_combinatorial(int n, double p = 1.0);
/// Connected G(n, prob) with rate 1/(n-1) per edge, resampled until connected.
GraphSpec make_erdos_renyi(int n, double prob, std::uint64_t seed);

/// Dispatch by family name with string parameters, as used by the CLI.
/// `inputs` holds previously generated specs for product and lazify.
GraphSpec generate(const std::string& family, const std::map<std::string, std::string>& params,
                   std::uint64_t seed, const std::vector<GraphSpec>& inputs = {});

}  // namespace curvlab
