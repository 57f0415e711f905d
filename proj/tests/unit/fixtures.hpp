#pragma once

#include <cmath>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "curvlab/chain.hpp"
#include "curvlab/generators.hpp"
#include "curvlab/graph_io.hpp"

namespace fx {

using curvlab::MarkovChain;

inline MarkovChain chain(const curvlab::GraphSpec& s) { return curvlab::build_chain(s.description); }

inline MarkovChain t2() { return chain(curvlab::make_path(2)); }
inline MarkovChain p3() { return chain(curvlab::make_path(3)); }
inline MarkovChain c4() { return chain(curvlab::make_cycle(4)); }
inline MarkovChain lazy(const curvlab::GraphSpec& s) { return chain(curvlab::make_lazify(s)); }

inline MarkovChain kernel_chain(const std::vector<std::string>& labels,
                                const std::vector<std::tuple<int, int, double, double>>& edges,
                                std::vector<double> measure, bool fill_holding = false) {
  curvlab::GraphDescription d;
  d.mode = curvlab::DescriptionMode::kernel;
  d.labels = labels;
  for (auto [u, v, puv, pvu] : edges) {
    curvlab::EdgeDescription e;
    e.u = u;
    e.v = v;
    e.p_uv = puv;
    e.p_vu = pvu;
    d.edges.push_back(e);
  }
  if (fill_holding) {
    std::vector<double> out(labels.size(), 0.0);
    for (auto [u, v, puv, pvu] : edges) {
      out[u] += puv;
      out[v] += pvu;
    }
    for (std::size_t x = 0; x < out.size(); ++x) {
      curvlab::EdgeDescription e;
      e.u = e.v = static_cast<int>(x);
      e.p_uv = e.p_vu = 1.0 - out[x];
      if (e.p_uv > 0) d.edges.push_back(e);
    }
  }
  d.measure = std::move(measure);
  return curvlab::build_chain(d);
}

inline curvlab::VertexSubset subset(const MarkovChain& c, std::vector<int> members) {
  return curvlab::VertexSubset(c, members);
}

inline curvlab::VertexFunction vec(std::initializer_list<double> v) {
  curvlab::VertexFunction f(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double x : v) f[i++] = x;
  return f;
}

inline curvlab::VertexFunction random_function(int n, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  curvlab::VertexFunction f(n);
  for (int i = 0; i < n; ++i) f[i] = u(rng);
  return f;
}

}  // namespace fx
