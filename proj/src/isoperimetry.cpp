#include "curvlab/isoperimetry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "curvlab/errors.hpp"

namespace curvlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMassTol = 1e-12;

void check_enum(const MarkovChain& chain, int max_vertices, const char* what) {
  if (chain.size() > max_vertices || chain.size() > 62) {
    throw EnumerationLimit(std::string(what) + " enumerates 2^n subsets; n = " + std::to_string(chain.size()) +
                           " exceeds the cap of " + std::to_string(max_vertices));
  }
}

void require_proper(const MarkovChain& chain, const VertexSubset& W) {
  if (W.universe_size() != chain.size()) throw PreconditionError("subset does not match the chain");
  if (W.empty() || W.count() == chain.size()) throw PreconditionError("boundary measure needs a proper nonempty subset");
}

// d(., S) for a nonempty vertex set given by flags.
Eigen::VectorXd distance_to(const MarkovChain& chain, const std::vector<char>& flags) {
  const int n = chain.size();
  Eigen::VectorXd d = Eigen::VectorXd::Constant(n, kInf);
  for (int b = 0; b < n; ++b) {
    if (flags[b]) d = d.cwiseMin(chain.distances().col(b));
  }
  return d;
}

std::vector<char> mask_flags(std::uint64_t mask, int n) {
  std::vector<char> f(n);
  for (int i = 0; i < n; ++i) f[i] = static_cast<char>(mask >> i & 1U);
  return f;
}

double mass_of(const MarkovChain& chain, const std::vector<char>& flags) {
  double s = 0.0;
  for (int i = 0; i < chain.size(); ++i) {
    if (flags[i]) s += chain.mass(i);
  }
  return s;
}

std::vector<char> closure_flags(const MarkovChain& chain, const std::vector<char>& b) {
  std::vector<char> c = b;
  for (int x = 0; x < chain.size(); ++x) {
    if (!b[x]) continue;
    for (const auto& nb : chain.neighbors(x)) c[nb.vertex] = 1;
  }
  return c;
}

double boundary_flags(const MarkovChain& chain, const std::vector<char>& w) {
  double s = 0.0;
  for (const auto& e : chain.edges()) {
    if (w[e.x] == w[e.y]) continue;
    const int in = w[e.x] ? e.x : e.y;
    const int out = w[e.x] ? e.y : e.x;
    s += chain.rate(in, out) * chain.mass(in) * chain.dist(in, out);
  }
  return s;
}

}  // namespace

double boundary_measure(const MarkovChain& chain, const VertexSubset& W) {
  require_proper(chain, W);
  return boundary_flags(chain, W.flags());
}

double boundary_measure_dirichlet(const MarkovChain& chain, const VertexSubset& W) {
  require_proper(chain, W);
  VertexFunction ind(chain.size());
  for (int x = 0; x < chain.size(); ++x) ind[x] = W.contains(x) ? 1.0 : 0.0;
  return -dirichlet_form(chain, ind, distance_to(chain, W.flags()));
}

VertexSubset closure(const MarkovChain& chain, const VertexSubset& B) {
  return VertexSubset::from_flags(chain, closure_flags(chain, B.flags()));
}

double subset_diameter(const MarkovChain& chain, const VertexSubset& W) {
  const std::vector<int> mem = W.members();
  double d = 0.0;
  for (int x : mem) {
    for (int y : mem) d = std::max(d, chain.dist(x, y));
  }
  return d;
}

CheegerResult cheeger(const MarkovChain& chain, CheegerWeight weight, int max_vertices) {
  check_enum(chain, max_vertices, "cheeger");
  const int n = chain.size();
  if (n < 2) throw PreconditionError("cheeger constant needs at least two vertices");
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  CheegerResult best;
  best.value = kInf;
  std::uint64_t arg = 0;
  for (std::uint64_t mask = 1; mask < full; ++mask) {
    const std::vector<char> w = mask_flags(mask, n);
    const double mw = mass_of(chain, w);
    if (mw > 0.5 + kMassTol) continue;
    double denom = mw;
    if (weight == CheegerWeight::log) denom = -mw * std::log(mw);
    if (weight == CheegerWeight::sqrtlog) denom = mw * std::sqrt(std::log(1.0 / mw));
    const double v = boundary_flags(chain, w) / denom;
    if (v < best.value) {
      best.value = v;
      arg = mask;
    }
  }
  if (arg == 0) throw PreconditionError("no subset with mass at most 1/2");
  best.witness = VertexSubset::from_mask(chain, arg);
  return best;
}

ObsDiameterTable::ObsDiameterTable(const MarkovChain& chain, ObsMode mode, int max_vertices)
    : chain_(&chain), mode_(mode) {
  const int n = chain.size();
  std::vector<std::vector<char>> candidates;
  if (mode == ObsMode::exact) {
    check_enum(chain, max_vertices, "exact observable diameter");
    const std::uint64_t full = (std::uint64_t{1} << n) - 1;
    for (std::uint64_t mask = 1; mask <= full; ++mask) candidates.push_back(mask_flags(mask, n));
  } else {
    // metric balls and their complements
    for (int c = 0; c < n; ++c) {
      std::vector<double> radii(chain.distances().col(c).data(), chain.distances().col(c).data() + n);
      std::sort(radii.begin(), radii.end());
      radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
      for (double r : radii) {
        std::vector<char> ball(n), rest(n);
        bool any_rest = false;
        for (int x = 0; x < n; ++x) {
          ball[x] = chain.dist(c, x) <= r;
          rest[x] = !ball[x];
          any_rest = any_rest || rest[x];
        }
        candidates.push_back(ball);
        if (any_rest) candidates.push_back(rest);
      }
    }
  }
  for (const auto& b : candidates) {
    const double cap = mass_of(chain, closure_flags(chain, b));
    const Eigen::VectorXd d = distance_to(chain, b);
    std::vector<double> ts(d.data(), d.data() + n);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    for (double t : ts) {
      double far = 0.0;
      for (int x = 0; x < n; ++x) {
        if (d[x] >= t) far += chain.mass(x);
      }
      entries_.push_back({std::min(cap, far), t, b});
    }
  }
  std::stable_sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) { return a.mass > b.mass; });
  best_.resize(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    best_[i] = (i > 0 && entries_[best_[i - 1]].distance >= entries_[i].distance) ? best_[i - 1] : i;
  }
}

ObsDiameter ObsDiameterTable::query(double eps) const {
  if (!(eps > 0.0 && eps <= 1.0)) throw PreconditionError("observable diameter needs 0 < eps <= 1");
  // entries with mass >= eps form a prefix
  auto it = std::partition_point(entries_.begin(), entries_.end(),
                                 [&](const Entry& e) { return e.mass >= eps - kMassTol; });
  ObsDiameter out;
  if (it == entries_.begin()) {
    out.value = 0.0;
    out.A = out.B = VertexSubset::from_flags(*chain_, std::vector<char>(chain_->size(), 1));
    return out;
  }
  const Entry& e = entries_[best_[static_cast<std::size_t>(it - entries_.begin()) - 1]];
  out.value = e.distance;
  out.B = VertexSubset::from_flags(*chain_, e.b);
  const Eigen::VectorXd d = distance_to(*chain_, e.b);
  std::vector<char> a(chain_->size());
  for (int x = 0; x < chain_->size(); ++x) a[x] = d[x] >= e.distance;
  out.A = VertexSubset::from_flags(*chain_, a);
  return out;
}

ObsDiameter obs_diameter(const MarkovChain& chain, double eps, ObsMode mode, int max_vertices) {
  return ObsDiameterTable(chain, mode, max_vertices).query(eps);
}

ConcentrationProfile concentration_profile(const MarkovChain& chain, int max_vertices) {
  check_enum(chain, max_vertices, "concentration profile");
  const int n = chain.size();
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  const int rmax = static_cast<int>(std::ceil(chain.distances().maxCoeff())) + 1;
  ConcentrationProfile prof;
  prof.conc.assign(rmax + 1, 0.0);
  std::vector<std::uint64_t> arg(rmax + 1, full);
  for (std::uint64_t mask = 1; mask <= full; ++mask) {
    const std::vector<char> a = mask_flags(mask, n);
    if (mass_of(chain, a) < 0.5 - kMassTol) continue;
    const Eigen::VectorXd d = distance_to(chain, a);
    for (int r = 0; r <= rmax; ++r) {
      double far = 0.0;
      for (int x = 0; x < n; ++x) {
        if (d[x] > r + 1e-12) far += chain.mass(x);
      }
      if (far > prof.conc[r]) {
        prof.conc[r] = far;
        arg[r] = mask;
      }
    }
  }
  while (prof.conc.size() > 1 && prof.conc.back() == 0.0 && prof.conc[prof.conc.size() - 2] == 0.0) {
    prof.conc.pop_back();
  }
  for (std::size_t r = 0; r < prof.conc.size(); ++r) prof.witness.push_back(VertexSubset::from_mask(chain, arg[r]));
  return prof;
}

double gaussian_rho(const ConcentrationProfile& profile) {
  double rho = kInf;
  for (std::size_t r = 1; r < profile.conc.size(); ++r) {
    if (profile.conc[r] > 0.0) {
      rho = std::min(rho, -std::log(profile.conc[r]) / static_cast<double>(r * r));
    }
  }
  return rho;
}

}  // namespace curvlab
