#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "curvlab/transport.hpp"
#include "fixtures.hpp"

using namespace curvlab;

namespace {

// W1 on a path: integral of |F_mu - F_nu|.
double path_w1(const Eigen::VectorXd& mu, const Eigen::VectorXd& nu) {
  double F = 0, G = 0, s = 0;
  for (Eigen::Index i = 0; i + 1 < mu.size(); ++i) {
    F += mu[i];
    G += nu[i];
    s += std::abs(F - G);
  }
  return s;
}

// W_inf on a path: sup over quantile levels of |F^{-1} - G^{-1}|.
double path_winf(const Eigen::VectorXd& mu, const Eigen::VectorXd& nu) {
  std::vector<double> cuts{0.0};
  double F = 0, G = 0;
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    F += mu[i];
    G += nu[i];
    cuts.push_back(F);
    cuts.push_back(G);
  }
  std::sort(cuts.begin(), cuts.end());
  auto quantile = [](const Eigen::VectorXd& p, double u) {
    double acc = 0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      acc += p[i];
      if (acc > u) return static_cast<int>(i);
    }
    return static_cast<int>(p.size() - 1);
  };
  double best = 0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    if (cuts[k + 1] - cuts[k] < 1e-14) continue;
    const double u = 0.5 * (cuts[k] + cuts[k + 1]);
    best = std::max(best, static_cast<double>(std::abs(quantile(mu, u) - quantile(nu, u))));
  }
  return best;
}

Eigen::VectorXd random_prob(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  Eigen::VectorXd p(n);
  for (int i = 0; i < n; ++i) p[i] = u(rng) < 0.25 ? 0.0 : u(rng);
  if (p.sum() == 0) p[0] = 1;
  return p / p.sum();
}

}  // namespace

TEST(Transport, SpecExamples) {
  const auto p3 = fx::p3();
  const Eigen::VectorXd da = fx::vec({1, 0, 0}), dc = fx::vec({0, 0, 1});
  EXPECT_NEAR(w1(p3, da, dc).value, 2.0, 1e-12);
  EXPECT_NEAR(winf(p3, da, dc).value, 2.0, 1e-12);
  EXPECT_NEAR(w1(p3, da, da).value, 0.0, 1e-12);
  EXPECT_NEAR(winf(p3, dc, dc).value, 0.0, 1e-12);
  const Eigen::VectorXd mu = fx::vec({0.5, 0.5, 0}), nu = fx::vec({0, 0.5, 0.5});
  EXPECT_NEAR(w1(p3, mu, nu).value, 1.0, 1e-12);
  EXPECT_NEAR(winf(p3, mu, nu).value, 1.0, 1e-12);
}

TEST(Transport, PathOracles) {
  std::mt19937_64 rng(7);
  const auto c = fx::chain(make_path(7));
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::VectorXd mu = random_prob(7, rng), nu = random_prob(7, rng);
    const W1Result r = w1(c, mu, nu);
    EXPECT_NEAR(r.value, path_w1(mu, nu), 1e-10);
    EXPECT_TRUE(r.plan.is_valid());
    EXPECT_NEAR(r.plan.cost(c.distances()), r.value, 1e-10);
    const WinfResult s = winf(c, mu, nu);
    EXPECT_NEAR(s.value, path_winf(mu, nu), 1e-12);
    EXPECT_LE(s.plan.max_displacement(c.distances()), s.value + 1e-12);
  }
}

TEST(Transport, ThresholdHallViolator) {
  const auto p3 = fx::p3();
  const auto r = threshold_feasible(p3.distances(), fx::vec({1, 0, 0}), fx::vec({0, 0, 1}), 1.0);
  EXPECT_FALSE(r.feasible);
  EXPECT_FALSE(r.hall_violator.empty());
  EXPECT_GT(r.violator_mass, r.neighbourhood_mass);
}
