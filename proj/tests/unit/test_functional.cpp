#include <gtest/gtest.h>

#include <random>

#include "curvlab/errors.hpp"
#include "curvlab/functional.hpp"
#include "curvlab/spectral.hpp"
#include "fixtures.hpp"

using namespace curvlab;

namespace {

// E(f, log f) / Ent(f) with f normalised in L1(m), written out by hand.
double mod_ratio_oracle(const MarkovChain& c, VertexFunction f) {
  f /= f.dot(c.measure());
  double e = 0, ent = 0;
  for (int x = 0; x < c.size(); ++x) {
    ent += c.mass(x) * f[x] * std::log(f[x]);
    for (int y = 0; y < c.size(); ++y) {
      if (x != y) e += 0.5 * c.mass(x) * c.rate(x, y) * (f[y] - f[x]) * (std::log(f[y]) - std::log(f[x]));
    }
  }
  return e / ent;
}

OptimizerConfig quick() {
  OptimizerConfig o;
  o.restarts = 16;
  return o;
}

}  // namespace

TEST(Functional, Entropy) {
  const auto t2 = fx::t2();
  EXPECT_NEAR(entropy(t2, fx::vec({3, 3})), 0.0, 1e-15);
  EXPECT_NEAR(entropy(t2, fx::vec({1.8, 0.2})), 0.5 * (1.8 * std::log(1.8) + 0.2 * std::log(0.2)), 1e-12);
  EXPECT_NEAR(entropy(t2, fx::vec({1.8, 0.2})), 0.3680642, 1e-7);
}

TEST(Functional, TwoPointConstants) {
  const auto t2 = fx::t2();
  const auto a = alpha_logsob(t2);
  EXPECT_TRUE(a.grid_certified);
  EXPECT_NEAR(a.value, 1.0, 1e-6);
  const auto g = alpha_logsob_grid(t2);
  EXPECT_NEAR(a.value, g.value, 1e-6);
  const auto m = alpha_mod(t2);
  EXPECT_LE(m.value, 4.0 + 1e-9);
  EXPECT_GE(m.value, 4.0 * g.value - 1e-6);
  EXPECT_NEAR(m.limit_value, 4.0, 1e-12);
  EXPECT_NEAR(mixing_time(t2).tau, 0.5, 1e-6);
}

TEST(Functional, ModRatioOracle) {
  std::mt19937_64 rng(3);
  for (double eps : {1e-1, 1e-3}) {
    const auto c = counterexample_chain(eps);
    for (int i = 0; i < 20; ++i) {
      const VertexFunction f = fx::random_function(3, rng, 0.1, 3.0);
      EXPECT_NEAR(mod_ratio(c, f), mod_ratio_oracle(c, f), 1e-10 * std::abs(mod_ratio_oracle(c, f)));
    }
  }
}

TEST(Functional, ModRatioSmallPerturbation) {
  const auto t2 = fx::t2();
  const double r = mod_ratio(t2, fx::vec({1 + 1e-4, 1 - 1e-4}));
  EXPECT_NEAR(r, 2.0 * spectrum(t2).lambda, 1e-6);
}

TEST(Functional, EulerLagrange) {
  const auto t2 = fx::t2();
  EXPECT_NEAR(el_residual(t2, fx::vec({1, 1}), 0.7), 0.0, 1e-14);
  const auto a = alpha_logsob(t2);
  EXPECT_LE(el_residual(t2, a.witness, a.value), 1e-5);
  EXPECT_GT(el_residual(t2, fx::vec({1.7, 0.3}), a.value), 1e-6);
}

TEST(Functional, Sandwich) {
  for (const auto& s : {make_path(3), make_random_birth_death(3, 4, true), make_cycle(3)}) {
    const auto c = fx::chain(s);
    const double lam = spectrum(c).lambda;
    const auto a = alpha_logsob(c, quick());
    const auto m = alpha_mod(c, quick());
    EXPECT_LE(a.value, lam / 2 + 1e-9);
    EXPECT_LE(m.value, 2 * lam + 1e-9);
    EXPECT_GE(m.value, 4 * a.value - 1e-6);
  }
}

TEST(Functional, CounterexampleChain) {
  const auto c = counterexample_chain(0.1);
  EXPECT_NEAR(c.rate(0, 1), 1.0, 1e-12);
  EXPECT_NEAR(c.rate(2, 1), 20.0, 1e-12);
  EXPECT_THROW(counterexample_chain(1.5), PreconditionError);
  double prev = 1e300;
  for (int k = 1; k <= 8; ++k) {
    const double r = counterexample_ratio(std::pow(10.0, -k));
    EXPECT_LT(r, prev);
    prev = r;
  }
}
