#include <gtest/gtest.h>

#include <random>

#include "curvlab/errors.hpp"
#include "curvlab/separation.hpp"
#include "curvlab/spectral.hpp"
#include "fixtures.hpp"

using namespace curvlab;

namespace {

CutPartition p3_cut(const MarkovChain& c) {
  return make_cut(c, fx::subset(c, {0}), fx::subset(c, {1}), fx::subset(c, {2}));
}

}  // namespace

TEST(Separation, Extensions) {
  const auto p3 = fx::p3();
  const auto K = fx::subset(p3, {1});
  const VertexFunction hi = lipschitz_extension(p3, K, fx::vec({0, 0, 0}), Extension::min);
  const VertexFunction lo = lipschitz_extension(p3, K, fx::vec({0, 0, 0}), Extension::max);
  EXPECT_DOUBLE_EQ(hi[0], 1.0);
  EXPECT_DOUBLE_EQ(lo[0], -1.0);
  const auto ends = fx::subset(p3, {0, 2});
  EXPECT_THROW(lipschitz_extension(p3, ends, fx::vec({0, 0, 5}), Extension::min), PreconditionError);
}

TEST(Separation, SymmetricPath) {
  const auto p3 = fx::p3();
  for (auto step : {SeparationStep::semigroup, SeparationStep::euler}) {
    SeparationConfig cfg;
    cfg.step = step;
    const auto sol = separation_solve(p3, p3_cut(p3), cfg);
    ASSERT_TRUE(sol.converged);
    EXPECT_NEAR(sol.f[0], -1.0, 1e-12);
    EXPECT_NEAR(sol.f[1], 0.0, 1e-12);
    EXPECT_NEAR(sol.f[2], 1.0, 1e-12);
    EXPECT_NEAR(sol.C, 0.0, 1e-12);
    EXPECT_TRUE(verify_separation(p3, p3_cut(p3), sol).all());
  }
}

TEST(Separation, AsymmetricPath) {
  // P(b,a) = 2, P(b,c) = 1; m solves detailed balance.
  const auto c = fx::kernel_chain({"a", "b", "c"}, {{0, 1, 1.0, 2.0}, {1, 2, 1.0, 1.0}}, {2, 1, 1});
  const auto sol = separation_solve(c, p3_cut(c));
  ASSERT_TRUE(sol.converged);
  EXPECT_NEAR(sol.f[0], -1.0, 1e-12);
  EXPECT_NEAR(sol.f[2], 1.0, 1e-12);
  EXPECT_NEAR(sol.C, -1.0, 1e-12);
  const auto v = verify_separation(c, p3_cut(c), sol);
  EXPECT_TRUE(v.all());
  EXPECT_GE(v.moreover_x, -1e-12);
  EXPECT_GE(v.moreover_y, -1e-12);
}

TEST(Separation, BirthDeathMiddlePair) {
  const auto c = fx::chain(make_random_birth_death(6, 3, true));
  const auto cut = make_cut(c, fx::subset(c, {0, 1}), fx::subset(c, {2, 3}), fx::subset(c, {4, 5}));
  const auto sol = separation_solve(c, cut);
  ASSERT_TRUE(sol.converged) << sol.message;
  EXPECT_LE(sol.residual, 1e-9);
  EXPECT_TRUE(verify_separation(c, cut, sol).all());
}

TEST(Separation, NegativeCurvatureRejected) {
  // Two triangles joined by a bridge: the bridge has negative curvature.
  const auto c = fx::kernel_chain({"a", "b", "c", "d", "e", "f"},
                                  {{0, 1, 1, 1}, {1, 2, 1, 1}, {0, 2, 1, 1}, {2, 3, 1, 1}, {3, 4, 1, 1}, {4, 5, 1, 1}, {3, 5, 1, 1}},
                                  {1, 1, 1, 1, 1, 1});
  const auto cut = make_cut(c, fx::subset(c, {0, 1}), fx::subset(c, {2, 3}), fx::subset(c, {4, 5}));
  EXPECT_THROW(separation_solve(c, cut), PreconditionError);
}

TEST(Separation, PhiProfile) {
  const PhiProfile phi = build_phi(1.0, 1.0, 1.0);
  EXPECT_EQ(phi.kind(), PhiCase::exp_positive);
  const double target = -1.0 / (std::exp(2.0) - 1.0);
  for (double s : {0.0, 0.25, 0.5, 0.75, 1.0}) EXPECT_NEAR(phi.drift(s), target, 1e-12) << s;
  EXPECT_NEAR(phi.drift_bound(), target, 1e-12);
  const PhiProfile q = build_phi(0.0, 1.0, 1.0);
  EXPECT_EQ(q.kind(), PhiCase::quadratic);
  for (double s : {0.0, 0.5, 1.0}) EXPECT_NEAR(q.drift(s), -0.5, 1e-12);
  EXPECT_EQ(build_phi(-10.0, 1.0, 1.0).kind(), PhiCase::identity);
  for (const PhiProfile& p : {phi, q, build_phi(3.0, 0.5, 2.0)}) {
    EXPECT_NEAR(p.d1(-1e-14), p.d1(1e-14), 1e-12);
    EXPECT_NEAR(p.d1(p.R() - 1e-14), p.d1(p.R() + 1e-14), 1e-12);
    EXPECT_NEAR(p.d1(p.R()), 0.0, 1e-12);
    EXPECT_NEAR(p.value(0.0), 0.0, 1e-15);
    EXPECT_LE(p.d2(0.5 * p.R()), 0.0);
  }
}

TEST(Separation, ChainRuleRandom) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(0, 1);
  const std::vector<MarkovChain> chains{fx::p3(), fx::c4(), fx::chain(make_hypercube(3)),
                                        fx::chain(make_random_birth_death(6, 2, true))};
  int evaluated = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto& c = chains[trial % chains.size()];
    const double R = 0.5 + 2 * U(rng);
    const PhiProfile phi = build_phi(4 * U(rng) - 2, chain_constants(c).p0, R);
    // u >= 0 so the concavity hypothesis holds on every realised interval.
    const VertexFunction u = fx::random_function(c.size(), rng, 0.0, 1.2 * R);
    std::vector<char> flags(c.size());
    for (auto& f : flags) f = U(rng) < 0.6;
    flags[0] = 1;
    const auto W = VertexSubset::from_flags(c, flags);
    EXPECT_GE(chain_rule_margin(c, u, W, phi), -1e-10);
    ++evaluated;
  }
  EXPECT_EQ(evaluated, 100);
  const auto p3 = fx::p3();
  EXPECT_THROW(chain_rule_margin(p3, fx::vec({-1, 0.5, 1}), fx::subset(p3, {1}), build_phi(1, 1, 2)), PreconditionError);
}

TEST(Separation, DirichletBoundsHold) {
  for (const auto& s : {make_cycle(4), make_path(5), make_hypercube(3), make_random_birth_death(7, 4, true)}) {
    const auto c = fx::chain(s);
    const int n = c.size();
    for (std::uint64_t mask = 1; mask + 1 < (1ull << n); mask += 3) {
      const auto A = VertexSubset::from_mask(c, mask);
      DirichletBounds b;
      try {
        b = dirichlet_from_separation(c, A);
      } catch (const PreconditionError&) {
        continue;  // K leaves no room for X or Y
      }
      ASSERT_TRUE(b.separation.converged);
      EXPECT_GE(b.lambda_A, b.super_A - 1e-9);
      EXPECT_GE(b.lambda_B, b.super_B - 1e-9);
      EXPECT_NEAR(b.lambda_A, dirichlet_eigenvalue(c, b.A), 1e-12);
    }
  }
}

TEST(Separation, DirichletSpecExamples) {
  const auto c4 = fx::c4();
  const auto cut = make_cut(c4, fx::subset(c4, {1}), fx::subset(c4, {0, 2}), fx::subset(c4, {3}));
  const auto b = dirichlet_from_separation(c4, cut);
  EXPECT_GE(log_mean(b.lambda_A_bound, b.lambda_B_bound), 0.5 / 64 - 1e-12);
  EXPECT_GE(b.lambda_A, b.super_A - 1e-9);
  EXPECT_GE(b.lambda_B, b.super_B - 1e-9);
  const auto t2 = fx::t2();
  const auto bt = dirichlet_from_separation(t2, fx::subset(t2, {0}));
  EXPECT_GE(bt.lambda_A, bt.super_A - 1e-9);
  EXPECT_GE(bt.lambda_B, bt.super_B - 1e-9);
}

TEST(Separation, ChainRuleExamples) {
  const auto p3 = fx::p3();
  const auto u = fx::vec({-1, 0, 1});
  EXPECT_NEAR(chain_rule_margin(p3, u, fx::subset(p3, {0, 1, 2}), build_phi(-10, 1, 1)), 0.0, 1e-15);
  EXPECT_GE(chain_rule_margin(p3, u, fx::subset(p3, {2}), build_phi(0, 1, 1)), 0.0);
}

TEST(Separation, StepsStayLipschitz) {
  for (const auto& s : {make_cycle(6), make_hypercube(3), make_random_birth_death(8, 6, true)}) {
    const auto c = fx::chain(s);
    std::vector<int> K, Y;
    for (int x = 1; x < c.size(); ++x) (c.adjacent(0, x) ? K : Y).push_back(x);
    const auto cut = make_cut(c, fx::subset(c, {0}), fx::subset(c, K), fx::subset(c, Y));
    SeparationConfig cfg;
    cfg.polish_every = 0;
    cfg.max_iters = 200;
    const auto sol = separation_solve(c, cut, cfg);
    EXPECT_LE(sol.step_lipschitz, 1.0 + 1e-9) << s.provenance.family;
  }
}
