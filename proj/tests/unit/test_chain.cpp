#include <gtest/gtest.h>

#include "curvlab/errors.hpp"
#include "fixtures.hpp"

using namespace curvlab;

TEST(Chain, TwoPointFixture) {
  const auto c = fx::t2();
  EXPECT_EQ(c.size(), 2);
  EXPECT_DOUBLE_EQ(c.rate(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(c.rate(1, 0), 1.0);
  EXPECT_NEAR(c.mass(0), 0.5, 1e-15);
  EXPECT_DOUBLE_EQ(c.dist(0, 1), 1.0);
}

TEST(Chain, CounterexampleRates) {
  const auto c = fx::chain(make_counterexample(0.1));
  EXPECT_NEAR(c.rate(0, 1), 1.0, 1e-12);
  EXPECT_NEAR(c.rate(1, 0), 10.0, 1e-12);
  EXPECT_NEAR(c.rate(1, 2), 1.0, 1e-12);
  EXPECT_NEAR(c.rate(2, 1), 20.0, 1e-12);
  EXPECT_FALSE(c.adjacent(0, 2));
}

TEST(Chain, AsymmetricSupportRejected) {
  GraphDescription d;
  d.mode = DescriptionMode::kernel;
  d.labels = {"a", "b"};
  EdgeDescription e;
  e.u = 0;
  e.v = 1;
  e.p_uv = 1.0;
  e.p_vu = 0.0;
  d.edges.push_back(e);
  EXPECT_THROW(build_chain(d), InvalidChain);
}

TEST(Chain, Laplacian) {
  const auto t2 = fx::t2();
  const VertexFunction l = laplacian(t2, fx::vec({0, 1}));
  EXPECT_DOUBLE_EQ(l[0], 1.0);
  EXPECT_DOUBLE_EQ(l[1], -1.0);
  const auto p3 = fx::p3();
  const VertexFunction lp = laplacian(p3, fx::vec({0, 1, 2}));
  EXPECT_DOUBLE_EQ(lp[0], 1.0);
  EXPECT_DOUBLE_EQ(lp[1], 0.0);
  EXPECT_DOUBLE_EQ(lp[2], -1.0);
  EXPECT_LT(laplacian(p3, fx::vec({4, 4, 4})).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Chain, DirichletForm) {
  EXPECT_NEAR(energy(fx::t2(), fx::vec({0, 1})), 0.5, 1e-15);
  const auto p3 = fx::p3();
  EXPECT_NEAR(energy(p3, fx::vec({0, 1, 2})), 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(dirichlet_form(p3, fx::vec({1, 1, 1}), fx::vec({0, 5, 2})), 0.0, 1e-15);
}

TEST(Chain, Gradients) {
  const auto g = gradients(fx::p3(), fx::vec({0, 1, 2}));
  EXPECT_DOUBLE_EQ(g.lip, 1.0);
  EXPECT_DOUBLE_EQ(g.grad_minus[0], 0.0);
  EXPECT_DOUBLE_EQ(g.grad_minus[1], 1.0);
  EXPECT_DOUBLE_EQ(g.grad_minus[2], 1.0);
  EXPECT_DOUBLE_EQ(lipschitz_constant(fx::t2(), fx::vec({0, 3})), 3.0);
  EXPECT_DOUBLE_EQ(lipschitz_constant(fx::t2(), fx::vec({2, 2})), 0.0);
}

TEST(Chain, HeatSemigroup) {
  const auto c = fx::t2();
  for (double t : {0.0, 0.3, 1.0, 4.0}) {
    const VertexFunction u = heat_apply(c, fx::vec({1, -1}), t);
    EXPECT_NEAR(u[0], std::exp(-2 * t), 1e-12);
    EXPECT_NEAR(u[1], -std::exp(-2 * t), 1e-12);
  }
  const auto p3 = fx::p3();
  const VertexFunction one = heat_apply(p3, fx::vec({1, 1, 1}), 2.5);
  EXPECT_NEAR((one.array() - 1.0).abs().maxCoeff(), 0.0, 1e-12);
}

TEST(Chain, Constants) {
  auto k = chain_constants(fx::t2());
  EXPECT_DOUBLE_EQ(k.p0, 1.0);
  EXPECT_DOUBLE_EQ(k.deg_max, 1.0);
  EXPECT_DOUBLE_EQ(k.diam, 1.0);
  k = chain_constants(fx::c4());
  EXPECT_DOUBLE_EQ(k.p0, 0.5);
  EXPECT_DOUBLE_EQ(k.deg_max, 1.0);
  EXPECT_DOUBLE_EQ(k.diam, 2.0);
  // Vertex 3 jumps at rate P(3,2) = 20.
  k = chain_constants(fx::chain(make_counterexample(0.1)));
  EXPECT_NEAR(k.p0, 1.0, 1e-12);
  EXPECT_NEAR(k.deg_max, 20.0, 1e-12);
}

TEST(Chain, CutValidation) {
  const auto p3 = fx::p3();
  EXPECT_NO_THROW(make_cut(p3, fx::subset(p3, {0}), fx::subset(p3, {1}), fx::subset(p3, {2})));
  // a and c are not adjacent but a-b crosses X-Y when K = {c}.
  EXPECT_THROW(make_cut(p3, fx::subset(p3, {0}), fx::subset(p3, {2}), fx::subset(p3, {1})), PreconditionError);
}
