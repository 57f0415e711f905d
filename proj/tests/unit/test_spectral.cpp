#include <gtest/gtest.h>

#include <unsupported/Eigen/Polynomials>

#include "curvlab/errors.hpp"
#include "curvlab/linalg.hpp"
#include "curvlab/spectral.hpp"
#include "fixtures.hpp"

using namespace curvlab;

namespace {

// Roots of det(sI + L) through Faddeev-LeVerrier and a companion solve.
std::vector<double> charpoly_roots(const Eigen::MatrixXd& A) {
  const int n = static_cast<int>(A.rows());
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n + 1);  // ascending powers
  c[n] = 1.0;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k <= n; ++k) {
    M = A * M + c[n - k + 1] * Eigen::MatrixXd::Identity(n, n);
    c[n - k] = -(A * M).trace() / k;
  }
  Eigen::PolynomialSolver<double, Eigen::Dynamic> solver(c);
  std::vector<double> roots;
  for (Eigen::Index i = 0; i < solver.roots().size(); ++i) roots.push_back(solver.roots()[i].real());
  std::sort(roots.begin(), roots.end());
  return roots;
}

// Smallest eigenvalue of -L restricted to W, by a general eigensolver.
double dense_dirichlet(const MarkovChain& c, const std::vector<int>& W) {
  const Eigen::MatrixXd L = c.generator();
  Eigen::MatrixXd B(W.size(), W.size());
  for (std::size_t i = 0; i < W.size(); ++i)
    for (std::size_t j = 0; j < W.size(); ++j) B(i, j) = -L(W[i], W[j]);
  return Eigen::EigenSolver<Eigen::MatrixXd>(B).eigenvalues().real().minCoeff();
}

}  // namespace

TEST(Spectral, JacobiAgainstCharacteristicPolynomial) {
  for (const auto& c : {fx::t2(), fx::p3()}) {
    const auto roots = charpoly_roots(-c.generator());
    const auto s = spectrum(c);
    ASSERT_EQ(static_cast<int>(roots.size()), s.eigenvalues.size());
    for (std::size_t i = 0; i < roots.size(); ++i) EXPECT_NEAR(s.eigenvalues[i], roots[i], 1e-10);
  }
  const auto s2 = spectrum(fx::t2());
  EXPECT_NEAR(s2.eigenvalues[1], 2.0, 1e-12);
  EXPECT_NEAR(s2.lambda, 2.0, 1e-12);
  const auto s3 = spectrum(fx::p3());
  EXPECT_NEAR(s3.eigenvalues[1], 1.0, 1e-12);
  EXPECT_NEAR(s3.eigenvalues[2], 3.0, 1e-12);
}

TEST(Spectral, JacobiAgainstEigen) {
  for (const auto& s : {make_hypercube(3), make_random_birth_death(8, 2, false), make_erdos_renyi(9, 0.4, 1)}) {
    const auto c = fx::chain(s);
    const Eigen::MatrixXd S = symmetrized_operator(c);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(S);
    const auto j = jacobi_eigen(S);
    EXPECT_LT((j.values - ref.eigenvalues()).cwiseAbs().maxCoeff(), 1e-10);
    const auto sp = spectrum(c);
    // m-orthonormal eigenfunctions.
    const Eigen::MatrixXd G = sp.eigenfunctions.transpose() * c.measure().asDiagonal() * sp.eigenfunctions;
    EXPECT_LT((G - Eigen::MatrixXd::Identity(c.size(), c.size())).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Spectral, CompleteGraph) {
  for (int n : {3, 5, 7}) EXPECT_NEAR(spectrum(fx::chain(make_complete(n, 1.0))).lambda, n, 1e-10);
}

TEST(Spectral, Dirichlet) {
  const auto p3 = fx::p3();
  EXPECT_NEAR(dirichlet_eigenvalue(p3, fx::subset(p3, {0})), 1.0, 1e-12);
  EXPECT_NEAR(dirichlet_eigenvalue(p3, fx::subset(p3, {0, 1})), (3 - std::sqrt(5.0)) / 2, 1e-12);
  EXPECT_NEAR(dirichlet_eigenvalue(fx::t2(), fx::subset(fx::t2(), {0})), 1.0, 1e-12);
  const auto c = fx::chain(make_erdos_renyi(8, 0.4, 9));
  for (std::uint64_t mask = 1; mask < 255; mask += 17) {
    const auto W = VertexSubset::from_mask(c, mask);
    EXPECT_NEAR(dirichlet_eigenvalue(c, W), dense_dirichlet(c, W.members()), 1e-9);
  }
}

TEST(Spectral, AlphaSpectral) {
  const auto t2 = alpha_spectral(fx::t2());
  EXPECT_NEAR(t2.value, 1.0, 1e-12);
  EXPECT_NEAR(alpha_spectral(fx::chain(make_path(2, 3.0))).value, 3.0, 1e-12);
  // Exhaustive oracle on P3.
  const auto p3 = fx::p3();
  double best = 1e300;
  for (std::uint64_t mask = 1; mask < 7; ++mask) {
    std::vector<int> W, Wc;
    for (int i = 0; i < 3; ++i) ((mask >> i) & 1 ? W : Wc).push_back(i);
    best = std::min(best, log_mean(dense_dirichlet(p3, W), dense_dirichlet(p3, Wc)));
  }
  EXPECT_NEAR(alpha_spectral(p3).value, best, 1e-10);
  EXPECT_THROW(alpha_spectral(fx::chain(make_path(17))), EnumerationLimit);
}

TEST(Spectral, LogMean) {
  EXPECT_DOUBLE_EQ(log_mean(2.0, 2.0), 2.0);
  EXPECT_NEAR(log_mean(1.0, std::exp(1.0)), std::exp(1.0) - 1.0, 1e-14);
  EXPECT_NEAR(log_mean(3.0, 3.0 + 1e-12), 3.0, 1e-11);
}

TEST(Spectral, Supersolution) {
  const auto p3 = fx::p3();
  EXPECT_NEAR(supersolution_bound(p3, fx::subset(p3, {0}), fx::vec({1, 0, 0})), 1.0, 1e-12);
  const auto W = fx::subset(p3, {0, 1});
  const VertexFunction phi = dirichlet_eigenfunction(p3, W);
  EXPECT_NEAR(supersolution_bound(p3, W, phi.cwiseAbs()), dirichlet_eigenvalue(p3, W), 1e-9);
  EXPECT_NEAR(supersolution_bound(p3, W, fx::vec({1, 1, 1})), 0.0, 1e-12);
}
