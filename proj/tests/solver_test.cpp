#include <gtest/gtest.h>

#include <random>

#include "riesz/core.hpp"
#include "riesz/solver.hpp"

using namespace riesz;

namespace {

double objective(const Eigen::MatrixXd& k, const Eigen::VectorXd& b, const Eigen::VectorXd& w) {
  return w.dot(k * w) - 2.0 * b.dot(w);
}

Eigen::MatrixXd random_spd(Eigen::Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  PointSet p(3, n);
  for (Eigen::Index j = 0; j < n; ++j) p.col(j) << u(rng), u(rng), u(rng);
  return assemble_gram({2.0, 3}, p).entries();
}

}  // namespace

TEST(SolveNonneg, ClampedSubproblem) {
  Eigen::Matrix2d k;
  k << 10, 1, 1, 10;
  const Eigen::MatrixXd km = k;
  const QPSolution s = solve_nonneg({&km, Eigen::Vector2d(-1, 20), Constraint::nonneg()});
  ASSERT_TRUE(s.converged);
  EXPECT_EQ(s.weights[0], 0.0);
  EXPECT_NEAR(s.weights[1], 2.0, 1e-12);
  EXPECT_NEAR(s.objective, objective(km, Eigen::Vector2d(-1, 20), s.weights), 1e-12);
}

TEST(SolveNonneg, InteriorDataIsReproduced) {
  const Eigen::MatrixXd k = random_spd(60, 1);
  Eigen::VectorXd w0 = Eigen::VectorXd::LinSpaced(60, 0.1, 1.0);
  const QPSolution s = solve_nonneg({&k, k * w0, Constraint::nonneg()});
  ASSERT_TRUE(s.converged);
  EXPECT_LT((s.weights - w0).lpNorm<Eigen::Infinity>(), 1e-8);
}

TEST(SolveNonneg, ZeroLinearTerm) {
  const Eigen::MatrixXd k = random_spd(10, 2);
  const QPSolution s = solve_nonneg({&k, Eigen::VectorXd::Zero(10), Constraint::nonneg()});
  EXPECT_TRUE(s.converged);
  EXPECT_EQ(s.weights.lpNorm<Eigen::Infinity>(), 0.0);
  EXPECT_EQ(s.objective, 0.0);
}

TEST(SolveNonneg, BeatsRandomFeasiblePoints) {
  const Eigen::MatrixXd k = random_spd(40, 3);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1, 1);
  Eigen::VectorXd b(40);
  for (int i = 0; i < 40; ++i) b[i] = u(rng) * 5.0;
  const QPSolution s = solve_nonneg({&k, b, Constraint::nonneg()});
  ASSERT_TRUE(s.converged);
  EXPECT_TRUE((s.weights.array() >= 0.0).all());
  const double best = objective(k, b, s.weights);
  std::uniform_real_distribution<double> pos(0, 1);
  for (int t = 0; t < 100; ++t) {
    Eigen::VectorXd v(40);
    for (int i = 0; i < 40; ++i) v[i] = pos(rng) < 0.5 ? 0.0 : pos(rng) * 0.5;
    EXPECT_LE(best, objective(k, b, v) + 1e-12);
    // Small feasible perturbations of the optimum never do better.
    Eigen::VectorXd near = (s.weights + 1e-3 * v).cwiseMax(0.0);
    EXPECT_LE(best, objective(k, b, near) + 1e-12);
  }
}

TEST(SolveNonneg, BitwiseDeterministic) {
  const Eigen::MatrixXd k = random_spd(120, 5);
  Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(120, -3.0, 4.0);
  const QPSolution a = solve_nonneg({&k, b, Constraint::nonneg()});
  const QPSolution c = solve_nonneg({&k, b, Constraint::nonneg()});
  for (Eigen::Index i = 0; i < 120; ++i) EXPECT_EQ(a.weights[i], c.weights[i]);
  EXPECT_EQ(a.iterations, c.iterations);
}

TEST(SolveNonneg, KktResidualWithinTolerance) {
  const Eigen::MatrixXd k = random_spd(80, 6);
  Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(80, -1.0, 1.0);
  const QPSolution s = solve_nonneg({&k, b, Constraint::nonneg()});
  ASSERT_TRUE(s.converged);
  EXPECT_LE(nonneg_kkt_residual(s.weights, 2.0 * (k * s.weights - b)), 1e-10 * b.lpNorm<Eigen::Infinity>());
}

TEST(SolveNonneg, IllConditionedGramUsesFallback) {
  Eigen::MatrixXd k(2, 2);
  k << 1.0, 0.0, 0.0, 1e-16;
  const QPSolution s = solve_nonneg({&k, Eigen::Vector2d(1.0, -1.0), Constraint::nonneg()});
  EXPECT_TRUE(s.used_fallback);
  EXPECT_NEAR(s.weights[0], 1.0, 1e-8);
  EXPECT_EQ(s.weights[1], 0.0);
}

TEST(SolveNonneg, IndefiniteGramIsRejected) {
  Eigen::MatrixXd k(2, 2);
  k << 1.0, 2.0, 2.0, 1.0;
  EXPECT_THROW(NonnegQP{k}, IllConditioned);
}

TEST(SolveSimplex, SymmetricTwoByTwo) {
  const double d = 7.0, off = 2.0;
  Eigen::MatrixXd k(2, 2);
  k << d, off, off, d;
  const QPSolution s = solve_simplex({&k, {}, Constraint::simplex(1.0)}, 1.0);
  ASSERT_TRUE(s.converged);
  EXPECT_NEAR(s.weights[0], 0.5, 1e-14);
  EXPECT_NEAR(s.weights[1], 0.5, 1e-14);
  EXPECT_NEAR(s.objective, (d + off) / 2.0, 1e-13);
}

TEST(SolveSimplex, SingleNode) {
  Eigen::MatrixXd k(1, 1);
  k << 3.0;
  const QPSolution s = solve_simplex({&k, {}, Constraint::simplex(2.5)}, 2.5);
  EXPECT_DOUBLE_EQ(s.weights[0], 2.5);
  EXPECT_DOUBLE_EQ(s.objective, 2.5 * 2.5 * 3.0);
}

TEST(SolveSimplex, CollinearNodesMatchGridSearch) {
  PointSet p(3, 3);
  p << 0, 1, 2, 0, 0, 0, 0, 0, 0;
  const Eigen::MatrixXd k = assemble_gram({2.0, 3}, p).entries();
  const QPSolution s = solve_simplex({&k, {}, Constraint::simplex(1.0)}, 1.0);
  ASSERT_TRUE(s.converged);

  double best = kInfinity;
  Eigen::Vector3d arg;
  const int steps = 1000;
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; i + j <= steps; ++j) {
      const Eigen::Vector3d w(i / 1000.0, j / 1000.0, (steps - i - j) / 1000.0);
      const double q = w.dot(k * w);
      if (q < best) {
        best = q;
        arg = w;
      }
    }
  }
  EXPECT_NEAR(s.weights[0], s.weights[2], 1e-12);
  EXPECT_LT(s.weights[1], s.weights[0]);
  EXPECT_LE(s.objective, best + 1e-12);
  EXPECT_LT((s.weights - arg).lpNorm<Eigen::Infinity>(), 2e-3);
}

TEST(SolveSimplex, ObjectiveMonotoneUnderNodeGrowth) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  PointSet all(3, 60);
  for (int j = 0; j < 60; ++j) all.col(j) << u(rng), u(rng), u(rng);
  double prev = kInfinity;
  for (Eigen::Index n = 5; n <= 60; n += 5) {
    const Eigen::MatrixXd k = assemble_gram({1.5, 3}, all.leftCols(n), 0.01).entries();
    const QPSolution s = solve_simplex({&k, {}, Constraint::simplex(1.0)}, 1.0);
    ASSERT_TRUE(s.converged);
    EXPECT_LE(s.objective, prev * (1.0 + 1e-12));
    prev = s.objective;
  }
}

TEST(SolveSimplex, MultiplierMatchesGradientOnSupport) {
  const Eigen::MatrixXd k = random_spd(50, 8);
  const QPSolution s = solve_simplex({&k, {}, Constraint::simplex(1.0)}, 1.0);
  ASSERT_TRUE(s.converged);
  EXPECT_NEAR(s.weights.sum(), 1.0, 1e-14);
  const Eigen::VectorXd g = 2.0 * (k * s.weights);
  for (Eigen::Index i = 0; i < 50; ++i) {
    if (s.weights[i] > 0.0) {
      EXPECT_NEAR(g[i], s.multiplier, 1e-9 * s.multiplier);
    } else {
      EXPECT_GE(g[i], s.multiplier * (1.0 - 1e-9));
    }
  }
}

TEST(SolveSimplex, RejectsNonPositiveTotal) {
  Eigen::MatrixXd k = Eigen::MatrixXd::Identity(2, 2);
  EXPECT_THROW(solve_simplex({&k, {}, Constraint::simplex(0.0)}, 0.0), InvalidArgument);
}
