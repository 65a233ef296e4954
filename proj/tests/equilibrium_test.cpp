#include <gtest/gtest.h>

#include <cmath>

#include "riesz/equilibrium.hpp"

using namespace riesz;

namespace {

Point p3(double x, double y, double z) {
  Point p(3);
  p << x, y, z;
  return p;
}

const Point kOrigin = Point::Zero(3);

double ball_capacity(double alpha, int n) {
  return std::tgamma(n / 2.0) / (std::tgamma(alpha / 2.0) * std::tgamma(n / 2.0 + 1.0 - alpha / 2.0));
}

EquilibriumOptions no_probes() {
  EquilibriumOptions o;
  o.probes = 0;
  return o;
}

Region ball(double alpha, Eigen::Index n) {
  DiscretizationOptions o;
  o.nodes = n;
  return discretize({alpha, 3}, ClosedSet(shape::Ball{kOrigin, 1.0}), o);
}

}  // namespace

TEST(RieszEquilibrium, SingleNode) {
  const double h = 0.2;
  const KernelSpec spec(1.5, 3);
  const EquilibriumResult eq = riesz_equilibrium(spec, cloud_region(spec, PointSet(kOrigin), h), no_probes());
  EXPECT_NEAR(eq.capacity, std::pow(h, 1.5), 1e-14);
  EXPECT_NEAR(eq.gamma.weights()[0], std::pow(h, 1.5), 1e-14);
}

TEST(RieszEquilibrium, TwoNodes) {
  const double h = 0.1, r = 0.8;
  const KernelSpec spec(2.0, 3);
  PointSet p(3, 2);
  p << 0, r, 0, 0, 0, 0;
  const EquilibriumResult eq = riesz_equilibrium(spec, cloud_region(spec, p, h), no_probes());
  EXPECT_NEAR(eq.gamma.weights()[0], eq.gamma.weights()[1], 1e-14);
  EXPECT_NEAR(eq.capacity, 2.0 / (1.0 / h + 1.0 / r), 1e-13);
}

TEST(RieszEquilibrium, NewtonianUnitBall) {
  const KernelSpec spec(2.0, 3);
  const Sweeper s(spec, ball(2.0, 2000));
  const EquilibriumResult eq = riesz_equilibrium(s);
  EXPECT_NEAR(eq.capacity, 1.0, 0.01);
  EXPECT_GE(eq.charged_stats.min, 0.98);
  EXPECT_LE(eq.charged_stats.max, 1.02);
  EXPECT_LE(eq.potential_stats.max, 1.02);
  EXPECT_LE(eq.probe_stats.max, 1.02);
  EXPECT_EQ(eq.probe_stats.count, 100);
  EXPECT_TRUE(eq.minimality.holds);
  EXPECT_EQ(eq.minimality.competitors, 20);
  for (const Point& x : {p3(2, 0, 0), p3(0, -1.2, 1.6)}) EXPECT_NEAR(potential(spec, eq.gamma, x), 0.5, 0.005);
  const Eigen::VectorXd& w = eq.gamma.weights();
  EXPECT_LT((w.maxCoeff() - w.minCoeff()) / w.mean(), 0.2);
}

TEST(RieszEquilibrium, FractionalBallCapacityConverges) {
  for (double alpha : {1.0, 1.5}) {
    const double exact = ball_capacity(alpha, 3);
    const double coarse = riesz_equilibrium({alpha, 3}, ball(alpha, 500), no_probes()).capacity;
    const double fine = riesz_equilibrium({alpha, 3}, ball(alpha, 2000), no_probes()).capacity;
    EXPECT_LT(std::abs(fine - exact), std::abs(coarse - exact)) << alpha;
    EXPECT_NEAR(fine, exact, 0.03 * exact) << alpha;
  }
}

TEST(RieszEquilibrium, CapacityMonotoneUnderNodeInclusion) {
  const KernelSpec spec(1.2, 3);
  const Region full = ball(1.2, 600);
  double prev = 0.0;
  for (Eigen::Index n : {Eigen::Index{100}, Eigen::Index{200}, Eigen::Index{400}, full.size()}) {
    const Region part(full.set(), full.nodes().leftCols(n), full.reg_radii().head(n), full.info());
    const double c = riesz_equilibrium(spec, part, no_probes()).capacity;
    EXPECT_GE(c, prev * (1.0 - 1e-12));
    prev = c;
  }
}

TEST(PotentialStatsOf, Basics) {
  const PotentialStats s = stats_of({1.0, 3.0, 2.0});
  EXPECT_EQ(s.min, 1.0);
  EXPECT_EQ(s.max, 3.0);
  EXPECT_EQ(s.mean, 2.0);
  EXPECT_EQ(s.count, 3);
  EXPECT_EQ(stats_of({}).count, 0);
}
