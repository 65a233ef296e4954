#include <gtest/gtest.h>

#include <random>

#include "riesz/equilibrium.hpp"
#include "riesz/kelvin.hpp"

using namespace riesz;

namespace {

Point p3(double x, double y, double z) {
  Point p(3);
  p << x, y, z;
  return p;
}

DiscreteMeasure random_measure(std::mt19937_64& rng, Eigen::Index n, const Point& avoid, int dim = 3) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.1, 1.0);
  PointSet p(dim, n);
  Eigen::VectorXd w(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Point d(dim);
    for (int k = 0; k < dim; ++k) d[k] = g(rng);
    p.col(j) = avoid + d.normalized() * (0.05 + 4.0 * u(rng));
    w[j] = u(rng);
  }
  return {p, w};
}

}  // namespace

TEST(Inversion, PointExamples) {
  const Inversion inv(Point::Zero(3));
  EXPECT_TRUE(invert_point(inv, p3(2, 0, 0)).isApprox(p3(0.5, 0, 0)));
  const Point s = p3(0.6, 0, 0.8);
  EXPECT_LT((invert_point(inv, s) - s).norm(), 1e-15);
}

TEST(Inversion, CenterThrows) {
  const Inversion inv(p3(1, 2, 3));
  EXPECT_THROW(inv(p3(1, 2, 3)), CenterInversion);
}

TEST(Inversion, ExteriorMapsIntoPuncturedInterior) {
  const Point y = p3(0.3, -0.2, 0.1);
  const Inversion inv(y);
  std::mt19937_64 rng(3);
  const DiscreteMeasure nu = random_measure(rng, 200, y);
  for (Eigen::Index j = 0; j < nu.size(); ++j) {
    const double r = (nu.point(j) - y).norm();
    const double ri = (inv(nu.point(j)) - y).norm();
    EXPECT_NEAR(r * ri, 1.0, 1e-14);
    if (r > 1.0) {
      EXPECT_LT(ri, 1.0);
    }
    const Point back = inv(inv(nu.point(j)));
    EXPECT_LT((back - nu.point(j)).norm(), 1e-14 * (1.0 + nu.point(j).norm()));
  }
}

TEST(KelvinTransform, DiracWeight) {
  const Inversion inv(Point::Zero(3));
  const DiscreteMeasure img = kelvin_transform(inv, {2.0, 3}, DiscreteMeasure::dirac(p3(2, 0, 0)));
  ASSERT_EQ(img.size(), 1);
  EXPECT_TRUE(img.point(0).isApprox(p3(0.5, 0, 0)));
  EXPECT_DOUBLE_EQ(img.weights()[0], 0.5);
}

TEST(KelvinTransform, Involution) {
  const Point y = p3(1, 1, -1);
  const Inversion inv(y);
  std::mt19937_64 rng(4);
  for (double alpha : {0.5, 1.3, 2.0}) {
    const KernelSpec spec(alpha, 3);
    const DiscreteMeasure nu = random_measure(rng, 50, y);
    const DiscreteMeasure back = kelvin_transform(inv, spec, kelvin_transform(inv, spec, nu));
    for (Eigen::Index j = 0; j < nu.size(); ++j) {
      EXPECT_LT((back.point(j) - nu.point(j)).norm(), 1e-12 * nu.point(j).norm());
      EXPECT_NEAR(back.weights()[j], nu.weights()[j], 1e-12 * nu.weights()[j]);
    }
  }
}

TEST(KelvinTransform, ChargedCenterThrows) {
  const Inversion inv(Point::Zero(3));
  EXPECT_THROW(kelvin_transform(inv, {2.0, 3}, DiscreteMeasure::dirac(Point::Zero(3))), CenterCharged);
}

TEST(KelvinTransform, PotentialCovarianceDirac) {
  const Inversion inv(Point::Zero(3));
  PointSet samples(3, 40);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int j = 0; j < 40; ++j) {
    const Point d = p3(g(rng), g(rng), g(rng)).normalized();
    samples.col(j) = 3.0 * d;
  }
  EXPECT_LE(verify_potential_covariance(inv, {2.0, 3}, DiscreteMeasure::dirac(p3(2, 0, 0)), samples), 1e-12);
}

TEST(KelvinTransform, ExactIdentitiesOnRandomMeasures) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 30; ++t) {
    const double alpha = 0.25 + 1.75 * (t % 8) / 7.0;
    const int dim = 3 + t % 3;
    const KernelSpec spec(alpha, dim);
    Point y = Point::Zero(dim);
    y[0] = 0.1 * t;
    const Inversion inv(y);
    const DiscreteMeasure nu = random_measure(rng, 50, y, dim);
    const DiscreteMeasure mu = random_measure(rng, 20, y, dim);
    PointSet samples = random_measure(rng, 10, y, dim).points();
    EXPECT_LE(verify_potential_covariance(inv, spec, nu, samples), 1e-12);
    EXPECT_LE(verify_energy_invariance(inv, spec, mu, nu), 1e-12);
    EXPECT_LE(verify_mass_identity(inv, spec, nu), 1e-12);
  }
}

TEST(InvertSphere, ImageOfOffCenterSphere) {
  const Inversion inv(Point::Zero(3));
  const SphereImage img = invert_sphere(inv, p3(3, 0, 0), 1.0);
  // Points 2 and 4 on the axis map to 1/2 and 1/4.
  EXPECT_NEAR(img.center[0], 0.375, 1e-15);
  EXPECT_NEAR(img.radius, 0.125, 1e-15);
  EXPECT_THROW(invert_sphere(inv, p3(1, 0, 0), 1.0), CenterInversion);
}

TEST(InvertRegion, BallComplementBecomesPuncturedBall) {
  const KernelSpec spec(2.0, 3);
  DiscretizationOptions o;
  o.nodes = 500;
  const Region ext = discretize(spec, ClosedSet(shape::BallComplement{Point::Zero(3), 2.0}), o);
  const Region img = invert_region(Inversion(Point::Zero(3)), ext);
  ASSERT_TRUE(img.info().puncture.has_value());
  EXPECT_EQ(img.size(), ext.size());
  for (Eigen::Index i = 0; i < img.size(); ++i) EXPECT_NEAR(img.nodes().col(i).norm(), 0.5, 1e-12);
  EXPECT_TRUE(img.contains(Point::Zero(3)));
  EXPECT_FALSE(img.contains(p3(0.6, 0, 0)));
}

TEST(InvertRegion, EquilibriumEnergyScalesCovariantly) {
  // Capacity of the sphere of radius 2 is 2; its image about 0 has radius 1/2.
  const KernelSpec spec(2.0, 3);
  DiscretizationOptions o;
  o.nodes = 1000;
  const Region big = discretize(spec, ClosedSet(shape::Ball{Point::Zero(3), 2.0}), o);
  const Region small = invert_region(Inversion(Point::Zero(3)), big);
  EquilibriumOptions eo;
  eo.probes = 0;
  EXPECT_NEAR(riesz_equilibrium(spec, big, eo).capacity, 2.0, 0.02);
  EXPECT_NEAR(riesz_equilibrium(spec, small, eo).capacity, 0.5, 0.005);
}
