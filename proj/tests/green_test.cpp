#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <random>

#include "riesz/equilibrium.hpp"
#include "riesz/green.hpp"

using namespace riesz;

namespace {

Point p3(double x, double y, double z) {
  Point p(3);
  p << x, y, z;
  return p;
}

const Point kOrigin = Point::Zero(3);
const KernelSpec kNewton(2.0, 3);

Region complement_of_ball(double radius, Eigen::Index n) {
  DiscretizationOptions o;
  o.nodes = n;
  return discretize(kNewton, ClosedSet(shape::BallComplement{kOrigin, radius}), o, "complement");
}

Region half_sphere(Eigen::Index n) {
  DiscretizationOptions o;
  o.nodes = n;
  return discretize(kNewton, ClosedSet(shape::Sphere{kOrigin, 0.5}), o, "F");
}

PointSet interior_points(const GreenKernel& gk, Eigen::Index n, std::uint64_t seed, double half = 0.7) {
  return domain_points(gk, n, seed, Point::Constant(3, -half), Point::Constant(3, half),
                       [](const Point& x) { return x.norm() < 0.8; });
}

class UnitBallDomain : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { gk_ = new GreenKernel(kNewton, complement_of_ball(1.0, 2000)); }
  static void TearDownTestSuite() {
    delete gk_;
    gk_ = nullptr;
  }
  static GreenKernel* gk_;
};

GreenKernel* UnitBallDomain::gk_ = nullptr;

}  // namespace

TEST_F(UnitBallDomain, RadialValuesFromTheCenter) {
  for (double r : {0.25, 0.5, 0.75}) {
    const double exact = 1.0 / r - 1.0;
    EXPECT_NEAR(gk_->eval(p3(0, r, 0), kOrigin), exact, 0.02 * exact) << r;
  }
  const double edge = 1.0 / 0.95 - 1.0;
  EXPECT_NEAR(gk_->eval(p3(0.95, 0, 0), kOrigin), edge, 0.1 * edge);
}

TEST_F(UnitBallDomain, DiagonalAndDomain) {
  EXPECT_EQ(gk_->eval(p3(0.1, 0.2, 0.3), p3(0.1, 0.2, 0.3)), kInfinity);
  EXPECT_THROW(gk_->eval(p3(1.5, 0, 0), kOrigin), PointOutsideDomain);
  PointSet bad(3, 2);
  bad << 0, 2, 0, 0, 0, 0;
  EXPECT_THROW(gk_->gram(bad), NodesOutsideDomain);
}

TEST_F(UnitBallDomain, SymmetryAndPositivity) {
  const PointSet xs = interior_points(*gk_, 50, 1);
  const PointSet ys = interior_points(*gk_, 50, 2);
  for (Eigen::Index i = 0; i < 50; ++i) {
    const double a = gk_->eval(xs.col(i), ys.col(i));
    const double b = gk_->eval(ys.col(i), xs.col(i));
    EXPECT_LE(std::abs(a - b) / a, 0.02);
    EXPECT_GE(std::min(a, b), -1e-6);
  }
}

TEST_F(UnitBallDomain, PotentialOfDiracIsTheKernel) {
  const Point y = p3(0.1, -0.2, 0.3);
  const Point x = p3(-0.4, 0.1, 0.0);
  const GreenPotential gp = gk_->potential_at(DiscreteMeasure::dirac(y), x);
  EXPECT_EQ(gp.value, gk_->eval(x, y));
  EXPECT_LE(gp.route_gap, 1e-10);
}

TEST_F(UnitBallDomain, UniformHalfSphereAtCenter) {
  const Region f = half_sphere(500);
  const DiscreteMeasure nu(f.nodes(), Eigen::VectorXd::Constant(f.size(), 1.0 / static_cast<double>(f.size())));
  const GreenPotential gp = gk_->potential_at(nu, kOrigin);
  EXPECT_NEAR(gp.value, 1.0, 0.02);
  EXPECT_LE(gp.route_gap, 1e-8);
}

TEST_F(UnitBallDomain, GramIsPositiveDefinite) {
  const PointSet nodes = interior_points(*gk_, 200, 3);
  const GreenGram g = gk_->gram(nodes);
  const Eigen::VectorXd ev =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(g.gram.entries(), Eigen::EigenvaluesOnly).eigenvalues();
  EXPECT_GT(ev.minCoeff(), 0.0);
  EXPECT_LE(g.asymmetry, 1e-8);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n01;
  for (int t = 0; t < 50; ++t) {
    Eigen::VectorXd w(200);
    for (auto& v : w) v = n01(rng);
    EXPECT_GT(w.dot(g.gram.entries() * w), 0.0);
  }
}

TEST_F(UnitBallDomain, EnergyDecomposition) {
  EXPECT_LE(verify_energy_decomposition(*gk_, DiscreteMeasure::dirac(p3(0.2, 0.1, 0))), 1e-12);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  for (int t = 0; t < 5; ++t) {
    const PointSet pts = interior_points(*gk_, 10, 10 + t);
    Eigen::VectorXd w(10);
    for (auto& v : w) v = u(rng);
    EXPECT_LE(verify_energy_decomposition(*gk_, DiscreteMeasure(pts, w)), 0.02);
  }
  const Region f = half_sphere(300);
  const DiscreteMeasure nu(f.nodes(), Eigen::VectorXd::Constant(f.size(), 1.0 / static_cast<double>(f.size())));
  EXPECT_LE(verify_energy_decomposition(*gk_, nu, f.reg_radii()), 0.02);
}

TEST_F(UnitBallDomain, DominationPrinciple) {
  const PointSet probes = interior_points(*gk_, 100, 6, 0.9);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.1, 1.0);
  const PointSet pts = interior_points(*gk_, 8, 8);
  Eigen::VectorXd w(8);
  for (auto& v : w) v = u(rng);
  const DiscreteMeasure mu(pts, w);
  const Eigen::VectorXd radii = Eigen::VectorXd::Constant(8, default_reg_radius(pts));
  const DominationReport same = verify_domination(*gk_, mu, radii, mu, radii, 0.0, probes, 1e-12);
  EXPECT_TRUE(same.precondition);
  EXPECT_TRUE(same.holds);
  EXPECT_LE(same.max_violation, 0.0);

  // Frostman form: nu = 0 and c = max of g gamma on the support of gamma.
  const Region f = half_sphere(150);
  const EquilibriumResult eq = green_equilibrium(*gk_, f.nodes(), f.reg_radii());
  const PointSet off = domain_points(*gk_, 100, 11, Point::Constant(3, -0.9), Point::Constant(3, 0.9), [](const Point& x) {
    return x.norm() < 0.9 && std::abs(x.norm() - 0.5) > 0.15;
  });
  double c = 0.0;
  for (Eigen::Index j = 0; j < f.size(); ++j) {
    if (eq.gamma.weights()[j] > 0.0) c = std::max(c, gk_->regularized_potential(eq.gamma, f.reg_radii(), f.nodes().col(j)));
  }
  const DominationReport frost = verify_domination(*gk_, eq.gamma, f.reg_radii(), DiscreteMeasure::empty(3),
                                                   Eigen::VectorXd(0), c, off, 0.02 * c);
  EXPECT_TRUE(frost.precondition);
  EXPECT_TRUE(frost.holds) << frost.max_violation;
}

TEST_F(UnitBallDomain, GreenEquilibriumOfHalfSphere) {
  const Region f = half_sphere(2000);
  const EquilibriumResult eq = green_equilibrium(*gk_, f.nodes(), f.reg_radii());
  EXPECT_NEAR(eq.capacity, 1.0, 0.02);
  EXPECT_GE(eq.charged_stats.min, 0.98);
  EXPECT_LE(eq.charged_stats.max, 1.02);
  EXPECT_EQ(eq.minimality.competitors, 20);
  EXPECT_TRUE(eq.minimality.holds) << eq.minimality.worst;
  const Eigen::VectorXd& w = eq.gamma.weights();
  EXPECT_LT((w.maxCoeff() - w.minCoeff()) / w.mean(), 0.2);
}

TEST_F(UnitBallDomain, SingleNodeGreenCapacity) {
  const Point x0 = p3(0.1, 0.2, -0.1);
  Eigen::VectorXd r(1);
  r << 0.05;
  const EquilibriumResult eq = green_equilibrium(*gk_, PointSet(x0), r);
  const double g_reg = kNewton.of_distance(0.05) - gk_->compensator(x0, x0);
  EXPECT_NEAR(eq.capacity, 1.0 / g_reg, 1e-12);
}

TEST_F(UnitBallDomain, CapacityMonotoneUnderInclusion) {
  const Region sphere = half_sphere(400);
  DiscretizationOptions o;
  o.nodes = 300;
  o.support = Support::Solid;
  const Region solid = discretize(kNewton, ClosedSet(shape::Ball{kOrigin, 0.45}), o);
  PointSet both(3, sphere.size() + solid.size());
  both << sphere.nodes(), solid.nodes();
  Eigen::VectorXd radii(both.cols());
  radii << sphere.reg_radii(), solid.reg_radii();
  const double c1 = green_equilibrium(*gk_, sphere.nodes(), sphere.reg_radii()).capacity;
  const double c2 = green_equilibrium(*gk_, both, radii).capacity;
  EXPECT_LE(c1, c2 * (1.0 + 1e-12));
}

TEST_F(UnitBallDomain, EquilibriaOfExhaustingSetsConvergeStrongly) {
  // With K_1 in K_2 in ... in F, ||gamma_{i+1} - gamma_i||_g^2 <= ||gamma_{i+1}||^2 - ||gamma_i||^2.
  const Region f = half_sphere(600);
  const GreenGram gg = gk_->gram(f.nodes(), f.reg_radii());
  const Eigen::MatrixXd& g = gg.gram.entries();
  Eigen::VectorXd prev = Eigen::VectorXd::Zero(f.size());
  for (Eigen::Index n : {Eigen::Index{75}, Eigen::Index{150}, Eigen::Index{300}, f.size()}) {
    const Eigen::MatrixXd sub = g.topLeftCorner(n, n);
    const NonnegQP qp(sub);
    const QPSolution unit = qp.solve(Eigen::VectorXd::Ones(n));
    ASSERT_TRUE(unit.converged);
    Eigen::VectorXd cur = Eigen::VectorXd::Zero(f.size());
    cur.head(n) = unit.weights;
    const Eigen::VectorXd d = cur - prev;
    const double lhs = d.dot(g * d);
    const double rhs = cur.dot(g * cur) - prev.dot(g * prev);
    EXPECT_LE(lhs, rhs + 1e-10 * cur.dot(g * cur));
    prev = cur;
  }
}

TEST(GreenKernelCache, EvictionNeverChangesValues) {
  GreenOptions tiny;
  tiny.cache_capacity = 2;
  const GreenKernel small(kNewton, complement_of_ball(1.0, 500), tiny);
  const GreenKernel roomy(kNewton, complement_of_ball(1.0, 500));
  const PointSet ys = interior_points(roomy, 6, 9);
  const Point x = p3(0.05, 0.05, 0.05);
  for (int pass = 0; pass < 2; ++pass) {
    for (Eigen::Index j = 0; j < ys.cols(); ++j) EXPECT_EQ(small.eval(x, ys.col(j)), roomy.eval(x, ys.col(j)));
  }
  EXPECT_LE(small.cache_size(), 2u);
  EXPECT_EQ(roomy.cache_size(), 6u);
  EXPECT_GE(roomy.cache_hits(), 6u);
}

TEST(GreenKernelLimits, RecedingBoundaryRecoversRiesz) {
  const GreenKernel far(kNewton, complement_of_ball(1000.0, 1000));
  const Region f = half_sphere(400);
  const GreenGram g = far.gram(f.nodes(), f.reg_radii());
  const GramMatrix k = assemble_gram(kNewton, f.nodes(), f.reg_radii());
  EXPECT_LE(((g.gram.entries() - k.entries()).array() / k.entries().array()).abs().maxCoeff(), 0.01);

  EquilibriumOptions eo;
  eo.probes = 0;
  const double cg = green_equilibrium(far, f.nodes(), f.reg_radii(), eo).capacity;
  const double ca = riesz_equilibrium(kNewton, f, eo).capacity;
  EXPECT_NEAR(cg, ca, 0.01 * ca);
}
