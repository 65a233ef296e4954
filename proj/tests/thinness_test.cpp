#include <gtest/gtest.h>

#include <cmath>

#include "riesz/thinness.hpp"

using namespace riesz;

namespace {

Point p3(double x, double y, double z) {
  Point p(3);
  p << x, y, z;
  return p;
}

const Point kOrigin = Point::Zero(3);
const KernelSpec kNewton(2.0, 3);

ClosedSet unit_ball() { return ClosedSet(shape::Ball{kOrigin, 1.0}); }

}  // namespace

TEST(Wiener, BallIsRegularAtABoundaryPoint) {
  const WienerReport rep = wiener_report(kNewton, unit_ball(), p3(1, 0, 0), 0.5, 8);
  EXPECT_EQ(rep.classification, Classification::Regular);
  EXPECT_FALSE(rep.empty_shell_run);
  EXPECT_GE(rep.fitted_ratio, 0.9);
  ASSERT_EQ(rep.shells.size(), 8u);
  for (const auto& sh : rep.shells) {
    EXPECT_GT(sh.node_count, 0);
    EXPECT_GE(sh.term, 0.0);
  }
}

TEST(Wiener, ShellCapacityBelowEnclosingBall) {
  // A_k lies in B(y, q^k), whose Newtonian capacity is q^k.
  const WienerReport rep = wiener_report(kNewton, unit_ball(), p3(1, 0, 0), 0.5, 6);
  for (const auto& sh : rep.shells) EXPECT_LE(sh.capacity, std::pow(0.5, sh.k)) << sh.k;
}

TEST(Wiener, HalfSpaceIsRegular) {
  const ClosedSet h(shape::HalfSpace{p3(0, 0, 1), 0.0});
  const WienerReport rep = wiener_report(kNewton, h, kOrigin, 0.5, 8);
  EXPECT_EQ(rep.classification, Classification::Regular);
}

TEST(Wiener, IsolatedPointIsIrregular) {
  PointSet single(3, 1);
  single.col(0) = kOrigin;
  const ClosedSet a({shape::Cloud{single}, shape::Ball{p3(5, 0, 0), 1.0}});
  const WienerReport rep = wiener_report(kNewton, a, kOrigin, 0.5, 8);
  EXPECT_TRUE(rep.empty_shell_run);
  EXPECT_EQ(rep.classification, Classification::Irregular);
  for (const auto& sh : rep.shells) EXPECT_EQ(sh.term, 0.0);
}

TEST(Wiener, RejectsBadArguments) {
  EXPECT_THROW(wiener_report(kNewton, unit_ball(), p3(1, 0, 0), 1.0, 8), InvalidArgument);
  EXPECT_THROW(wiener_report(kNewton, unit_ball(), p3(1, 0, 0), 0.5, 0), InvalidArgument);
  EXPECT_THROW(wiener_at_infinity(kNewton, unit_ball(), kOrigin, 0.5, 8), InvalidArgument);
}

TEST(ThinAtInfinity, CompactSetIsThin) {
  const WienerReport rep = wiener_at_infinity(kNewton, unit_ball(), p3(3, 0, 0), 0.5, 8);
  EXPECT_EQ(rep.classification, Classification::Irregular);
}

TEST(ThinAtInfinity, ExteriorOfBallIsNotThin) {
  const ClosedSet ext(shape::BallComplement{kOrigin, 1.0});
  const WienerReport rep = wiener_at_infinity(kNewton, ext, kOrigin, 0.5, 8);
  EXPECT_EQ(rep.classification, Classification::Regular);
}

TEST(MassLoss, CompactTargetLosesMass) {
  DiscretizationOptions o;
  o.nodes = 2000;
  const Region ball = discretize(kNewton, unit_ball(), o);
  const MassLossResult r = mass_loss_test(kNewton, ball, DiscreteMeasure::dirac(p3(2, 0, 0)));
  EXPECT_NEAR(r.mass_out, 0.5, 0.01);
  EXPECT_DOUBLE_EQ(r.mass_in, 1.0);
  EXPECT_TRUE(r.strict_loss);
}

TEST(MassLoss, ExteriorTargetKeepsMass) {
  DiscretizationOptions o;
  o.nodes = 2000;
  const Region ext = discretize(kNewton, ClosedSet(shape::BallComplement{kOrigin, 1.0}), o);
  const Sweeper sweeper(kNewton, ext);
  const MassLossResult r = mass_loss_test(sweeper, DiscreteMeasure::dirac(kOrigin));
  EXPECT_NEAR(r.mass_out, 1.0, 0.01);
  EXPECT_FALSE(r.strict_loss);

  const MassLossResult zero = mass_loss_test(sweeper, DiscreteMeasure(PointSet(kOrigin), Eigen::VectorXd::Zero(1)));
  EXPECT_EQ(zero.mass_out, 0.0);
  EXPECT_FALSE(zero.strict_loss);
}

TEST(MassLoss, UnboundedSetsPreserveMassAfterTruncationExtrapolation) {
  DiscretizationOptions o;
  o.nodes = 2000;
  for (double alpha : {2.0, 1.5, 1.0}) {
    const KernelSpec spec(alpha, 3);
    const MassLossResult half =
        mass_loss_test(spec, ClosedSet(shape::HalfSpace{p3(0, 0, 1), 0.0}), DiscreteMeasure::dirac(p3(0, 0, 1)), o);
    EXPECT_NEAR(half.mass_out, 1.0, 0.01) << alpha;
    EXPECT_FALSE(half.strict_loss) << alpha;
    EXPECT_LE(half.mass_out_raw, 1.0);
    ASSERT_EQ(half.truncation_radii.size(), 2u);
    EXPECT_DOUBLE_EQ(half.tail_exponent, 0.5 * alpha);

    const MassLossResult ext =
        mass_loss_test(spec, ClosedSet(shape::BallComplement{kOrigin, 1.0}), DiscreteMeasure::dirac(kOrigin), o);
    EXPECT_NEAR(ext.mass_out, 1.0, 0.01) << alpha;
    EXPECT_FALSE(ext.strict_loss) << alpha;
  }
}

TEST(MassLoss, CompactSetsLoseMassForEveryAlpha) {
  DiscretizationOptions o;
  o.nodes = 2000;
  for (double alpha : {2.0, 1.5, 1.0}) {
    const KernelSpec spec(alpha, 3);
    for (const Point& y : {p3(2, 0, 0), p3(0, -1.5, 1.5), p3(4, 4, 0)}) {
      const MassLossResult r = mass_loss_test(spec, unit_ball(), DiscreteMeasure::dirac(y), o);
      EXPECT_TRUE(r.strict_loss) << alpha;
      EXPECT_TRUE(r.truncation_radii.empty());
    }
  }
}
