#include <gtest/gtest.h>

#include <cmath>

#include "riesz/lattice.hpp"

using namespace riesz::lattice;

namespace {

// zeta(1/2) and the Dirichlet beta(1/2).
constexpr double kZetaHalf = -1.4603545088095868;
constexpr double kBetaHalf = 0.6676914571896092;

}  // namespace

TEST(EpsteinZeta, SquareLatticeFactorization) {
  // sum' |n|^{-s} over Z^2 equals 4 zeta(s/2) beta(s/2).
  EXPECT_NEAR(epstein_zeta(Layout::Square, 1.0), 4.0 * kZetaHalf * kBetaHalf, 1e-12);
}

TEST(EpsteinZeta, CubicLatticeCoulombConstant) {
  EXPECT_NEAR(epstein_zeta(Layout::Cubic, 1.0), -2.83729747948062, 1e-12);
}

TEST(EpsteinZeta, TriangularLatticeCoulombConstant) {
  EXPECT_NEAR(epstein_zeta(Layout::Hexagonal, 1.0), -4.21342263613691, 1e-12);
}

TEST(EpsteinZeta, StackedLayoutIsNegativeBelowDimension) {
  for (double s : {0.5, 1.0, 1.5, 2.0, 2.5}) {
    EXPECT_LT(epstein_zeta(Layout::StackedHexagonal, s), 0.0) << s;
    EXPECT_LT(epstein_zeta(Layout::Cubic, s), 0.0) << s;
  }
}

TEST(EpsteinZeta, RejectsExponentOutsideStrip) {
  EXPECT_THROW(epstein_zeta(Layout::Hexagonal, 2.0), riesz::InvalidArgument);
  EXPECT_THROW(epstein_zeta(Layout::Cubic, 3.0), riesz::InvalidArgument);
  EXPECT_THROW(epstein_zeta(Layout::Square, 0.0), riesz::InvalidArgument);
}

TEST(EpsteinZeta, CacheReturnsSameValue) {
  EXPECT_EQ(cached_epstein_zeta(Layout::Hexagonal, 1.25), epstein_zeta(Layout::Hexagonal, 1.25));
  EXPECT_EQ(cached_epstein_zeta(Layout::Hexagonal, 1.25), cached_epstein_zeta(Layout::Hexagonal, 1.25));
}

TEST(Covolume, UnitSpacingCells) {
  EXPECT_DOUBLE_EQ(covolume(Layout::Square), 1.0);
  EXPECT_DOUBLE_EQ(covolume(Layout::Cubic), 1.0);
  EXPECT_NEAR(covolume(Layout::Hexagonal), std::sqrt(3.0) / 2.0, 1e-15);
  EXPECT_NEAR(covolume(Layout::StackedHexagonal), std::sqrt(3.0) / 2.0, 1e-15);
}

TEST(SelfEnergyRadius, InvertsTheDiagonalFormula) {
  const double s = 1.0;
  const double cell = 0.01;
  const double h = self_energy_radius(Layout::Hexagonal, s, cell);
  const double diag = -epstein_zeta(Layout::Hexagonal, s) * std::pow(covolume(Layout::Hexagonal) / cell, s / 2.0);
  EXPECT_NEAR(std::pow(h, -s), diag, 1e-12 * diag);
}

TEST(SelfEnergyRadius, ScalesWithCellSide) {
  const double a = self_energy_radius(Layout::Cubic, 1.5, 1e-3);
  const double b = self_energy_radius(Layout::Cubic, 1.5, 8e-3);
  EXPECT_NEAR(b / a, 2.0, 1e-12);
  EXPECT_THROW(self_energy_radius(Layout::Cubic, 1.5, 0.0), riesz::InvalidArgument);
}
