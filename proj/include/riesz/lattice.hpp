#pragma once

// Lattice-corrected self-energies for point discretizations of sheets and
// solids. A node standing for a cell of measure v in a locally lattice-like
// layout of dimension d needs the diagonal
//
//     K_ii = -zeta_L(s) * (V_L / v)^{s/d},      0 < s < d,
//
// where zeta_L is the (analytically continued) Epstein zeta function of the
// unit-spacing lattice L with covolume V_L. With it the discrete energy of a
// uniform layout matches the continuum energy to leading order.

#include <boost/math/special_functions/gamma.hpp>

#include <Eigen/Dense>

#include <array>
#include <map>
#include <mutex>
#include <utility>
#include <cmath>
#include <string>

#include "riesz/error.hpp"

namespace riesz::lattice {

enum class Layout {
  /// Hexagonal sheet (surface nodes, d = 2).
  Hexagonal,
  /// Hexagonal sheets stacked at unit spacing (volume nodes, d = 3).
  StackedHexagonal,
  Square,
  Cubic,
};

inline int layout_dimension(Layout layout) {
  return layout == Layout::Hexagonal || layout == Layout::Square ? 2 : 3;
}

namespace detail {

inline Eigen::MatrixXd basis(Layout layout) {
  const double half_root3 = std::sqrt(3.0) / 2.0;
  if (layout == Layout::Square) return Eigen::MatrixXd::Identity(2, 2);
  if (layout == Layout::Cubic) return Eigen::MatrixXd::Identity(3, 3);
  if (layout == Layout::Hexagonal) {
    Eigen::MatrixXd b(2, 2);
    b << 1.0, 0.5, 0.0, half_root3;  // columns are basis vectors
    return b;
  }
  Eigen::MatrixXd b(3, 3);
  b << 1.0, 0.5, 0.0, 0.0, half_root3, 0.0, 0.0, 0.0, 1.0;
  return b;
}

// int_1^inf t^{a-1} e^{-z t} dt = Gamma(a, z) z^{-a}
inline double upper_tail(double a, double z) {
  return boost::math::tgamma(a, z) * std::pow(z, -a);
}

}  // namespace detail

inline double covolume(Layout layout) {
  return std::abs(detail::basis(layout).determinant());
}

/// Epstein zeta sum' |x|^{-s} over the unit-spacing lattice, continued to
/// 0 < s < d through the Riemann theta splitting at t = 1.
inline double epstein_zeta(Layout layout, double s) {
  const Eigen::MatrixXd b = detail::basis(layout);
  const auto d = static_cast<int>(b.rows());
  if (!(s > 0.0 && s < d)) {
    throw InvalidArgument("epstein_zeta: exponent must lie in (0, " + std::to_string(d) + ")");
  }
  const Eigen::MatrixXd dual = b.inverse().transpose();
  const double vol = std::abs(b.determinant());
  constexpr int kRange = 6;
  const double pi = M_PI;
  double direct = 0.0;
  double reciprocal = 0.0;
  Eigen::VectorXi n = Eigen::VectorXi::Constant(d, -kRange);
  while (true) {
    if (!n.isZero()) {
      const Eigen::VectorXd nv = n.cast<double>();
      const double r2 = (b * nv).squaredNorm();
      const double k2 = (dual * nv).squaredNorm();
      direct += detail::upper_tail(s / 2.0, pi * r2);
      reciprocal += detail::upper_tail((d - s) / 2.0, pi * k2);
    }
    int k = 0;
    while (k < d && n[k] == kRange) n[k++] = -kRange;
    if (k == d) break;
    ++n[k];
  }
  const double theta = direct + reciprocal / vol - 2.0 / s - 2.0 / (vol * (d - s));
  return theta * std::pow(pi, s / 2.0) / std::tgamma(s / 2.0);
}

/// epstein_zeta memoized per (layout, exponent); safe for concurrent use.
inline double cached_epstein_zeta(Layout layout, double s) {
  static std::mutex mutex;
  static std::map<std::pair<int, double>, double> cache;
  const std::pair<int, double> key{static_cast<int>(layout), s};
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const double value = epstein_zeta(layout, s);
  std::lock_guard lock(mutex);
  return cache.emplace(key, value).first->second;
}

/// Regularization radius h with h^{-s} = -zeta_L(s) (V_L / cell)^{s/d}, for a
/// node representing `cell_measure` (area for sheets, volume for solids).
inline double self_energy_radius(Layout layout, double s, double cell_measure) {
  const int d = layout_dimension(layout);
  if (!(cell_measure > 0.0)) throw InvalidArgument("cell measure must be positive");
  const double zeta = cached_epstein_zeta(layout, s);
  if (!(zeta < 0.0)) throw InvalidArgument("lattice self-energy requires a negative zeta value");
  return std::pow(-zeta, -1.0 / s) * std::pow(cell_measure / covolume(layout), 1.0 / d);
}

}  // namespace riesz::lattice
