#pragma once

// Inversion in the unit sphere S(y, 1) and the Kelvin transform of discrete
// measures:
//
//     x* = y + (x - y) / |x - y|^2,        w*_j = w_j |x_j - y|^{alpha-n}.
//
// Potentials transform as  kappa nu*(x*) = |x - y|^{n-alpha} kappa nu(x)  and
// mutual energies are invariant, so these identities hold to round-off.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>

#include "riesz/core.hpp"
#include "riesz/error.hpp"
#include "riesz/region.hpp"

namespace riesz {

/// Inversion with respect to S(center, 1).
class Inversion {
 public:
  explicit Inversion(Point center) : center_(std::move(center)) {}

  const Point& center() const { return center_; }

  Point operator()(const Point& x) const {
    if (x.size() != center_.size()) throw DimensionMismatch("point dimension differs from inversion center");
    const Point d = x - center_;
    const double r2 = d.squaredNorm();
    if (r2 == 0.0) {
      throw CenterInversion("the inversion center maps to the point at infinity " +
                            detail::format_point(center_));
    }
    return center_ + d / r2;
  }

 private:
  Point center_;
};

inline Point invert_point(const Inversion& inv, const Point& x) { return inv(x); }

/// Kelvin image nu*: inverted nodes with weights w_j |x_j - y|^{alpha-n}.
inline DiscreteMeasure kelvin_transform(const Inversion& inv, const KernelSpec& spec, const DiscreteMeasure& nu) {
  if (nu.dim() != spec.dim() || inv.center().size() != spec.dim()) {
    throw DimensionMismatch("kelvin_transform: dimension differs from kernel");
  }
  PointSet pts(nu.dim(), nu.size());
  Eigen::VectorXd w(nu.size());
  for (Eigen::Index j = 0; j < nu.size(); ++j) {
    const Point x = nu.point(j);
    const double r = detail::distance(x.data(), inv.center().data(), spec.dim());
    if (r == 0.0) {
      throw CenterCharged("measure has a node at the inversion center " + detail::format_point(inv.center()));
    }
    pts.col(j) = inv(x);
    w[j] = nu.weights()[j] * spec.of_distance(r);
  }
  return {std::move(pts), std::move(w), nu.is_signed()};
}

inline double relative_gap(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

/// max over samples of |kappa nu*(x*) - |x-y|^{n-alpha} kappa nu(x)| / |kappa nu*(x*)|.
inline double verify_potential_covariance(const Inversion& inv, const KernelSpec& spec, const DiscreteMeasure& nu,
                                          const PointSet& samples) {
  const DiscreteMeasure image = kelvin_transform(inv, spec, nu);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < samples.cols(); ++i) {
    const Point x = samples.col(i);
    const double lhs = potential(spec, image, inv(x));
    const double r = (x - inv.center()).norm();
    const double rhs = potential(spec, nu, x) / spec.of_distance(r);
    const double scale = std::abs(lhs);
    worst = std::max(worst, scale == 0.0 ? std::abs(rhs) : std::abs(lhs - rhs) / scale);
  }
  return worst;
}

/// Relative gap between kappa(mu*, nu*) and kappa(mu, nu) for disjoint supports.
inline double verify_energy_invariance(const Inversion& inv, const KernelSpec& spec, const DiscreteMeasure& mu,
                                       const DiscreteMeasure& nu) {
  const double before = mutual_energy(spec, mu, nu);
  const double after = mutual_energy(spec, kelvin_transform(inv, spec, mu), kelvin_transform(inv, spec, nu));
  return relative_gap(before, after);
}

/// Relative gap in the mass identity nu*(R^n) = kappa nu(y).
inline double verify_mass_identity(const Inversion& inv, const KernelSpec& spec, const DiscreteMeasure& nu) {
  return relative_gap(kelvin_transform(inv, spec, nu).total_mass(), potential(spec, nu, inv.center()));
}

/// Image of the sphere S(c, r) under the inversion, when the sphere avoids the center.
struct SphereImage {
  Point center;
  double radius;
};

inline SphereImage invert_sphere(const Inversion& inv, const Point& center, double radius) {
  const Point d = center - inv.center();
  const double denom = d.squaredNorm() - radius * radius;
  if (denom == 0.0) throw CenterInversion("sphere passes through the inversion center");
  return {inv.center() + d / denom, radius / std::abs(denom)};
}

/// Kelvin image of a discretized region: nodes are inverted and radii scaled
/// by |x - y|^{-2}, which keeps weighted self-energies invariant under the
/// transform. The image of the point at infinity is kept as metadata only.
inline Region invert_region(const Inversion& inv, const Region& region) {
  PointSet pts(region.dim(), region.size());
  Eigen::VectorXd radii(region.size());
  for (Eigen::Index i = 0; i < region.size(); ++i) {
    const Point x = region.nodes().col(i);
    pts.col(i) = inv(x);
    radii[i] = region.reg_radii()[i] / (x - inv.center()).squaredNorm();
  }
  auto source = std::make_shared<const ClosedSet>(region.set());
  ClosedSet image(shape::Inverted{inv.center(), source});
  RegionInfo info;
  info.label = region.info().label.empty() ? "inverted" : "inverted " + region.info().label;
  info.support = region.info().support;
  if (!region.set().is_bounded()) info.puncture = inv.center();
  return {std::move(image), std::move(pts), std::move(radii), std::move(info)};
}

}  // namespace riesz
