#pragma once

// Thinness diagnostics: Wiener's series at a point y,
//
//     sum_k c(A_k) / q^{k (n - alpha)},    A_k = A cap {q^{k+1} <= |x - y| < q^k},
//
// and the mass-loss test for sweeping onto sets thin at infinity.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "riesz/balayage.hpp"
#include "riesz/core.hpp"
#include "riesz/equilibrium.hpp"
#include "riesz/lattice.hpp"
#include "riesz/region.hpp"

namespace riesz {

enum class Classification { Regular, Irregular, Inconclusive };

inline const char* to_string(Classification c) {
  switch (c) {
    case Classification::Regular: return "regular";
    case Classification::Irregular: return "irregular";
    case Classification::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

struct WienerOptions {
  int tail = 4;
  double ratio_cutoff = 0.9;
  /// term_floor = floor_factor * max term.
  double floor_factor = 1e-3;
  /// Grid spacing per shell as a fraction of the shell's outer radius.
  double resolution = 1.0 / 8.0;
  SolverOptions solver;
};

struct WienerShell {
  int k = 0;
  Eigen::Index node_count = 0;
  double capacity = 0.0;
  double term = 0.0;
};

struct WienerReport {
  Point point;
  double ratio_q = 0.5;
  std::vector<WienerShell> shells;
  Classification classification = Classification::Inconclusive;
  /// Geometric ratio fitted to the last `tail` terms (0 when they vanish).
  double fitted_ratio = 0.0;
  double term_floor = 0.0;
  /// Set when more than `tail` consecutive shells miss A.
  bool empty_shell_run = false;
  WienerOptions options;
};

namespace detail {

/// Cubic-grid nodes of A inside the shell q^{k+1} <= |x - y| < q^k, plus
/// any explicit cloud points there. Radii use the cubic-lattice self-energy.
inline std::optional<Region> shell_region(const KernelSpec& spec, const ClosedSet& set, const Point& y,
                                          double inner, double outer, double resolution) {
  if (spec.dim() != 3) throw InvalidArgument("Wiener shells are implemented for n = 3");
  const double spacing = outer * resolution;
  const double radius = lattice::self_energy_radius(lattice::Layout::Cubic, spec.exponent(), std::pow(spacing, 3));
  std::vector<Point> pts;
  std::vector<double> radii;
  const auto steps = static_cast<int>(std::ceil(outer / spacing));
  for (int i = -steps; i <= steps; ++i) {
    for (int j = -steps; j <= steps; ++j) {
      for (int l = -steps; l <= steps; ++l) {
        Point x(3);
        x << y[0] + (i + 0.5) * spacing, y[1] + (j + 0.5) * spacing, y[2] + (l + 0.5) * spacing;
        const double r = (x - y).norm();
        if (r < inner || r >= outer) continue;
        if (!set.contains(x)) continue;
        pts.push_back(x);
        radii.push_back(radius);
      }
    }
  }
  for (const auto& part : set.parts()) {
    if (const auto* cloud = std::get_if<shape::Cloud>(&part)) {
      const double h = cloud->points.cols() > 1 ? default_reg_radius(cloud->points) : spacing * 0.5;
      for (Eigen::Index c = 0; c < cloud->points.cols(); ++c) {
        const Point x = cloud->points.col(c);
        const double r = (x - y).norm();
        if (r >= inner && r < outer) {
          pts.push_back(x);
          radii.push_back(std::min(h, radius));
        }
      }
    }
  }
  if (pts.empty()) return std::nullopt;
  PointSet nodes(3, static_cast<Eigen::Index>(pts.size()));
  Eigen::VectorXd h(nodes.cols());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    nodes.col(static_cast<Eigen::Index>(i)) = pts[i];
    h[static_cast<Eigen::Index>(i)] = radii[i];
  }
  RegionInfo info;
  info.label = "wiener shell";
  info.support = "solid";
  return Region(set, std::move(nodes), std::move(h), std::move(info));
}

}  // namespace detail

/// Wiener series terms for shells k = 1..k_max around y, with classification.
inline WienerReport wiener_report(const KernelSpec& spec, const ClosedSet& set, const Point& y, double q, int k_max,
                                  const WienerOptions& opts = {}) {
  spec.check_point(y);
  if (!(q > 0.0 && q < 1.0)) throw InvalidArgument("shell ratio q must lie in (0,1)");
  if (k_max < 1) throw InvalidArgument("need at least one shell");
  if (opts.tail < 2) throw InvalidArgument("classification tail must cover at least two shells");
  WienerReport rep;
  rep.point = y;
  rep.ratio_q = q;
  rep.options = opts;
  rep.shells.resize(static_cast<std::size_t>(k_max));
  detail::parallel_for(k_max, [&](Eigen::Index idx) {
    const int k = static_cast<int>(idx) + 1;
    WienerShell& sh = rep.shells[static_cast<std::size_t>(idx)];
    sh.k = k;
    const double outer = std::pow(q, k);
    const double inner = std::pow(q, k + 1);
    const auto shell = detail::shell_region(spec, set, y, inner, outer, opts.resolution);
    if (!shell) return;
    sh.node_count = shell->size();
    EquilibriumOptions eo;
    eo.solver = opts.solver;
    eo.probes = 0;
    const EquilibriumResult eq = riesz_equilibrium(spec, *shell, eo);
    sh.capacity = eq.capacity;
    sh.term = eq.capacity / std::pow(q, k * spec.exponent());
  }, 1);

  double max_term = 0.0;
  int run = 0;
  for (const auto& sh : rep.shells) {
    max_term = std::max(max_term, sh.term);
    run = sh.node_count == 0 ? run + 1 : 0;
    if (run > opts.tail) rep.empty_shell_run = true;
  }
  rep.term_floor = opts.floor_factor * max_term;

  const int tail = std::min(opts.tail, k_max);
  const auto first = rep.shells.end() - tail;
  bool all_positive = true;
  bool above_floor = max_term > 0.0;
  for (auto it = first; it != rep.shells.end(); ++it) {
    all_positive = all_positive && it->term > 0.0;
    above_floor = above_floor && it->term >= rep.term_floor;
  }
  if (all_positive && tail >= 2) {
    // Least-squares slope of log term against k.
    double sk = 0.0, sl = 0.0, skk = 0.0, skl = 0.0;
    for (auto it = first; it != rep.shells.end(); ++it) {
      const double kk = it->k;
      const double l = std::log(it->term);
      sk += kk;
      sl += l;
      skk += kk * kk;
      skl += kk * l;
    }
    const double m = tail;
    rep.fitted_ratio = std::exp((m * skl - sk * sl) / (m * skk - sk * sk));
  }
  if (rep.empty_shell_run || (all_positive && rep.fitted_ratio < opts.ratio_cutoff)) {
    rep.classification = Classification::Irregular;
  } else if (all_positive && above_floor) {
    rep.classification = Classification::Regular;
  } else {
    rep.classification = Classification::Inconclusive;
  }
  return rep;
}

/// Thinness of A at infinity through the inverse of A about `center`
/// (a point off A): A is thin at infinity iff the inverse is thin at center.
inline WienerReport wiener_at_infinity(const KernelSpec& spec, const ClosedSet& set, const Point& center, double q,
                                       int k_max, const WienerOptions& opts = {}) {
  if (set.contains(center)) throw InvalidArgument("inversion center must lie off the set");
  const ClosedSet image(shape::Inverted{center, std::make_shared<const ClosedSet>(set)});
  return wiener_report(spec, image, center, q, k_max, opts);
}

struct MassLossResult {
  double mass_in = 0.0;
  /// Swept mass; for truncated unbounded sets, extrapolated to infinite truncation.
  double mass_out = 0.0;
  /// Swept mass of the largest discretization actually solved.
  double mass_out_raw = 0.0;
  bool strict_loss = false;
  double loss_margin = 0.02;
  /// Truncation radii of the two solves behind the extrapolation (empty otherwise).
  std::vector<double> truncation_radii;
  /// Exponent p of the assumed tail deficit C R^{-p}.
  double tail_exponent = 0.0;
};

/// Sweeps mu onto A and flags a mass loss beyond `loss_margin`.
inline MassLossResult mass_loss_test(const Sweeper& sweeper, const DiscreteMeasure& mu, double loss_margin = 0.02,
                                     const SweepOptions& opts = {}) {
  MassLossResult out;
  out.loss_margin = loss_margin;
  const SweepResult r = sweeper.sweep(mu, opts);
  out.mass_in = r.mass_in;
  out.mass_out = r.mass_out;
  out.mass_out_raw = r.mass_out;
  out.strict_loss = r.mass_out < r.mass_in * (1.0 - loss_margin);
  return out;
}

inline MassLossResult mass_loss_test(const KernelSpec& spec, const Region& region, const DiscreteMeasure& mu,
                                     double loss_margin = 0.02, const SweepOptions& opts = {}) {
  const Sweeper sweeper(spec, region);
  return mass_loss_test(sweeper, mu, loss_margin, opts);
}

namespace detail {

/// Decay exponent of the swept mass lying beyond radius R for unbounded
/// parts: R^{-alpha} off a ball complement, R^{-alpha/2} off a half-space.
inline double tail_exponent(const KernelSpec& spec, const ClosedSet& set) {
  double p = kInfinity;
  for (const auto& part : set.parts()) {
    if (std::holds_alternative<shape::BallComplement>(part)) {
      p = std::min(p, spec.alpha());
    } else if (std::holds_alternative<shape::HalfSpace>(part)) {
      p = std::min(p, 0.5 * spec.alpha());
    } else if (!ClosedSet(part).is_bounded()) {
      throw InvalidArgument("no truncation tail model for this unbounded set");
    }
  }
  return p;
}

}  // namespace detail

/// Mass-loss test on a shape. Bounded sets are discretized once. Unbounded
/// sets are solved at truncation radii 4R and 8R (R = opts.truncation_radius)
/// and the swept mass is extrapolated in R with the shape's tail exponent.
inline MassLossResult mass_loss_test(const KernelSpec& spec, const ClosedSet& set, const DiscreteMeasure& mu,
                                     const DiscretizationOptions& opts, double loss_margin = 0.02,
                                     const SweepOptions& sweep_opts = {}) {
  if (set.is_bounded()) return mass_loss_test(spec, discretize(spec, set, opts), mu, loss_margin, sweep_opts);
  const double p = detail::tail_exponent(spec, set);
  MassLossResult out;
  out.loss_margin = loss_margin;
  out.tail_exponent = p;
  double near = 0.0;
  for (double factor : {4.0, 8.0}) {
    DiscretizationOptions o = opts;
    o.truncation_radius = factor * opts.truncation_radius;
    const MassLossResult r = mass_loss_test(spec, discretize(spec, set, o), mu, loss_margin, sweep_opts);
    out.truncation_radii.push_back(o.truncation_radius);
    out.mass_in = r.mass_in;
    if (factor == 4.0) near = r.mass_out;
    out.mass_out_raw = r.mass_out;
  }
  out.mass_out = out.mass_out_raw + (out.mass_out_raw - near) / (std::pow(2.0, p) - 1.0);
  out.strict_loss = out.mass_out < out.mass_in * (1.0 - loss_margin);
  return out;
}

}  // namespace riesz
