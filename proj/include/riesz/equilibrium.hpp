#pragma once

// Equilibrium measures and capacities by minimizing the energy over unit-mass
// measures on the nodes of a set. With w the simplex minimizer and E = w^T K w
// the capacity is 1/E and gamma = w/E, whose potential is close to 1 on the set.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "riesz/balayage.hpp"
#include "riesz/core.hpp"
#include "riesz/green.hpp"
#include "riesz/region.hpp"
#include "riesz/solver.hpp"

namespace riesz {

struct PotentialStats {
  double min = 0.0;
  double max = 0.0;
  double mean = 0.0;
  Eigen::Index count = 0;
};

inline PotentialStats stats_of(const std::vector<double>& values) {
  PotentialStats s;
  s.count = static_cast<Eigen::Index>(values.size());
  if (values.empty()) return s;
  s.min = kInfinity;
  s.max = -kInfinity;
  double sum = 0.0;
  for (double v : values) {
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
    sum += v;
  }
  s.mean = sum / static_cast<double>(values.size());
  return s;
}

struct MinimalityCheck {
  Eigen::Index competitors = 0;
  /// Riesz: max of kappa gamma - kappa theta at probes. Green: max of
  /// capacity - ||nu||_g^2 over competitors.
  double worst = 0.0;
  bool holds = true;
};

struct EquilibriumOptions {
  SolverOptions solver;
  Eigen::Index probes = 100;
  std::uint64_t probe_seed = kDefaultProbeSeed;
  /// Slack of the pinch bounds and the minimality checks.
  double tol = 0.02;
  Eigen::Index competitors = 20;
};

struct EquilibriumResult {
  DiscreteMeasure gamma;
  double capacity = 0.0;
  double min_energy = 0.0;
  QPSolution solution;
  /// Potential of gamma over every node of the set.
  PotentialStats potential_stats;
  /// Potential of gamma over charged nodes.
  PotentialStats charged_stats;
  /// Potential at probe points off the set (Riesz only).
  PotentialStats probe_stats;
  std::uint64_t probe_seed = 0;
  MinimalityCheck minimality;
};

namespace detail {

inline EquilibriumResult solve_equilibrium(const Eigen::MatrixXd& k, const NonnegQP& qp, const PointSet& nodes,
                                           const SolverOptions& opts) {
  const QPSolution unit = qp.solve(Eigen::VectorXd::Ones(k.rows()), opts);
  if (!unit.converged) throw SolverFailure("equilibrium solve did not converge");
  const QPSolution sol = simplex_from_unit_projection(k, unit, 1.0, std::max(opts.tol, 1e-8));
  const double e = sol.weights.dot(k * sol.weights);
  if (!(e > 0.0)) throw SolverFailure("equilibrium energy is not positive");
  EquilibriumResult out{DiscreteMeasure(nodes, sol.weights / e), 1.0 / e, e, sol, {}, {}, {}, 0, {}};
  const Eigen::VectorXd pot = k * out.gamma.weights();
  std::vector<double> all(static_cast<std::size_t>(pot.size()));
  std::vector<double> charged;
  for (Eigen::Index i = 0; i < pot.size(); ++i) {
    all[static_cast<std::size_t>(i)] = pot[i];
    if (out.gamma.weights()[i] > 0.0) charged.push_back(pot[i]);
  }
  out.potential_stats = stats_of(all);
  out.charged_stats = stats_of(charged);
  return out;
}

/// Probe box around the nodes of a set: the bounding box grown by half its
/// size on every side.
inline std::pair<Point, Point> probe_box(const PointSet& nodes) {
  const Point lo = nodes.rowwise().minCoeff();
  const Point hi = nodes.rowwise().maxCoeff();
  const Point pad = ((hi - lo) * 0.5).cwiseMax(0.5);
  return {lo - pad, hi + pad};
}

}  // namespace detail

/// Riesz equilibrium measure of the discretized set of `sweeper`.
inline EquilibriumResult riesz_equilibrium(const Sweeper& sweeper, const EquilibriumOptions& opts = {}) {
  const Region& region = sweeper.region();
  EquilibriumResult out = detail::solve_equilibrium(sweeper.gram().entries(), sweeper.qp(), region.nodes(), opts.solver);
  out.probe_seed = opts.probe_seed;
  if (opts.probes <= 0) return out;

  const auto [lo, hi] = detail::probe_box(region.nodes());
  const PointSet probes = sample_domain_points(region, opts.probes, opts.probe_seed, lo, hi);
  std::vector<double> values(static_cast<std::size_t>(probes.cols()));
  for (Eigen::Index p = 0; p < probes.cols(); ++p) {
    values[static_cast<std::size_t>(p)] = potential(sweeper.spec(), out.gamma, probes.col(p));
  }
  out.probe_stats = stats_of(values);

  // Competitors theta: random positive measures off the set, scaled so that
  // kappa theta >= 1 at every node.
  std::mt19937_64 rng(opts.probe_seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  MinimalityCheck& m = out.minimality;
  m.worst = -kInfinity;
  for (Eigen::Index c = 0; c < opts.competitors; ++c) {
    const PointSet pts = sample_domain_points(region, 12, rng(), lo, hi);
    Eigen::VectorXd w(pts.cols());
    for (Eigen::Index j = 0; j < w.size(); ++j) w[j] = 0.1 + unit(rng);
    const DiscreteMeasure theta0(pts, w);
    const Eigen::VectorXd at_nodes = sweeper.linear_term(theta0);
    const DiscreteMeasure theta = theta0.scaled(1.0 / at_nodes.minCoeff());
    for (Eigen::Index p = 0; p < probes.cols(); ++p) {
      const double gap = values[static_cast<std::size_t>(p)] - potential(sweeper.spec(), theta, probes.col(p));
      m.worst = std::max(m.worst, gap);
    }
    ++m.competitors;
  }
  if (m.competitors == 0) m.worst = 0.0;
  m.holds = m.worst <= opts.tol;
  return out;
}

inline EquilibriumResult riesz_equilibrium(const KernelSpec& spec, const Region& region,
                                           const EquilibriumOptions& opts = {}) {
  const Sweeper sweeper(spec, region);
  return riesz_equilibrium(sweeper, opts);
}

/// Green equilibrium measure of the node set F in the domain of `gk`.
/// `radii` regularize the Green diagonal (default: half the minimum spacing).
inline EquilibriumResult green_equilibrium(const GreenKernel& gk, const PointSet& f_nodes,
                                           std::optional<Eigen::VectorXd> radii = std::nullopt,
                                           const EquilibriumOptions& opts = {}) {
  const GreenGram gg = gk.gram(f_nodes, std::move(radii));
  const Eigen::MatrixXd& g = gg.gram.entries();
  const NonnegQP qp(g);
  EquilibriumResult out = detail::solve_equilibrium(g, qp, f_nodes, opts.solver);
  out.probe_seed = opts.probe_seed;

  // Competitors nu >= 0 on F with G nu >= 1 at every node must have
  // ||nu||_g^2 >= capacity.
  std::mt19937_64 rng(opts.probe_seed ^ 0x7f4a7c159e3779b9ULL);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  MinimalityCheck& m = out.minimality;
  m.worst = -kInfinity;
  const Eigen::Index n = f_nodes.cols();
  for (Eigen::Index c = 0; c < opts.competitors; ++c) {
    Eigen::VectorXd w(n);
    const double keep = c % 2 == 0 ? 1.0 : 0.25 + 0.5 * unit(rng);
    for (Eigen::Index j = 0; j < n; ++j) {
      const double base = c % 4 == 3 ? out.gamma.weights()[j] : 0.0;
      w[j] = base + (unit(rng) < keep ? unit(rng) : 0.0) * (c % 4 == 3 ? 0.2 * out.gamma.weights().maxCoeff() : 1.0);
    }
    if (!(w.maxCoeff() > 0.0)) w[0] = 1.0;
    const Eigen::VectorXd gw = g * w;
    const double lift = 1.0 / gw.minCoeff();
    if (!(lift > 0.0) || !std::isfinite(lift)) continue;
    w *= lift;
    const double norm2 = w.dot(g * w);
    m.worst = std::max(m.worst, (out.capacity - norm2) / out.capacity);
    ++m.competitors;
  }
  if (m.competitors == 0) m.worst = 0.0;
  m.holds = m.worst <= opts.tol;
  return out;
}

}  // namespace riesz
