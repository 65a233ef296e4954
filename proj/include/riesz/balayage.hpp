#pragma once

// Balayage of discrete measures onto a discretized closed set A. The swept
// measure is the energy projection of mu onto the nonnegative measures on the
// nodes of A:
//
//     minimize_w  w^T K w - 2 b^T w,  w >= 0,   b_i = kappa mu(a_i).
//
// A Sweeper owns the Gram matrix of A and its Cholesky factor, so repeated
// sweeps onto the same set cost one triangular solve pair each.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "riesz/core.hpp"
#include "riesz/error.hpp"
#include "riesz/region.hpp"
#include "riesz/solver.hpp"

namespace riesz {

inline constexpr std::uint64_t kDefaultProbeSeed = 0x5eed2024;

struct SweepOptions {
  SolverOptions solver;
  /// Probes for the domination check; 0 disables it.
  Eigen::Index probes = 100;
  std::uint64_t probe_seed = kDefaultProbeSeed;
  /// Relative slack of kappa mu^A <= kappa mu at probes.
  double domination_tol = 0.02;
  /// Slack of the mass and energy inequalities.
  double solver_eps = 1e-8;
};

struct SweepChecks {
  /// max relative |kappa mu^A - kappa mu| over charged nodes of A.
  double equality_gap = 0.0;
  /// max over probes of kappa mu^A / kappa mu - 1.
  double domination_excess = 0.0;
  Eigen::Index probe_count = 0;
  Eigen::Index probe_violations = 0;
  std::uint64_t probe_seed = 0;
  bool mass_ok = true;
  bool energy_ok = true;
};

struct SweepResult {
  DiscreteMeasure swept;
  DiscreteMeasure source;
  QPSolution solution;
  double mass_in = 0.0;
  double mass_out = 0.0;
  double energy_in = 0.0;
  double energy_out = 0.0;
  SweepChecks checks;
};

struct SignedSweepResult {
  DiscreteMeasure swept;
  SweepResult positive;
  SweepResult negative;
};

namespace detail {

/// Probe points off A near the source: a box around mu's support large
/// enough to reach the nearest part of A.
inline PointSet source_probes(const Region& region, const DiscreteMeasure& mu, Eigen::Index count,
                              std::uint64_t seed) {
  const int dim = region.dim();
  Point c = Point::Zero(dim);
  if (mu.size() > 0) c = mu.points().rowwise().mean();
  double reach = 0.0;
  for (Eigen::Index j = 0; j < mu.size(); ++j) reach = std::max(reach, (mu.point(j) - c).norm());
  double to_set = kInfinity;
  for (Eigen::Index i = 0; i < region.size(); ++i) to_set = std::min(to_set, (region.nodes().col(i) - c).norm());
  const double half = std::max({1.0, 2.0 * reach, 1.5 * to_set});
  const Point lo = c.array() - half;
  const Point hi = c.array() + half;
  return sample_domain_points(region, count, seed, lo, hi);
}

}  // namespace detail

class Sweeper {
 public:
  Sweeper(const KernelSpec& spec, std::shared_ptr<const Region> region)
      : spec_(spec),
        region_(std::move(region)),
        gram_(assemble_gram(spec_, region_->nodes(), region_->reg_radii())),
        qp_(gram_.entries()),
        tol_(distinct_tolerance(region_->nodes())) {
    if (region_->dim() != spec_.dim()) throw DimensionMismatch("region dimension differs from kernel");
  }

  Sweeper(const KernelSpec& spec, Region region) : Sweeper(spec, std::make_shared<const Region>(std::move(region))) {}

  Sweeper(const Sweeper&) = delete;
  Sweeper& operator=(const Sweeper&) = delete;

  const KernelSpec& spec() const { return spec_; }
  const Region& region() const { return *region_; }
  std::shared_ptr<const Region> region_ptr() const { return region_; }
  const GramMatrix& gram() const { return gram_; }
  const NonnegQP& qp() const { return qp_; }
  double coincidence_tol() const { return tol_; }

  /// b_i = kappa mu(a_i), with the node's regularized self-energy where mu charges a_i.
  Eigen::VectorXd linear_term(const DiscreteMeasure& mu) const {
    return regularized_potentials(spec_, mu, region_->nodes(), region_->reg_radii(), tol_);
  }

  /// Maps mu onto node indices when every charged point is a node of A.
  std::optional<Eigen::VectorXd> on_nodes(const DiscreteMeasure& mu) const {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(region_->size());
    for (Eigen::Index j = 0; j < mu.size(); ++j) {
      if (mu.weights()[j] == 0.0) continue;
      const auto idx = region_->node_at(mu.point(j), tol_);
      if (!idx) return std::nullopt;
      w[*idx] += mu.weights()[j];
    }
    return w;
  }

  DiscreteMeasure measure(const Eigen::VectorXd& w, bool is_signed = false) const {
    return {region_->nodes(), w, is_signed};
  }

  /// Regularization radii for mu's own points: node radii where mu sits on A,
  /// otherwise the smallest node radius capped by half the distance to any
  /// other charged point or node.
  Eigen::VectorXd source_radii(const DiscreteMeasure& mu) const {
    const double floor = region_->reg_radii().minCoeff();
    Eigen::VectorXd r(mu.size());
    for (Eigen::Index j = 0; j < mu.size(); ++j) {
      const Point x = mu.point(j);
      if (const auto idx = region_->node_at(x, tol_)) {
        r[j] = region_->reg_radii()[*idx];
        continue;
      }
      double near = kInfinity;
      for (Eigen::Index k = 0; k < mu.size(); ++k) {
        if (k != j) near = std::min(near, detail::distance(mu.points(), j, mu.points(), k));
      }
      for (Eigen::Index i = 0; i < region_->size(); ++i) {
        near = std::min(near, detail::distance(mu.points(), j, region_->nodes(), i));
      }
      r[j] = std::min(floor, 0.5 * near);
    }
    return r;
  }

  /// Regularized self-energy of a measure off (or on) A.
  double source_energy(const DiscreteMeasure& mu) const {
    const Eigen::VectorXd radii = source_radii(mu);
    return assemble_energy(mu, radii);
  }

  SweepResult sweep(const DiscreteMeasure& mu, const SweepOptions& opts = {}) const {
    check_source(mu);
    if (mu.is_signed()) {
      for (Eigen::Index j = 0; j < mu.size(); ++j) {
        if (mu.weights()[j] < 0.0) throw InvalidArgument("sweep needs a positive measure; use sweep_signed");
      }
    }
    SweepResult out{measure(Eigen::VectorXd::Zero(region_->size())), mu, {}, mu.total_mass(), 0.0, 0.0, 0.0, {}};
    const Eigen::VectorXd b = linear_term(mu);
    if (auto fixed = on_nodes(mu)) {
      // A measure already on A is its own projection.
      out.solution.weights = *fixed;
      const Eigen::VectorXd g = 2.0 * (gram_.entries() * *fixed - b);
      const double scale = b.lpNorm<Eigen::Infinity>() > 0.0 ? b.lpNorm<Eigen::Infinity>() : 1.0;
      out.solution.kkt_residual = nonneg_kkt_residual(*fixed, g) / scale;
      out.solution.converged = out.solution.kkt_residual <= opts.solver.tol;
      out.solution.objective = qp_.objective(*fixed, b);
    } else {
      out.solution = qp_.solve(b, opts.solver);
      const double scale = b.lpNorm<Eigen::Infinity>() > 0.0 ? b.lpNorm<Eigen::Infinity>() : 1.0;
      out.solution.kkt_residual /= scale;
    }
    if (!out.solution.converged) {
      throw SolverFailure("sweep did not converge: kkt residual " + std::to_string(out.solution.kkt_residual) +
                          " after " + std::to_string(out.solution.iterations) + " iterations");
    }
    const Eigen::VectorXd& w = out.solution.weights;
    out.swept = measure(w);
    out.mass_out = out.swept.total_mass();
    out.energy_out = energy(gram_, w, w);
    out.energy_in = source_energy(mu);

    SweepChecks& c = out.checks;
    const Eigen::VectorXd kw = gram_.entries() * w;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      if (w[i] > 0.0 && b[i] > 0.0) c.equality_gap = std::max(c.equality_gap, std::abs(kw[i] - b[i]) / b[i]);
    }
    c.mass_ok = out.mass_out <= out.mass_in * (1.0 + opts.solver_eps);
    c.energy_ok = out.energy_out <= out.energy_in * (1.0 + opts.solver_eps);
    c.probe_seed = opts.probe_seed;
    if (opts.probes > 0 && mu.size() > 0 && out.mass_in > 0.0) {
      const PointSet probes = detail::source_probes(*region_, mu, opts.probes, opts.probe_seed);
      c.probe_count = probes.cols();
      for (Eigen::Index p = 0; p < probes.cols(); ++p) {
        const double lhs = potential(spec_, out.swept, probes.col(p));
        const double rhs = potential(spec_, mu, probes.col(p));
        const double excess = lhs / rhs - 1.0;
        c.domination_excess = std::max(c.domination_excess, excess);
        if (excess > opts.domination_tol) ++c.probe_violations;
      }
    }
    return out;
  }

  /// nu^A = (nu+)^A - (nu-)^A by two independent sweeps.
  SignedSweepResult sweep_signed(const DiscreteMeasure& nu, const SweepOptions& opts = {}) const {
    SweepResult pos = sweep(nu.positive_part(), opts);
    SweepResult neg = sweep(nu.negative_part(), opts);
    DiscreteMeasure combined = measure(pos.solution.weights - neg.solution.weights, true);
    return {std::move(combined), std::move(pos), std::move(neg)};
  }

  /// Projection weights only, for an explicit linear term; throws on failure.
  Eigen::VectorXd project(const Eigen::VectorXd& b, const SolverOptions& opts = {}) const {
    const QPSolution sol = qp_.solve(b, opts);
    if (!sol.converged) throw SolverFailure("projection did not converge");
    return sol.weights;
  }

  /// Swept weights of unit Diracs at each column of `sources` (one column of
  /// the result per source). Columns whose unconstrained solution is already
  /// nonnegative come from one batched solve; the rest are solved singly.
  Eigen::MatrixXd sweep_diracs(const PointSet& sources, const SolverOptions& opts = {}) const {
    const Eigen::Index m = sources.cols();
    const Eigen::Index n = region_->size();
    Eigen::MatrixXd b(n, m);
    detail::parallel_for(m, [&](Eigen::Index j) {
      for (Eigen::Index i = 0; i < n; ++i) b(i, j) = spec_.of_distance(detail::distance(region_->nodes(), i, sources, j));
    });
    Eigen::MatrixXd w = qp_.solve_unconstrained(b);
    std::vector<Eigen::Index> hard;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (w.col(j).minCoeff() < 0.0) hard.push_back(j);
    }
    detail::parallel_for(static_cast<Eigen::Index>(hard.size()), [&](Eigen::Index k) {
      const Eigen::Index j = hard[static_cast<std::size_t>(k)];
      w.col(j) = project(b.col(j), opts);
    }, 1);
    return w;
  }

 private:
  void check_source(const DiscreteMeasure& mu) const {
    if (mu.dim() != spec_.dim()) throw DimensionMismatch("measure dimension differs from kernel");
  }

  double assemble_energy(const DiscreteMeasure& mu, const Eigen::VectorXd& radii) const {
    double total = 0.0;
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
      double row = 0.0;
      for (Eigen::Index j = 0; j < mu.size(); ++j) {
        const double k = i == j ? spec_.of_distance(radii[i])
                                : spec_.of_distance(detail::distance(mu.points(), i, mu.points(), j));
        row += k * mu.weights()[j];
      }
      total += mu.weights()[i] * row;
    }
    return total;
  }

  KernelSpec spec_;
  std::shared_ptr<const Region> region_;
  GramMatrix gram_;
  NonnegQP qp_;
  double tol_;
};

inline SweepResult sweep(const KernelSpec& spec, const DiscreteMeasure& mu, const Region& region,
                         const SweepOptions& opts = {}) {
  const Sweeper sweeper(spec, region);
  return sweeper.sweep(mu, opts);
}

/// Relative gap between kappa(mu^A, nu) and kappa(mu, nu^A) from two sweeps.
inline double verify_symmetry(const Sweeper& sweeper, const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                              const SweepOptions& opts = {}) {
  SweepOptions quiet = opts;
  quiet.probes = 0;
  const SweepResult a = sweeper.sweep(mu, quiet);
  const SweepResult b = sweeper.sweep(nu, quiet);
  const double lhs = mutual_energy(sweeper.spec(), a.swept, nu);
  const double rhs = mutual_energy(sweeper.spec(), b.swept, mu);
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  return scale == 0.0 ? 0.0 : std::abs(lhs - rhs) / scale;
}

inline double max_relative_potential_gap(const KernelSpec& spec, const DiscreteMeasure& a, const DiscreteMeasure& b,
                                         const PointSet& probes) {
  double worst = 0.0;
  for (Eigen::Index p = 0; p < probes.cols(); ++p) {
    const double u = potential(spec, a, probes.col(p));
    const double v = potential(spec, b, probes.col(p));
    const double scale = std::max(std::abs(u), std::abs(v));
    if (scale > 0.0) worst = std::max(worst, std::abs(u - v) / scale);
  }
  return worst;
}

/// Compares the potential of sum_i c_i (eps_{y_i})^A with that of mu^A at probes.
inline double verify_integral_representation(const Sweeper& sweeper, const DiscreteMeasure& mu,
                                             const SweepOptions& opts = {}) {
  SweepOptions quiet = opts;
  quiet.probes = 0;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(sweeper.region().size());
  for (Eigen::Index j = 0; j < mu.size(); ++j) {
    const SweepResult r = sweeper.sweep(DiscreteMeasure::dirac(mu.point(j), mu.weights()[j]), quiet);
    sum += r.solution.weights;
  }
  const SweepResult whole = sweeper.sweep(mu, quiet);
  const PointSet probes = detail::source_probes(sweeper.region(), mu, opts.probes, opts.probe_seed);
  return max_relative_potential_gap(sweeper.spec(), sweeper.measure(sum), whole.swept, probes);
}

/// Compares potentials of mu^F and (mu^A)^F at probes off A, for F inside A.
inline double verify_transitivity(const Sweeper& onto_a, const Sweeper& onto_f, const DiscreteMeasure& mu,
                                  const SweepOptions& opts = {}) {
  for (Eigen::Index i = 0; i < onto_f.region().size(); ++i) {
    if (!onto_a.region().contains(onto_f.region().nodes().col(i))) {
      throw InvalidArgument("transitivity check needs the nodes of F inside A");
    }
  }
  SweepOptions quiet = opts;
  quiet.probes = 0;
  const SweepResult direct = onto_f.sweep(mu, quiet);
  const SweepResult first = onto_a.sweep(mu, quiet);
  const SweepResult second = onto_f.sweep(first.swept, quiet);
  const PointSet probes = detail::source_probes(onto_a.region(), mu, opts.probes, opts.probe_seed);
  return max_relative_potential_gap(onto_f.spec(), direct.swept, second.swept, probes);
}

struct MinimalityReport {
  Eigen::Index competitors = 0;
  /// max over competitors and probes of kappa mu^A / kappa xi - 1.
  double max_excess = 0.0;
  bool holds = true;
};

/// kappa mu^A is the smallest potential among measures xi with
/// kappa xi >= kappa mu on A. Competitors are random positive measures on
/// points off A, scaled to just meet that constraint at every node.
inline MinimalityReport verify_minimal_potential(const Sweeper& sweeper, const DiscreteMeasure& mu,
                                                 Eigen::Index competitors = 20, Eigen::Index support = 12,
                                                 double slack = 0.02, const SweepOptions& opts = {}) {
  SweepOptions quiet = opts;
  quiet.probes = 0;
  const SweepResult base = sweeper.sweep(mu, quiet);
  const Eigen::VectorXd target = sweeper.linear_term(mu);
  const PointSet probes = detail::source_probes(sweeper.region(), mu, opts.probes, opts.probe_seed);
  std::mt19937_64 rng(opts.probe_seed + 1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  MinimalityReport report;
  for (Eigen::Index c = 0; c < competitors; ++c) {
    const PointSet pts = detail::source_probes(sweeper.region(), mu, support, rng());
    Eigen::VectorXd w(support);
    for (Eigen::Index j = 0; j < support; ++j) w[j] = 0.1 + unit(rng);
    DiscreteMeasure xi(pts, w);
    const Eigen::VectorXd pot = sweeper.linear_term(xi);
    double scale = 0.0;
    for (Eigen::Index i = 0; i < pot.size(); ++i) scale = std::max(scale, target[i] / pot[i]);
    xi = xi.scaled(scale);
    for (Eigen::Index p = 0; p < probes.cols(); ++p) {
      const double excess = potential(sweeper.spec(), base.swept, probes.col(p)) /
                                potential(sweeper.spec(), xi, probes.col(p)) -
                            1.0;
      report.max_excess = std::max(report.max_excess, excess);
    }
    ++report.competitors;
  }
  report.holds = report.max_excess <= slack;
  return report;
}

}  // namespace riesz
