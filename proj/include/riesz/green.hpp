#pragma once

// The alpha-Green kernel of a domain D with complement A:
//
//     g(x, y) = kappa(x, y) - kappa eps_y^A(x),       x, y in D,
//
// where eps_y^A is the balayage of the unit Dirac at y onto A. Swept Diracs
// are cached by source point, so repeated evaluations with a shared source
// cost one potential sum each.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <future>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "riesz/balayage.hpp"
#include "riesz/core.hpp"
#include "riesz/error.hpp"
#include "riesz/region.hpp"

namespace riesz {

struct GreenOptions {
  SolverOptions solver;
  /// Maximum number of cached swept Diracs.
  std::size_t cache_capacity = 4096;
  /// Quantization step of cache keys.
  double key_step = 1e-12;
};

struct GreenPotential {
  double value = 0.0;
  /// Relative gap between the kernel-sum route and the single-sweep route.
  double route_gap = 0.0;
};

struct GreenGram {
  GramMatrix gram;
  /// max |C - C^T| / max |G| before symmetrization, C the compensating terms.
  double asymmetry = 0.0;
};

class GreenKernel {
 public:
  /// `complement` discretizes A = D^c.
  GreenKernel(const KernelSpec& spec, std::shared_ptr<const Region> complement, GreenOptions opts = {})
      : opts_(opts), sweeper_(std::make_shared<const Sweeper>(spec, std::move(complement))) {}

  GreenKernel(const KernelSpec& spec, Region complement, GreenOptions opts = {})
      : GreenKernel(spec, std::make_shared<const Region>(std::move(complement)), opts) {}

  const KernelSpec& spec() const { return sweeper_->spec(); }
  const Region& complement() const { return sweeper_->region(); }
  const Sweeper& sweeper() const { return *sweeper_; }
  const GreenOptions& options() const { return opts_; }

  bool in_domain(const Point& x) const { return complement().in_domain(x); }

  void require_domain(const Point& x) const {
    spec().check_point(x);
    if (!in_domain(x)) throw PointOutsideDomain("point " + detail::format_point(x) + " is not in the domain");
  }

  /// Swept weights of eps_y on the nodes of A (cached).
  std::shared_ptr<const Eigen::VectorXd> swept_dirac(const Point& y) const {
    require_domain(y);
    const Key key = quantize(y);
    std::shared_future<std::shared_ptr<const Eigen::VectorXd>> pending;
    std::promise<std::shared_ptr<const Eigen::VectorXd>> promise;
    bool owner = false;
    {
      std::lock_guard lock(mutex_);
      if (auto it = cache_.find(key); it != cache_.end()) {
        lru_.splice(lru_.begin(), lru_, it->second.second);
        ++hits_;
        pending = it->second.first;
      } else {
        ++misses_;
        owner = true;
        pending = promise.get_future().share();
        lru_.push_front(key);
        cache_.emplace(key, std::make_pair(pending, lru_.begin()));
        while (cache_.size() > opts_.cache_capacity && lru_.size() > 1) {
          cache_.erase(lru_.back());
          lru_.pop_back();
        }
      }
    }
    if (owner) {
      try {
        auto w = std::make_shared<const Eigen::VectorXd>(sweeper_->project(sweep_term(dequantize(key)), opts_.solver));
        promise.set_value(std::move(w));
      } catch (...) {
        promise.set_exception(std::current_exception());
        std::lock_guard lock(mutex_);
        if (auto it = cache_.find(key); it != cache_.end()) {
          lru_.erase(it->second.second);
          cache_.erase(it);
        }
        throw;
      }
    }
    return pending.get();
  }

  /// kappa eps_y^A(x).
  double compensator(const Point& x, const Point& y) const {
    const auto w = swept_dirac(y);
    return potential(spec(), sweeper_->measure(*w), x);
  }

  double eval(const Point& x, const Point& y) const {
    require_domain(x);
    require_domain(y);
    const double direct = spec()(x, y);
    if (std::isinf(direct)) return kInfinity;
    return direct - compensator(x, y);
  }

  /// g nu(x) as sum_j w_j g(x, y_j), cross-checked against kappa nu(x) - kappa nu^A(x).
  GreenPotential potential_at(const DiscreteMeasure& nu, const Point& x) const {
    require_domain(x);
    check_measure(nu);
    GreenPotential out;
    for (Eigen::Index j = 0; j < nu.size(); ++j) {
      if (nu.weights()[j] == 0.0) continue;
      out.value += nu.weights()[j] * eval(x, nu.point(j));
    }
    if (std::isinf(out.value)) return out;
    const SignedSweepResult swept = sweep_measure(nu);
    const double other = potential(spec(), nu, x) - potential(spec(), swept.swept, x);
    const double scale = std::max(std::abs(out.value), std::abs(other));
    out.route_gap = scale == 0.0 ? 0.0 : std::abs(out.value - other) / scale;
    return out;
  }

  /// Green potential with the regularized Green diagonal where x hits a charged point.
  double regularized_potential(const DiscreteMeasure& nu, const Eigen::VectorXd& radii, const Point& x) const {
    const double tol = sweeper_->coincidence_tol();
    double total = 0.0;
    for (Eigen::Index j = 0; j < nu.size(); ++j) {
      const double w = nu.weights()[j];
      if (w == 0.0) continue;
      const Point y = nu.point(j);
      if ((x - y).norm() <= tol) {
        total += w * (spec().of_distance(radii[j]) - compensator(y, y));
      } else {
        total += w * eval(x, y);
      }
    }
    return total;
  }

  /// G_ij = g(x_i, x_j), G_ii = radius_i^{alpha-n} - kappa eps_{x_i}^A(x_i),
  /// from one batched sweep of all nodes; symmetrized, with the pre-symmetrization
  /// asymmetry reported.
  GreenGram gram(const PointSet& nodes, std::optional<Eigen::VectorXd> radii = std::nullopt) const {
    for (Eigen::Index j = 0; j < nodes.cols(); ++j) {
      spec().check_point(nodes.col(j));
      if (!in_domain(nodes.col(j))) {
        throw NodesOutsideDomain("Green Gram node " + std::to_string(j) + " lies outside the domain");
      }
    }
    const Eigen::VectorXd r = radii ? *radii : Eigen::VectorXd::Constant(nodes.cols(), default_reg_radius(nodes));
    const GramMatrix base = assemble_gram(spec(), nodes, r);
    const Eigen::MatrixXd w = sweeper_->sweep_diracs(nodes, opts_.solver);
    const Region& a = complement();
    Eigen::MatrixXd cross(a.size(), nodes.cols());
    detail::parallel_for(nodes.cols(), [&](Eigen::Index j) {
      for (Eigen::Index i = 0; i < a.size(); ++i) cross(i, j) = spec().of_distance(detail::distance(a.nodes(), i, nodes, j));
    });
    // comp(i, j) = kappa eps_{x_j}^A(x_i)
    const Eigen::MatrixXd comp = cross.transpose() * w;
    Eigen::MatrixXd g = base.entries() - comp;
    const double scale = g.cwiseAbs().maxCoeff();
    const double asym = (comp - comp.transpose()).cwiseAbs().maxCoeff();
    Eigen::MatrixXd sym = 0.5 * (g + g.transpose());
    return {GramMatrix(spec(), nodes, r, std::move(sym)), scale > 0.0 ? asym / scale : 0.0};
  }

  /// Sweep of a measure in D onto A, signed measures by parts.
  SignedSweepResult sweep_measure(const DiscreteMeasure& nu) const {
    SweepOptions so;
    so.solver = opts_.solver;
    so.probes = 0;
    return sweeper_->sweep_signed(nu, so);
  }

  std::size_t cache_size() const {
    std::lock_guard lock(mutex_);
    return cache_.size();
  }
  std::uint64_t cache_hits() const {
    std::lock_guard lock(mutex_);
    return hits_;
  }
  std::uint64_t cache_misses() const {
    std::lock_guard lock(mutex_);
    return misses_;
  }

 private:
  using Key = std::vector<std::int64_t>;

  Key quantize(const Point& y) const {
    Key k(static_cast<std::size_t>(y.size()));
    for (Eigen::Index i = 0; i < y.size(); ++i) k[static_cast<std::size_t>(i)] = std::llround(y[i] / opts_.key_step);
    return k;
  }

  Point dequantize(const Key& k) const {
    Point y(static_cast<Eigen::Index>(k.size()));
    for (std::size_t i = 0; i < k.size(); ++i) y[static_cast<Eigen::Index>(i)] = static_cast<double>(k[i]) * opts_.key_step;
    return y;
  }

  Eigen::VectorXd sweep_term(const Point& y) const {
    const Region& a = complement();
    Eigen::VectorXd b(a.size());
    for (Eigen::Index i = 0; i < a.size(); ++i) b[i] = spec().of_distance(detail::distance(a.nodes().col(i).data(), y.data(), y.size()));
    return b;
  }

  void check_measure(const DiscreteMeasure& nu) const {
    if (nu.dim() != spec().dim()) throw DimensionMismatch("measure dimension differs from kernel");
    for (Eigen::Index j = 0; j < nu.size(); ++j) {
      if (nu.weights()[j] != 0.0 && !in_domain(nu.point(j))) {
        throw PointOutsideDomain("measure point " + detail::format_point(nu.point(j)) + " is not in the domain");
      }
    }
  }

  GreenOptions opts_;
  std::shared_ptr<const Sweeper> sweeper_;
  mutable std::mutex mutex_;
  mutable std::map<Key, std::pair<std::shared_future<std::shared_ptr<const Eigen::VectorXd>>, std::list<Key>::iterator>>
      cache_;
  mutable std::list<Key> lru_;
  mutable std::uint64_t hits_ = 0;
  mutable std::uint64_t misses_ = 0;
};

/// Relative gap between nu^T G nu and ||nu||_alpha^2 - ||nu^A||_alpha^2, both
/// with the same regularization radii on nu's points.
inline double verify_energy_decomposition(const GreenKernel& gk, const DiscreteMeasure& nu,
                                          std::optional<Eigen::VectorXd> radii = std::nullopt) {
  const Eigen::VectorXd r = radii ? *radii : Eigen::VectorXd::Constant(nu.size(), default_reg_radius(nu.points()));
  const GreenGram gg = gk.gram(nu.points(), r);
  const double green = energy(gg.gram, nu.weights(), nu.weights());
  const GramMatrix riesz = assemble_gram(gk.spec(), nu.points(), r);
  const double own = energy(riesz, nu.weights(), nu.weights());
  const SignedSweepResult swept = gk.sweep_measure(nu);
  const Eigen::VectorXd& w = swept.swept.weights();
  const double image = energy(gk.sweeper().gram(), w, w);
  const double other = own - image;
  const double scale = std::max(std::abs(green), std::abs(other));
  return scale == 0.0 ? 0.0 : std::abs(green - other) / scale;
}

struct DominationReport {
  /// g mu <= g nu + c held at every charged point of mu.
  bool precondition = true;
  double precondition_excess = 0.0;
  Eigen::Index probes = 0;
  /// max over probes of g mu - g nu - c.
  double max_violation = 0.0;
  bool holds = true;
};

/// Domination principle: from g mu <= g nu + c on supp mu to everywhere in D,
/// tested at probe points. `tol` is absolute in potential units.
inline DominationReport verify_domination(const GreenKernel& gk, const DiscreteMeasure& mu,
                                          const Eigen::VectorXd& mu_radii, const DiscreteMeasure& nu,
                                          const Eigen::VectorXd& nu_radii, double c, const PointSet& probes,
                                          double tol) {
  DominationReport rep;
  for (Eigen::Index j = 0; j < mu.size(); ++j) {
    if (mu.weights()[j] == 0.0) continue;
    const Point x = mu.point(j);
    const double excess = gk.regularized_potential(mu, mu_radii, x) - gk.regularized_potential(nu, nu_radii, x) - c;
    rep.precondition_excess = std::max(rep.precondition_excess, excess);
  }
  rep.precondition = rep.precondition_excess <= tol;
  rep.probes = probes.cols();
  double worst = -kInfinity;
  for (Eigen::Index p = 0; p < probes.cols(); ++p) {
    const Point x = probes.col(p);
    worst = std::max(worst, gk.regularized_potential(mu, mu_radii, x) - gk.regularized_potential(nu, nu_radii, x) - c);
  }
  rep.max_violation = probes.cols() > 0 ? worst : 0.0;
  rep.holds = rep.max_violation <= tol;
  return rep;
}

/// Random points of D inside the box [lo, hi], at least `margin` node radii
/// from A's nodes, optionally restricted by `accept`.
inline PointSet domain_points(const GreenKernel& gk, Eigen::Index count, std::uint64_t seed, const Point& lo,
                              const Point& hi, const std::function<bool(const Point&)>& accept = {},
                              double margin = 10.0) {
  return sample_domain_points(gk.complement(), count, seed, lo, hi, margin, accept);
}

}  // namespace riesz
