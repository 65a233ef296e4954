#pragma once

// Discrete measures, the alpha-Riesz kernel |x-y|^{alpha-n}, potentials,
// energies and Gram-matrix assembly.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "riesz/error.hpp"

namespace riesz {

using Point = Eigen::VectorXd;
/// Column-major point list: one column per point.
using PointSet = Eigen::MatrixXd;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

namespace detail {

inline double distance(const double* a, const double* b, Eigen::Index dim) {
  double acc = 0.0;
  for (Eigen::Index k = 0; k < dim; ++k) {
    const double d = a[k] - b[k];
    acc += d * d;
  }
  return std::sqrt(acc);
}

inline double distance(const PointSet& p, Eigen::Index i, const PointSet& q, Eigen::Index j) {
  return distance(p.col(i).data(), q.col(j).data(), p.rows());
}

/// Runs fn(i) for i in [0, n). Outputs must be independent per index so the
/// result does not depend on the thread count.
template <typename Fn>
void parallel_for(Eigen::Index n, Fn&& fn, Eigen::Index min_chunk = 256) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const auto workers = static_cast<Eigen::Index>(
      std::min<Eigen::Index>(hw, std::max<Eigen::Index>(1, n / min_chunk)));
  if (workers <= 1) {
    for (Eigen::Index i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (Eigen::Index w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (Eigen::Index i = w; i < n; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

inline std::string format_point(const Point& x) {
  std::ostringstream os;
  os << '(';
  for (Eigen::Index k = 0; k < x.size(); ++k) os << (k ? "," : "") << x[k];
  os << ')';
  return os.str();
}

}  // namespace detail

/// Order alpha in (0,2] and ambient dimension n >= 3.
class KernelSpec {
 public:
  KernelSpec(double alpha, int dim) : alpha_(alpha), dim_(dim) {
    if (!(alpha > 0.0 && alpha <= 2.0)) {
      throw InvalidArgument("alpha must lie in (0,2]");
    }
    if (dim < 3) throw InvalidArgument("dim must be at least 3");
  }

  double alpha() const { return alpha_; }
  int dim() const { return dim_; }
  /// Decay exponent s = n - alpha of the kernel r^{-s}.
  double exponent() const { return static_cast<double>(dim_) - alpha_; }

  double of_distance(double r) const {
    if (r == 0.0) return kInfinity;
    const double s = exponent();
    if (s == 1.0) return 1.0 / r;
    if (s == 2.0) return 1.0 / (r * r);
    return std::pow(r, -s);
  }

  double operator()(const Point& x, const Point& y) const {
    check_point(x);
    check_point(y);
    return of_distance(detail::distance(x.data(), y.data(), dim_));
  }

  void check_point(const Point& x) const {
    if (x.size() != dim_) {
      throw DimensionMismatch("point has dimension " + std::to_string(x.size()) +
                              ", kernel expects " + std::to_string(dim_));
    }
  }

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;

 private:
  double alpha_;
  int dim_;
};

inline double riesz_kernel(const KernelSpec& spec, const Point& x, const Point& y) {
  return spec(x, y);
}

/// Diameter of the axis-aligned bounding box of a point set.
inline double bounding_box_diameter(const PointSet& points) {
  if (points.cols() == 0) return 0.0;
  return (points.rowwise().maxCoeff() - points.rowwise().minCoeff()).norm();
}

/// Distinct-support tolerance h_min = 1e-9 * bounding-box diameter.
inline double distinct_tolerance(const PointSet& points) {
  return 1e-9 * bounding_box_diameter(points);
}

/// Returns the first pair of points closer than `tol`, if any. Sort-and-sweep
/// along the first coordinate.
inline std::optional<std::pair<Eigen::Index, Eigen::Index>> find_close_pair(const PointSet& points,
                                                                            double tol) {
  const Eigen::Index n = points.cols();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return points(0, a) < points(0, b) || (points(0, a) == points(0, b) && a < b);
  });
  for (std::size_t a = 0; a < order.size(); ++a) {
    for (std::size_t b = a + 1; b < order.size(); ++b) {
      if (points(0, order[b]) - points(0, order[a]) > tol) break;
      if (detail::distance(points, order[a], points, order[b]) <= tol) {
        return std::pair{std::min(order[a], order[b]), std::max(order[a], order[b])};
      }
    }
  }
  return std::nullopt;
}

/// Weighted point set representing a positive or signed measure.
class DiscreteMeasure {
 public:
  DiscreteMeasure(PointSet points, Eigen::VectorXd weights, bool is_signed = false)
      : points_(std::move(points)), weights_(std::move(weights)), signed_(is_signed) {
    if (points_.cols() != weights_.size()) {
      throw DimensionMismatch("measure has " + std::to_string(points_.cols()) + " points but " +
                              std::to_string(weights_.size()) + " weights");
    }
    for (Eigen::Index i = 0; i < weights_.size(); ++i) {
      if (!std::isfinite(weights_[i])) throw InvalidArgument("measure weight is not finite");
      if (!signed_ && weights_[i] < 0.0) {
        throw InvalidArgument("negative weight in a positive measure");
      }
    }
    if (!points_.allFinite()) throw InvalidArgument("measure point is not finite");
    if (auto pair = find_close_pair(points_, distinct_tolerance(points_))) {
      throw DegenerateNodes("measure points " + std::to_string(pair->first) + " and " +
                            std::to_string(pair->second) + " coincide");
    }
  }

  static DiscreteMeasure empty(int dim) { return {PointSet(dim, 0), Eigen::VectorXd(0)}; }

  /// Unit point mass (times `mass`) at y.
  static DiscreteMeasure dirac(const Point& y, double mass = 1.0) {
    return {PointSet(y), Eigen::VectorXd::Constant(1, mass), mass < 0.0};
  }

  int dim() const { return static_cast<int>(points_.rows()); }
  Eigen::Index size() const { return points_.cols(); }
  bool is_signed() const { return signed_; }
  const PointSet& points() const { return points_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  Point point(Eigen::Index i) const { return points_.col(i); }

  /// Sum of weights in index order.
  double total_mass() const {
    double m = 0.0;
    for (Eigen::Index i = 0; i < weights_.size(); ++i) m += weights_[i];
    return m;
  }

  DiscreteMeasure scaled(double c) const {
    return {points_, weights_ * c, signed_ || c < 0.0};
  }

  /// mu+ of the sign split; drops zero-weight nodes.
  DiscreteMeasure positive_part() const { return sign_part(+1.0); }
  /// mu- of the sign split, returned as a positive measure.
  DiscreteMeasure negative_part() const { return sign_part(-1.0); }

 private:
  DiscreteMeasure sign_part(double sign) const {
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < weights_.size(); ++i) {
      if (sign * weights_[i] > 0.0) keep.push_back(i);
    }
    PointSet pts(points_.rows(), static_cast<Eigen::Index>(keep.size()));
    Eigen::VectorXd w(static_cast<Eigen::Index>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) {
      pts.col(static_cast<Eigen::Index>(k)) = points_.col(keep[k]);
      w[static_cast<Eigen::Index>(k)] = sign * weights_[keep[k]];
    }
    return {std::move(pts), std::move(w), false};
  }

  PointSet points_;
  Eigen::VectorXd weights_;
  bool signed_;
};

/// Sum_j w_j kappa(x, y_j) in index order.
inline double potential(const KernelSpec& spec, const DiscreteMeasure& mu, const Point& x) {
  spec.check_point(x);
  if (mu.dim() != spec.dim()) throw DimensionMismatch("measure dimension differs from kernel");
  double sum = 0.0;
  bool plus_inf = false;
  bool minus_inf = false;
  for (Eigen::Index j = 0; j < mu.size(); ++j) {
    const double w = mu.weights()[j];
    if (w == 0.0) continue;
    const double r = detail::distance(x.data(), mu.points().col(j).data(), spec.dim());
    if (r == 0.0) {
      (w > 0.0 ? plus_inf : minus_inf) = true;
      continue;
    }
    sum += w * spec.of_distance(r);
  }
  if (plus_inf && minus_inf) {
    throw IndeterminateValue("potential at " + detail::format_point(x) +
                             " is charged by both signs");
  }
  if (plus_inf) return kInfinity;
  if (minus_inf) return -kInfinity;
  return sum;
}

/// Potentials of `mu` at every target node. A target within `tol` of a
/// charged point uses the target's regularized self-energy radius^{-s}
/// in place of the singular kernel value.
inline Eigen::VectorXd regularized_potentials(const KernelSpec& spec, const DiscreteMeasure& mu,
                                              const PointSet& targets,
                                              const Eigen::VectorXd& target_radii, double tol) {
  if (mu.dim() != spec.dim() || targets.rows() != spec.dim()) {
    throw DimensionMismatch("regularized_potentials: dimension differs from kernel");
  }
  if (target_radii.size() != targets.cols()) {
    throw DimensionMismatch("regularized_potentials: one radius per target required");
  }
  Eigen::VectorXd out(targets.cols());
  detail::parallel_for(targets.cols(), [&](Eigen::Index i) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < mu.size(); ++j) {
      const double w = mu.weights()[j];
      if (w == 0.0) continue;
      const double r = detail::distance(targets, i, mu.points(), j);
      sum += w * (r <= tol ? spec.of_distance(target_radii[i]) : spec.of_distance(r));
    }
    out[i] = sum;
  });
  return out;
}

/// Minimum nearest-neighbour distance of a node set (+inf for fewer than two nodes).
inline double min_spacing(const PointSet& nodes) {
  double best = kInfinity;
  for (Eigen::Index i = 0; i < nodes.cols(); ++i) {
    for (Eigen::Index j = i + 1; j < nodes.cols(); ++j) {
      best = std::min(best, detail::distance(nodes, i, nodes, j));
    }
  }
  return best;
}

/// Default diagonal regularization: half the minimum nearest-neighbour spacing.
/// A single node has no spacing; it gets radius 1.
inline double default_reg_radius(const PointSet& nodes) {
  const double s = min_spacing(nodes);
  return std::isfinite(s) ? 0.5 * s : 1.0;
}

/// Symmetric pairwise-energy matrix over a node set with regularized diagonal.
class GramMatrix {
 public:
  GramMatrix(KernelSpec spec, PointSet nodes, Eigen::VectorXd reg_radii, Eigen::MatrixXd entries)
      : spec_(spec),
        nodes_(std::move(nodes)),
        reg_radii_(std::move(reg_radii)),
        entries_(std::move(entries)) {
    const Eigen::Index n = nodes_.cols();
    if (entries_.rows() != n || entries_.cols() != n || reg_radii_.size() != n) {
      throw DimensionMismatch("Gram matrix size differs from node count");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        if (entries_(i, j) != entries_(j, i)) throw InvalidArgument("Gram matrix not symmetric");
      }
    }
  }

  const KernelSpec& spec() const { return spec_; }
  const PointSet& nodes() const { return nodes_; }
  const Eigen::VectorXd& reg_radii() const { return reg_radii_; }
  const Eigen::MatrixXd& entries() const { return entries_; }
  Eigen::Index size() const { return nodes_.cols(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

 private:
  KernelSpec spec_;
  PointSet nodes_;
  Eigen::VectorXd reg_radii_;
  Eigen::MatrixXd entries_;
};

/// K_ij = kappa(x_i, x_j) off the diagonal, K_ii = radius_i^{alpha-n}.
inline GramMatrix assemble_gram(const KernelSpec& spec, PointSet nodes, Eigen::VectorXd radii) {
  const Eigen::Index n = nodes.cols();
  if (nodes.rows() != spec.dim()) throw DimensionMismatch("node dimension differs from kernel");
  if (radii.size() != n) throw DimensionMismatch("one regularization radius per node required");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(radii[i] > 0.0)) throw InvalidArgument("regularization radius must be positive");
  }
  if (auto pair = find_close_pair(nodes, distinct_tolerance(nodes))) {
    throw DegenerateNodes("nodes " + std::to_string(pair->first) + " and " +
                          std::to_string(pair->second) + " are closer than h_min");
  }
  Eigen::MatrixXd k(n, n);
  detail::parallel_for(n, [&](Eigen::Index j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      k(i, j) = i == j ? spec.of_distance(radii[i]) : spec.of_distance(detail::distance(nodes, i, nodes, j));
    }
  }, 64);
  return {spec, std::move(nodes), std::move(radii), std::move(k)};
}

/// Uniform regularization radius h (default: half the minimum spacing).
inline GramMatrix assemble_gram(const KernelSpec& spec, PointSet nodes,
                                std::optional<double> reg_radius = std::nullopt) {
  const double h = reg_radius ? *reg_radius : default_reg_radius(nodes);
  Eigen::VectorXd radii = Eigen::VectorXd::Constant(nodes.cols(), h);
  return assemble_gram(spec, std::move(nodes), std::move(radii));
}

/// mu^T K nu, summed in index order.
inline double energy(const GramMatrix& gram, const Eigen::VectorXd& mu, const Eigen::VectorXd& nu) {
  const Eigen::Index n = gram.size();
  if (mu.size() != n || nu.size() != n) {
    throw DimensionMismatch("energy: weight vectors must have one entry per Gram node");
  }
  const Eigen::MatrixXd& k = gram.entries();
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (mu[i] == 0.0) continue;
    double row = 0.0;
    // K is exactly symmetric, so column i is read in place of row i.
    for (Eigen::Index j = 0; j < n; ++j) row += k(j, i) * nu[j];
    total += mu[i] * row;
  }
  return total;
}

/// Mutual energy of measures with disjoint supports, sum_i nu_i kappa mu(y_i).
inline double mutual_energy(const KernelSpec& spec, const DiscreteMeasure& mu,
                            const DiscreteMeasure& nu) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < nu.size(); ++i) {
    if (nu.weights()[i] == 0.0) continue;
    total += nu.weights()[i] * potential(spec, mu, nu.point(i));
  }
  return total;
}

}  // namespace riesz
