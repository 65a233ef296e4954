#pragma once

// Closed sets A (with complement domain D = A^c) and their node
// discretizations. A set is a finite union of primitive shapes; membership
// is decided by a signed distance (negative inside, zero on the boundary).
//
// Discretizations follow the support of the measures that live on A: for
// alpha = 2 swept and equilibrium measures of sources in D sit on the
// boundary, so nodes cover boundary sheets; for alpha < 2 they charge the
// bulk of A, so nodes fill it. Each node carries a regularization radius
// from the lattice-corrected self-energy of its cell.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "riesz/core.hpp"
#include "riesz/error.hpp"
#include "riesz/lattice.hpp"

namespace riesz {

class ClosedSet;

namespace shape {

/// Closed ball |x - c| <= r.
struct Ball {
  Point center;
  double radius;
};

/// Closed exterior |x - c| >= r.
struct BallComplement {
  Point center;
  double radius;
};

/// Closed half-space <normal, x> <= offset (normal is normalized on construction).
struct HalfSpace {
  Point normal;
  double offset;
};

/// The sphere |x - c| = r as a closed set of its own.
struct Sphere {
  Point center;
  double radius;
};

/// Closed spherical shell inner <= |x - c| <= outer.
struct Shell {
  Point center;
  double inner;
  double outer;
};

/// A finite point set.
struct Cloud {
  PointSet points;
};

/// Image of another closed set under inversion in S(center, 1).
struct Inverted {
  Point center;
  std::shared_ptr<const ClosedSet> source;
};

using Primitive = std::variant<Ball, BallComplement, HalfSpace, Sphere, Shell, Cloud, Inverted>;

}  // namespace shape

/// Finite union of primitive closed sets.
class ClosedSet {
 public:
  ClosedSet() = default;
  explicit ClosedSet(std::vector<shape::Primitive> parts) : parts_(std::move(parts)) {
    for (auto& p : parts_) normalize(p);
  }
  ClosedSet(shape::Primitive part) : ClosedSet(std::vector<shape::Primitive>{std::move(part)}) {}  // NOLINT

  const std::vector<shape::Primitive>& parts() const { return parts_; }

  int dim() const {
    if (parts_.empty()) throw InvalidArgument("empty closed set has no dimension");
    return std::visit([](const auto& p) { return primitive_dim(p); }, parts_.front());
  }

  /// Signed distance (sign exact; magnitude exact except for inverted parts).
  double signed_distance(const Point& x) const {
    double best = kInfinity;
    for (const auto& p : parts_) best = std::min(best, part_signed_distance(p, x));
    return best;
  }

  static double part_signed_distance(const shape::Primitive& part, const Point& x);

  bool contains(const Point& x) const { return signed_distance(x) <= membership_tol(x); }
  bool in_complement(const Point& x) const { return !contains(x); }

  bool is_bounded() const {
    for (const auto& p : parts_) {
      if (!part_bounded(p)) return false;
    }
    return true;
  }

  static double membership_tol(const Point& x) { return 1e-9 * (1.0 + x.norm()); }

 private:
  static int primitive_dim(const shape::Cloud& c) { return static_cast<int>(c.points.rows()); }
  static int primitive_dim(const shape::HalfSpace& h) { return static_cast<int>(h.normal.size()); }
  template <typename T>
  static int primitive_dim(const T& p) {
    return static_cast<int>(p.center.size());
  }

  static bool part_bounded(const shape::Primitive& part);

  static void normalize(shape::Primitive& part) {
    if (auto* h = std::get_if<shape::HalfSpace>(&part)) {
      const double n = h->normal.norm();
      if (!(n > 0.0)) throw InvalidArgument("half-space normal must be non-zero");
      h->normal /= n;
      h->offset /= n;
    }
    if (auto* b = std::get_if<shape::Ball>(&part); b && !(b->radius > 0.0)) {
      throw InvalidArgument("ball radius must be positive");
    }
    if (auto* b = std::get_if<shape::BallComplement>(&part); b && !(b->radius > 0.0)) {
      throw InvalidArgument("ball-complement radius must be positive");
    }
    if (auto* s = std::get_if<shape::Sphere>(&part); s && !(s->radius > 0.0)) {
      throw InvalidArgument("sphere radius must be positive");
    }
    if (auto* s = std::get_if<shape::Shell>(&part); s && !(s->inner > 0.0 && s->outer > s->inner)) {
      throw InvalidArgument("shell radii must satisfy 0 < inner < outer");
    }
  }

  std::vector<shape::Primitive> parts_;
};

inline Point invert_about(const Point& center, const Point& x) {
  const Point d = x - center;
  return center + d / d.squaredNorm();
}

inline double ClosedSet::part_signed_distance(const shape::Primitive& part, const Point& x) {
  using namespace shape;
  return std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return (x - p.center).norm() - p.radius;
        } else if constexpr (std::is_same_v<T, BallComplement>) {
          return p.radius - (x - p.center).norm();
        } else if constexpr (std::is_same_v<T, HalfSpace>) {
          return p.normal.dot(x) - p.offset;
        } else if constexpr (std::is_same_v<T, Sphere>) {
          return std::abs((x - p.center).norm() - p.radius);
        } else if constexpr (std::is_same_v<T, Shell>) {
          const double r = (x - p.center).norm();
          return std::max(p.inner - r, r - p.outer);
        } else if constexpr (std::is_same_v<T, Cloud>) {
          double best = kInfinity;
          for (Eigen::Index i = 0; i < p.points.cols(); ++i) best = std::min(best, (p.points.col(i) - x).norm());
          return best;
        } else {
          if ((x - p.center).squaredNorm() == 0.0) {
            // The center is the image of the point at infinity.
            return p.source->is_bounded() ? kInfinity : 0.0;
          }
          return p.source->signed_distance(invert_about(p.center, x));
        }
      },
      part);
}

inline bool ClosedSet::part_bounded(const shape::Primitive& part) {
  using namespace shape;
  if (std::holds_alternative<BallComplement>(part) || std::holds_alternative<HalfSpace>(part)) return false;
  if (const auto* inv = std::get_if<Inverted>(&part)) {
    return inv->source->signed_distance(inv->center) > 0.0;
  }
  return true;
}

struct RegionInfo {
  std::string label;
  /// Radius beyond which an unbounded set was truncated.
  std::optional<double> truncation_radius;
  /// Image of the point at infinity for inverted unbounded sets (never a node).
  std::optional<Point> puncture;
  /// Whether D = A^c is connected, when known from the shape.
  std::optional<bool> domain_connected;
  /// "boundary", "solid" or "cloud".
  std::string support;
};

/// A closed set A together with a node discretization and per-node
/// regularization radii.
class Region {
 public:
  Region(ClosedSet set, PointSet nodes, Eigen::VectorXd radii, RegionInfo info)
      : set_(std::move(set)), nodes_(std::move(nodes)), radii_(std::move(radii)), info_(std::move(info)) {
    if (nodes_.cols() == 0) throw InvalidArgument("region has no nodes");
    if (radii_.size() != nodes_.cols()) throw DimensionMismatch("one regularization radius per node required");
    for (Eigen::Index i = 0; i < nodes_.cols(); ++i) {
      if (!set_.contains(nodes_.col(i))) {
        throw InvalidArgument("region node " + std::to_string(i) + " lies outside the closed set");
      }
    }
  }

  const ClosedSet& set() const { return set_; }
  const PointSet& nodes() const { return nodes_; }
  const Eigen::VectorXd& reg_radii() const { return radii_; }
  const RegionInfo& info() const { return info_; }
  Eigen::Index size() const { return nodes_.cols(); }
  int dim() const { return static_cast<int>(nodes_.rows()); }

  bool contains(const Point& x) const { return set_.contains(x); }
  bool in_domain(const Point& x) const { return !set_.contains(x); }

  /// Index of the node within `tol` of x, if any.
  std::optional<Eigen::Index> node_at(const Point& x, double tol) const {
    for (Eigen::Index i = 0; i < nodes_.cols(); ++i) {
      if ((nodes_.col(i) - x).norm() <= tol) return i;
    }
    return std::nullopt;
  }

  /// Distance from x to the nearest node scaled by that node's radius.
  double scaled_node_distance(const Point& x) const {
    double best = kInfinity;
    for (Eigen::Index i = 0; i < nodes_.cols(); ++i) best = std::min(best, (nodes_.col(i) - x).norm() / radii_[i]);
    return best;
  }

 private:
  ClosedSet set_;
  PointSet nodes_;
  Eigen::VectorXd radii_;
  RegionInfo info_;
};

enum class Support { Auto, Boundary, Solid };

struct DiscretizationOptions {
  /// Node budget N (the generated count is as close as the layout allows).
  Eigen::Index nodes = 2000;
  Support support = Support::Auto;
  /// Truncation radius for unbounded shapes, measured from `focus`.
  double truncation_radius = 8.0;
  /// Point the grading of unbounded layouts is centred on (default origin).
  std::optional<Point> focus;
  /// Length scale kept at full resolution around the focus on half-spaces.
  double focus_scale = 1.0;
};

namespace layout {

/// Fibonacci-lattice points on the unit sphere in R^3.
inline PointSet fibonacci_sphere(Eigen::Index count) {
  PointSet p(3, count);
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  for (Eigen::Index i = 0; i < count; ++i) {
    const double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(count);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * static_cast<double>(i);
    p(0, i) = r * std::cos(phi);
    p(1, i) = r * std::sin(phi);
    p(2, i) = z;
  }
  return p;
}

/// Orthonormal basis (u, v) of the plane orthogonal to unit vector n.
inline std::pair<Point, Point> plane_basis(const Point& n) {
  Point helper = Point::Zero(3);
  helper[std::abs(n[0]) < 0.9 ? 0 : 1] = 1.0;
  Point u = (helper - helper.dot(n) * n).normalized();
  const Eigen::Vector3d v = Eigen::Vector3d(n).cross(Eigen::Vector3d(u));
  return {u, Point(v)};
}

/// Nodes with the measure of the cell each one stands for.
struct Piece {
  PointSet points;
  Eigen::VectorXd cells;
  lattice::Layout lattice = lattice::Layout::Hexagonal;
};

inline Piece concat(const std::vector<Piece>& pieces, lattice::Layout lat) {
  Eigen::Index total = 0;
  for (const auto& p : pieces) total += p.points.cols();
  Piece out{PointSet(3, total), Eigen::VectorXd(total), lat};
  Eigen::Index at = 0;
  for (const auto& p : pieces) {
    out.points.middleCols(at, p.points.cols()) = p.points;
    out.cells.segment(at, p.cells.size()) = p.cells;
    at += p.points.cols();
  }
  return out;
}

inline double hex_cell(double spacing) { return lattice::covolume(lattice::Layout::Hexagonal) * spacing * spacing; }

inline Eigen::Index sphere_count(double radius, double spacing) {
  return std::max<Eigen::Index>(1, std::llround(4.0 * M_PI * radius * radius / hex_cell(spacing)));
}

/// Sphere surface at hexagonal spacing `spacing`.
inline Piece sphere_surface(const Point& center, double radius, Eigen::Index count) {
  Piece p{fibonacci_sphere(count) * radius, Eigen::VectorXd::Constant(count, 4.0 * M_PI * radius * radius / static_cast<double>(count)),
          lattice::Layout::Hexagonal};
  p.points.colwise() += center;
  return p;
}

/// Concentric spheres at the given radii; shells[k] covers [lo_k, hi_k].
inline Piece radial_solid(const Point& center, const std::vector<double>& radii, const std::vector<double>& lo,
                          const std::vector<double>& hi, const std::vector<double>& spacing) {
  std::vector<Piece> shells;
  for (std::size_t k = 0; k < radii.size(); ++k) {
    const double vol = 4.0 / 3.0 * M_PI * (std::pow(hi[k], 3) - std::pow(lo[k], 3));
    if (radii[k] == 0.0) {
      shells.push_back({PointSet(center), Eigen::VectorXd::Constant(1, vol), lattice::Layout::StackedHexagonal});
      continue;
    }
    const Eigen::Index count = sphere_count(radii[k], spacing[k]);
    Piece s = sphere_surface(center, radii[k], count);
    s.cells.setConstant(vol / static_cast<double>(count));
    shells.push_back(std::move(s));
  }
  return concat(shells, lattice::Layout::StackedHexagonal);
}

/// Solid ball or shell [inner, outer] at uniform spacing.
inline Piece uniform_solid(const Point& center, double inner, double outer, double spacing) {
  std::vector<double> r, lo, hi, sp;
  if (inner <= 0.0) {
    const auto k_count = std::max<Eigen::Index>(1, std::llround(outer / spacing));
    const double step = outer / static_cast<double>(k_count);
    for (Eigen::Index k = 0; k <= k_count; ++k) {
      const double rk = outer - static_cast<double>(k) * step;
      r.push_back(std::max(rk, 0.0));
      lo.push_back(std::max(0.0, rk - step / 2.0));
      hi.push_back(std::min(outer, rk + step / 2.0));
      sp.push_back(step);
    }
  } else {
    const auto k_count = std::max<Eigen::Index>(1, std::llround((outer - inner) / spacing));
    const double step = (outer - inner) / static_cast<double>(k_count);
    for (Eigen::Index k = 0; k <= k_count; ++k) {
      const double rk = inner + static_cast<double>(k) * step;
      r.push_back(rk);
      lo.push_back(std::max(inner, rk - step / 2.0));
      hi.push_back(std::min(outer, rk + step / 2.0));
      sp.push_back(step);
    }
  }
  return radial_solid(center, r, lo, hi, sp);
}

/// Exterior shells from `inner` out to `outer`, spacing growing linearly with radius.
inline Piece graded_exterior(const Point& center, double inner, double outer, double spacing) {
  const double growth = spacing / inner;
  std::vector<double> r{inner};
  while (r.back() <= outer) r.push_back(r.back() * (1.0 + growth));
  std::vector<double> lo, hi, sp;
  for (std::size_t k = 0; k < r.size(); ++k) {
    lo.push_back(k == 0 ? inner : 0.5 * (r[k - 1] + r[k]));
    hi.push_back(k + 1 < r.size() ? 0.5 * (r[k] + r[k + 1]) : r[k] * (1.0 + 0.5 * growth));
    sp.push_back(growth * r[k]);
  }
  return radial_solid(center, r, lo, hi, sp);
}

/// Planar disk through `origin` orthogonal to `normal`, with spacing
/// `spacing` inside radius `core` and growing linearly beyond it.
inline Piece graded_disk(const Point& origin, const Point& normal, double core, double spacing, double outer) {
  const auto [u, v] = plane_basis(normal);
  auto local = [&](double rho) { return spacing * std::max(1.0, rho / core); };
  std::vector<double> rings{0.0};
  while (rings.back() < outer) rings.push_back(rings.back() + local(rings.back()));
  std::vector<Point> pts;
  std::vector<double> cells;
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  for (std::size_t j = 0; j < rings.size(); ++j) {
    const double rho = rings[j];
    const double lo = j == 0 ? 0.0 : 0.5 * (rings[j - 1] + rho);
    const double hi = j + 1 < rings.size() ? 0.5 * (rho + rings[j + 1]) : rho + 0.5 * local(rho);
    const double area = M_PI * (hi * hi - lo * lo);
    const Eigen::Index m = j == 0 ? 1 : std::max<Eigen::Index>(6, std::llround(2.0 * M_PI * rho / local(rho)));
    for (Eigen::Index k = 0; k < m; ++k) {
      const double phi = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(m) + golden * static_cast<double>(j);
      pts.push_back(origin + rho * (std::cos(phi) * u + std::sin(phi) * v));
      cells.push_back(area / static_cast<double>(m));
    }
  }
  Piece p{PointSet(3, static_cast<Eigen::Index>(pts.size())), Eigen::VectorXd(static_cast<Eigen::Index>(cells.size())),
          lattice::Layout::Hexagonal};
  for (std::size_t i = 0; i < pts.size(); ++i) {
    p.points.col(static_cast<Eigen::Index>(i)) = pts[i];
    p.cells[static_cast<Eigen::Index>(i)] = cells[i];
  }
  return p;
}

/// Graded hemispherical shells of the closed half-space below the plane
/// through `origin`, centered at `origin`. Spacing is uniform out to `core`
/// and grows linearly with radius beyond it, so cells stay isotropic.
inline Piece graded_halfspace(const Point& origin, const Point& normal, double core, double spacing, double outer) {
  auto local = [&](double r) { return spacing * std::max(1.0, r / core); };
  std::vector<double> r{0.0};
  while (r.back() < outer) r.push_back(r.back() + local(r.back()));
  std::vector<Piece> shells;
  for (std::size_t k = 0; k < r.size(); ++k) {
    const double lo = k == 0 ? 0.0 : 0.5 * (r[k - 1] + r[k]);
    const double hi = k + 1 < r.size() ? 0.5 * (r[k] + r[k + 1]) : r[k] + 0.5 * local(r[k]);
    const double vol = 4.0 / 3.0 * M_PI * (hi * hi * hi - lo * lo * lo);
    if (k == 0) {
      shells.push_back({PointSet(origin), Eigen::VectorXd::Constant(1, 0.5 * vol), lattice::Layout::StackedHexagonal});
      continue;
    }
    const Eigen::Index count = sphere_count(r[k], local(r[k]));
    const Piece full = sphere_surface(origin, r[k], count);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < full.points.cols(); ++i) {
      if ((full.points.col(i) - origin).dot(normal) <= 0.0) keep.push_back(i);
    }
    Piece half{PointSet(3, static_cast<Eigen::Index>(keep.size())),
               Eigen::VectorXd::Constant(static_cast<Eigen::Index>(keep.size()), vol / static_cast<double>(count)),
               lattice::Layout::StackedHexagonal};
    for (std::size_t i = 0; i < keep.size(); ++i) half.points.col(static_cast<Eigen::Index>(i)) = full.points.col(keep[i]);
    shells.push_back(std::move(half));
  }
  return concat(shells, lattice::Layout::StackedHexagonal);
}

}  // namespace layout

namespace detail {

inline bool surface_ok(const KernelSpec& spec) { return spec.exponent() < 2.0; }

inline Support resolve_support(const KernelSpec& spec, Support s) {
  if (s != Support::Auto) return s;
  return spec.alpha() == 2.0 ? Support::Boundary : Support::Solid;
}

}  // namespace detail

/// Explicit node cloud as a region; radii default to half the minimum spacing.
inline Region cloud_region(const KernelSpec& spec, PointSet points, std::optional<double> reg_radius = std::nullopt,
                           std::string label = "cloud") {
  if (points.rows() != spec.dim()) throw DimensionMismatch("cloud dimension differs from kernel");
  const double h = reg_radius ? *reg_radius : default_reg_radius(points);
  Eigen::VectorXd radii = Eigen::VectorXd::Constant(points.cols(), h);
  ClosedSet set(shape::Cloud{points});
  RegionInfo info{std::move(label), std::nullopt, std::nullopt, std::nullopt, "cloud"};
  return {std::move(set), std::move(points), std::move(radii), std::move(info)};
}

/// Discretizes a closed set built from the analytic primitives (R^3 only).
inline Region discretize(const KernelSpec& spec, const ClosedSet& set, const DiscretizationOptions& opts = {},
                         std::string label = "") {
  using namespace shape;
  if (set.parts().empty()) throw InvalidArgument("cannot discretize an empty set");
  if (set.dim() != spec.dim()) throw DimensionMismatch("set dimension differs from kernel");
  if (spec.dim() != 3) {
    throw InvalidArgument("analytic layouts are implemented for n = 3; supply an explicit node cloud");
  }
  if (opts.nodes < 1) throw InvalidArgument("node budget must be positive");
  const Support support = detail::resolve_support(spec, opts.support);
  const Point focus = opts.focus ? *opts.focus : Point::Zero(3);
  const double s = spec.exponent();
  if (support == Support::Boundary && !detail::surface_ok(spec)) {
    throw InvalidArgument("surface layouts need alpha > n - 2; use solid support");
  }

  std::optional<double> truncation;
  auto build = [&](double spacing) {
    std::vector<std::pair<layout::Piece, std::size_t>> pieces;
    for (std::size_t idx = 0; idx < set.parts().size(); ++idx) {
      const auto& part = set.parts()[idx];
      auto add = [&](layout::Piece p) { pieces.emplace_back(std::move(p), idx); };
      auto sphere = [&](const Point& c, double r) { add(layout::sphere_surface(c, r, layout::sphere_count(r, spacing))); };
      std::visit(
          [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Sphere>) {
              if (!detail::surface_ok(spec)) throw InvalidArgument("a sphere has zero capacity for this alpha");
              sphere(p.center, p.radius);
            } else if constexpr (std::is_same_v<T, Ball>) {
              if (support == Support::Boundary) {
                sphere(p.center, p.radius);
              } else {
                add(layout::uniform_solid(p.center, 0.0, p.radius, spacing));
              }
            } else if constexpr (std::is_same_v<T, Shell>) {
              if (support == Support::Boundary) {
                sphere(p.center, p.inner);
                sphere(p.center, p.outer);
              } else {
                add(layout::uniform_solid(p.center, p.inner, p.outer, spacing));
              }
            } else if constexpr (std::is_same_v<T, BallComplement>) {
              if (support == Support::Boundary) {
                sphere(p.center, p.radius);
              } else {
                const double outer = (p.center - focus).norm() + opts.truncation_radius;
                truncation = opts.truncation_radius;
                add(layout::graded_exterior(p.center, p.radius, std::max(outer, 2.0 * p.radius), spacing));
              }
            } else if constexpr (std::is_same_v<T, HalfSpace>) {
              const double height = p.normal.dot(focus) - p.offset;
              const Point foot = focus - height * p.normal;
              const double core = std::max({std::abs(height), opts.focus_scale, spacing});
              truncation = opts.truncation_radius;
              if (support == Support::Boundary) {
                add(layout::graded_disk(foot, p.normal, core, spacing, opts.truncation_radius));
              } else {
                add(layout::graded_halfspace(foot, p.normal, core, spacing, opts.truncation_radius));
              }
            } else if constexpr (std::is_same_v<T, Cloud>) {
              add(layout::Piece{p.points, Eigen::VectorXd::Zero(p.points.cols()), lattice::Layout::Hexagonal});
            } else {
              throw InvalidArgument("inverted sets are discretized by inverting a discretized source region");
            }
          },
          part);
    }
    return pieces;
  };

  auto count_kept = [&](const std::vector<std::pair<layout::Piece, std::size_t>>& pieces, bool collect,
                        std::vector<Point>* pts, std::vector<double>* radii) {
    Eigen::Index kept = 0;
    for (const auto& [piece, owner] : pieces) {
      const bool is_cloud = std::holds_alternative<Cloud>(set.parts()[owner]);
      const double cloud_h = is_cloud ? default_reg_radius(piece.points) : 0.0;
      for (Eigen::Index i = 0; i < piece.points.cols(); ++i) {
        const Point x = piece.points.col(i);
        bool interior = false;
        for (std::size_t q = 0; q < set.parts().size() && !interior; ++q) {
          if (q == owner) continue;
          interior = ClosedSet::part_signed_distance(set.parts()[q], x) < -ClosedSet::membership_tol(x);
        }
        if (interior && support == Support::Boundary) continue;
        if (interior) {
          // Solid layouts of overlapping parts: keep the node of the first owner only.
          bool earlier = false;
          for (std::size_t q = 0; q < owner && !earlier; ++q) {
            earlier = ClosedSet::part_signed_distance(set.parts()[q], x) <= ClosedSet::membership_tol(x);
          }
          if (earlier) continue;
        }
        ++kept;
        if (collect) {
          pts->push_back(x);
          radii->push_back(is_cloud ? cloud_h : lattice::self_energy_radius(piece.lattice, s, piece.cells[i]));
        }
      }
    }
    return kept;
  };

  // Bisection on the spacing so the node count meets the budget. The bracket
  // scales with the size of the set.
  double extent = 1.0;
  for (const auto& part : set.parts()) {
    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, Ball> || std::is_same_v<T, BallComplement> || std::is_same_v<T, Sphere>) {
            extent = std::max(extent, p.radius);
          } else if constexpr (std::is_same_v<T, Shell>) {
            extent = std::max(extent, p.outer);
          }
        },
        part);
  }
  double lo = 1e-4 * extent, hi = 1e2 * extent;
  double best_spacing = hi;
  Eigen::Index best_gap = -1;
  for (int it = 0; it < 80; ++it) {
    const double mid = std::sqrt(lo * hi);
    const Eigen::Index count = count_kept(build(mid), false, nullptr, nullptr);
    const Eigen::Index gap = std::abs(count - opts.nodes);
    if (best_gap < 0 || gap < best_gap || (gap == best_gap && mid > best_spacing)) {
      best_gap = gap;
      best_spacing = mid;
    }
    if (gap == 0) break;
    (count > opts.nodes ? lo : hi) = mid;
    if (hi / lo < 1.0 + 1e-12) break;
  }

  std::vector<Point> pts;
  std::vector<double> radii;
  count_kept(build(best_spacing), true, &pts, &radii);
  PointSet nodes(3, static_cast<Eigen::Index>(pts.size()));
  Eigen::VectorXd h(static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    nodes.col(static_cast<Eigen::Index>(i)) = pts[i];
    h[static_cast<Eigen::Index>(i)] = radii[i];
  }

  RegionInfo info;
  info.label = std::move(label);
  info.truncation_radius = truncation;
  info.support = support == Support::Boundary ? "boundary" : "solid";
  if (set.parts().size() == 1) {
    const auto& p = set.parts().front();
    info.domain_connected = !(std::holds_alternative<Shell>(p) || std::holds_alternative<Sphere>(p));
  }
  return {set, std::move(nodes), std::move(h), std::move(info)};
}

/// Quasi-random points of D = A^c inside an axis box, kept at least
/// `margin` node-radii away from every node of A. Deterministic in `seed`.
/// When the box leaves no room (sparse clouds with large radii) the margin
/// is halved, down to one radius.
inline PointSet sample_domain_points(const Region& region, Eigen::Index count, std::uint64_t seed, const Point& box_lo,
                                     const Point& box_hi, double margin = 10.0,
                                     const std::function<bool(const Point&)>& accept = {}) {
  PointSet out(region.dim(), count);
  for (double m = margin;; m *= 0.5) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Eigen::Index got = 0;
    const Eigen::Index cap = 10000 * std::max<Eigen::Index>(count, 1);
    for (Eigen::Index tries = 0; got < count && tries < cap; ++tries) {
      Point x(region.dim());
      for (int k = 0; k < region.dim(); ++k) x[k] = box_lo[k] + (box_hi[k] - box_lo[k]) * unit(rng);
      if (!region.in_domain(x)) continue;
      if (region.scaled_node_distance(x) < m) continue;
      if (accept && !accept(x)) continue;
      out.col(got++) = x;
    }
    if (got == count) return out;
    if (m <= 1.0) break;
  }
  throw InvalidArgument("could not place the requested probe points in the domain");
}

}  // namespace riesz
