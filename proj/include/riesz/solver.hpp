#pragma once

// Cone-constrained quadratic minimization
//
//     minimize   q(w) = w^T K w - 2 b^T w
//     subject to w >= 0                       (nonneg)
//             or w >= 0, sum w = total        (simplex)
//
// for symmetric positive definite K. The nonneg solver is a Lawson-Hanson
// active-set method warm-started from the unconstrained minimizer; the
// passive-set subproblems reuse one Cholesky factor of the full K through a
// Schur complement on the clamped indices while that set is small. All pivot
// choices break ties by lowest index, so identical inputs give bitwise
// identical outputs.

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "riesz/error.hpp"

namespace riesz {

struct SolverOptions {
  /// KKT tolerance, relative to ||b||_inf (nonneg) or to the multiplier (simplex).
  double tol = 1e-10;
  /// Active-set iteration cap; 0 selects 50 * (node count).
  int max_iter = 0;
};

struct QPSolution {
  Eigen::VectorXd weights;
  double objective = 0.0;
  double kkt_residual = 0.0;
  /// Equality multiplier lambda (simplex problems only).
  double multiplier = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Projected-gradient fallback was used after an ill-conditioned subproblem.
  bool used_fallback = false;
};

enum class ConstraintKind { Nonneg, Simplex };

struct Constraint {
  ConstraintKind kind = ConstraintKind::Nonneg;
  double total = 1.0;

  static Constraint nonneg() { return {ConstraintKind::Nonneg, 0.0}; }
  static Constraint simplex(double total) { return {ConstraintKind::Simplex, total}; }
};

/// Non-owning view of a cone QP; `gram` must outlive the problem.
struct ConeQP {
  const Eigen::MatrixXd* gram = nullptr;
  Eigen::VectorXd linear;
  Constraint constraint;
};

inline constexpr double kMaxConditionEstimate = 1e14;

/// max_i max(-g_i, |w_i g_i| / (1 + |w_i|)) with g = 2 (K w - b).
inline double nonneg_kkt_residual(const Eigen::VectorXd& w, const Eigen::VectorXd& g) {
  double r = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    r = std::max(r, -g[i]);
    r = std::max(r, std::abs(w[i] * g[i]) / (1.0 + std::abs(w[i])));
  }
  return r;
}

/// Nonnegative-cone projection solver bound to one SPD matrix. The Cholesky
/// factor of K is computed once and shared by every right-hand side.
class NonnegQP {
 public:
  explicit NonnegQP(const Eigen::MatrixXd& gram) : k_(gram), llt_(gram) {
    if (k_.rows() != k_.cols()) throw DimensionMismatch("Gram matrix must be square");
    if (llt_.info() != Eigen::Success) {
      throw IllConditioned("Gram matrix is not numerically positive definite");
    }
    const Eigen::VectorXd d = llt_.matrixLLT().diagonal();
    const double ratio = d.maxCoeff() / d.minCoeff();
    condition_estimate_ = ratio * ratio;
  }

  Eigen::Index size() const { return k_.rows(); }
  const Eigen::MatrixXd& gram() const { return k_; }
  double condition_estimate() const { return condition_estimate_; }

  /// Unconstrained minimizer K^{-1} b.
  Eigen::VectorXd solve_unconstrained(const Eigen::VectorXd& b) const { return llt_.solve(b); }
  Eigen::MatrixXd solve_unconstrained(const Eigen::MatrixXd& b) const { return llt_.solve(b); }

  QPSolution solve(const Eigen::VectorXd& b, const SolverOptions& opts = {}) const {
    const Eigen::Index n = size();
    if (b.size() != n) throw DimensionMismatch("linear term must have one entry per node");
    if (!(opts.tol > 0.0)) throw InvalidArgument("solver tolerance must be positive");
    const double scale = b.size() > 0 && b.lpNorm<Eigen::Infinity>() > 0.0
                             ? b.lpNorm<Eigen::Infinity>()
                             : 1.0;
    const double tol = opts.tol * scale;
    const int max_iter = opts.max_iter > 0 ? opts.max_iter : static_cast<int>(50 * std::max<Eigen::Index>(n, 1));

    QPSolution sol;
    sol.weights = Eigen::VectorXd::Zero(n);
    if (n == 0) {
      sol.converged = true;
      return sol;
    }
    if (condition_estimate_ > kMaxConditionEstimate) return fallback(b, sol.weights, tol, max_iter, 0);

    const Eigen::VectorXd z = llt_.solve(b);
    std::vector<bool> passive(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) passive[static_cast<std::size_t>(i)] = z[i] > 0.0;

    Subproblem sub(*this, b, z);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
    std::vector<bool> blocked(static_cast<std::size_t>(n), false);
    int iter = 0;
    Eigen::Index entered = -1;

    while (true) {
      // Inner loop: feasible descent onto the passive-set minimizer.
      bool reverted = false;
      while (true) {
        ++iter;
        Eigen::VectorXd s;
        if (!sub.solve(passive, s)) return fallback(b, w, tol, max_iter, iter);
        if (entered >= 0 && !(s[entered] > 0.0)) {
          // Entering index would not move; undo and skip it (Lawson-Hanson safeguard).
          passive[static_cast<std::size_t>(entered)] = false;
          blocked[static_cast<std::size_t>(entered)] = true;
          entered = -1;
          reverted = true;
          break;
        }
        entered = -1;
        double step = 1.0;
        Eigen::Index blocking = -1;
        for (Eigen::Index i = 0; i < n; ++i) {
          if (!passive[static_cast<std::size_t>(i)] || s[i] > 0.0) continue;
          const double denom = w[i] - s[i];
          const double ratio = denom > 0.0 ? w[i] / denom : 0.0;
          if (blocking < 0 || ratio < step) {
            step = ratio;
            blocking = i;
          }
        }
        if (blocking < 0) {
          for (Eigen::Index i = 0; i < n; ++i) w[i] = passive[static_cast<std::size_t>(i)] ? s[i] : 0.0;
          break;
        }
        for (Eigen::Index i = 0; i < n; ++i) {
          if (!passive[static_cast<std::size_t>(i)]) continue;
          w[i] += step * (s[i] - w[i]);
          if (i == blocking || (s[i] <= 0.0 && w[i] <= 0.0)) {
            passive[static_cast<std::size_t>(i)] = false;
            w[i] = 0.0;
          }
        }
        if (iter >= max_iter) break;
      }

      const Eigen::VectorXd g = 2.0 * (k_ * w - b);
      sol.kkt_residual = nonneg_kkt_residual(w, g);
      if (sol.kkt_residual <= tol) {
        sol.converged = true;
        break;
      }
      if (iter >= max_iter) break;
      if (!reverted) std::fill(blocked.begin(), blocked.end(), false);

      Eigen::Index j = -1;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (passive[static_cast<std::size_t>(i)] || blocked[static_cast<std::size_t>(i)]) continue;
        if (g[i] < -tol && (j < 0 || g[i] < g[j])) j = i;
      }
      if (j < 0) {
        // Dual feasible but stationarity on the passive set is short of tol:
        // polish with projected gradient from here.
        return fallback(b, w, tol, max_iter, iter);
      }
      passive[static_cast<std::size_t>(j)] = true;
      entered = j;
    }

    sol.weights = w;
    sol.iterations = iter;
    sol.objective = objective(w, b);
    return sol;
  }

  double objective(const Eigen::VectorXd& w, const Eigen::VectorXd& b) const {
    return w.dot(k_ * w) - 2.0 * b.dot(w);
  }

 private:
  // Passive-set linear solves  K_PP s_P = b_P,  s_R = 0.
  class Subproblem {
   public:
    Subproblem(const NonnegQP& qp, const Eigen::VectorXd& b, const Eigen::VectorXd& z)
        : qp_(qp), b_(b), z_(z) {}

    bool solve(const std::vector<bool>& passive, Eigen::VectorXd& s) {
      const Eigen::Index n = qp_.size();
      std::vector<Eigen::Index> clamped;
      std::vector<Eigen::Index> free;
      for (Eigen::Index i = 0; i < n; ++i) {
        (passive[static_cast<std::size_t>(i)] ? free : clamped).push_back(i);
      }
      const auto r = static_cast<double>(clamped.size());
      const auto p = static_cast<double>(free.size());
      s = Eigen::VectorXd::Zero(n);
      if (free.empty()) return true;
      if (r * static_cast<double>(n) * static_cast<double>(n) <= p * p * p / 3.0) {
        return solve_schur(clamped, s);
      }
      return solve_direct(free, s);
    }

   private:
    // With c_r = K^{-1} e_r:  s = z + sum_r lambda_r c_r,  (K^{-1})_RR lambda = -z_R.
    bool solve_schur(const std::vector<Eigen::Index>& clamped, Eigen::VectorXd& s) {
      s = z_;
      if (clamped.empty()) return true;
      const auto m = static_cast<Eigen::Index>(clamped.size());
      Eigen::MatrixXd cols(qp_.size(), m);
      for (Eigen::Index a = 0; a < m; ++a) cols.col(a) = inverse_column(clamped[static_cast<std::size_t>(a)]);
      Eigen::MatrixXd schur(m, m);
      Eigen::VectorXd rhs(m);
      for (Eigen::Index a = 0; a < m; ++a) {
        rhs[a] = -z_[clamped[static_cast<std::size_t>(a)]];
        for (Eigen::Index c = 0; c < m; ++c) schur(a, c) = cols(clamped[static_cast<std::size_t>(a)], c);
      }
      schur = 0.5 * (schur + schur.transpose()).eval();
      Eigen::LLT<Eigen::MatrixXd> llt(schur);
      if (llt.info() != Eigen::Success || !well_conditioned(llt)) return false;
      s.noalias() += cols * llt.solve(rhs);
      for (Eigen::Index i : clamped) s[i] = 0.0;
      return true;
    }

    bool solve_direct(const std::vector<Eigen::Index>& free, Eigen::VectorXd& s) {
      const auto p = static_cast<Eigen::Index>(free.size());
      Eigen::MatrixXd kpp(p, p);
      Eigen::VectorXd bp(p);
      for (Eigen::Index c = 0; c < p; ++c) {
        bp[c] = b_[free[static_cast<std::size_t>(c)]];
        for (Eigen::Index a = 0; a < p; ++a) {
          kpp(a, c) = qp_.k_(free[static_cast<std::size_t>(a)], free[static_cast<std::size_t>(c)]);
        }
      }
      Eigen::LLT<Eigen::MatrixXd> llt(kpp);
      if (llt.info() != Eigen::Success || !well_conditioned(llt)) return false;
      Eigen::VectorXd sp = llt.solve(bp);
      // One step of iterative refinement.
      sp += llt.solve(bp - kpp * sp);
      for (Eigen::Index c = 0; c < p; ++c) s[free[static_cast<std::size_t>(c)]] = sp[c];
      return true;
    }

    static bool well_conditioned(const Eigen::LLT<Eigen::MatrixXd>& llt) {
      const Eigen::VectorXd d = llt.matrixLLT().diagonal();
      const double ratio = d.maxCoeff() / d.minCoeff();
      return std::isfinite(ratio) && ratio * ratio <= kMaxConditionEstimate;
    }

    const Eigen::VectorXd& inverse_column(Eigen::Index r) {
      auto it = cache_.find(r);
      if (it == cache_.end()) {
        it = cache_.emplace(r, qp_.llt_.solve(Eigen::VectorXd::Unit(qp_.size(), r))).first;
      }
      return it->second;
    }

    const NonnegQP& qp_;
    const Eigen::VectorXd& b_;
    const Eigen::VectorXd& z_;
    std::map<Eigen::Index, Eigen::VectorXd> cache_;
  };

  // Accelerated projected gradient with adaptive restart, started from w0.
  QPSolution fallback(const Eigen::VectorXd& b, const Eigen::VectorXd& w0, double tol, int max_iter,
                      int iterations_so_far) const {
    const Eigen::Index n = size();
    double lipschitz = 0.0;  // Gershgorin bound on the largest eigenvalue of 2K
    for (Eigen::Index i = 0; i < n; ++i) lipschitz = std::max(lipschitz, 2.0 * k_.row(i).cwiseAbs().sum());
    const double step = 1.0 / lipschitz;
    Eigen::VectorXd w = w0.cwiseMax(0.0);
    Eigen::VectorXd y = w;
    double t = 1.0;
    QPSolution sol;
    sol.used_fallback = true;
    const int cap = std::max(20 * max_iter, 20000);
    int iter = 0;
    Eigen::VectorXd g = 2.0 * (k_ * w - b);
    for (; iter < cap; ++iter) {
      sol.kkt_residual = nonneg_kkt_residual(w, g);
      if (sol.kkt_residual <= tol) {
        sol.converged = true;
        break;
      }
      const Eigen::VectorXd gy = 2.0 * (k_ * y - b);
      const Eigen::VectorXd next = (y - step * gy).cwiseMax(0.0);
      const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
      if ((next - w).dot(y - next) > 0.0) {
        y = next;
        t = 1.0;
      } else {
        y = next + ((t - 1.0) / t_next) * (next - w);
        t = t_next;
      }
      w = next;
      g = 2.0 * (k_ * w - b);
    }
    if (!sol.converged) {
      throw IllConditioned("active-set subproblem ill-conditioned (estimate > 1e14) and the "
                           "projected-gradient fallback did not reach the KKT tolerance");
    }
    sol.weights = w;
    sol.iterations = iterations_so_far + iter;
    sol.objective = objective(w, b);
    return sol;
  }

  const Eigen::MatrixXd& k_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  double condition_estimate_ = 1.0;
};

/// min w^T K w - 2 b^T w over w >= 0.
inline QPSolution solve_nonneg(const ConeQP& qp, double tol = 1e-10, int max_iter = 0) {
  if (qp.gram == nullptr) throw InvalidArgument("ConeQP without Gram matrix");
  if (qp.constraint.kind != ConstraintKind::Nonneg) throw InvalidArgument("solve_nonneg needs a nonneg constraint");
  NonnegQP solver(*qp.gram);
  return solver.solve(qp.linear, {tol, max_iter});
}

/// min w^T K w over w >= 0, sum w = total, from a solved nonneg problem with
/// b = 1. On any passive set the equality-constrained KKT system gives
/// w_P = (lambda/2) K_PP^{-1} 1, so the simplex minimizer is that solution
/// rescaled to the requested total, with lambda = 2 total / sum(w~).
inline QPSolution simplex_from_unit_projection(const Eigen::MatrixXd& k, const QPSolution& unit,
                                               double total, double tol) {
  QPSolution sol = unit;
  const double mass = unit.weights.sum();
  if (!(mass > 0.0)) throw SolverFailure("simplex solve produced a zero measure");
  sol.weights = unit.weights * (total / mass);
  sol.multiplier = 2.0 * total / mass;
  const Eigen::VectorXd grad = 2.0 * (k * sol.weights);
  double r = 0.0;
  for (Eigen::Index i = 0; i < grad.size(); ++i) {
    r = std::max(r, sol.multiplier - grad[i]);
    if (sol.weights[i] > 0.0) r = std::max(r, std::abs(grad[i] - sol.multiplier));
  }
  sol.kkt_residual = r / sol.multiplier;
  sol.converged = unit.converged && sol.kkt_residual <= tol;
  sol.objective = sol.weights.dot(k * sol.weights);
  return sol;
}

/// min w^T K w over the scaled simplex {w >= 0, sum w = total}.
inline QPSolution solve_simplex(const ConeQP& qp, double total, double tol = 1e-10, int max_iter = 0) {
  if (qp.gram == nullptr) throw InvalidArgument("ConeQP without Gram matrix");
  if (!(total > 0.0)) throw InvalidArgument("simplex total must be positive");
  const Eigen::MatrixXd& k = *qp.gram;
  NonnegQP solver(k);
  const QPSolution unit = solver.solve(Eigen::VectorXd::Ones(k.rows()), {tol, max_iter});
  return simplex_from_unit_projection(k, unit, total, tol);
}

}  // namespace riesz
