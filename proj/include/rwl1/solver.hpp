#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "rwl1/types.hpp"

namespace rwl1 {

/// Per-coordinate weights of the weighted l1 objective. Strictly positive
/// and finite by construction.
class WeightVector {
 public:
  explicit WeightVector(Vector w) : w_(std::move(w)) {
    require(w_.size() >= 1, "weights: empty vector");
    for (Eigen::Index i = 0; i < w_.size(); ++i)
      require(w_[i] > 0.0 && std::isfinite(w_[i]),
              "weights: entries must be strictly positive and finite");
  }
  static WeightVector ones(int d) { return WeightVector(Vector::Ones(d)); }
  const Vector& vec() const { return w_; }
  int dim() const { return static_cast<int>(w_.size()); }

 private:
  Vector w_;
};

struct SolverOptions {
  int max_iterations = 5000;
  // Stopping tolerances, applied both absolutely (scaled by sqrt(dim)) and
  // relative to the iterate magnitudes.
  double tol_primal = 1e-7;
  double tol_dual = 1e-7;
  double step_parameter = 1.0;  // splitting penalty sigma
  bool adapt_penalty = false;   // residual balancing; off for reproducibility

  void validate() const {
    require(max_iterations >= 1, "solver options: max_iterations >= 1");
    require(tol_primal > 0 && tol_dual > 0 && step_parameter > 0,
            "solver options: tolerances and step must be positive");
  }
};

struct SolverResult {
  Vector xhat;
  double objective = 0.0;        // sum_i w_i |xhat_i|
  double feasibility_gap = 0.0;  // ||phi xhat - u||_2 - epsilon, may be <= 0
  int iterations_used = 0;
  bool converged = false;
  // Fixed-point step norm of the splitting iteration, one entry per
  // iteration. Non-increasing for a fixed penalty; useful as a stall check.
  std::vector<double> merit_history;
};

/// out_i = sign(v_i) * max(|v_i| - tau_i, 0).
inline Vector soft_threshold(const Vector& v, const Vector& tau) {
  if (v.size() != tau.size())
    throw DimensionMismatch("soft_threshold: dims differ");
  Vector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    require(tau[i] >= 0.0, "soft_threshold: thresholds must be nonnegative");
    const double mag = std::abs(v[i]) - tau[i];
    out[i] = mag > 0.0 ? (v[i] > 0.0 ? mag : -mag) : 0.0;
  }
  return out;
}

/// Euclidean projection onto the ball {z : ||z - center||_2 <= radius}.
inline Vector project_l2_ball(const Vector& z, const Vector& center,
                              double radius) {
  if (z.size() != center.size())
    throw DimensionMismatch("project_l2_ball: dims differ");
  require(radius >= 0.0, "project_l2_ball: radius must be nonnegative");
  const double dist = (z - center).norm();
  if (dist <= radius) return z;
  return center + (z - center) * (radius / dist);
}

/// Feasibility slack used throughout: a solution is accepted as feasible
/// when ||phi x - u||_2 <= epsilon + max(1e-6, 1e-6 ||u||_2).
inline double feasibility_tolerance(const Vector& u) {
  return std::max(1e-6, 1e-6 * u.norm());
}

/// Solve  min_x sum_i w_i |x_i|  subject to  ||phi x - u||_2 <= epsilon.
///
/// Splitting iteration on the consensus form
///   min f(x) + g(s, z)  s.t.  x = s, phi x = z,
/// with g separable into the weighted l1 term (s) and the indicator of the
/// epsilon-ball around u (z). Each sweep is
///   (1) least-squares consensus step: (I + phi^T phi) x = (s - p) + phi^T (z - q)
///   (2) per-coordinate shrinkage of x + p with thresholds w_i / sigma
///   (3) projection of phi x + q onto the ball
///   (4) dual ascent on both couplings.
/// Weights are normalized to mean 1 internally (the minimizer set is scale
/// invariant), so the reported objective always uses the caller's weights.
///
/// Non-convergence is not an error: the best iterate seen is returned with
/// converged = false so outer loops can continue.
inline SolverResult solve_weighted_l1(
    const MeasurementInstance& inst, const WeightVector& weights,
    const SolverOptions& opts = {},
    const std::optional<Vector>& warm_start = std::nullopt) {
  opts.validate();
  const Matrix& phi = inst.phi;
  const Vector& u = inst.u;
  const int m = inst.rows(), d = inst.cols();
  const double eps = inst.epsilon;
  if (weights.dim() != d)
    throw DimensionMismatch("solve_weighted_l1: dim(w) != cols(phi)");
  if (warm_start && warm_start->size() != d)
    throw DimensionMismatch("solve_weighted_l1: warm start has wrong dim");

  const Vector& w_raw = weights.vec();
  const Vector w = w_raw / w_raw.mean();
  double sigma = opts.step_parameter;
  Vector thr = w / sigma;

  const Matrix gram = Matrix::Identity(d, d) + phi.transpose() * phi;
  const Eigen::LLT<Matrix> llt(gram);

  Vector x = warm_start ? *warm_start : Vector::Zero(d);
  Vector s = x;
  Vector z = project_l2_ball(phi * s, u, eps);
  Vector p = Vector::Zero(d), q = Vector::Zero(m);
  Vector gtz = phi.transpose() * z;  // phi^T z, reused across steps
  Vector gtq = Vector::Zero(d);      // phi^T q

  Vector rhs(d), phix(m), s_prev(d), gtz_prev(d), zeta_s(d), zeta_z(m);
  Vector zeta_s_prev = s + p, zeta_z_prev = z + q;

  const double gap_stop = 0.45 * feasibility_tolerance(u);
  const double sqrt_pd = std::sqrt(double(d + m)), sqrt_dd = std::sqrt(double(d));

  SolverResult res;
  res.merit_history.reserve(std::min(opts.max_iterations, 1 << 16));

  // Best iterate under (feasible first, then objective; else smallest gap).
  bool have_best = false, best_feasible = false;
  double best_gap = 0.0, best_obj = 0.0;
  Vector best_x;
  const double tol_feas = feasibility_tolerance(u);
  auto offer_best = [&](const Vector& cand) {
    const double gap = (phi * cand - u).norm() - eps;
    const double obj = w_raw.dot(cand.cwiseAbs());
    const bool feas = gap <= tol_feas;
    const bool better =
        !have_best ||
        (feas && (!best_feasible || obj < best_obj)) ||
        (!feas && !best_feasible && gap < best_gap);
    if (better) {
      have_best = true;
      best_feasible = feas;
      best_gap = gap;
      best_obj = obj;
      best_x = cand;
    }
  };

  int it = 0;
  bool converged = false;
  for (it = 1; it <= opts.max_iterations; ++it) {
    rhs = (s - p) + (gtz - gtq);
    x = llt.solve(rhs);
    phix.noalias() = phi * x;

    s_prev.swap(s);
    s = soft_threshold(x + p, thr);
    gtz_prev.swap(gtz);
    z = project_l2_ball(phix + q, u, eps);
    gtz.noalias() = phi.transpose() * z;

    p += x - s;
    q += phix - z;
    gtq.noalias() = phi.transpose() * q;

    const double r_primal =
        std::sqrt((x - s).squaredNorm() + (phix - z).squaredNorm());
    const double r_dual = sigma * ((s - s_prev) + (gtz - gtz_prev)).norm();

    zeta_s = s + p;
    zeta_z = z + q;
    res.merit_history.push_back(
        std::sqrt((zeta_s - zeta_s_prev).squaredNorm() +
                  (zeta_z - zeta_z_prev).squaredNorm()));
    zeta_s_prev.swap(zeta_s);
    zeta_z_prev.swap(zeta_z);

    const double eps_pri =
        opts.tol_primal *
        (sqrt_pd + std::max(std::sqrt(x.squaredNorm() + phix.squaredNorm()),
                            std::sqrt(s.squaredNorm() + z.squaredNorm())));
    const double eps_dua = opts.tol_dual * (sqrt_dd + sigma * (p + gtq).norm());

    if (r_primal <= eps_pri && r_dual <= eps_dua) {
      const double gap = (phi * s - u).norm() - eps;
      if (gap <= gap_stop) {
        converged = true;
        break;
      }
    }
    if (it % 50 == 0) offer_best(s);

    if (opts.adapt_penalty && it % 25 == 0) {
      if (r_primal > 10.0 * r_dual) {
        sigma *= 2.0;
        p /= 2.0; q /= 2.0; gtq /= 2.0;
        thr = w / sigma;
      } else if (r_dual > 10.0 * r_primal) {
        sigma /= 2.0;
        p *= 2.0; q *= 2.0; gtq *= 2.0;
        thr = w / sigma;
      }
    }
  }

  Vector xhat;
  if (converged) {
    xhat = s;
  } else {
    offer_best(s);
    xhat = best_x;
    it = opts.max_iterations;
  }
  if (!xhat.allFinite())
    throw std::runtime_error("solve_weighted_l1: non-finite iterate");

  res.xhat = std::move(xhat);
  res.objective = w_raw.dot(res.xhat.cwiseAbs());
  res.feasibility_gap = (phi * res.xhat - u).norm() - eps;
  res.iterations_used = it;
  res.converged = converged;
  return res;
}

struct VerificationReport {
  bool feasible = false;
  double objective = 0.0;
  std::optional<bool> beats_reference;
};

/// Check a candidate solution: feasibility at the standard slack, objective
/// value, and (optionally) comparison against a known feasible reference.
inline VerificationReport verify_solution(
    const MeasurementInstance& inst, const WeightVector& w, const Vector& xhat,
    const std::optional<Vector>& reference = std::nullopt) {
  if (xhat.size() != inst.cols())
    throw DimensionMismatch("verify_solution: dim(xhat) != cols(phi)");
  if (w.dim() != inst.cols())
    throw DimensionMismatch("verify_solution: dim(w) != cols(phi)");
  const double tol_feas = feasibility_tolerance(inst.u);
  VerificationReport rep;
  rep.objective = w.vec().dot(xhat.cwiseAbs());
  rep.feasible = (inst.phi * xhat - inst.u).norm() <= inst.epsilon + tol_feas;
  if (reference) {
    if (reference->size() != inst.cols())
      throw DimensionMismatch("verify_solution: dim(reference) != cols(phi)");
    if ((inst.phi * *reference - inst.u).norm() > inst.epsilon + tol_feas)
      throw InfeasibleReference("verify_solution: reference is infeasible");
    const double ref_obj = w.vec().dot(reference->cwiseAbs());
    rep.beats_reference = rep.objective <= ref_obj + 1e-4 * (1.0 + rep.objective);
  }
  return rep;
}

}  // namespace rwl1
