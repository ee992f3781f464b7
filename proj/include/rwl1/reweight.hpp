#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "rwl1/solver.hpp"
#include "rwl1/types.hpp"

namespace rwl1 {

/// Stability-parameter schedule for the outer reweighting loop.
enum class ASchedule { PaperLinear, Constant, Decaying };

struct ReweightConfig {
  int max_outer_iterations = 10;
  ASchedule schedule = ASchedule::PaperLinear;
  double a0 = 1e-3;    // base value for Constant / Decaying
  double decay = 0.5;  // ratio r of the Decaying schedule
  double convergence_tol = 1e-5;

  void validate() const {
    require(max_outer_iterations >= 1, "reweight: max_outer_iterations >= 1");
    require(a0 > 0.0, "reweight: a0 must be positive");
    require(decay > 0.0 && decay < 1.0, "reweight: decay must be in (0,1)");
    require(convergence_tol > 0.0, "reweight: convergence_tol must be positive");
  }

  /// Stability parameter consumed by the weight update after iterate k
  /// (1-based): k/1000, a0, or a0 * r^k.
  double a_for(int k) const {
    switch (schedule) {
      case ASchedule::PaperLinear: return double(k) / 1000.0;
      case ASchedule::Constant: return a0;
      case ASchedule::Decaying: return a0 * std::pow(decay, k);
    }
    return a0;
  }
};

/// Everything the outer loop produced: iterates x̂_1..x̂_K, the stability
/// parameter recorded per iterate (a_values[k-1] feeds the weight update
/// after iterate k; the last entry is the value the next update would use),
/// per-solve convergence flags, and distances to the truth when available.
struct ReweightTrace {
  std::vector<Vector> iterates;
  std::vector<double> a_values;
  std::vector<bool> solver_flags;
  std::optional<std::vector<double>> errors_vs_truth;

  int outer_iterations() const { return static_cast<int>(iterates.size()); }
  const Vector& final_iterate() const { return iterates.back(); }
  bool all_converged() const {
    for (bool f : solver_flags)
      if (!f) return false;
    return true;
  }
};

/// w_i = 1 / (|xhat_i| + a). Strictly positive for a > 0.
inline WeightVector update_weights(const Vector& xhat, double a) {
  require(a > 0.0, "update_weights: a must be positive");
  Vector w(xhat.size());
  for (Eigen::Index i = 0; i < xhat.size(); ++i)
    w[i] = 1.0 / (std::abs(xhat[i]) + a);
  return WeightVector(std::move(w));
}

/// Iteratively reweighted l1 recovery: start from unit weights (a plain
/// noise-aware l1 solve), then repeatedly re-solve with weights
/// 1/(|x̂_i| + a). Stops on relative iterate change <= convergence_tol or
/// after max_outer_iterations solves. Inner solves are warm started from the
/// previous iterate.
inline ReweightTrace reweighted_l1(const MeasurementInstance& inst,
                                   const ReweightConfig& cfg = {},
                                   const SolverOptions& solver_opts = {}) {
  cfg.validate();
  ReweightTrace trace;
  if (inst.truth) trace.errors_vs_truth.emplace();

  WeightVector w = WeightVector::ones(inst.cols());
  std::optional<Vector> warm;
  for (int k = 1; k <= cfg.max_outer_iterations; ++k) {
    SolverResult res = solve_weighted_l1(inst, w, solver_opts, warm);
    trace.iterates.push_back(res.xhat);
    trace.a_values.push_back(cfg.a_for(k));
    trace.solver_flags.push_back(res.converged);
    if (inst.truth)
      trace.errors_vs_truth->push_back((*inst.truth - res.xhat).norm());

    if (k >= 2) {
      const Vector& prev = trace.iterates[k - 2];
      const double change = (trace.iterates[k - 1] - prev).norm();
      if (change <= cfg.convergence_tol * std::max(1.0, prev.norm())) break;
    }
    if (k == cfg.max_outer_iterations) break;
    w = update_weights(res.xhat, cfg.a_for(k));
    warm = res.xhat;
  }
  return trace;
}

}  // namespace rwl1
