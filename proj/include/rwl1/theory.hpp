#pragma once

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "rwl1/core.hpp"
#include "rwl1/types.hpp"

namespace rwl1 {

/// Admissible restricted-isometry constants lie in [0, sqrt(2) - 1).
inline const double kDeltaMax = std::sqrt(2.0) - 1.0;

/// Two printings of the constant alpha circulate: 2 sqrt(1+delta)/sqrt(1-delta)
/// and 2 sqrt(1+delta)/(1-delta). The square-root denominator is the default;
/// it is the one consistent with the quoted numeric bounds (e.g. the 3.85
/// coefficient at mu/eps = 10). The linear variant is kept for comparison.
enum class AlphaConvention { SqrtDenominator, LinearDenominator };

inline double rho_of(double delta) {
  return std::sqrt(2.0) * delta / (1.0 - delta);
}

inline double alpha_of(double delta,
                       AlphaConvention conv = AlphaConvention::SqrtDenominator) {
  const double num = 2.0 * std::sqrt(1.0 + delta);
  return conv == AlphaConvention::SqrtDenominator
             ? num / std::sqrt(1.0 - delta)
             : num / (1.0 - delta);
}

inline void check_delta(double delta) {
  if (!(delta >= 0.0 && delta < kDeltaMax))
    throw DeltaOutOfRange("delta must lie in [0, sqrt(2)-1)");
}

/// The closed-form constants of the l1 and reweighted-l1 error bounds.
///   rho  = sqrt(2) delta / (1 - delta)        (< 1 iff delta < sqrt(2)-1)
///   C    = 2 alpha / (1 - rho)                (standard l1, noise term)
///   C'   = 2 (1 + rho) / (1 - rho)            (standard l1, tail term)
///   C''  = 2 alpha / (1 + rho)                (reweighted limit, noise term)
struct TheoryConstants {
  double delta = 0.0;
  double rho = 0.0;
  double alpha = 2.0;
  double C = 4.0;
  double Cprime = 2.0;
  double Cdoubleprime = 4.0;
};

inline TheoryConstants constants_from_delta(
    double delta, AlphaConvention conv = AlphaConvention::SqrtDenominator) {
  check_delta(delta);
  TheoryConstants c;
  c.delta = delta;
  c.rho = rho_of(delta);
  c.alpha = alpha_of(delta, conv);
  c.C = 2.0 * c.alpha / (1.0 - c.rho);
  c.Cprime = 2.0 * (1.0 + c.rho) / (1.0 - c.rho);
  c.Cdoubleprime = 2.0 * c.alpha / (1.0 + c.rho);
  return c;
}

/// Standard noisy-l1 error bound  C eps + C' ||x - x_s||_1 / sqrt(s).
inline double l1_error_bound(double delta, double epsilon, const Vector& x,
                             int s,
                             AlphaConvention conv = AlphaConvention::SqrtDenominator) {
  require(epsilon >= 0.0, "l1_error_bound: epsilon must be nonnegative");
  require(s >= 1, "l1_error_bound: s must be positive");
  const TheoryConstants c = constants_from_delta(delta, conv);
  const double tail_l1 = (x - best_s_term(x, s)).lpNorm<1>();
  return c.C * epsilon + c.Cprime * tail_l1 / std::sqrt(double(s));
}

/// Smallest admissible magnitude of the nonzero coordinates:
/// mu must reach 4 alpha eps / (1 - rho).
inline double mu_threshold(double epsilon, double delta,
                           AlphaConvention conv = AlphaConvention::SqrtDenominator) {
  check_delta(delta);
  require(epsilon >= 0.0, "mu_threshold: epsilon must be nonnegative");
  return 4.0 * alpha_of(delta, conv) * epsilon / (1.0 - rho_of(delta));
}

inline bool mu_condition(double mu, double epsilon, double delta,
                         AlphaConvention conv = AlphaConvention::SqrtDenominator) {
  require(mu > 0.0, "mu_condition: mu must be positive");
  return mu >= mu_threshold(epsilon, delta, conv);
}

/// Limit of the per-iteration error recursion, exact and simplified form:
///   L_exact  = 2 alpha eps / (1 + sqrt(1 - 4 alpha eps (1 + rho) / mu))
///   L_simple = 2 alpha eps / (1 + rho)        (upper bound on L_exact)
inline std::pair<double, double> limit_L(
    double mu, double epsilon, double delta,
    AlphaConvention conv = AlphaConvention::SqrtDenominator) {
  if (!mu_condition(mu, epsilon, delta, conv))
    throw MuConditionViolated("limit_L: mu < 4 alpha eps / (1 - rho)");
  const double rho = rho_of(delta), alpha = alpha_of(delta, conv);
  const double radicand =
      std::max(0.0, 1.0 - 4.0 * alpha * epsilon / mu -
                        4.0 * alpha * epsilon * rho / mu);
  const double L_exact = 2.0 * alpha * epsilon / (1.0 + std::sqrt(radicand));
  const double L_simple = 2.0 * alpha * epsilon / (1.0 + rho);
  return {L_exact, L_simple};
}

/// The error-bound recursion and its limit.
///   E(1)   = 2 alpha eps / (1 - rho)
///   E(k+1) = (1 + E(k)/(mu - E(k))) alpha eps / (1 - rho E(k)/(mu - E(k)))
struct RecursionTrace {
  double mu = 0.0;
  double epsilon = 0.0;
  double delta = 0.0;
  std::vector<double> E;  // E(1) .. E(K)
  double L_exact = 0.0;
  double L_simple = 0.0;
  std::optional<int> iterations_to_threshold;  // first k with E(k) close to L
};

inline double recursion_step(double Ek, double mu, double epsilon, double rho,
                             double alpha) {
  const double t = Ek / (mu - Ek);
  return (1.0 + t) * alpha * epsilon / (1.0 - rho * t);
}

inline RecursionTrace recursion_E(
    double mu, double epsilon, double delta, int K,
    AlphaConvention conv = AlphaConvention::SqrtDenominator) {
  require(K >= 1, "recursion_E: K must be positive");
  if (!mu_condition(mu, epsilon, delta, conv))
    throw MuConditionViolated("recursion_E: mu < 4 alpha eps / (1 - rho)");
  const double rho = rho_of(delta), alpha = alpha_of(delta, conv);

  RecursionTrace tr;
  tr.mu = mu;
  tr.epsilon = epsilon;
  tr.delta = delta;
  std::tie(tr.L_exact, tr.L_simple) = limit_L(mu, epsilon, delta, conv);

  tr.E.reserve(K);
  double E = 2.0 * alpha * epsilon / (1.0 - rho);
  tr.E.push_back(E);
  for (int k = 2; k <= K; ++k) {
    E = recursion_step(E, mu, epsilon, rho, alpha);
    tr.E.push_back(E);
  }
  const double cutoff = (1.0 + 1e-3) * tr.L_exact;
  for (int k = 0; k < K; ++k)
    if (tr.E[k] <= cutoff) {
      tr.iterations_to_threshold = k + 1;
      break;
    }
  return tr;
}

/// Smallest k with E(k) <= (1 + rel_tol) L_exact.
inline int iterations_to_threshold(
    double mu, double epsilon, double delta, double rel_tol = 1e-3,
    AlphaConvention conv = AlphaConvention::SqrtDenominator) {
  require(rel_tol > 0.0, "iterations_to_threshold: rel_tol must be positive");
  if (!mu_condition(mu, epsilon, delta, conv))
    throw MuConditionViolated(
        "iterations_to_threshold: mu < 4 alpha eps / (1 - rho)");
  const double rho = rho_of(delta), alpha = alpha_of(delta, conv);
  const double L = limit_L(mu, epsilon, delta, conv).first;
  const double cutoff = (1.0 + rel_tol) * L;
  double E = 2.0 * alpha * epsilon / (1.0 - rho);
  int k = 1;
  while (E > cutoff) {
    E = recursion_step(E, mu, epsilon, rho, alpha);
    ++k;
    if (k > 10'000'000)
      throw std::runtime_error("iterations_to_threshold: no convergence");
  }
  return k;
}

/// Sweep delta over [0, sqrt(2)-1) and keep the largest value whose
/// mu-requirement 4 alpha / (1 - rho) still fits under mu/eps; returns that
/// delta and the resulting error coefficient C'' = 2 alpha / (1 + rho).
inline std::pair<double, double> best_delta_bound(
    double mu_over_eps, double grid_step = 1e-4,
    AlphaConvention conv = AlphaConvention::SqrtDenominator) {
  require(mu_over_eps > 0.0, "best_delta_bound: ratio must be positive");
  require(grid_step > 0.0, "best_delta_bound: grid_step must be positive");
  double best = -1.0;
  for (double delta = 0.0; delta < kDeltaMax; delta += grid_step) {
    const double needed =
        4.0 * alpha_of(delta, conv) / (1.0 - rho_of(delta));
    if (needed <= mu_over_eps) best = delta;
  }
  if (best < 0.0)
    throw NoAdmissibleDelta(
        "best_delta_bound: mu/eps below 8, no delta admissible");
  return {best, constants_from_delta(best, conv).Cdoubleprime};
}

/// Constants of the single-iteration error bound
///   ||x - xhat||_2 <= D1 eps + D2 ||x - x_s||_1 / a,
/// from a weight vector within sup-distance A of the signal.
struct SingleIterationBound {
  double A = 0.0;
  double a = 0.0;
  double b = 0.0;
  double mu = 0.0;
  int s = 0;
  double C1 = 0.0;
  double C2 = 0.0;
  double D1 = 0.0;
  double D2 = 0.0;
};

inline std::pair<double, SingleIterationBound> single_iteration_bound(
    double A, double a, double b, double mu, int s, double delta,
    double epsilon, double tail_l1,
    AlphaConvention conv = AlphaConvention::SqrtDenominator) {
  check_delta(delta);
  require(A >= 0.0 && b >= 0.0 && epsilon >= 0.0 && tail_l1 >= 0.0,
          "single_iteration_bound: A, b, eps, tail must be nonnegative");
  require(a > 0.0, "single_iteration_bound: a must be positive");
  require(s >= 1, "single_iteration_bound: s must be positive");
  require(mu > 0.0, "single_iteration_bound: mu must be positive");
  if (mu < A)
    throw PreconditionViolated("single_iteration_bound: requires mu >= A");
  const double rho = rho_of(delta), alpha = alpha_of(delta, conv);

  SingleIterationBound c;
  c.A = A; c.a = a; c.b = b; c.mu = mu; c.s = s;
  c.C1 = (A + a + b) / (mu - A + a);
  c.C2 = 2.0 * (A + a + b) / std::sqrt(double(s));
  if (rho * c.C1 >= 1.0)
    throw PreconditionViolated("single_iteration_bound: requires rho C1 < 1");
  c.D1 = (1.0 + c.C1) * alpha / (1.0 - rho * c.C1);
  c.D2 = c.C2 + (1.0 + c.C1) * rho * c.C2 / (1.0 - rho * c.C1);
  return {c.D1 * epsilon + c.D2 * tail_l1 / a, c};
}

/// Error bounds for arbitrary (not necessarily sparse) signals, via the
/// effective noise level eps0 = 1.2 (||x-x_s||_2 + ||x-x_s||_1/sqrt(s)) + eps.
struct ArbitrarySignalBounds {
  double epsilon0 = 0.0;
  double bound_half_tail = 0.0;  // 4.1 alpha/(1+rho) (||x-x_{s/2}||_1/sqrt(s) + eps)
  double bound_s_tail = 0.0;     // 2.4 alpha/(1+rho) (||x-x_s||_2 + ||x-x_s||_1/sqrt(s) + eps)
};

inline ArbitrarySignalBounds arbitrary_signal_bounds(
    double delta, double epsilon, const Vector& x, int s,
    AlphaConvention conv = AlphaConvention::SqrtDenominator) {
  check_delta(delta);
  require(epsilon >= 0.0, "arbitrary_signal_bounds: epsilon >= 0");
  require(s >= 1 && s <= x.size(), "arbitrary_signal_bounds: need 1 <= s <= dim");
  const double rho = rho_of(delta), alpha = alpha_of(delta, conv);
  const int half = (s + 1) / 2;  // ceil(s/2) for odd s
  const Vector tail_s = x - best_s_term(x, s);
  const Vector tail_half = x - best_s_term(x, half);
  const double rs = std::sqrt(double(s));

  ArbitrarySignalBounds out;
  out.epsilon0 =
      1.2 * (tail_s.norm() + tail_s.lpNorm<1>() / rs) + epsilon;
  out.bound_half_tail =
      4.1 * alpha / (1.0 + rho) * (tail_half.lpNorm<1>() / rs + epsilon);
  out.bound_s_tail = 2.4 * alpha / (1.0 + rho) *
                     (tail_s.norm() + tail_s.lpNorm<1>() / rs + epsilon);
  return out;
}

/// eps + ||x - x_s||_1 / sqrt(s): the error floor no recovery method beats.
inline double unrecoverable_energy(const Vector& x, int s, double epsilon) {
  require(s >= 1 && s <= x.size(), "unrecoverable_energy: need 1 <= s <= dim");
  require(epsilon >= 0.0, "unrecoverable_energy: epsilon >= 0");
  return epsilon + (x - best_s_term(x, s)).lpNorm<1>() / std::sqrt(double(s));
}

}  // namespace rwl1
