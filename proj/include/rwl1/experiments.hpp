#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "rwl1/core.hpp"
#include "rwl1/csv.hpp"
#include "rwl1/random.hpp"
#include "rwl1/reweight.hpp"
#include "rwl1/theory.hpp"

namespace rwl1 {

inline const char* dist_name(EntryDist d) {
  return d == EntryDist::Gaussian ? "gaussian" : "bernoulli";
}

struct ExperimentConfig {
  int d = 256;
  int m = 128;
  int s = 30;
  EntryDist matrix_dist = EntryDist::Gaussian;
  EntryDist signal_dist = EntryDist::Gaussian;
  double sigma = 0.1;
  int trials = 500;
  std::uint64_t base_seed = 20090401;
  bool redraw_phi = true;  // fresh phi per trial; false reuses one draw
  ReweightConfig reweight;
  SolverOptions solver;

  void validate() const {
    require(d >= 1 && m >= 1 && s >= 1, "config: sizes must be positive");
    require(s <= d, "config: s must not exceed d");
    require(m <= d, "config: m must not exceed d");
    require(sigma >= 0.0, "config: sigma must be nonnegative");
    require(trials >= 1, "config: trials must be positive");
    reweight.validate();
    solver.validate();
  }
};

/// One Monte-Carlo trial: standard-l1 and reweighted errors plus the
/// improvement factor err_reweighted / err_standard.
struct TrialRecord {
  int trial_id = 0;
  std::uint64_t seed = 0;
  double epsilon = 0.0;
  double noise_norm = 0.0;
  bool noise_exceeded_epsilon = false;
  double err_standard = 0.0;
  double err_reweighted = 0.0;
  double improvement = 1.0;
  int outer_iterations = 0;
  bool all_solves_converged = false;
};

// Sub-stream tags for per-trial seed derivation.
inline constexpr std::uint64_t kStreamPhi = 1;
inline constexpr std::uint64_t kStreamSignal = 2;
inline constexpr std::uint64_t kStreamNoise = 3;

/// Deterministic trial seeding: trial seed = base_seed + trial_id, with the
/// matrix / signal / noise streams split off via mix_seed. Trials are
/// therefore order-independent and safe to run concurrently.
inline TrialRecord run_trial(const ExperimentConfig& cfg, int trial_id) {
  cfg.validate();
  require(trial_id >= 0, "run_trial: trial_id must be nonnegative");
  const std::uint64_t seed = cfg.base_seed + std::uint64_t(trial_id);

  const std::uint64_t phi_seed =
      mix_seed(cfg.redraw_phi ? seed : cfg.base_seed, kStreamPhi);
  const Matrix phi = cfg.matrix_dist == EntryDist::Gaussian
                         ? generate_gaussian_matrix(cfg.m, cfg.d, phi_seed)
                         : generate_bernoulli_matrix(cfg.m, cfg.d, phi_seed);
  const Vector x =
      generate_sparse_signal(cfg.d, cfg.s, cfg.signal_dist,
                             mix_seed(seed, kStreamSignal))
          .densify();
  const Vector e = generate_noise(cfg.m, cfg.sigma, mix_seed(seed, kStreamNoise));
  const double eps = noise_level(cfg.sigma, cfg.m);

  TrialRecord rec;
  rec.trial_id = trial_id;
  rec.seed = seed;
  rec.epsilon = eps;
  rec.noise_norm = e.norm();
  rec.noise_exceeded_epsilon = rec.noise_norm > eps;

  // The truth is always attached for scoring; the noise field only when it
  // respects the epsilon bound (trials violating it are kept, flagged above).
  MeasurementInstance inst;
  if (rec.noise_exceeded_epsilon) {
    inst = make_instance(phi, measure(phi, x, e), eps);
    inst.truth = x;
  } else {
    inst = make_noisy_instance(phi, x, e, eps);
  }

  const ReweightTrace trace = reweighted_l1(inst, cfg.reweight, cfg.solver);
  const Vector& x_standard = trace.iterates.front();
  const Vector& x_reweighted = trace.final_iterate();
  rec.err_standard = (x - x_standard).norm();
  rec.err_reweighted = (x - x_reweighted).norm();
  rec.improvement =
      rec.err_standard == 0.0 ? 1.0 : rec.err_reweighted / rec.err_standard;
  rec.outer_iterations = trace.outer_iterations();
  rec.all_solves_converged = trace.all_converged();
  return rec;
}

/// Improvement-factor histogram: 40 bins of width 0.05 on [0, 2) plus one
/// overflow bin for factors >= 2.
inline constexpr int kHistogramBins = 40;
inline constexpr double kHistogramBinWidth = 0.05;

struct ExperimentSummary {
  int n_trials = 0;
  double mean_err_standard = 0.0;
  double median_err_standard = 0.0;
  double mean_err_reweighted = 0.0;
  double median_err_reweighted = 0.0;
  double median_improvement = 0.0;
  double fraction_improved = 0.0;  // trials with improvement < 1
  std::array<int, kHistogramBins + 1> histogram{};  // last bin = overflow
};

inline double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline ExperimentSummary summarize(const std::vector<TrialRecord>& records) {
  require(!records.empty(), "summarize: no records");
  ExperimentSummary s;
  s.n_trials = static_cast<int>(records.size());
  std::vector<double> es, er, imp;
  for (const TrialRecord& r : records) {
    es.push_back(r.err_standard);
    er.push_back(r.err_reweighted);
    imp.push_back(r.improvement);
    if (r.improvement < 1.0) s.fraction_improved += 1.0;
    int bin = static_cast<int>(std::floor(r.improvement / kHistogramBinWidth));
    if (bin < 0) bin = 0;
    if (bin > kHistogramBins) bin = kHistogramBins;
    ++s.histogram[bin];
  }
  s.fraction_improved /= s.n_trials;
  s.mean_err_standard =
      std::accumulate(es.begin(), es.end(), 0.0) / s.n_trials;
  s.mean_err_reweighted =
      std::accumulate(er.begin(), er.end(), 0.0) / s.n_trials;
  s.median_err_standard = median_of(es);
  s.median_err_reweighted = median_of(er);
  s.median_improvement = median_of(imp);
  return s;
}

/// Run trials 0 .. cfg.trials-1, optionally across a worker pool. Per-trial
/// seeding makes the result independent of scheduling; records are always
/// in trial_id order.
inline std::pair<std::vector<TrialRecord>, ExperimentSummary> run_experiment(
    const ExperimentConfig& cfg, int workers = 1) {
  cfg.validate();
  require(workers >= 1, "run_experiment: workers must be positive");
  std::vector<TrialRecord> records(cfg.trials);

  auto work = [&](int first, int stride) {
    for (int t = first; t < cfg.trials; t += stride) {
      try {
        records[t] = run_trial(cfg, t);
      } catch (const std::exception&) {
        // Failed-trial marker; the batch carries on.
        records[t].trial_id = t;
        records[t].seed = cfg.base_seed + std::uint64_t(t);
        records[t].err_standard = std::numeric_limits<double>::quiet_NaN();
        records[t].err_reweighted = std::numeric_limits<double>::quiet_NaN();
        records[t].improvement = std::numeric_limits<double>::quiet_NaN();
        records[t].all_solves_converged = false;
      }
    }
  };

  if (workers == 1 || cfg.trials == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    const int n = std::min(workers, cfg.trials);
    pool.reserve(n);
    for (int i = 0; i < n; ++i) pool.emplace_back(work, i, n);
    for (std::thread& th : pool) th.join();
  }
  ExperimentSummary summary = summarize(records);
  return {std::move(records), std::move(summary)};
}

/// One row of the recursion convergence study: how many iterations the
/// error bound needs to get within rel_tol of its limit.
struct ConvergenceRow {
  double mu = 0.0;
  double epsilon = 0.0;
  double delta = 0.0;
  bool admissible = false;
  double L_exact = std::numeric_limits<double>::quiet_NaN();
  int iters = 0;
};

/// Inadmissible (mu, eps, delta) triples are emitted with admissible=false
/// rather than dropped.
inline std::vector<ConvergenceRow> convergence_study(
    double mu, const std::vector<double>& eps_list,
    const std::vector<double>& delta_grid, double rel_tol = 1e-3) {
  require(mu > 0.0, "convergence_study: mu must be positive");
  require(rel_tol > 0.0, "convergence_study: rel_tol must be positive");
  for (double delta : delta_grid) check_delta(delta);
  for (double eps : eps_list)
    require(eps >= 0.0, "convergence_study: epsilon must be nonnegative");

  std::vector<ConvergenceRow> rows;
  rows.reserve(eps_list.size() * delta_grid.size());
  for (double eps : eps_list)
    for (double delta : delta_grid) {
      ConvergenceRow row;
      row.mu = mu;
      row.epsilon = eps;
      row.delta = delta;
      row.admissible = mu_condition(mu, eps, delta);
      if (row.admissible) {
        row.L_exact = limit_L(mu, eps, delta).first;
        row.iters = iterations_to_threshold(mu, eps, delta, rel_tol);
      }
      rows.push_back(row);
    }
  return rows;
}

inline void write_trials_csv(const std::string& path,
                             const ExperimentConfig& cfg,
                             const std::vector<TrialRecord>& records) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << "trial_id,seed,d,m,s,matrix_dist,signal_dist,sigma,epsilon,noise_norm,"
       "noise_exceeded,err_standard,err_reweighted,improvement,"
       "outer_iterations,converged\n";
  for (const TrialRecord& r : records) {
    f << r.trial_id << ',' << r.seed << ',' << cfg.d << ',' << cfg.m << ','
      << cfg.s << ',' << dist_name(cfg.matrix_dist) << ','
      << dist_name(cfg.signal_dist) << ',' << format_double(cfg.sigma) << ','
      << format_double(r.epsilon) << ',' << format_double(r.noise_norm) << ','
      << (r.noise_exceeded_epsilon ? 1 : 0) << ','
      << format_double(r.err_standard) << ','
      << format_double(r.err_reweighted) << ','
      << format_double(r.improvement) << ',' << r.outer_iterations << ','
      << (r.all_solves_converged ? 1 : 0) << '\n';
  }
}

inline void write_summary_csv(const std::string& path,
                              const ExperimentSummary& s) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << "n_trials,mean_err_standard,median_err_standard,mean_err_reweighted,"
       "median_err_reweighted,median_improvement,fraction_improved,"
       "histogram\n";
  f << s.n_trials << ',' << format_double(s.mean_err_standard) << ','
    << format_double(s.median_err_standard) << ','
    << format_double(s.mean_err_reweighted) << ','
    << format_double(s.median_err_reweighted) << ','
    << format_double(s.median_improvement) << ','
    << format_double(s.fraction_improved) << ",\"";
  for (int b = 0; b <= kHistogramBins; ++b) {
    if (b) f << ';';
    if (b < kHistogramBins)
      f << format_double(b * kHistogramBinWidth) << ':' << s.histogram[b];
    else
      f << "overflow:" << s.histogram[b];
  }
  f << "\"\n";
}

inline void write_convergence_csv(const std::string& path,
                                  const std::vector<ConvergenceRow>& rows) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << "mu,epsilon,delta,L_exact,iters,admissible\n";
  for (const ConvergenceRow& r : rows) {
    f << format_double(r.mu) << ',' << format_double(r.epsilon) << ','
      << format_double(r.delta) << ',' << format_double(r.L_exact) << ','
      << r.iters << ',' << (r.admissible ? 1 : 0) << '\n';
  }
}

}  // namespace rwl1
