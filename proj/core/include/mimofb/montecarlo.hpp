#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "mimofb/bounds.hpp"
#include "mimofb/channel.hpp"
#include "mimofb/feedback.hpp"

namespace mfb {

// Full description of one simulation experiment.
struct ScenarioConfig {
  int m = 4;                        // antennas = users
  std::vector<double> snr_grid_db;  // strictly increasing
  FeedbackScheme scheme = PerfectScheme{};
  CsirModel csir = CsirPerfect{};
  long trials = 10000;  // per SNR point
  std::uint64_t seed = 0;
  int workers = 0;  // 0 = hardware concurrency
  // QAM error-injection probability source: analytic SER bound (false) or
  // simulated square-QAM SER (true).
  bool qam_simulate_ser = false;
};

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b);

// Throws std::domain_error when a config violates its invariants.
void validate_config(const ScenarioConfig& cfg);

// Simulated ergodic rates over the SNR grid, in bits/s/Hz.  std_err is the
// Monte Carlo standard error of the sum rate (per-user standard error is
// std_err / m under the symmetric model).
struct RateCurve {
  std::vector<double> snr_db;
  std::vector<double> sum_rate_bits;
  std::vector<double> per_user_rate_bits;
  std::vector<double> std_err;
  long trials_used = 0;
  long degenerate_resamples = 0;
  // Mean rate of each individual user per SNR point (users are
  // exchangeable; the spread is a diagnostic).
  std::vector<std::vector<double>> user_mean_bits;
  // Per-point annotations: resolved bit budgets, engine switches, error
  // probabilities.
  std::vector<std::string> notes;
};

// Rate of one user in one frame under the worst-case-noise lower bound:
// log2(1 + |a|^2 (snr/m) / sigma), with sigma the interference-plus-noise
// variance (>= 1, noise power normalized to 1).  Under trained CSIR the
// caller passes the estimated coefficient and folds the self-noise term
// sigma_f_sq * snr / m into sigma.
double instantaneous_rate(std::complex<double> a, double sigma, double snr, int m);

// Runs the Monte Carlo experiment.  Deterministic for a fixed seed: every
// trial draws from a stream derived from (seed, snr-index, trial-index,
// user-index), so results are bit-identical for any worker count.
RateCurve run_scenario(const ScenarioConfig& cfg);

// Least-squares slope of sum rate against log2(snr) over the grid points
// with lo_db <= snr_db <= hi_db (the high-SNR pre-log / multiplexing gain).
// Needs at least three points in the window.
double fit_prelog(const RateCurve& curve, double lo_db, double hi_db);

// A named set of simulated curves plus their analytic companions.
struct FigureResult {
  std::string name;
  std::vector<std::pair<std::string, RateCurve>> curves;
  std::vector<BoundCurve> bounds;
};

// Reproduces one of the canned multi-curve experiments:
//   fig_csir  - analog vs. capacity-scaled RVQ feedback under trained CSIR
//   fig_alpha - QAM feedback, bit budget exponent alpha in {1, 2, 4}
//   fig_jakes - delayed analog feedback over Jakes Doppler processes
//   fig_gma   - delayed analog feedback over AR1 (Gauss-Markov) processes
// `base` supplies trials/seed/workers (and the grid when non-empty);
// scheme/csir/m come from the figure definition.  Unknown names throw
// std::domain_error.
FigureResult reproduce_figure(const std::string& which, const ScenarioConfig& base);

// Names accepted by reproduce_figure.
std::vector<std::string> figure_names();

// Deterministic parallel helper used by simulation and test harnesses:
// calls fn(0) ... fn(count-1), partitioned over `workers` threads
// (hardware concurrency when workers <= 0).  fn must write only to
// per-index state; exceptions propagate to the caller.
void parallel_trials(long count, int workers, const std::function<void(long)>& fn);

}  // namespace mfb
