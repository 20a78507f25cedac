#include "mimofb/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "mimofb/units.hpp"

namespace mfb {

namespace {

// Path constant reserved for per-point auxiliary draws (QAM SER
// calibration); far outside any trial index.
constexpr std::uint64_t kSerCalibrationPath = 0xFFFFFFFF00000001ull;

// Symbols used to calibrate the injection probability when the QAM scheme
// runs on simulated rather than analytic symbol error rates.
constexpr long kSerCalibrationSymbols = 200000;

// Give up if a single trial keeps drawing degenerate channels; with
// continuous Gaussian draws this would indicate a numerical bug, not bad
// luck.
constexpr int kMaxResampleAttempts = 64;

struct PointContext {
  double snr = 0.0;
  // Trained CSIR parameters (zero when CSIR is perfect).
  bool trained = false;
  double e1 = 0.0;
  double sigma_f_sq = 0.0;
  // Analog feedback: precomputed CSIT error variance of the feedback stage.
  double analog_w = 0.0;
  // RVQ / QAM: resolved bit budget and engine.
  int bits = 0;
  bool sampled_engine = false;
  RvqScheme rvq;  // quantizer settings used by RVQ and QAM paths
  // QAM: symbol and per-user feedback error probabilities.
  double p_symbol = 0.0;
  double p_feedback_error = 0.0;
};

PointContext build_context(const ScenarioConfig& cfg, std::size_t snr_index,
                           double snr, std::string* note) {
  PointContext ctx;
  ctx.snr = snr;

  if (const auto* trained = std::get_if<CsirTrained>(&cfg.csir)) {
    ctx.trained = true;
    ctx.e1 = 1.0 / (1.0 + trained->beta1 * snr);
    ctx.sigma_f_sq = 1.0 / (1.0 + trained->beta2 * snr);
  }

  std::ostringstream info;
  info.precision(6);
  if (const auto* analog = std::get_if<AnalogScheme>(&cfg.scheme)) {
    ctx.analog_w =
        csit_error_variance_delayed(analog->process, analog->beta, snr, analog->delay);
    info << "sigma_fb_sq=" << ctx.analog_w;
  } else if (const auto* rvq = std::get_if<RvqScheme>(&cfg.scheme)) {
    ctx.rvq = *rvq;
    ctx.bits = resolve_rvq_bits(*rvq, cfg.m, snr);
    ctx.sampled_engine = rvq_uses_sampled_engine(*rvq, ctx.bits);
    if (!ctx.sampled_engine && ctx.bits > kMaxEnumeratedBits) {
      throw std::domain_error(
          "rvq bit budget " + std::to_string(ctx.bits) +
          " exceeds the enumeration cap of " + std::to_string(kMaxEnumeratedBits) +
          "; lower snr or beta, or allow the sampled engine");
    }
    info << "bits=" << ctx.bits
         << " engine=" << (ctx.sampled_engine ? "sampled" : "enumerated");
  } else if (const auto* qam = std::get_if<QamScheme>(&cfg.scheme)) {
    const long bits = std::lround(qam->alpha * cfg.m * std::log2(snr));
    if (!(snr > 1.0)) {
      throw std::domain_error("QAM feedback needs snr > 1 (got " +
                              std::to_string(snr) + ")");
    }
    ctx.bits = static_cast<int>(std::max(1l, bits));
    ctx.rvq.bits = ctx.bits;
    ctx.sampled_engine = rvq_uses_sampled_engine(ctx.rvq, ctx.bits);
    if (cfg.qam_simulate_ser) {
      Rng ser_rng = Rng::from_path(cfg.seed, {snr_index, kSerCalibrationPath});
      const auto sim =
          qam_ser_simulate(qam->alpha, qam->beta, snr, kSerCalibrationSymbols, ser_rng);
      ctx.p_symbol = sim.ser;
      info << "ser=simulated(" << sim.constellation << "-QAM) ";
    } else {
      ctx.p_symbol = qam_ser_bound(qam->alpha, qam->beta, snr);
      info << "ser=bound ";
    }
    ctx.p_feedback_error = qam_feedback_error_prob(ctx.p_symbol, qam->beta, cfg.m);
    info << "bits=" << ctx.bits
         << " engine=" << (ctx.sampled_engine ? "sampled" : "enumerated")
         << " p_sym=" << ctx.p_symbol << " p_efb=" << ctx.p_feedback_error;
  }
  if (note) *note = info.str();
  return ctx;
}

// Simulates one trial; writes m per-user rates to `out`.  Returns the
// number of degenerate channel draws that had to be resampled.
long simulate_trial(const ScenarioConfig& cfg, const PointContext& ctx,
                    std::uint64_t snr_index, std::uint64_t trial, double* out) {
  const int m = cfg.m;
  const double snr = ctx.snr;

  for (int attempt = 0;; ++attempt) {
    if (attempt >= kMaxResampleAttempts) {
      throw std::runtime_error("degenerate channel persisted across resamples");
    }
    const std::uint64_t att = static_cast<std::uint64_t>(attempt);
    Rng trial_rng = Rng::from_path(cfg.seed, {snr_index, trial, att, 0});
    ChannelRealization ch = sample_iid_channel(m, m, trial_rng);

    if (ctx.trained) {
      const double keep = 1.0 - ctx.e1;
      const double noise_std = std::sqrt(ctx.e1 * keep);
      ch.h_csir = keep * ch.h_true;
      for (Eigen::Index col = 0; col < ch.h_csir.cols(); ++col) {
        for (Eigen::Index row = 0; row < ch.h_csir.rows(); ++row) {
          ch.h_csir(row, col) += noise_std * trial_rng.cgauss();
        }
      }
    }

    // Per-user streams keyed by (seed, snr-index, trial, attempt, user+1)
    // make the per-user draws independent of evaluation order; the
    // trial-level stream above uses the user slot 0.
    std::vector<Rng> user_rng;
    user_rng.reserve(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
      user_rng.push_back(
          Rng::from_path(cfg.seed, {snr_index, trial, att, std::uint64_t(k) + 1}));
    }

    const double scale = std::sqrt(static_cast<double>(m));
    if (std::holds_alternative<PerfectScheme>(cfg.scheme)) {
      ch.h_csit = ch.h_csir;
      ch.err_csit_var = ctx.e1;
    } else if (std::holds_alternative<AnalogScheme>(cfg.scheme)) {
      const double w = ctx.analog_w;
      if (w > 1.0 - 1e-12) {
        // Fully uninformative feedback (e.g. one-frame delay over
        // block-i.i.d. fading): the conditional mean is the zero matrix,
        // so beamform on an independent draw instead.
        for (Eigen::Index col = 0; col < ch.h_csit.cols(); ++col) {
          for (Eigen::Index row = 0; row < ch.h_csit.rows(); ++row) {
            ch.h_csit(row, col) = trial_rng.cgauss();
          }
        }
        ch.err_csit_var = 1.0;
      } else {
        const double keep = 1.0 - w;
        const double noise_std = std::sqrt(w * keep * (1.0 - ctx.e1));
        ch.h_csit = keep * ch.h_csir;
        for (Eigen::Index col = 0; col < ch.h_csit.cols(); ++col) {
          for (Eigen::Index row = 0; row < ch.h_csit.rows(); ++row) {
            ch.h_csit(row, col) += noise_std * trial_rng.cgauss();
          }
        }
        ch.err_csit_var = ctx.e1 + w * (1.0 - ctx.e1);
      }
    } else if (std::holds_alternative<RvqScheme>(cfg.scheme)) {
      for (int k = 0; k < m; ++k) {
        const CVec dir =
            rvq_quantize_column(ch.h_csir.col(k), ctx.rvq, ctx.bits, user_rng[k]);
        ch.h_csit.col(k) = scale * dir;
      }
    } else {
      for (int k = 0; k < m; ++k) {
        auto& rng_k = user_rng[static_cast<std::size_t>(k)];
        const bool in_error = rng_k.uniform() < ctx.p_feedback_error;
        const CVec dir =
            in_error ? uniform_direction(m, rng_k)
                     : rvq_quantize_column(ch.h_csir.col(k), ctx.rvq, ctx.bits, rng_k);
        ch.h_csit.col(k) = scale * dir;
      }
    }

    BeamformerSet bf;
    try {
      bf = zf_beamformer(ch.h_csit);
    } catch (const DegenerateChannelError&) {
      continue;  // resampled; the attempt counter doubles as the tally
    }

    const auto terms = per_user_sinr_terms(ch, bf, snr);
    for (int k = 0; k < m; ++k) {
      std::complex<double> a = terms[static_cast<std::size_t>(k)].a;
      double sigma = terms[static_cast<std::size_t>(k)].sigma;
      if (ctx.trained) {
        a = sample_estimated_coefficient(a, ctx.sigma_f_sq,
                                         user_rng[static_cast<std::size_t>(k)]);
        sigma += ctx.sigma_f_sq * snr / m;
      }
      out[k] = instantaneous_rate(a, sigma, snr, m);
    }
    return attempt;
  }
}

}  // namespace

bool operator==(const ScenarioConfig& a, const ScenarioConfig& b) {
  const auto scheme_equal = [&]() {
    if (a.scheme.index() != b.scheme.index()) return false;
    if (const auto* an = std::get_if<AnalogScheme>(&a.scheme)) {
      const auto& bn = std::get<AnalogScheme>(b.scheme);
      return an->beta == bn.beta && an->delay == bn.delay &&
             an->process.kind == bn.process.kind && an->process.F == bn.process.F &&
             an->process.r == bn.process.r;
    }
    if (const auto* ar = std::get_if<RvqScheme>(&a.scheme)) {
      const auto& br = std::get<RvqScheme>(b.scheme);
      return ar->bits == br.bits && ar->beta == br.beta && ar->engine == br.engine;
    }
    if (const auto* aq = std::get_if<QamScheme>(&a.scheme)) {
      const auto& bq = std::get<QamScheme>(b.scheme);
      return aq->alpha == bq.alpha && aq->beta == bq.beta;
    }
    return true;  // PerfectScheme
  };
  const auto csir_equal = [&]() {
    if (a.csir.index() != b.csir.index()) return false;
    if (const auto* at = std::get_if<CsirTrained>(&a.csir)) {
      const auto& bt = std::get<CsirTrained>(b.csir);
      return at->beta1 == bt.beta1 && at->beta2 == bt.beta2;
    }
    return true;
  };
  return a.m == b.m && a.snr_grid_db == b.snr_grid_db && a.trials == b.trials &&
         a.seed == b.seed && a.workers == b.workers &&
         a.qam_simulate_ser == b.qam_simulate_ser && scheme_equal() && csir_equal();
}

void validate_config(const ScenarioConfig& cfg) {
  if (cfg.m < 2) throw std::domain_error("m must be >= 2");
  if (cfg.trials < 1) throw std::domain_error("trials must be >= 1");
  if (cfg.snr_grid_db.empty()) throw std::domain_error("snr grid is empty");
  for (std::size_t i = 1; i < cfg.snr_grid_db.size(); ++i) {
    if (!(cfg.snr_grid_db[i] > cfg.snr_grid_db[i - 1])) {
      throw std::domain_error("snr grid must be strictly increasing");
    }
  }
  if (cfg.workers < 0) throw std::domain_error("workers must be >= 0");

  if (const auto* analog = std::get_if<AnalogScheme>(&cfg.scheme)) {
    if (!(analog->beta >= 1.0)) throw std::domain_error("analog beta must be >= 1");
    if (analog->delay != 0 && analog->delay != 1) {
      throw std::domain_error("delay must be 0 or 1");
    }
  } else if (const auto* rvq = std::get_if<RvqScheme>(&cfg.scheme)) {
    if (rvq->bits.has_value() && *rvq->bits < 1) {
      throw std::domain_error("rvq bits must be >= 1");
    }
    if (!rvq->bits.has_value() && !(rvq->beta >= 1.0)) {
      throw std::domain_error("rvq beta must be >= 1");
    }
  } else if (const auto* qam = std::get_if<QamScheme>(&cfg.scheme)) {
    if (!(qam->alpha >= 1.0) || !(qam->beta >= qam->alpha)) {
      throw std::domain_error("qam needs 1 <= alpha <= beta");
    }
  }
  if (const auto* trained = std::get_if<CsirTrained>(&cfg.csir)) {
    if (!(trained->beta1 >= 1.0) || !(trained->beta2 >= 1.0)) {
      throw std::domain_error("csir training redundancies must be >= 1");
    }
  }
}

double instantaneous_rate(std::complex<double> a, double sigma, double snr, int m) {
  if (m < 2) throw std::domain_error("m must be >= 2");
  if (!(snr >= 0.0)) throw std::domain_error("snr must be non-negative");
  if (!(sigma >= 1.0 - 1e-12)) {
    throw std::domain_error("interference-plus-noise variance cannot fall below the noise floor");
  }
  return std::log2(1.0 + std::norm(a) * (snr / m) / sigma);
}

void parallel_trials(long count, int workers, const std::function<void(long)>& fn) {
  if (count <= 0) return;
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  long n_workers = workers > 0 ? workers : static_cast<long>(hw);
  n_workers = std::min<long>(n_workers, count);

  if (n_workers == 1) {
    for (long i = 0; i < count; ++i) fn(i);
    return;
  }

  const long chunk = (count + n_workers - 1) / n_workers;
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(n_workers));
  for (long w = 0; w < n_workers; ++w) {
    const long begin = w * chunk;
    const long end = std::min(count, begin + chunk);
    threads.emplace_back([&, w, begin, end]() {
      try {
        for (long i = begin; i < end; ++i) fn(i);
      } catch (...) {
        failures[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
}

RateCurve run_scenario(const ScenarioConfig& cfg) {
  validate_config(cfg);
  const int m = cfg.m;
  const long trials = cfg.trials;

  RateCurve curve;
  curve.trials_used = trials;
  curve.snr_db = cfg.snr_grid_db;

  std::vector<double> rates(static_cast<std::size_t>(trials) * m);

  for (std::size_t s = 0; s < cfg.snr_grid_db.size(); ++s) {
    const double snr = db_to_linear(cfg.snr_grid_db[s]);
    std::string note;
    const PointContext ctx = build_context(cfg, s, snr, &note);
    if (!note.empty()) {
      std::ostringstream prefix;
      prefix << "snr_db=" << cfg.snr_grid_db[s] << ": " << note;
      curve.notes.push_back(prefix.str());
    }

    std::atomic<long> resamples{0};
    parallel_trials(trials, cfg.workers, [&](long t) {
      const long extra = simulate_trial(cfg, ctx, s, static_cast<std::uint64_t>(t),
                                        &rates[static_cast<std::size_t>(t) * m]);
      if (extra > 0) resamples.fetch_add(extra, std::memory_order_relaxed);
    });
    curve.degenerate_resamples += resamples.load();

    // Sequential reduction in trial order: identical results regardless of
    // how trials were scheduled across workers.
    std::vector<double> user_sum(static_cast<std::size_t>(m), 0.0);
    double total = 0.0;
    double total_sq = 0.0;
    for (long t = 0; t < trials; ++t) {
      double trial_sum = 0.0;
      for (int k = 0; k < m; ++k) {
        const double r = rates[static_cast<std::size_t>(t) * m + k];
        user_sum[static_cast<std::size_t>(k)] += r;
        trial_sum += r;
      }
      total += trial_sum;
      total_sq += trial_sum * trial_sum;
    }
    const double n = static_cast<double>(trials);
    const double mean_sum = total / n;
    const double var_sum =
        trials > 1 ? std::max(0.0, (total_sq - n * mean_sum * mean_sum) / (n - 1.0))
                   : 0.0;
    curve.sum_rate_bits.push_back(mean_sum);
    curve.per_user_rate_bits.push_back(mean_sum / m);
    curve.std_err.push_back(std::sqrt(var_sum / n));
    std::vector<double> user_means(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) user_means[static_cast<std::size_t>(k)] = user_sum[static_cast<std::size_t>(k)] / n;
    curve.user_mean_bits.push_back(std::move(user_means));
  }
  return curve;
}

double fit_prelog(const RateCurve& curve, double lo_db, double hi_db) {
  if (!(hi_db > lo_db)) throw std::domain_error("fit window must have hi > lo");
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < curve.snr_db.size(); ++i) {
    const double db = curve.snr_db[i];
    if (db >= lo_db - 1e-9 && db <= hi_db + 1e-9) {
      xs.push_back(std::log2(db_to_linear(db)));
      ys.push_back(curve.sum_rate_bits[i]);
    }
  }
  if (xs.size() < 3) {
    throw std::domain_error("pre-log fit needs at least 3 grid points in the window");
  }
  double x_mean = 0.0;
  double y_mean = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    x_mean += xs[i];
    y_mean += ys[i];
  }
  x_mean /= static_cast<double>(xs.size());
  y_mean /= static_cast<double>(xs.size());
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    num += (xs[i] - x_mean) * (ys[i] - y_mean);
    den += (xs[i] - x_mean) * (xs[i] - x_mean);
  }
  return num / den;
}

namespace {

std::vector<double> default_grid(double lo, double step, double hi) {
  std::vector<double> grid;
  for (double v = lo; v <= hi + 1e-9; v += step) grid.push_back(v);
  return grid;
}

ScenarioConfig figure_run(const ScenarioConfig& base, const std::vector<double>& grid,
                          int m, FeedbackScheme scheme, CsirModel csir) {
  ScenarioConfig cfg = base;
  cfg.m = m;
  cfg.snr_grid_db = grid;
  cfg.scheme = std::move(scheme);
  cfg.csir = std::move(csir);
  return cfg;
}

}  // namespace

FigureResult reproduce_figure(const std::string& which, const ScenarioConfig& base) {
  FigureResult result;
  result.name = which;

  const long trials = base.trials;
  ScenarioConfig run = base;
  run.trials = trials;

  const auto simulate = [&](const std::string& label, const ScenarioConfig& cfg) {
    result.curves.emplace_back(label, run_scenario(cfg));
  };

  if (which == "fig_csir") {
    const auto grid =
        base.snr_grid_db.empty() ? default_grid(0, 5, 40) : base.snr_grid_db;
    const CsirModel trained = CsirTrained{1.0, 1.0};
    simulate("zf-ideal", figure_run(run, grid, 4, PerfectScheme{}, CsirPerfect{}));
    simulate("csir-only", figure_run(run, grid, 4, PerfectScheme{}, trained));
    simulate("analog-b1",
             figure_run(run, grid, 4, AnalogScheme{1.0, 0, FadingProcess::iid_block()},
                        trained));
    simulate("analog-b2",
             figure_run(run, grid, 4, AnalogScheme{2.0, 0, FadingProcess::iid_block()},
                        trained));
    RvqScheme rvq1;
    rvq1.beta = 1.0;
    RvqScheme rvq2;
    rvq2.beta = 2.0;
    simulate("rvq-b1", figure_run(run, grid, 4, rvq1, trained));
    simulate("rvq-b2", figure_run(run, grid, 4, rvq2, trained));

    BoundParams p;
    p.m = 4;
    p.beta1 = 1.0;
    p.beta2 = 1.0;
    for (double beta : {1.0, 2.0}) {
      p.beta = beta;
      BoundCurve a = evaluate_bound("analog-gap-csir", p, grid);
      a.label += beta == 1.0 ? "-b1" : "-b2";
      result.bounds.push_back(std::move(a));
      BoundCurve d = evaluate_bound("digital-gap-csir", p, grid);
      d.label += beta == 1.0 ? "-b1" : "-b2";
      result.bounds.push_back(std::move(d));
    }
  } else if (which == "fig_alpha") {
    // QAM bit budgets need snr > 1, so the grid starts at 5 dB.
    const auto grid =
        base.snr_grid_db.empty() ? default_grid(5, 5, 40) : base.snr_grid_db;
    simulate("zf-ideal", figure_run(run, grid, 4, PerfectScheme{}, CsirPerfect{}));
    for (double alpha : {1.0, 2.0, 4.0}) {
      std::ostringstream label;
      label << "qam-a" << static_cast<int>(alpha);
      simulate(label.str(),
               figure_run(run, grid, 4, QamScheme{alpha, 4.0}, CsirPerfect{}));
    }
    // Achievable-rate companion built from the simulated ideal curve.
    const RateCurve& ideal = result.curves.front().second;
    for (double alpha : {1.0, 2.0, 4.0}) {
      BoundCurve lower;
      std::ostringstream label;
      label << "qam-rate-lower-a" << static_cast<int>(alpha) << " (per-user)";
      lower.label = label.str();
      lower.snr_db = grid;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        lower.value_bits.push_back(qam_rate_lower(ideal.per_user_rate_bits[i], alpha,
                                                  4.0, 4, db_to_linear(grid[i])));
      }
      result.bounds.push_back(std::move(lower));
    }
  } else if (which == "fig_jakes") {
    const auto grid =
        base.snr_grid_db.empty() ? default_grid(0, 5, 45) : base.snr_grid_db;
    simulate("zf-ideal", figure_run(run, grid, 4, PerfectScheme{}, CsirPerfect{}));
    for (double F : {0.0926, 0.25, 0.4}) {
      std::ostringstream label;
      label << "jakes-F" << F;
      simulate(label.str(),
               figure_run(run, grid, 4, AnalogScheme{1.0, 1, FadingProcess::jakes(F)},
                          CsirPerfect{}));
    }
  } else if (which == "fig_gma") {
    const auto grid =
        base.snr_grid_db.empty() ? default_grid(0, 5, 45) : base.snr_grid_db;
    simulate("zf-ideal", figure_run(run, grid, 4, PerfectScheme{}, CsirPerfect{}));
    for (double r : {0.5, 0.9, 0.99}) {
      std::ostringstream label;
      label << "ar1-r" << r;
      simulate(label.str(),
               figure_run(run, grid, 4, AnalogScheme{1.0, 1, FadingProcess::ar1(r)},
                          CsirPerfect{}));
    }
    BoundParams p;
    p.m = 4;
    for (double r : {0.5, 0.9, 0.99}) {
      p.r = r;
      BoundCurve upper = evaluate_bound("regular-rate-upper", p, grid);
      std::ostringstream label;
      label << "regular-rate-upper-r" << r << " (per-user)";
      upper.label = label.str();
      result.bounds.push_back(std::move(upper));
    }
  } else {
    throw std::domain_error("unknown figure '" + which +
                            "'; expected one of fig_csir, fig_alpha, fig_jakes, fig_gma");
  }
  return result;
}

std::vector<std::string> figure_names() {
  return {"fig_csir", "fig_alpha", "fig_jakes", "fig_gma"};
}

}  // namespace mfb
