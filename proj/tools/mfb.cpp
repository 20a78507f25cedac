// mfb — command-line front end for the mimofb library.
//
// Subcommands:
//   bounds NAME    evaluate an analytic rate/gap bound over an SNR sweep
//   simulate       run one Monte Carlo scenario (flags and/or config file)
//   figure NAME    reproduce a canned multi-curve experiment
//   validate       run the self-contained oracle suite
//
// Exit codes: 0 success, 1 internal/validation failure, 2 domain error
// (bad flag value, malformed config, unknown name).  All dB <-> linear
// conversion happens here; the library is linear-scale throughout.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Dense>

#include "mimofb/bounds.hpp"
#include "mimofb/config.hpp"
#include "mimofb/csv.hpp"
#include "mimofb/fading.hpp"
#include "mimofb/feedback.hpp"
#include "mimofb/montecarlo.hpp"
#include "mimofb/rng.hpp"
#include "mimofb/units.hpp"

namespace fs = std::filesystem;
using namespace mfb;

namespace {

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::domain_error("cannot open file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write file '" + path.string() + "'");
  out << content;
  if (!out) throw std::runtime_error("short write to '" + path.string() + "'");
}

std::string local_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  localtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y%m%d-%H%M%S", &tm);
  return buf;
}

std::uint64_t parse_seed_value(const std::string& text, const std::string& origin) {
  try {
    std::size_t used = 0;
    const auto value = std::stoull(text, &used, 10);
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return value;
  } catch (const std::exception&) {
    throw std::domain_error(origin + " is not a valid seed: '" + text + "'");
  }
}

std::optional<std::uint64_t> env_seed() {
  const char* raw = std::getenv("MFB_SEED");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  return parse_seed_value(raw, "MFB_SEED");
}

std::string join_command(int argc, char** argv) {
  std::string cmd = "mfb";
  for (int i = 1; i < argc; ++i) {
    cmd += ' ';
    cmd += argv[i];
  }
  return cmd;
}

// Wall-clock scope timer for manifests.
class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// ---------------------------------------------------------------------------
// bounds

struct BoundsArgs {
  std::string name;
  std::string snr = "0:5:40";
  BoundParams params;
  std::string out = "out";
};

int cmd_bounds(const BoundsArgs& args, const std::string& command) {
  Stopwatch timer;
  const auto grid = parse_snr_range(args.snr);
  const auto curve = evaluate_bound(args.name, args.params, grid);

  fs::create_directories(args.out);
  const std::string stem = "bounds-" + slugify(args.name);
  const fs::path csv_path = fs::path(args.out) / (stem + ".csv");
  write_text_file(csv_path, bound_curve_csv(curve));

  RunManifest manifest;
  manifest.command = command;
  manifest.outputs = {stem + ".csv"};
  manifest.wall_seconds = timer.seconds();
  write_text_file(fs::path(args.out) / (stem + ".manifest.json"),
                  manifest_to_json(manifest, nullptr));

  std::cout << "wrote " << csv_path.string() << " (" << grid.size() << " points, "
            << curve.label << ")\n";
  return 0;
}

// ---------------------------------------------------------------------------
// simulate

// One variable per scenario flag; `count() > 0` on the CLI11 option decides
// whether it overrides a config-file value.
struct ScenarioFlags {
  int m = 4;
  std::string snr;
  std::string scheme = "perfect";
  std::string csir = "perfect";
  double beta = 1.0;
  double beta1 = 1.0;
  double beta2 = 1.0;
  double alpha = 1.0;
  int bits = 0;
  std::string process = "iid";
  double F = 0.0;
  double r = 0.0;
  int delay = 0;
  long trials = 10000;
  std::uint64_t seed = 0;
  int workers = 0;
  std::string qam_mode = "bound";
  std::string rvq_engine = "auto";

  CLI::Option* opt_m = nullptr;
  CLI::Option* opt_snr = nullptr;
  CLI::Option* opt_scheme = nullptr;
  CLI::Option* opt_csir = nullptr;
  CLI::Option* opt_beta = nullptr;
  CLI::Option* opt_beta1 = nullptr;
  CLI::Option* opt_beta2 = nullptr;
  CLI::Option* opt_alpha = nullptr;
  CLI::Option* opt_bits = nullptr;
  CLI::Option* opt_process = nullptr;
  CLI::Option* opt_F = nullptr;
  CLI::Option* opt_r = nullptr;
  CLI::Option* opt_delay = nullptr;
  CLI::Option* opt_trials = nullptr;
  CLI::Option* opt_seed = nullptr;
  CLI::Option* opt_workers = nullptr;
  CLI::Option* opt_qam_mode = nullptr;
  CLI::Option* opt_rvq_engine = nullptr;

  void attach(CLI::App* app) {
    opt_m = app->add_option("--m", m, "transmit antennas = users (>= 2)");
    opt_snr = app->add_option("--snr", snr, "SNR sweep in dB, lo:step:hi or single value");
    opt_scheme = app->add_option("--scheme", scheme, "feedback: perfect|analog|rvq|qam");
    opt_csir = app->add_option("--csir", csir, "receiver CSI: perfect|trained");
    opt_beta = app->add_option("--beta", beta, "feedback redundancy (channel uses or bits per coefficient)");
    opt_beta1 = app->add_option("--beta1", beta1, "common downlink training redundancy (trained CSIR)");
    opt_beta2 = app->add_option("--beta2", beta2, "dedicated downlink training redundancy (trained CSIR)");
    opt_alpha = app->add_option("--alpha", alpha, "QAM bit-budget exponent");
    opt_bits = app->add_option("--bits", bits, "explicit RVQ bit budget (default: capacity rule)");
    opt_process = app->add_option("--process", process, "fading process: iid|jakes|ar1");
    opt_F = app->add_option("--F", F, "Jakes normalized Doppler, 0 < F < 1/2");
    opt_r = app->add_option("--r", r, "AR1 one-lag correlation, 0 <= r < 1");
    opt_delay = app->add_option("--delay", delay, "feedback delay in frames: 0|1");
    opt_trials = app->add_option("--trials", trials, "Monte Carlo trials per SNR point");
    opt_seed = app->add_option("--seed", seed, "RNG seed (fallback: MFB_SEED, then 0)");
    opt_workers = app->add_option("--workers", workers, "worker threads (0 = hardware)");
    opt_qam_mode = app->add_option("--qam-mode", qam_mode,
                                   "QAM symbol-error source: bound|sim");
    opt_rvq_engine = app->add_option("--rvq-engine", rvq_engine,
                                     "RVQ engine: auto|enumerated|sampled");
  }

  // Overlays every explicitly given flag on top of `base` (typically the
  // config-file options) and applies the seed fallback chain.
  ScenarioOptions merge_into(ScenarioOptions base) const {
    if (opt_m->count()) base.m = m;
    if (opt_snr->count()) base.snr = snr;
    if (opt_scheme->count()) base.scheme = scheme;
    if (opt_csir->count()) base.csir = csir;
    if (opt_beta->count()) base.beta = beta;
    if (opt_beta1->count()) base.beta1 = beta1;
    if (opt_beta2->count()) base.beta2 = beta2;
    if (opt_alpha->count()) base.alpha = alpha;
    if (opt_bits->count()) base.bits = bits;
    if (opt_process->count()) base.process = process;
    if (opt_F->count()) base.F = F;
    if (opt_r->count()) base.r = r;
    if (opt_delay->count()) base.delay = delay;
    if (opt_trials->count()) base.trials = trials;
    if (opt_seed->count()) base.seed = seed;
    if (opt_workers->count()) base.workers = workers;
    if (opt_qam_mode->count()) base.qam_mode = qam_mode;
    if (opt_rvq_engine->count()) base.rvq_engine = rvq_engine;
    if (!base.seed.has_value()) base.seed = env_seed();
    return base;
  }
};

void print_rate_table(const RateCurve& curve) {
  std::printf("%8s  %12s  %12s  %10s\n", "snr_db", "sum_rate", "per_user", "std_err");
  for (std::size_t i = 0; i < curve.snr_db.size(); ++i) {
    std::printf("%8.1f  %12.6f  %12.6f  %10.6f\n", curve.snr_db[i],
                curve.sum_rate_bits[i], curve.per_user_rate_bits[i], curve.std_err[i]);
  }
}

int cmd_simulate(const ScenarioFlags& flags, const std::string& config_path,
                 const std::string& out_dir, const std::string& command) {
  Stopwatch timer;
  ScenarioOptions options;
  if (!config_path.empty()) {
    options = scenario_options_from_ini(parse_ini(read_text_file(config_path)));
  }
  options = flags.merge_into(options);
  const ScenarioConfig cfg = build_scenario(options);

  const RateCurve curve = run_scenario(cfg);

  fs::create_directories(out_dir);
  const fs::path csv_path = fs::path(out_dir) / "simulate.csv";
  write_text_file(csv_path, rate_curve_csv(curve));

  RunManifest manifest;
  manifest.command = command;
  manifest.seed = cfg.seed;
  manifest.wall_seconds = timer.seconds();
  manifest.degenerate_resamples = curve.degenerate_resamples;
  for (const auto& note : curve.notes) {
    if (!note.empty()) manifest.notes.push_back(note);
  }
  manifest.outputs = {"simulate.csv"};
  write_text_file(fs::path(out_dir) / "simulate.manifest.json",
                  manifest_to_json(manifest, &cfg));

  print_rate_table(curve);
  std::cout << "wrote " << csv_path.string() << " (seed " << cfg.seed << ", "
            << curve.trials_used << " trials/point)\n";
  return 0;
}

// ---------------------------------------------------------------------------
// figure

std::string normalize_figure_name(std::string name) {
  std::replace(name.begin(), name.end(), '-', '_');
  return name;
}

int cmd_figure(const std::string& raw_name, const std::string& config_path,
               const ScenarioFlags& flags, const std::string& out_dir,
               const std::string& command) {
  Stopwatch timer;

  std::string name = normalize_figure_name(raw_name);
  ScenarioConfig base;
  base.trials = 100000;
  bool file_seed = false;
  if (!config_path.empty()) {
    const auto doc = parse_ini(read_text_file(config_path));
    const auto preset = figure_preset_from_ini(doc);
    file_seed = doc.find("figure", "seed") != nullptr;
    base = preset.base;
    if (name.empty()) {
      name = normalize_figure_name(preset.figure);
    } else if (name != normalize_figure_name(preset.figure)) {
      throw std::domain_error("figure name '" + raw_name + "' conflicts with preset '" +
                              preset.figure + "'");
    }
  }
  if (name.empty()) {
    throw std::domain_error("missing figure name (pass one or use --config)");
  }
  if (flags.opt_trials->count()) base.trials = flags.trials;
  if (flags.opt_workers->count()) base.workers = flags.workers;
  if (flags.opt_snr->count()) base.snr_grid_db = parse_snr_range(flags.snr);
  if (flags.opt_seed->count()) {
    base.seed = flags.seed;
  } else if (!file_seed) {
    base.seed = env_seed().value_or(base.seed);
  }

  const FigureResult figure = reproduce_figure(name, base);

  const fs::path dir = fs::path(out_dir) / (slugify(name) + "-" + local_timestamp());
  fs::create_directories(dir);

  RunManifest manifest;
  manifest.command = command;
  manifest.seed = base.seed;

  long resamples = 0;
  for (const auto& [label, curve] : figure.curves) {
    const std::string file = slugify(label) + ".csv";
    write_text_file(dir / file, rate_curve_csv(curve));
    manifest.outputs.push_back(file);
    resamples += curve.degenerate_resamples;
    for (const auto& note : curve.notes) {
      if (!note.empty()) manifest.notes.push_back(label + ": " + note);
    }
  }
  for (const auto& bound : figure.bounds) {
    const std::string file = slugify(bound.label) + ".csv";
    write_text_file(dir / file, bound_curve_csv(bound));
    manifest.outputs.push_back(file);
  }
  write_text_file(dir / "combined.csv", figure_long_csv(figure));
  manifest.outputs.push_back("combined.csv");
  write_text_file(dir / "figure.json", figure_descriptor_json(figure));
  manifest.outputs.push_back("figure.json");

  manifest.degenerate_resamples = resamples;
  manifest.wall_seconds = timer.seconds();
  write_text_file(dir / "manifest.json", manifest_to_json(manifest, nullptr));

  std::cout << "wrote " << manifest.outputs.size() << " files under " << dir.string()
            << " (seed " << base.seed << ", " << base.trials << " trials/point)\n";
  return 0;
}

// ---------------------------------------------------------------------------
// validate

// Finite-window Wiener oracle, independent of the spectral-integral path:
// predict h(t) from `taps` past samples observed in noise of variance
// delta.  MMSE = 1 - rho^T (T + delta I)^{-1} rho with T the Toeplitz
// autocorrelation matrix and rho the lag-1..taps autocorrelation vector.
double toeplitz_wiener_mmse(const FadingProcess& process, double delta, int taps) {
  Eigen::MatrixXd T(taps, taps);
  for (int i = 0; i < taps; ++i) {
    for (int j = 0; j < taps; ++j) {
      T(i, j) = autocorrelation(process, i - j);
    }
    T(i, i) += delta;
  }
  Eigen::VectorXd rho(taps);
  for (int i = 0; i < taps; ++i) rho(i) = autocorrelation(process, i + 1);
  const Eigen::VectorXd weights = T.ldlt().solve(rho);
  return 1.0 - weights.dot(rho);
}

class ValidationReport {
 public:
  void check(bool pass, const std::string& line) {
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << line << "\n";
    if (!pass) failures_++;
  }
  int failures() const { return failures_; }

 private:
  int failures_ = 0;
};

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

void validate_wiener(ValidationReport& report) {
  struct Case {
    FadingProcess process;
    double delta;
    int taps;
  };
  const Case cases[] = {
      {FadingProcess::ar1(0.5), 1e-1, 256},
      {FadingProcess::ar1(0.9), 1e-2, 256},
      {FadingProcess::jakes(0.1), 1e-2, 1024},
  };
  for (const auto& c : cases) {
    const double spectral = prediction_mmse(c.process, c.delta);
    const double window = toeplitz_wiener_mmse(c.process, c.delta, c.taps);
    const double rel = std::abs(spectral - window) / window;
    report.check(rel < 0.02, "wiener " + c.process.describe() + " delta=" + fmt(c.delta) +
                                 ": spectral " + fmt(spectral) + " vs " +
                                 std::to_string(c.taps) + "-tap window " + fmt(window) +
                                 " (rel dev " + fmt(rel * 100) + "%)");
  }
}

void validate_doppler_sandwich(ValidationReport& report) {
  for (const double F : {0.1, 0.25, 0.4}) {
    for (const double delta : {1e-1, 1e-2, 1e-3}) {
      const double eps1 = prediction_mmse(FadingProcess::jakes(F), delta);
      const auto bounds = doppler_eps1_bounds(F, delta, jakes_log_spectrum_integral(F));
      const bool pass = bounds.lower <= eps1 * (1 + 1e-9) && eps1 <= bounds.upper * (1 + 1e-9);
      report.check(pass, "doppler-sandwich F=" + fmt(F) + " delta=" + fmt(delta) + ": " +
                             fmt(bounds.lower) + " <= " + fmt(eps1) + " <= " +
                             fmt(bounds.upper));
    }
  }
}

void validate_rvq(ValidationReport& report) {
  const int m = 4;
  const int bits = 10;
  const long trials = 2000;
  const double reference = std::pow(2.0, -double(bits) / (m - 1));

  double sum_enum = 0.0, sumsq_enum = 0.0;
  double sum_samp = 0.0, sumsq_samp = 0.0;
  Rng rng = Rng::from_path(20240601, {7, 0, 0, 0});
  for (long t = 0; t < trials; ++t) {
    CVec h(m);
    for (int i = 0; i < m; ++i) h(i) = rng.cgauss();
    const double s_enum = rvq_sin2(h, rvq_quantize_streaming(h, bits, rng));
    const double s_samp = rvq_sin2(h, rvq_sample_quantized_direction(h, bits, rng));
    sum_enum += s_enum;
    sumsq_enum += s_enum * s_enum;
    sum_samp += s_samp;
    sumsq_samp += s_samp * s_samp;
  }
  const double mean_enum = sum_enum / trials;
  const double mean_samp = sum_samp / trials;
  const double se_enum =
      std::sqrt((sumsq_enum / trials - mean_enum * mean_enum) / (trials - 1));
  const double se_samp =
      std::sqrt((sumsq_samp / trials - mean_samp * mean_samp) / (trials - 1));

  const double ratio = mean_enum / reference;
  report.check(ratio >= 0.5 && ratio <= 1.0,
               "rvq-distortion m=4 bits=10: mean sin^2 " + fmt(mean_enum) + " (se " +
                   fmt(se_enum) + ") = " + fmt(ratio) + " x 2^(-B/(m-1))");

  const double gap = std::abs(mean_enum - mean_samp);
  const double tol = 4.0 * std::sqrt(se_enum * se_enum + se_samp * se_samp);
  report.check(gap <= tol, "rvq-engines: enumerated mean " + fmt(mean_enum) +
                               " vs sampled mean " + fmt(mean_samp) + " (|diff| " +
                               fmt(gap) + " <= " + fmt(tol) + ")");
}

void validate_qam(ValidationReport& report) {
  struct Case {
    double alpha, beta, snr_db;
  };
  const Case cases[] = {{2, 4, 10}, {2, 4, 15}, {2, 4, 20}, {1, 1, 10}};
  Rng rng = Rng::from_path(20240601, {11, 0, 0, 0});
  for (const auto& c : cases) {
    const double snr = db_to_linear(c.snr_db);
    const auto sim = qam_ser_simulate(c.alpha, c.beta, snr, 200000, rng);
    const double bound = qam_ser_bound(c.alpha, c.beta, snr);
    const double se = std::sqrt(std::max(sim.ser * (1 - sim.ser), 1e-12) / sim.symbols);
    report.check(sim.ser <= bound,
                 "qam-ser alpha=" + fmt(c.alpha) + " beta=" + fmt(c.beta) + " snr=" +
                     fmt(c.snr_db) + "dB (" + std::to_string(sim.constellation) +
                     "-QAM): simulated " + fmt(sim.ser) + " (se " + fmt(se) +
                     ") <= bound " + fmt(bound));
  }
}

void validate_bound_domination(ValidationReport& report, bool inject_sigma_bug) {
  ScenarioConfig ideal;
  ideal.m = 4;
  ideal.snr_grid_db = {10.0, 20.0};
  ideal.trials = 20000;
  ideal.seed = 99;

  ScenarioConfig analog = ideal;
  analog.scheme = AnalogScheme{1.0, 0, FadingProcess::iid_block()};

  const RateCurve ideal_curve = run_scenario(ideal);
  const RateCurve analog_curve = run_scenario(analog);

  for (std::size_t i = 0; i < ideal.snr_grid_db.size(); ++i) {
    const double snr = db_to_linear(ideal.snr_grid_db[i]);
    double sigma_e_sq = 1.0 / (1.0 + snr);
    // Negative control: corrupt the error variance fed to the analytic
    // side, so the measured gap must overshoot the (now too small) bound.
    if (inject_sigma_bug) sigma_e_sq *= 0.25;
    const double bound = analog_gap_bound(sigma_e_sq, snr, ideal.m);
    const double gap =
        ideal_curve.per_user_rate_bits[i] - analog_curve.per_user_rate_bits[i];
    const double se = std::sqrt(ideal_curve.std_err[i] * ideal_curve.std_err[i] +
                                analog_curve.std_err[i] * analog_curve.std_err[i]) /
                      ideal.m;
    report.check(gap <= bound + 3 * se,
                 "bound-domination analog beta=1 snr=" + fmt(ideal.snr_grid_db[i]) +
                     "dB: per-user gap " + fmt(gap) + " (se " + fmt(se) +
                     ") <= bound " + fmt(bound) + " + 3 se");
  }
}

int cmd_validate(bool inject_sigma_bug) {
  ValidationReport report;
  validate_wiener(report);
  validate_doppler_sandwich(report);
  validate_rvq(report);
  validate_qam(report);
  validate_bound_domination(report, inject_sigma_bug);
  if (report.failures() == 0) {
    std::cout << "validate: all checks passed\n";
    return 0;
  }
  std::cout << "validate: " << report.failures() << " check(s) failed\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mfb — multi-antenna downlink feedback: Monte Carlo rates and analytic bounds"};
  app.require_subcommand(1);

  const std::string command = join_command(argc, argv);

  // bounds
  BoundsArgs bounds_args;
  auto* sub_bounds = app.add_subcommand("bounds", "evaluate an analytic bound over an SNR sweep");
  std::string bound_list;
  for (const auto& n : bound_names()) bound_list += (bound_list.empty() ? "" : ", ") + n;
  sub_bounds->add_option("name", bounds_args.name, "bound name: " + bound_list)->required();
  sub_bounds->add_option("--snr", bounds_args.snr, "SNR sweep in dB, lo:step:hi");
  sub_bounds->add_option("--m", bounds_args.params.m, "antennas = users");
  sub_bounds->add_option("--beta", bounds_args.params.beta, "feedback redundancy");
  sub_bounds->add_option("--beta1", bounds_args.params.beta1, "common training redundancy");
  sub_bounds->add_option("--beta2", bounds_args.params.beta2, "dedicated training redundancy");
  sub_bounds->add_option("--alpha", bounds_args.params.alpha, "QAM bit-budget exponent");
  sub_bounds->add_option("--bits", bounds_args.params.bits, "RVQ bit budget");
  sub_bounds->add_option("--F", bounds_args.params.F, "Jakes normalized Doppler");
  sub_bounds->add_option("--r", bounds_args.params.r, "AR1 one-lag correlation");
  sub_bounds->add_option("--out", bounds_args.out, "output directory");

  // simulate
  ScenarioFlags sim_flags;
  std::string sim_config;
  std::string sim_out = "out";
  auto* sub_sim = app.add_subcommand("simulate", "run one Monte Carlo scenario");
  sim_flags.attach(sub_sim);
  sub_sim->add_option("--config", sim_config, "scenario config file ([scenario] section)");
  sub_sim->add_option("--out", sim_out, "output directory");

  // figure
  ScenarioFlags fig_flags;
  std::string fig_name;
  std::string fig_config;
  std::string fig_out = "out";
  auto* sub_fig = app.add_subcommand("figure", "reproduce a canned multi-curve experiment");
  std::string figure_list;
  for (const auto& n : figure_names()) figure_list += (figure_list.empty() ? "" : ", ") + n;
  sub_fig->add_option("name", fig_name, "figure name: " + figure_list);
  sub_fig->add_option("--config", fig_config, "figure preset file ([figure] section)");
  fig_flags.attach(sub_fig);
  sub_fig->add_option("--out", fig_out, "output directory");

  // validate
  bool inject_sigma_bug = false;
  auto* sub_val = app.add_subcommand("validate", "run the self-contained oracle suite");
  sub_val->add_flag("--inject-sigma-bug", inject_sigma_bug,
                    "negative control: corrupt the error variance used by the "
                    "bound-domination check (must fail)")
      ->group("");  // hidden: test fixture only

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    if (dynamic_cast<const CLI::Success*>(&e) != nullptr) return 0;
    return code == 0 ? 0 : 2;
  }

  try {
    if (sub_bounds->parsed()) return cmd_bounds(bounds_args, command);
    if (sub_sim->parsed()) return cmd_simulate(sim_flags, sim_config, sim_out, command);
    if (sub_fig->parsed()) return cmd_figure(fig_name, fig_config, fig_flags, fig_out, command);
    if (sub_val->parsed()) return cmd_validate(inject_sigma_bug);
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
