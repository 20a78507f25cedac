#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mimofb/montecarlo.hpp"

namespace mfb {

inline constexpr const char* kVersion = "0.1.0";

// Minimal INI dialect used for experiment configs and figure presets:
// [section] headers, key = value pairs, '#' or ';' comments, blank lines.
// Keys before any header land in the "" section.  Duplicate keys keep the
// last value; malformed lines throw std::domain_error.
struct IniDocument {
  std::map<std::string, std::map<std::string, std::string>> sections;

  const std::string* find(const std::string& section, const std::string& key) const;
};

IniDocument parse_ini(const std::string& text);

// Parses an SNR grid given as "lo:step:hi" in dB (inclusive of hi within a
// relative epsilon) or as a single value.  Rejects non-positive steps and
// empty ranges.
std::vector<double> parse_snr_range(const std::string& spec);

// Raw experiment knobs exactly as a user states them (CLI flags or config
// keys); build_scenario resolves them into a validated ScenarioConfig and
// names any missing or inconsistent field in the thrown error.
struct ScenarioOptions {
  int m = 4;
  std::optional<std::string> snr;
  std::string scheme = "perfect";  // perfect | analog | rvq | qam
  std::string csir = "perfect";    // perfect | trained
  double beta = 1.0;
  double beta1 = 1.0;
  double beta2 = 1.0;
  double alpha = 1.0;
  std::optional<int> bits;         // rvq: explicit budget (else capacity rule)
  std::string process = "iid";     // iid | jakes | ar1
  std::optional<double> F;         // jakes
  std::optional<double> r;         // ar1
  int delay = 0;
  long trials = 10000;
  std::optional<std::uint64_t> seed;
  int workers = 0;
  std::string qam_mode = "bound";  // bound | sim
  std::string rvq_engine = "auto"; // auto | enumerated | sampled
};

ScenarioConfig build_scenario(const ScenarioOptions& options);

// Reads [scenario] into options; unknown keys throw, missing required keys
// (snr) are reported by name via build_scenario.
ScenarioOptions scenario_options_from_ini(const IniDocument& doc);

// A figure preset: [figure] section with `name` plus optional overrides
// (trials, snr, seed, workers).
struct FigurePreset {
  std::string figure;
  ScenarioConfig base;
};
FigurePreset figure_preset_from_ini(const IniDocument& doc);

// JSON round-trip of a resolved config (used for the manifest echo).
std::string scenario_to_json(const ScenarioConfig& cfg);
ScenarioConfig scenario_from_json(const std::string& json_text);

// Run metadata written next to every output file set.  `notes` carries
// per-point annotations surfaced by the run (resolved bit budgets, engine
// switches, injected error probabilities).
struct RunManifest {
  std::string command;
  std::string version = kVersion;
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;
  long degenerate_resamples = 0;
  std::vector<std::string> notes;
  std::vector<std::string> outputs;
};

// Serializes the manifest, embedding the config echo when provided; the
// echo re-parses to an identical ScenarioConfig via scenario_from_json.
std::string manifest_to_json(const RunManifest& manifest,
                             const ScenarioConfig* config_echo);

// Extracts the "config" object from a manifest produced by
// manifest_to_json (for round-trip checks and tooling).
ScenarioConfig scenario_from_manifest_json(const std::string& manifest_json);

}  // namespace mfb
