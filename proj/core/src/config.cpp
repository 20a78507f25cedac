#include "mimofb/config.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace mfb {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(const std::string& what) { throw std::domain_error(what); }

// Drops a trailing "; comment" or "# comment".  The marker must open the
// line or follow whitespace, so compact tokens keep their punctuation.
std::string strip_inline_comment(const std::string& line) {
  for (std::size_t i = 0; i < line.size(); ++i) {
    if ((line[i] == '#' || line[i] == ';') &&
        (i == 0 || line[i - 1] == ' ' || line[i - 1] == '\t')) {
      return line.substr(0, i);
    }
  }
  return line;
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) fail("trailing characters after number in '" + key + "'");
    return v;
  } catch (const std::domain_error&) {
    throw;
  } catch (const std::exception&) {
    fail("field '" + key + "' is not a number: '" + value + "'");
  }
}

long to_long(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long v = std::stol(value, &used);
    if (used != value.size()) fail("trailing characters after integer in '" + key + "'");
    return v;
  } catch (const std::domain_error&) {
    throw;
  } catch (const std::exception&) {
    fail("field '" + key + "' is not an integer: '" + value + "'");
  }
}

}  // namespace

const std::string* IniDocument::find(const std::string& section,
                                     const std::string& key) const {
  const auto sec = sections.find(section);
  if (sec == sections.end()) return nullptr;
  const auto kv = sec->second.find(key);
  if (kv == sec->second.end()) return nullptr;
  return &kv->second;
}

IniDocument parse_ini(const std::string& text) {
  IniDocument doc;
  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string line = trim(strip_inline_comment(text.substr(pos, eol - pos)));
    pos = eol + 1;
    ++line_no;

    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        fail("malformed section header at line " + std::to_string(line_no));
      }
      section = trim(line.substr(1, line.size() - 2));
      doc.sections[section];  // register even if empty
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      fail("expected 'key = value' at line " + std::to_string(line_no));
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail("empty key at line " + std::to_string(line_no));
    doc.sections[section][key] = value;
  }
  return doc;
}

std::vector<double> parse_snr_range(const std::string& spec) {
  const std::string s = trim(spec);
  if (s.empty()) fail("empty snr range");

  const auto first = s.find(':');
  if (first == std::string::npos) {
    return {to_double("snr", s)};
  }
  const auto second = s.find(':', first + 1);
  if (second == std::string::npos || s.find(':', second + 1) != std::string::npos) {
    fail("snr range must be 'lo:step:hi' or a single value, got '" + s + "'");
  }
  const double lo = to_double("snr", s.substr(0, first));
  const double step = to_double("snr", s.substr(first + 1, second - first - 1));
  const double hi = to_double("snr", s.substr(second + 1));
  if (!(step > 0.0)) fail("snr range step must be positive");
  if (hi < lo) fail("snr range must have hi >= lo");

  std::vector<double> grid;
  const double slack = step * 1e-9;
  for (double v = lo; v <= hi + slack; v += step) grid.push_back(v);
  return grid;
}

ScenarioConfig build_scenario(const ScenarioOptions& o) {
  ScenarioConfig cfg;
  cfg.m = o.m;
  if (!o.snr.has_value()) fail("missing required field 'snr'");
  cfg.snr_grid_db = parse_snr_range(*o.snr);
  cfg.trials = o.trials;
  cfg.seed = o.seed.value_or(0);
  cfg.workers = o.workers;

  const auto make_process = [&]() -> FadingProcess {
    if (o.process == "iid") return FadingProcess::iid_block();
    if (o.process == "jakes") {
      if (!o.F.has_value()) fail("process 'jakes' requires field 'F'");
      return FadingProcess::jakes(*o.F);
    }
    if (o.process == "ar1") {
      if (!o.r.has_value()) fail("process 'ar1' requires field 'r'");
      return FadingProcess::ar1(*o.r);
    }
    fail("unknown process '" + o.process + "' (expected iid, jakes or ar1)");
  };

  if (o.scheme == "perfect") {
    cfg.scheme = PerfectScheme{};
  } else if (o.scheme == "analog") {
    cfg.scheme = AnalogScheme{o.beta, o.delay, make_process()};
  } else if (o.scheme == "rvq") {
    RvqScheme rvq;
    rvq.bits = o.bits;
    rvq.beta = o.beta;
    if (o.rvq_engine == "auto") {
      rvq.engine = RvqEngine::Auto;
    } else if (o.rvq_engine == "enumerated") {
      rvq.engine = RvqEngine::Enumerated;
    } else if (o.rvq_engine == "sampled") {
      rvq.engine = RvqEngine::Sampled;
    } else {
      fail("unknown rvq engine '" + o.rvq_engine + "'");
    }
    cfg.scheme = rvq;
  } else if (o.scheme == "qam") {
    cfg.scheme = QamScheme{o.alpha, o.beta};
  } else {
    fail("unknown scheme '" + o.scheme + "' (expected perfect, analog, rvq or qam)");
  }

  if (o.csir == "perfect") {
    cfg.csir = CsirPerfect{};
  } else if (o.csir == "trained") {
    cfg.csir = CsirTrained{o.beta1, o.beta2};
  } else {
    fail("unknown csir model '" + o.csir + "' (expected perfect or trained)");
  }

  if (o.qam_mode == "bound") {
    cfg.qam_simulate_ser = false;
  } else if (o.qam_mode == "sim") {
    cfg.qam_simulate_ser = true;
  } else {
    fail("unknown qam mode '" + o.qam_mode + "' (expected bound or sim)");
  }

  validate_config(cfg);
  return cfg;
}

ScenarioOptions scenario_options_from_ini(const IniDocument& doc) {
  const auto sec = doc.sections.find("scenario");
  if (sec == doc.sections.end()) fail("config has no [scenario] section");

  ScenarioOptions o;
  for (const auto& [key, value] : sec->second) {
    if (key == "m") {
      o.m = static_cast<int>(to_long(key, value));
    } else if (key == "snr") {
      o.snr = value;
    } else if (key == "scheme") {
      o.scheme = value;
    } else if (key == "csir") {
      o.csir = value;
    } else if (key == "beta") {
      o.beta = to_double(key, value);
    } else if (key == "beta1") {
      o.beta1 = to_double(key, value);
    } else if (key == "beta2") {
      o.beta2 = to_double(key, value);
    } else if (key == "alpha") {
      o.alpha = to_double(key, value);
    } else if (key == "bits") {
      o.bits = static_cast<int>(to_long(key, value));
    } else if (key == "process") {
      o.process = value;
    } else if (key == "F") {
      o.F = to_double(key, value);
    } else if (key == "r") {
      o.r = to_double(key, value);
    } else if (key == "delay") {
      o.delay = static_cast<int>(to_long(key, value));
    } else if (key == "trials") {
      o.trials = to_long(key, value);
    } else if (key == "seed") {
      o.seed = static_cast<std::uint64_t>(to_long(key, value));
    } else if (key == "workers") {
      o.workers = static_cast<int>(to_long(key, value));
    } else if (key == "qam_mode") {
      o.qam_mode = value;
    } else if (key == "rvq_engine") {
      o.rvq_engine = value;
    } else {
      fail("unknown config key '" + key + "' in [scenario]");
    }
  }
  return o;
}

FigurePreset figure_preset_from_ini(const IniDocument& doc) {
  const auto sec = doc.sections.find("figure");
  if (sec == doc.sections.end()) fail("preset has no [figure] section");

  FigurePreset preset;
  preset.base = ScenarioConfig{};
  preset.base.trials = 100000;  // figure reproduction default
  for (const auto& [key, value] : sec->second) {
    if (key == "name") {
      preset.figure = value;
    } else if (key == "trials") {
      preset.base.trials = to_long(key, value);
    } else if (key == "snr") {
      preset.base.snr_grid_db = parse_snr_range(value);
    } else if (key == "seed") {
      preset.base.seed = static_cast<std::uint64_t>(to_long(key, value));
    } else if (key == "workers") {
      preset.base.workers = static_cast<int>(to_long(key, value));
    } else {
      fail("unknown preset key '" + key + "' in [figure]");
    }
  }
  if (preset.figure.empty()) fail("missing required field 'name' in [figure]");
  return preset;
}

namespace {

json process_to_json(const FadingProcess& p) {
  switch (p.kind) {
    case ProcessKind::IIDBlock:
      return {{"kind", "iid"}};
    case ProcessKind::Jakes:
      return {{"kind", "jakes"}, {"F", p.F}};
    case ProcessKind::AR1:
      return {{"kind", "ar1"}, {"r", p.r}};
  }
  fail("unreachable process kind");
}

FadingProcess process_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "iid") return FadingProcess::iid_block();
  if (kind == "jakes") return FadingProcess::jakes(j.at("F").get<double>());
  if (kind == "ar1") return FadingProcess::ar1(j.at("r").get<double>());
  fail("unknown process kind '" + kind + "' in config echo");
}

std::string engine_name(RvqEngine engine) {
  switch (engine) {
    case RvqEngine::Auto:
      return "auto";
    case RvqEngine::Enumerated:
      return "enumerated";
    case RvqEngine::Sampled:
      return "sampled";
  }
  fail("unreachable rvq engine");
}

RvqEngine engine_from_name(const std::string& name) {
  if (name == "auto") return RvqEngine::Auto;
  if (name == "enumerated") return RvqEngine::Enumerated;
  if (name == "sampled") return RvqEngine::Sampled;
  fail("unknown rvq engine '" + name + "' in config echo");
}

json scenario_to_json_object(const ScenarioConfig& cfg) {
  json scheme;
  if (std::holds_alternative<PerfectScheme>(cfg.scheme)) {
    scheme = {{"kind", "perfect"}};
  } else if (const auto* analog = std::get_if<AnalogScheme>(&cfg.scheme)) {
    scheme = {{"kind", "analog"},
              {"beta", analog->beta},
              {"delay", analog->delay},
              {"process", process_to_json(analog->process)}};
  } else if (const auto* rvq = std::get_if<RvqScheme>(&cfg.scheme)) {
    scheme = {{"kind", "rvq"}, {"beta", rvq->beta}, {"engine", engine_name(rvq->engine)}};
    if (rvq->bits.has_value()) scheme["bits"] = *rvq->bits;
  } else if (const auto* qam = std::get_if<QamScheme>(&cfg.scheme)) {
    scheme = {{"kind", "qam"}, {"alpha", qam->alpha}, {"beta", qam->beta}};
  }

  json csir;
  if (std::holds_alternative<CsirPerfect>(cfg.csir)) {
    csir = {{"kind", "perfect"}};
  } else if (const auto* trained = std::get_if<CsirTrained>(&cfg.csir)) {
    csir = {{"kind", "trained"}, {"beta1", trained->beta1}, {"beta2", trained->beta2}};
  }

  return {{"m", cfg.m},
          {"snr_grid_db", cfg.snr_grid_db},
          {"scheme", scheme},
          {"csir", csir},
          {"trials", cfg.trials},
          {"seed", cfg.seed},
          {"workers", cfg.workers},
          {"qam_simulate_ser", cfg.qam_simulate_ser}};
}

ScenarioConfig scenario_from_json_object(const json& j) {
  ScenarioConfig cfg;
  cfg.m = j.at("m").get<int>();
  cfg.snr_grid_db = j.at("snr_grid_db").get<std::vector<double>>();
  cfg.trials = j.at("trials").get<long>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  cfg.workers = j.at("workers").get<int>();
  cfg.qam_simulate_ser = j.at("qam_simulate_ser").get<bool>();

  const json& scheme = j.at("scheme");
  const std::string kind = scheme.at("kind").get<std::string>();
  if (kind == "perfect") {
    cfg.scheme = PerfectScheme{};
  } else if (kind == "analog") {
    cfg.scheme = AnalogScheme{scheme.at("beta").get<double>(),
                              scheme.at("delay").get<int>(),
                              process_from_json(scheme.at("process"))};
  } else if (kind == "rvq") {
    RvqScheme rvq;
    if (scheme.contains("bits")) rvq.bits = scheme.at("bits").get<int>();
    rvq.beta = scheme.at("beta").get<double>();
    rvq.engine = engine_from_name(scheme.at("engine").get<std::string>());
    cfg.scheme = rvq;
  } else if (kind == "qam") {
    cfg.scheme = QamScheme{scheme.at("alpha").get<double>(),
                           scheme.at("beta").get<double>()};
  } else {
    fail("unknown scheme kind '" + kind + "' in config echo");
  }

  const json& csir = j.at("csir");
  const std::string csir_kind = csir.at("kind").get<std::string>();
  if (csir_kind == "perfect") {
    cfg.csir = CsirPerfect{};
  } else if (csir_kind == "trained") {
    cfg.csir = CsirTrained{csir.at("beta1").get<double>(),
                           csir.at("beta2").get<double>()};
  } else {
    fail("unknown csir kind '" + csir_kind + "' in config echo");
  }
  return cfg;
}

}  // namespace

std::string scenario_to_json(const ScenarioConfig& cfg) {
  return scenario_to_json_object(cfg).dump(2);
}

ScenarioConfig scenario_from_json(const std::string& json_text) {
  return scenario_from_json_object(json::parse(json_text));
}

std::string manifest_to_json(const RunManifest& manifest,
                             const ScenarioConfig* config_echo) {
  json j = {{"command", manifest.command},
            {"version", manifest.version},
            {"seed", manifest.seed},
            {"wall_seconds", manifest.wall_seconds},
            {"degenerate_resamples", manifest.degenerate_resamples},
            {"notes", manifest.notes},
            {"outputs", manifest.outputs}};
  j["config"] = config_echo ? scenario_to_json_object(*config_echo) : json(nullptr);
  return j.dump(2) + "\n";
}

ScenarioConfig scenario_from_manifest_json(const std::string& manifest_json) {
  const json j = json::parse(manifest_json);
  if (!j.contains("config") || j.at("config").is_null()) {
    fail("manifest carries no config echo");
  }
  return scenario_from_json_object(j.at("config"));
}

}  // namespace mfb
