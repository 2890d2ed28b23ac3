#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "mimocap/sweep.hpp"

namespace mimocap::cli {
namespace {

constexpr std::size_t kMaxGridPoints = 100000;

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void type_error(const std::string& key, const Setting& s, const char* expected) {
  throw ConfigError(s.origin + ": " + key + " expects " + expected + ", got '" + s.value + "'");
}

double as_real(const std::string& key, const Setting& s) {
  double v = 0.0;
  const char* end = s.value.data() + s.value.size();
  const auto [ptr, ec] = std::from_chars(s.value.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) type_error(key, s, "a number");
  return v;
}

std::uint64_t as_unsigned(const std::string& key, const Setting& s) {
  std::uint64_t v = 0;
  const char* end = s.value.data() + s.value.size();
  const auto [ptr, ec] = std::from_chars(s.value.data(), end, v);
  if (ec != std::errc() || ptr != end) type_error(key, s, "a non-negative integer");
  return v;
}

template <typename T, typename Parse>
std::vector<T> as_list(const std::string& key, const Setting& s, Parse parse) {
  std::vector<T> out;
  std::stringstream ss(s.value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    out.push_back(static_cast<T>(parse(key, Setting{trim(item), s.origin})));
  }
  if (out.empty()) type_error(key, s, "a comma-separated list");
  return out;
}

Scenario as_scenario(const std::string& key, const Setting& s) {
  if (s.value == "fig2") return Scenario::Fig2;
  if (s.value == "fig3") return Scenario::Fig3;
  if (s.value == "fig4") return Scenario::Fig4;
  if (s.value == "fig5") return Scenario::Fig5;
  if (s.value == "custom") return Scenario::Custom;
  type_error(key, s, "one of fig2, fig3, fig4, fig5, custom");
}

Metric as_metric(const std::string& key, const Setting& s) {
  if (s.value == "capacity") return Metric::Capacity;
  if (s.value == "muxgain") return Metric::MuxGain;
  type_error(key, s, "capacity or muxgain");
}

ChannelKind as_channel(const std::string& key, const Setting& s) {
  if (s.value == "identity") return ChannelKind::Identity;
  if (s.value == "file") return ChannelKind::File;
  if (s.value == "rayleigh") return ChannelKind::Rayleigh;
  if (s.value == "ensemble") return ChannelKind::Ensemble;
  type_error(key, s, "one of identity, file, rayleigh, ensemble");
}

SisoReference as_siso(const std::string& key, const Setting& s) {
  if (s.value == "auto") return SisoReference::Auto;
  if (s.value == "unit") return SisoReference::UnitGain;
  if (s.value == "rayleigh") return SisoReference::Rayleigh;
  type_error(key, s, "one of auto, unit, rayleigh");
}

EnsembleAveraging as_averaging(const std::string& key, const Setting& s) {
  if (s.value == "mean_of_ratios") return EnsembleAveraging::MeanOfRatios;
  if (s.value == "ratio_of_means") return EnsembleAveraging::RatioOfMeans;
  type_error(key, s, "mean_of_ratios or ratio_of_means");
}

SweepSpec scenario_defaults(Scenario scenario) {
  SweepSpec spec;
  spec.scenario = scenario;
  switch (scenario) {
    case Scenario::Fig2:
      spec.kappas = {0.05, 0.1};
      break;
    case Scenario::Fig3:
      spec.n_t_values = {4, 12};
      spec.trials = 100;
      break;
    case Scenario::Fig4:
      spec.metric = Metric::MuxGain;
      spec.n_t_values = {4, 8, 12};
      spec.snr_db_start = -40.0;
      spec.snr_db_stop = 80.0;
      spec.trials = 2000;
      break;
    case Scenario::Fig5:
      spec.metric = Metric::MuxGain;
      spec.n_t_values = {4, 8, 12};
      spec.snr_db_start = -40.0;
      spec.snr_db_stop = 80.0;
      spec.trials = 500;
      break;
    case Scenario::Custom:
      break;
  }
  return spec;
}

void apply(SweepSpec& spec, const std::string& key, const Setting& s) {
  if (key == "scenario") {
    // Handled first in resolve_spec.
  } else if (key == "metric") {
    spec.metric = as_metric(key, s);
  } else if (key == "nt") {
    spec.n_t_values = as_list<Index>(key, s, as_unsigned);
  } else if (key == "nr") {
    spec.n_r = static_cast<Index>(as_unsigned(key, s));
  } else if (key == "kappa") {
    spec.kappas = as_list<double>(key, s, as_real);
  } else if (key == "alpha") {
    spec.alpha = as_real(key, s);
  } else if (key == "snr_db_start") {
    spec.snr_db_start = as_real(key, s);
  } else if (key == "snr_db_stop") {
    spec.snr_db_stop = as_real(key, s);
  } else if (key == "snr_db_step") {
    spec.snr_db_step = as_real(key, s);
  } else if (key == "snr_db") {
    spec.snr_db_start = spec.snr_db_stop = as_real(key, s);
  } else if (key == "trials") {
    spec.trials = as_unsigned(key, s);
  } else if (key == "seed") {
    spec.seed = as_unsigned(key, s);
  } else if (key == "threads") {
    spec.threads = as_unsigned(key, s);
  } else if (key == "out") {
    spec.output_path = s.value;
  } else if (key == "channel") {
    spec.channel = as_channel(key, s);
  } else if (key == "channel_file") {
    spec.channel_file = s.value;
    spec.channel = ChannelKind::File;
  } else if (key == "siso_reference") {
    spec.siso_reference = as_siso(key, s);
  } else if (key == "averaging") {
    spec.averaging = as_averaging(key, s);
  }
}

std::string key_list() {
  std::string out;
  for (const auto& k : valid_keys()) out += (out.empty() ? "" : ", ") + k;
  return out;
}

}  // namespace

const std::vector<std::string>& valid_keys() {
  static const std::vector<std::string> keys{
      "scenario", "metric",  "nt",          "nr",     "kappa",       "alpha",
      "snr_db_start", "snr_db_stop", "snr_db_step", "snr_db", "trials", "seed",
      "threads",  "out",     "channel",     "channel_file", "siso_reference", "averaging"};
  return keys;
}

Settings read_config(std::istream& in, const std::string& source) {
  Settings settings;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (const auto hash = text.find('#'); hash != std::string::npos) text.erase(hash);
    text = trim(text);
    if (text.empty()) continue;
    const std::string origin = source + " line " + std::to_string(line);
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError(origin + ": expected key=value");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (std::find(valid_keys().begin(), valid_keys().end(), key) == valid_keys().end()) {
      throw ConfigError(origin + ": unknown key '" + key + "'; valid keys: " + key_list());
    }
    settings[key] = Setting{value, origin};
  }
  return settings;
}

Settings read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return read_config(in, path.string());
}

SweepSpec resolve_spec(const Settings& file, const Settings& flags) {
  Settings merged = file;
  for (const auto& [key, s] : flags) merged[key] = s;
  for (const auto& [key, s] : merged) {
    if (std::find(valid_keys().begin(), valid_keys().end(), key) == valid_keys().end()) {
      throw ConfigError(s.origin + ": unknown key '" + key + "'; valid keys: " + key_list());
    }
  }

  Scenario scenario = Scenario::Custom;
  if (const auto it = merged.find("scenario"); it != merged.end()) {
    scenario = as_scenario("scenario", it->second);
  }
  SweepSpec spec = scenario_defaults(scenario);
  // snr_db is a shorthand that the explicit bounds override.
  if (const auto it = merged.find("snr_db"); it != merged.end()) apply(spec, it->first, it->second);
  for (const auto& [key, s] : merged) {
    if (key != "snr_db") apply(spec, key, s);
  }
  validate(spec);
  return spec;
}

SweepSpec load_config(const std::filesystem::path& path) {
  return resolve_spec(read_config_file(path), {});
}

void validate(const SweepSpec& spec) {
  if (!(spec.snr_db_step > 0.0)) throw ConfigError("snr_db_step must be > 0");
  if (!(spec.snr_db_start <= spec.snr_db_stop)) {
    throw ConfigError("snr_db_start must not exceed snr_db_stop");
  }
  if ((spec.snr_db_stop - spec.snr_db_start) / spec.snr_db_step >= kMaxGridPoints) {
    throw ConfigError("SNR grid has more than " + std::to_string(kMaxGridPoints) + " points");
  }
  if (spec.n_t_values.empty()) throw ConfigError("nt must list at least one value");
  for (Index nt : spec.n_t_values) {
    if (nt < 1) throw ConfigError("nt must be >= 1");
  }
  if (spec.n_r < 1) throw ConfigError("nr must be >= 1");
  if (spec.kappas.empty()) throw ConfigError("kappa must list at least one value");
  for (double k : spec.kappas) {
    if (!(k >= 0.0)) throw ConfigError("kappa must be >= 0");
  }
  if (!(spec.alpha >= 0.0 && spec.alpha <= 1.0)) throw ConfigError("alpha must lie in [0, 1]");
  if (spec.trials < 1) throw ConfigError("trials must be >= 1");
  if (spec.threads < 1) throw ConfigError("threads must be >= 1");
  if (spec.channel == ChannelKind::File && spec.channel_file.empty()) {
    throw ConfigError("channel=file needs channel_file");
  }
}

std::vector<double> snr_grid(const SweepSpec& spec) {
  validate(spec);
  const double span = (spec.snr_db_stop - spec.snr_db_start) / spec.snr_db_step;
  const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
  std::vector<double> grid(count);
  for (std::size_t k = 0; k < count; ++k) {
    grid[k] = spec.snr_db_start + static_cast<double>(k) * spec.snr_db_step;
  }
  return grid;
}

}  // namespace mimocap::cli
