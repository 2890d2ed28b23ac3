// mimocap: capacity and multiplexing-gain experiments for MIMO links with
// residual transceiver impairments.
//
//   mimocap sweep   --scenario fig2 --kappa 0.1 --seed 7 --out fig2.csv
//   mimocap muxgain --channel rayleigh --nt 8 --nr 4 --kappa 0.05
//   mimocap limits  --nt 4 --nr 4 --kappa 0.05
//   mimocap bounds  --channel rayleigh --nt 12 --nr 4 --kappa 0.05

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <string>

#include "mimocap/sweep.hpp"

namespace {

using mimocap::cli::ConfigError;
using mimocap::cli::Settings;

constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;
constexpr const char* kThreadsEnv = "MIMOCAP_THREADS";

std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

// String-valued flags named after the config keys, e.g. snr_db_start -> --snr-db-start.
struct FlagSet {
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  std::string config_path;

  void add(CLI::App& app, const std::string& key, const std::string& help) {
    std::string flag = "--" + key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    options[key] = app.add_option(flag, values[key], help);
  }

  Settings collect() const {
    Settings s;
    for (const auto& [key, opt] : options) {
      if (opt->count() > 0) s[key] = {values.at(key), opt->get_name()};
    }
    if (s.find("threads") == s.end()) {
      if (const char* env = std::getenv(kThreadsEnv); env != nullptr && *env != '\0') {
        s["threads"] = {env, kThreadsEnv};
      }
    }
    return s;
  }

  mimocap::cli::SweepSpec spec(Settings extra = {}) const {
    Settings file;
    if (!config_path.empty()) file = mimocap::cli::read_config_file(config_path);
    Settings flags = collect();
    for (auto& [k, v] : extra) flags.try_emplace(k, v);
    return mimocap::cli::resolve_spec(file, flags);
  }
};

void add_sweep_flags(CLI::App& app, FlagSet& f) {
  f.add(app, "scenario", "fig2, fig3, fig4, fig5 or custom");
  f.add(app, "nt", "transmit antennas (comma-separated list allowed)");
  f.add(app, "nr", "receive antennas");
  f.add(app, "kappa", "level of impairments (comma-separated list allowed)");
  f.add(app, "alpha", "subcarrier-leakage mix in [0, 1]");
  f.add(app, "snr_db_start", "first SNR grid point [dB]");
  f.add(app, "snr_db_stop", "last SNR grid point [dB]");
  f.add(app, "snr_db_step", "SNR grid step [dB]");
  f.add(app, "snr_db", "single SNR point [dB]");
  f.add(app, "trials", "Monte Carlo trials / ensemble size");
  f.add(app, "seed", "master seed");
  f.add(app, "threads", std::string("worker threads (default from ") + kThreadsEnv + ")");
  f.add(app, "out", "CSV output path (stdout when omitted)");
  f.add(app, "channel", "identity, file, rayleigh or ensemble (custom scenario)");
  f.add(app, "channel_file", "deterministic channel CSV (real,imag pairs per row)");
  f.add(app, "siso_reference", "auto, unit or rayleigh");
  f.add(app, "averaging", "mean_of_ratios or ratio_of_means");
  app.add_option("--config", f.config_path, "key=value configuration file");
}

int run_sweep_command(const mimocap::cli::SweepSpec& spec) {
  // Summary goes to stderr when the CSV itself is on stdout.
  std::ostream& summary = spec.output_path.empty() ? std::cerr : std::cout;
  mimocap::cli::run_sweep(spec, std::cout, summary);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Capacity limits and multiplexing gains of MIMO channels with transceiver impairments"};
  app.require_subcommand(1);

  FlagSet sweep_flags;
  auto* sweep = app.add_subcommand("sweep", "SNR sweep for a figure scenario or a custom setup");
  add_sweep_flags(*sweep, sweep_flags);

  FlagSet mux_flags;
  auto* mux = app.add_subcommand("muxgain", "finite-SNR multiplexing gain over an SNR grid");
  add_sweep_flags(*mux, mux_flags);

  Settings limit_args;
  std::string lim_nt = "4", lim_nr = "4", lim_kappa = "0.05";
  auto* limits = app.add_subcommand("limits", "high-SNR capacity limits");
  limits->add_option("--nt", lim_nt, "transmit antennas")->capture_default_str();
  limits->add_option("--nr", lim_nr, "receive antennas")->capture_default_str();
  limits->add_option("--kappa", lim_kappa, "level of impairments")->capture_default_str();

  FlagSet bound_flags;
  auto* bounds = app.add_subcommand("bounds", "low- and high-SNR multiplexing-gain limits");
  add_sweep_flags(*bounds, bound_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*sweep) return run_sweep_command(sweep_flags.spec());

    if (*mux) {
      auto spec = mux_flags.spec({{"metric", {"muxgain", "muxgain"}}});
      spec.metric = mimocap::cli::Metric::MuxGain;
      return run_sweep_command(spec);
    }

    if (*limits) {
      Settings s{{"nt", {lim_nt, "--nt"}}, {"nr", {lim_nr, "--nr"}}, {"kappa", {lim_kappa, "--kappa"}}};
      const auto spec = mimocap::cli::resolve_spec({}, s);
      if (spec.n_t_values.size() != 1 || spec.kappas.size() != 1) {
        throw ConfigError("limits takes a single --nt and --kappa");
      }
      const mimocap::ImpairmentModel m(spec.kappas.front(), 1.0);
      const auto lim = mimocap::capacity_limits(spec.n_t_values.front(), spec.n_r, m);
      std::cout << "M = " << lim.streams << '\n'
                << "lower = " << fixed4(lim.lower) << '\n'
                << "upper = " << fixed4(lim.upper) << '\n';
      return 0;
    }

    if (*bounds) {
      Settings extra{{"channel", {"rayleigh", "default"}}};
      const auto spec = bound_flags.spec(extra);
      const mimocap::MonteCarloConfig mc{spec.trials, spec.seed, spec.threads};
      for (double kappa : spec.kappas) {
        const mimocap::ImpairmentModel m(kappa, spec.alpha);
        for (auto nt : spec.n_t_values) {
          mimocap::MuxGainBounds b;
          switch (spec.channel) {
            case mimocap::cli::ChannelKind::Rayleigh:
              b = mimocap::mux_gain_bounds(mimocap::ChannelDistribution::iid_rayleigh(nt, spec.n_r), m, mc);
              break;
            case mimocap::cli::ChannelKind::Ensemble:
              b = mimocap::ensemble_mux_gain_bounds(nt, spec.n_r, m, mc);
              break;
            case mimocap::cli::ChannelKind::File:
              b = mimocap::mux_gain_bounds(
                  mimocap::ChannelDistribution::deterministic(mimocap::load_channel_csv(spec.channel_file)), m, mc);
              break;
            case mimocap::cli::ChannelKind::Identity:
              b = mimocap::mux_gain_bounds(
                  mimocap::ChannelDistribution::deterministic(mimocap::ChannelMatrix::identity(spec.n_r, nt)), m, mc);
              break;
          }
          std::cout << "# nt=" << nt << " nr=" << spec.n_r << " kappa=" << kappa
                    << " channel=" << mimocap::cli::to_string(spec.channel) << '\n'
                    << "low_snr_lower = " << fixed4(b.low_snr_lower) << '\n'
                    << "low_snr_upper = " << fixed4(b.low_snr_upper) << '\n'
                    << "high_snr_lower = " << fixed4(b.high_snr_lower) << '\n'
                    << "high_snr_upper = " << fixed4(b.high_snr_upper) << '\n';
        }
      }
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const mimocap::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const mimocap::UnboundedCapacity& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const mimocap::UnsupportedConfiguration& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
