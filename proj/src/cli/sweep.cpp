#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>

#include "mimocap/sweep.hpp"

#ifndef MIMOCAP_VERSION
#define MIMOCAP_VERSION "dev"
#endif

namespace mimocap::cli {
namespace {

std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

template <typename T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (const auto& v : values) {
    if (!out.empty()) out += ',';
    if constexpr (std::is_floating_point_v<T>) {
      out += fmt6(v);
    } else {
      out += std::to_string(v);
    }
  }
  return out;
}

std::string label(const std::string& kind, Index nt, Index nr, double kappa,
                  std::optional<double> alpha = std::nullopt) {
  std::string s = kind + " nt=" + std::to_string(nt) + " nr=" + std::to_string(nr) +
                  " kappa=" + fmt6(kappa);
  if (alpha) s += " alpha=" + fmt6(*alpha);
  return s;
}

class Collector {
 public:
  Collector(const SweepSpec& spec, const std::vector<double>& grid)
      : grid_(grid),
        mc_{spec.trials, spec.seed, spec.threads} {}

  const MonteCarloConfig& mc() const { return mc_; }

  void curve(const std::string& series, const std::function<Estimate(SnrPoint)>& eval) {
    for (double db : grid_) {
      const Estimate e = eval(SnrPoint::db(db));
      records_.push_back({series, db, e.mean, e.std_error});
    }
  }

  void constant(const std::string& series, double value) {
    for (double db : grid_) records_.push_back({series, db, value, 0.0});
  }

  void capacity_limits_lines(Index nt, Index nr, double kappa) {
    if (kappa == 0.0) return;
    const auto lim = capacity_limits(nt, nr, ImpairmentModel(kappa, 1.0));
    constant(label("limit_lower", nt, nr, kappa), lim.lower);
    constant(label("limit_upper", nt, nr, kappa), lim.upper);
  }

  void bound_lines(Index nt, Index nr, double kappa, const std::string& kind,
                   const MuxGainBounds& b) {
    constant(label(kind + "_low_snr_lower", nt, nr, kappa), b.low_snr_lower);
    constant(label(kind + "_low_snr_upper", nt, nr, kappa), b.low_snr_upper);
    constant(label(kind + "_high_snr_lower", nt, nr, kappa), b.high_snr_lower);
    constant(label(kind + "_high_snr_upper", nt, nr, kappa), b.high_snr_upper);
  }

  std::vector<CurveRecord> take() { return std::move(records_); }

 private:
  std::vector<double> grid_;
  MonteCarloConfig mc_;
  std::vector<CurveRecord> records_;
};

Estimate exact(double v) { return {v, 0.0, 1}; }

ChannelMatrix fixed_channel(const SweepSpec& spec, Index nt) {
  if (spec.channel == ChannelKind::File) {
    auto h = load_channel_csv(spec.channel_file);
    if (h.n_t() != nt || h.n_r() != spec.n_r) {
      throw ConfigError("channel file " + spec.channel_file + " is " + std::to_string(h.n_r()) +
                        "x" + std::to_string(h.n_t()) + " but nr=" + std::to_string(spec.n_r) +
                        ", nt=" + std::to_string(nt));
    }
    return h;
  }
  return ChannelMatrix::identity(spec.n_r, nt);
}

void fig2(const SweepSpec& spec, Collector& c) {
  for (Index nt : spec.n_t_values) {
    const Index nr = spec.n_r;
    for (double kappa : spec.kappas) {
      const ImpairmentModel m(kappa, 1.0);
      c.curve(label("deterministic", nt, nr, kappa, 1.0), [&](SnrPoint snr) {
        return deterministic_ensemble_capacity(nt, nr, snr, m, c.mc());
      });
      c.capacity_limits_lines(nt, nr, kappa);
    }
    c.curve(label("ideal", nt, nr, 0.0), [&](SnrPoint snr) {
      return deterministic_ensemble_capacity(nt, nr, snr, ImpairmentModel::ideal(), c.mc());
    });
  }
}

void fig3(const SweepSpec& spec, Collector& c) {
  for (double kappa : spec.kappas) {
    for (Index nt : spec.n_t_values) {
      const Index nr = spec.n_r;
      for (double alpha : {1.0, 0.0}) {
        const ImpairmentModel m(kappa, alpha);
        c.curve(label("deterministic", nt, nr, kappa, alpha), [&](SnrPoint snr) {
          return deterministic_ensemble_capacity(nt, nr, snr, m, c.mc());
        });
      }
      const auto dist = ChannelDistribution::iid_rayleigh(nt, nr);
      const ImpairmentModel m(kappa, spec.alpha);
      c.curve(label("rayleigh", nt, nr, kappa), [&](SnrPoint snr) {
        return ergodic_capacity_isotropic(dist, snr, m, c.mc());
      });
      c.capacity_limits_lines(nt, nr, kappa);
    }
  }
}

void fig4(const SweepSpec& spec, Collector& c) {
  for (double kappa : spec.kappas) {
    const ImpairmentModel m(kappa, spec.alpha);
    for (Index nt : spec.n_t_values) {
      const Index nr = spec.n_r;
      c.curve(label("rayleigh", nt, nr, kappa, spec.alpha), [&](SnrPoint snr) {
        return rayleigh_mux_gain(nt, nr, snr, m, c.mc(), spec.siso_reference);
      });
      c.bound_lines(nt, nr, kappa, "bound",
                    mux_gain_bounds(ChannelDistribution::iid_rayleigh(nt, nr), m, c.mc()));
    }
  }
}

void fig5(const SweepSpec& spec, Collector& c) {
  const SisoReference siso = spec.siso_reference == SisoReference::Auto ? SisoReference::UnitGain
                                                                        : spec.siso_reference;
  for (double kappa : spec.kappas) {
    const ImpairmentModel m(kappa, spec.alpha);
    for (Index nt : spec.n_t_values) {
      const Index nr = spec.n_r;
      c.curve(label("deterministic", nt, nr, kappa, spec.alpha), [&](SnrPoint snr) {
        return ensemble_mux_gain(nt, nr, snr, m, c.mc(), spec.averaging, siso);
      });
      c.bound_lines(nt, nr, kappa, "bound", ensemble_mux_gain_bounds(nt, nr, m, c.mc()));
    }
  }
}

void custom(const SweepSpec& spec, Collector& c) {
  const std::string kind = to_string(spec.channel);
  for (double kappa : spec.kappas) {
    const ImpairmentModel m(kappa, spec.alpha);
    for (Index nt : spec.n_t_values) {
      const Index nr = spec.n_r;
      const std::string series = label(kind, nt, nr, kappa, spec.alpha);
      const bool fixed = spec.channel == ChannelKind::Identity || spec.channel == ChannelKind::File;
      const auto dist = fixed ? ChannelDistribution::deterministic(fixed_channel(spec, nt))
                              : ChannelDistribution::iid_rayleigh(nt, nr);

      if (spec.metric == Metric::Capacity) {
        c.curve(series, [&](SnrPoint snr) -> Estimate {
          switch (spec.channel) {
            case ChannelKind::Rayleigh:
              return ergodic_capacity_isotropic(dist, snr, m, c.mc());
            case ChannelKind::Ensemble:
              return deterministic_ensemble_capacity(nt, nr, snr, m, c.mc());
            default:
              return exact(known_channel_capacity(dist.fixed(), snr, m));
          }
        });
        c.capacity_limits_lines(nt, nr, kappa);
        continue;
      }

      c.curve(series, [&](SnrPoint snr) -> Estimate {
        switch (spec.channel) {
          case ChannelKind::Rayleigh:
            return rayleigh_mux_gain(nt, nr, snr, m, c.mc(), spec.siso_reference);
          case ChannelKind::Ensemble:
            return ensemble_mux_gain(nt, nr, snr, m, c.mc(), spec.averaging,
                                     spec.siso_reference == SisoReference::Rayleigh
                                         ? SisoReference::Rayleigh
                                         : SisoReference::UnitGain);
          default:
            return exact(finite_snr_mux_gain(dist, snr, m, c.mc(), spec.siso_reference));
        }
      });
      const auto bounds = spec.channel == ChannelKind::Ensemble
                              ? ensemble_mux_gain_bounds(nt, nr, m, c.mc())
                              : mux_gain_bounds(dist, m, c.mc());
      c.bound_lines(nt, nr, kappa, "bound", bounds);
    }
  }
}

}  // namespace

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::Fig2: return "fig2";
    case Scenario::Fig3: return "fig3";
    case Scenario::Fig4: return "fig4";
    case Scenario::Fig5: return "fig5";
    case Scenario::Custom: return "custom";
  }
  return "?";
}

std::string to_string(Metric m) { return m == Metric::Capacity ? "capacity" : "muxgain"; }

std::string to_string(ChannelKind c) {
  switch (c) {
    case ChannelKind::Identity: return "identity";
    case ChannelKind::File: return "file";
    case ChannelKind::Rayleigh: return "rayleigh";
    case ChannelKind::Ensemble: return "ensemble";
  }
  return "?";
}

std::string to_string(SisoReference s) {
  switch (s) {
    case SisoReference::Auto: return "auto";
    case SisoReference::UnitGain: return "unit";
    case SisoReference::Rayleigh: return "rayleigh";
  }
  return "?";
}

std::string to_string(EnsembleAveraging a) {
  return a == EnsembleAveraging::MeanOfRatios ? "mean_of_ratios" : "ratio_of_means";
}

std::vector<CurveRecord> compute_sweep(const SweepSpec& spec) {
  const auto grid = snr_grid(spec);
  Collector c(spec, grid);
  switch (spec.scenario) {
    case Scenario::Fig2: fig2(spec, c); break;
    case Scenario::Fig3: fig3(spec, c); break;
    case Scenario::Fig4: fig4(spec, c); break;
    case Scenario::Fig5: fig5(spec, c); break;
    case Scenario::Custom: custom(spec, c); break;
  }
  return c.take();
}

void write_csv(const SweepSpec& spec, const std::vector<CurveRecord>& records, std::ostream& out) {
  // Thread count and output path are left out: they never change the numbers.
  out << "# mimocap " << MIMOCAP_VERSION << '\n'
      << "# scenario=" << to_string(spec.scenario) << '\n'
      << "# metric=" << to_string(spec.metric) << '\n'
      << "# nt=" << join(spec.n_t_values) << '\n'
      << "# nr=" << spec.n_r << '\n'
      << "# kappa=" << join(spec.kappas) << '\n'
      << "# alpha=" << fmt6(spec.alpha) << '\n'
      << "# snr_db_start=" << fmt6(spec.snr_db_start) << '\n'
      << "# snr_db_stop=" << fmt6(spec.snr_db_stop) << '\n'
      << "# snr_db_step=" << fmt6(spec.snr_db_step) << '\n'
      << "# trials=" << spec.trials << '\n'
      << "# seed=" << spec.seed << '\n'
      << "# channel=" << to_string(spec.channel) << '\n';
  if (spec.channel == ChannelKind::File) out << "# channel_file=" << spec.channel_file << '\n';
  out << "# siso_reference=" << to_string(spec.siso_reference) << '\n'
      << "# averaging=" << to_string(spec.averaging) << '\n'
      << "series,snr_db,value,stderr\n";
  for (const auto& r : records) {
    out << r.series << ',' << fmt6(r.snr_db) << ',' << fmt6(r.value) << ',' << fmt6(r.std_error)
        << '\n';
  }
}

void write_summary(const std::vector<CurveRecord>& records, std::ostream& out) {
  std::vector<const CurveRecord*> last;
  for (const auto& r : records) {
    auto it = std::find_if(last.begin(), last.end(),
                           [&](const CurveRecord* p) { return p->series == r.series; });
    if (it == last.end()) last.push_back(&r);
    else *it = &r;
  }
  for (const CurveRecord* r : last) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", r->value);
    out << r->series << " @ " << fmt6(r->snr_db) << " dB: " << buf << '\n';
  }
}

void run_sweep(const SweepSpec& spec, std::ostream& csv, std::ostream& summary) {
  const auto records = compute_sweep(spec);
  if (spec.output_path.empty()) {
    write_csv(spec, records, csv);
  } else {
    std::ofstream file(spec.output_path, std::ios::binary);
    if (!file) throw Error("cannot write output file " + spec.output_path);
    write_csv(spec, records, file);
    file.flush();
    if (!file) throw Error("failed writing output file " + spec.output_path);
  }
  write_summary(records, summary);
}

}  // namespace mimocap::cli
