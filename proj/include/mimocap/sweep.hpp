#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "mimocap/muxgain.hpp"

namespace mimocap::cli {

// Bad configuration or usage; the CLI maps it to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class Scenario { Fig2, Fig3, Fig4, Fig5, Custom };
enum class Metric { Capacity, MuxGain };
enum class ChannelKind { Identity, File, Rayleigh, Ensemble };

struct SweepSpec {
  Scenario scenario = Scenario::Custom;
  Metric metric = Metric::Capacity;
  double snr_db_start = -10.0;
  double snr_db_stop = 70.0;
  double snr_db_step = 2.0;
  std::vector<Index> n_t_values{4};
  Index n_r = 4;
  std::vector<double> kappas{0.05};
  double alpha = 1.0;
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  std::string output_path;
  ChannelKind channel = ChannelKind::Identity;
  std::string channel_file;
  SisoReference siso_reference = SisoReference::Auto;
  EnsembleAveraging averaging = EnsembleAveraging::MeanOfRatios;
};

// One value of a key, with where it came from ("file.cfg line 3", "--kappa").
struct Setting {
  std::string value;
  std::string origin;
};
using Settings = std::map<std::string, Setting>;

const std::vector<std::string>& valid_keys();

// Parses key=value lines; '#' starts a comment, blank lines are ignored.
Settings read_config(std::istream& in, const std::string& source);
Settings read_config_file(const std::filesystem::path& path);

// Scenario defaults, then `file`, then `flags` (flags win). Validates the result.
SweepSpec resolve_spec(const Settings& file, const Settings& flags);
SweepSpec load_config(const std::filesystem::path& path);

void validate(const SweepSpec& spec);
std::vector<double> snr_grid(const SweepSpec& spec);

struct CurveRecord {
  std::string series;
  double snr_db = 0.0;
  double value = 0.0;
  double std_error = 0.0;
};

std::vector<CurveRecord> compute_sweep(const SweepSpec& spec);

// Comment header (version and effective configuration), then
// `series,snr_db,value,stderr` rows with 6 significant digits.
void write_csv(const SweepSpec& spec, const std::vector<CurveRecord>& records, std::ostream& out);

// Final value of each series, one line per series.
void write_summary(const std::vector<CurveRecord>& records, std::ostream& out);

// compute_sweep + write_csv to spec.output_path (or `csv` when empty) + summary.
void run_sweep(const SweepSpec& spec, std::ostream& csv, std::ostream& summary);

std::string to_string(Scenario s);
std::string to_string(Metric m);
std::string to_string(ChannelKind c);
std::string to_string(SisoReference s);
std::string to_string(EnsembleAveraging a);

}  // namespace mimocap::cli
