#include "mimocap/muxgain.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace mimocap {
namespace {

constexpr double kMinDenominatorBits = 1e-15;
// Lane for SISO draws that must not share samples with the MIMO numerator.
constexpr std::uint64_t kSisoLane = 1;

SisoReference resolve(SisoReference siso, bool deterministic) {
  if (siso != SisoReference::Auto) return siso;
  return deterministic ? SisoReference::UnitGain : SisoReference::Rayleigh;
}

double checked_ratio(double numerator, double denominator) {
  if (!(denominator >= kMinDenominatorBits)) {
    throw DegenerateRatio("multiplexing gain: SISO capacity " + std::to_string(denominator) +
                          " bits is below 1e-15; SNR too small");
  }
  return numerator / denominator;
}

double high_snr_upper(Index n_t, Index n_r, const ImpairmentModel& m) {
  const auto streams = static_cast<double>(std::min(n_t, n_r));
  if (m.is_ideal()) return streams;
  const auto limits = capacity_limits(n_t, n_r, m);
  return streams * limits.upper / limits.lower;
}

}  // namespace

double classic_multiplexing_gain(const ImpairmentModel& m) {
  if (m.is_ideal()) {
    throw ValidationError("classic_multiplexing_gain: requires kappa > 0 (ideal gain is M)");
  }
  return 0.0;
}

double siso_capacity(double gain_sq, SnrPoint snr, const ImpairmentModel& m) {
  const double sg = snr.linear_value() * gain_sq;
  const double k2 = m.kappa() * m.kappa();
  return std::log1p(sg / (sg * k2 + 1.0)) / std::numbers::ln2;
}

Estimate rayleigh_mux_gain(Index n_t, Index n_r, SnrPoint snr, const ImpairmentModel& m,
                           const MonteCarloConfig& mc, SisoReference siso) {
  const auto dist = ChannelDistribution::iid_rayleigh(n_t, n_r);
  const Estimate mimo = ergodic_capacity_isotropic(dist, snr, m, mc);
  Estimate single{siso_capacity(1.0, snr, m), 0.0, 1};
  if (resolve(siso, false) == SisoReference::Rayleigh) {
    // Same streams as the numerator: h is the (0,0) entry of each MIMO draw,
    // so a 1x1 channel gives a ratio of exactly one.
    single = monte_carlo(mc, [&](const RngStream& rng) {
      return siso_capacity(std::norm(siso_reference(dist, rng)), snr, m);
    });
  }
  const double ratio = checked_ratio(mimo.mean, single.mean);
  const double rel = std::hypot(mimo.std_error / mimo.mean, single.std_error / single.mean);
  return {ratio, ratio * rel, mc.trials};
}

double finite_snr_mux_gain(const ChannelDistribution& dist, SnrPoint snr, const ImpairmentModel& m,
                           const MonteCarloConfig& mc, SisoReference siso) {
  if (!dist.is_deterministic()) {
    return rayleigh_mux_gain(dist.n_t(), dist.n_r(), snr, m, mc, siso).mean;
  }
  const double mimo = known_channel_capacity(dist.fixed(), snr, m);
  if (resolve(siso, true) == SisoReference::UnitGain) {
    return checked_ratio(mimo, siso_capacity(1.0, snr, m));
  }
  const auto siso_dist = ChannelDistribution::iid_rayleigh(1, 1);
  const double single = monte_carlo(mc, [&](const RngStream& rng) {
                          return siso_capacity(
                              std::norm(siso_reference(siso_dist, rng.substream(kSisoLane))), snr, m);
                        }).mean;
  return checked_ratio(mimo, single);
}

MuxGainBounds mux_gain_bounds(const ChannelDistribution& dist, const ImpairmentModel& m,
                              const MonteCarloConfig& mc) {
  const Index n_t = dist.n_t();
  const Index n_r = dist.n_r();

  double frob = 0.0;
  double spec = 0.0;
  if (dist.is_deterministic()) {
    frob = frobenius_norm_sq(dist.fixed());
    spec = spectral_norm_sq(dist.fixed().matrix());
  } else {
    frob = static_cast<double>(n_t * n_r);
    spec = monte_carlo(mc, [&](const RngStream& rng) {
             return spectral_norm_sq(sample_channel(dist, rng).matrix());
           }).mean;
  }
  MuxGainBounds b;
  b.low_snr_lower = frob / static_cast<double>(n_t);
  b.low_snr_upper = spec;
  b.high_snr_lower = static_cast<double>(std::min(n_t, n_r));
  b.high_snr_upper = high_snr_upper(n_t, n_r, m);
  return b;
}

Estimate ensemble_mux_gain(Index n_t, Index n_r, SnrPoint snr, const ImpairmentModel& m,
                           const MonteCarloConfig& mc, EnsembleAveraging averaging,
                           SisoReference siso) {
  const auto dist = ChannelDistribution::iid_rayleigh(n_t, n_r);
  const auto siso_dist = ChannelDistribution::iid_rayleigh(1, 1);
  const bool random_siso = siso == SisoReference::Rayleigh;

  const auto siso_bits = [&](const RngStream& rng) {
    return random_siso ? siso_capacity(std::norm(siso_reference(siso_dist, rng.substream(kSisoLane))),
                                       snr, m)
                       : siso_capacity(1.0, snr, m);
  };

  if (averaging == EnsembleAveraging::MeanOfRatios) {
    return monte_carlo(mc, [&](const RngStream& rng) {
      const double mimo = known_channel_capacity(sample_channel(dist, rng), snr, m);
      return checked_ratio(mimo, siso_bits(rng));
    });
  }
  const auto mimo = monte_carlo(mc, [&](const RngStream& rng) {
    return known_channel_capacity(sample_channel(dist, rng), snr, m);
  });
  const auto single = monte_carlo(mc, siso_bits);
  const double ratio = checked_ratio(mimo.mean, single.mean);
  // First-order error propagation, numerator and denominator treated as independent.
  const double rel = std::hypot(mimo.std_error / mimo.mean, single.std_error / single.mean);
  return {ratio, ratio * rel, mc.trials};
}

MuxGainBounds ensemble_mux_gain_bounds(Index n_t, Index n_r, const ImpairmentModel& m,
                                       const MonteCarloConfig& mc) {
  const auto dist = ChannelDistribution::iid_rayleigh(n_t, n_r);
  const auto spec = monte_carlo(mc, [&](const RngStream& rng) {
    return spectral_norm_sq(sample_channel(dist, rng).matrix());
  });
  MuxGainBounds b;
  b.low_snr_lower = static_cast<double>(n_r);  // E||H||_F^2 / N_t = N_r
  b.low_snr_upper = spec.mean;
  b.high_snr_lower = static_cast<double>(std::min(n_t, n_r));
  b.high_snr_upper = high_snr_upper(n_t, n_r, m);
  return b;
}

}  // namespace mimocap
