#pragma once

#include "mimocap/capacity.hpp"

namespace mimocap {

// How the SISO channel in the denominator of the multiplexing gain is chosen.
enum class SisoReference {
  Auto,      // unit gain for deterministic channels, CN(0,1) for Rayleigh
  UnitGain,  // |h|^2 = 1
  Rayleigh,  // h ~ CN(0,1), averaged like the MIMO numerator
};

// How an ensemble of deterministic channels is reduced to one number.
enum class EnsembleAveraging {
  MeanOfRatios,
  RatioOfMeans,
};

struct MuxGainBounds {
  double low_snr_lower = 0.0;
  double low_snr_upper = 0.0;
  double high_snr_lower = 0.0;
  double high_snr_upper = 0.0;
};

// lim C / log2(SNR) as SNR -> infinity, which is zero for any kappa > 0
// because the capacity saturates.
double classic_multiplexing_gain(const ImpairmentModel& m);

// Scalar capacity log2(1 + snr g / (snr g kappa^2 + 1)) of a SISO link with
// gain g = |h|^2.
double siso_capacity(double gain_sq, SnrPoint snr, const ImpairmentModel& m);

// MIMO capacity over SISO capacity at one SNR.
double finite_snr_mux_gain(const ChannelDistribution& dist, SnrPoint snr, const ImpairmentModel& m,
                           const MonteCarloConfig& mc,
                           SisoReference siso = SisoReference::Auto);

// Low- and high-SNR limits of the multiplexing gain. With kappa = 0 the
// high-SNR pair is (M, M), the kappa -> 0 limit of the bound expression.
// finite_snr_mux_gain for i.i.d. Rayleigh channels, with a first-order
// standard error that treats numerator and denominator as independent.
Estimate rayleigh_mux_gain(Index n_t, Index n_r, SnrPoint snr, const ImpairmentModel& m,
                           const MonteCarloConfig& mc, SisoReference siso = SisoReference::Auto);

// E|h|^2 = 1 for either SISO reference.
MuxGainBounds mux_gain_bounds(const ChannelDistribution& dist, const ImpairmentModel& m,
                              const MonteCarloConfig& mc);

// Multiplexing gain of known channels drawn i.i.d. CN(0,1), averaged over
// mc.trials realizations.
Estimate ensemble_mux_gain(Index n_t, Index n_r, SnrPoint snr, const ImpairmentModel& m,
                           const MonteCarloConfig& mc,
                           EnsembleAveraging averaging = EnsembleAveraging::MeanOfRatios,
                           SisoReference siso = SisoReference::UnitGain);

// Bounds for that ensemble: the mean of the per-realization limits.
MuxGainBounds ensemble_mux_gain_bounds(Index n_t, Index n_r, const ImpairmentModel& m,
                                       const MonteCarloConfig& mc);

}  // namespace mimocap
