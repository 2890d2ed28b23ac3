#pragma once

#include "mimocap/channel.hpp"
#include "mimocap/impairments.hpp"
#include "mimocap/montecarlo.hpp"
#include "mimocap/numerics.hpp"

namespace mimocap {

class SnrPoint {
 public:
  static SnrPoint linear(double snr);
  static SnrPoint db(double snr_db) { return linear(std::pow(10.0, snr_db / 10.0)); }

  double linear_value() const { return snr_; }
  double db_value() const { return 10.0 * std::log10(snr_); }

 private:
  explicit SnrPoint(double snr) : snr_(snr) {}
  double snr_;
};

struct WaterfillAllocation {
  RealVector powers;  // d_i, same order as the gains
  double water_level = 0.0;
};

struct CapacityLimits {
  double lower = 0.0;  // bits
  double upper = 0.0;  // bits
  Index streams = 0;   // M = min(N_t, N_r)
};

struct CapacityResult {
  double bits;
  Covariance covariance;
};

struct OptimizerOptions {
  int max_iterations = 2000;
  double tolerance_bits = 1e-9;
  double armijo = 1e-4;
};

struct OptimizationResult {
  double bits;
  Covariance covariance;
  int iterations = 0;
  // False when the iteration cap was hit; the best iterate is still returned.
  bool converged = true;
};

// log2 det(I + snr H (Q + Y) H^H) - log2 det(I + snr H Y H^H), Y the distortion
// covariance of Q. Accepts any Hermitian q with a nonnegative diagonal, which
// the optimizer and gradient checks need off the feasible set.
double mutual_information_raw(const ComplexMatrix& h, const ComplexMatrix& q, double snr,
                              const ImpairmentModel& m);

// Gradient of mutual_information_raw with respect to q (Hermitian), in bits,
// under the real inner product Re tr(G E).
ComplexMatrix mutual_information_gradient(const ComplexMatrix& h, const ComplexMatrix& q,
                                          double snr, const ImpairmentModel& m);

double mutual_information(const ChannelMatrix& h, const Covariance& q, SnrPoint snr,
                          const ImpairmentModel& m);

// High-SNR capacity bounds; kappa must be positive.
CapacityLimits capacity_limits(Index n_t, Index n_r, const ImpairmentModel& m);

// Exact maximizer of sum log2(1 + c_i d_i) subject to d >= 0, sum d = budget.
WaterfillAllocation waterfill(const RealVector& gains, double budget = 1.0);

// Capacity of a known channel with alpha = 1, where the distortion is
// (kappa^2 / N_t) I whatever Q is. Ideal transceivers (kappa = 0) are
// accepted for any alpha since the distortion vanishes.
CapacityResult deterministic_capacity(const ChannelMatrix& h, SnrPoint snr,
                                      const ImpairmentModel& m);

// Mean mutual information with Q = I / N_t. Deterministic channels are
// evaluated once.
Estimate ergodic_capacity_isotropic(const ChannelDistribution& dist, SnrPoint snr,
                                    const ImpairmentModel& m, const MonteCarloConfig& mc);

// SNR -> infinity limit of the mutual information for a full-rank channel.
// Every distortion variance must be positive; with alpha = 0 callers floor
// the diagonal of Q (e.g. at 1e-12) first.
double asymptotic_mi(const ChannelMatrix& h, const Covariance& q, const ImpairmentModel& m);

// Projected-gradient ascent over {Q >= 0, tr Q = 1}, started from Q = I / N_t
// and from the alpha = 1 waterfilling covariance; returns the best iterate.
OptimizationResult optimize_covariance(const ChannelMatrix& h, SnrPoint snr,
                                       const ImpairmentModel& m,
                                       const OptimizerOptions& options = {});

// Capacity of a known channel for any alpha: the closed form when it
// applies, the optimizer otherwise.
double known_channel_capacity(const ChannelMatrix& h, SnrPoint snr, const ImpairmentModel& m);

// Average of known_channel_capacity over channels drawn i.i.d. CN(0,1).
Estimate deterministic_ensemble_capacity(Index n_t, Index n_r, SnrPoint snr,
                                         const ImpairmentModel& m, const MonteCarloConfig& mc);

}  // namespace mimocap
