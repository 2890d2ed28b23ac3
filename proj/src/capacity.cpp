#include "mimocap/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

namespace mimocap {
namespace {

constexpr double kLn2 = std::numbers::ln2;

ComplexMatrix distortion_matrix(const ComplexMatrix& q, const ImpairmentModel& m) {
  const RealVector ups = distortion_diagonal(RealVector(q.diagonal().real()), m);
  return ups.cast<Complex>().asDiagonal();
}

}  // namespace

SnrPoint SnrPoint::linear(double snr) {
  if (!(snr > 0.0) || !std::isfinite(snr)) {
    throw ValidationError("SnrPoint: SNR must be finite and positive, got " + std::to_string(snr));
  }
  return SnrPoint(snr);
}

double mutual_information_raw(const ComplexMatrix& h, const ComplexMatrix& q, double snr,
                              const ImpairmentModel& m) {
  const Index n_r = h.rows();
  const ComplexMatrix eye = ComplexMatrix::Identity(n_r, n_r);
  if (m.is_ideal()) return logdet_hpd(eye + snr * h * q * h.adjoint());

  // Whiten by the noise-plus-distortion factor instead of subtracting two
  // large log-determinants; the difference cancels badly at high SNR.
  const ComplexMatrix noise = eye + snr * h * distortion_matrix(q, m) * h.adjoint();
  Eigen::LLT<ComplexMatrix> llt(hermitian_part(noise));
  if (llt.info() != Eigen::Success) {
    throw NumericalError("mutual_information: noise-plus-distortion matrix is not positive definite");
  }
  const ComplexMatrix w = llt.matrixL().solve(h);
  return logdet_hpd(eye + snr * w * q * w.adjoint());
}

ComplexMatrix mutual_information_gradient(const ComplexMatrix& h, const ComplexMatrix& q,
                                          double snr, const ImpairmentModel& m) {
  const Index n_r = h.rows();
  const Index n_t = h.cols();
  const ComplexMatrix eye = ComplexMatrix::Identity(n_r, n_r);
  const ComplexMatrix noise = eye + snr * h * distortion_matrix(q, m) * h.adjoint();
  const ComplexMatrix total = hermitian_part(noise + snr * h * q * h.adjoint());

  // d log2 det(I + s H X H^H) = Re tr(s H^H (.)^{-1} H dX) / ln 2
  const auto sensitivity = [&](const ComplexMatrix& a) -> ComplexMatrix {
    Eigen::LLT<ComplexMatrix> llt(a);
    if (llt.info() != Eigen::Success) {
      throw NumericalError("mutual_information_gradient: factorization failed");
    }
    return hermitian_part(ComplexMatrix(snr / kLn2 * h.adjoint() * llt.solve(h)));
  };

  const ComplexMatrix g_total = sensitivity(total);
  if (m.is_ideal()) return g_total;

  // The distortion depends on diag(Q) only, through an affine map whose
  // adjoint sends G to diag((1 - alpha) G_nn + alpha tr(G) / N_t).
  const ComplexMatrix g_noise = sensitivity(hermitian_part(noise));
  const RealVector diff = (g_total - g_noise).diagonal().real();
  const double k2 = m.kappa() * m.kappa();
  const RealVector adj =
      k2 * ((1.0 - m.alpha()) * diff.array() + m.alpha() * diff.sum() / static_cast<double>(n_t));
  ComplexMatrix grad = g_total;
  grad.diagonal() += adj.cast<Complex>();
  return grad;
}

double mutual_information(const ChannelMatrix& h, const Covariance& q, SnrPoint snr,
                          const ImpairmentModel& m) {
  if (q.dim() != h.n_t()) {
    throw ValidationError("mutual_information: covariance is " + std::to_string(q.dim()) +
                          "x" + std::to_string(q.dim()) + " but the channel has N_t = " +
                          std::to_string(h.n_t()));
  }
  return std::max(0.0, mutual_information_raw(h.matrix(), q.matrix(), snr.linear_value(), m));
}

CapacityLimits capacity_limits(Index n_t, Index n_r, const ImpairmentModel& m) {
  if (n_t < 1 || n_r < 1) throw ValidationError("capacity_limits: antenna counts must be >= 1");
  if (m.is_ideal()) {
    throw UnboundedCapacity("capacity_limits: kappa = 0 (ideal transceivers) has no finite limit");
  }
  const Index streams = std::min(n_t, n_r);
  const double k2 = m.kappa() * m.kappa();
  const double mm = static_cast<double>(streams);
  return {mm * std::log2(1.0 + 1.0 / k2),
          mm * std::log2(1.0 + static_cast<double>(n_t) / (mm * k2)), streams};
}

WaterfillAllocation waterfill(const RealVector& gains, double budget) {
  if (gains.size() == 0) throw ValidationError("waterfill: empty gain vector");
  if (!(budget > 0.0)) throw ValidationError("waterfill: budget must be positive");
  for (Index i = 0; i < gains.size(); ++i) {
    if (!(gains(i) > 0.0) || !std::isfinite(gains(i))) {
      throw ValidationError("waterfill: gain " + std::to_string(i) + " must be finite and > 0");
    }
  }

  const auto n = static_cast<std::size_t>(gains.size());
  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return gains(a) > gains(b); });

  // The active set is a prefix of the sorted gains; take the longest prefix
  // whose weakest member still sits below the water level.
  double inv_sum = 0.0;
  double level = budget + 1.0 / gains(order[0]);
  for (std::size_t k = 0; k < n; ++k) {
    inv_sum += 1.0 / gains(order[k]);
    const double candidate = (budget + inv_sum) / static_cast<double>(k + 1);
    if (candidate - 1.0 / gains(order[k]) > 0.0) level = candidate;
    else break;
  }

  WaterfillAllocation out;
  out.water_level = level;
  out.powers = (level - gains.array().inverse()).max(0.0).matrix();
  return out;
}

CapacityResult deterministic_capacity(const ChannelMatrix& h, SnrPoint snr,
                                      const ImpairmentModel& m) {
  if (!m.is_ideal() && m.alpha() != 1.0) {
    throw UnsupportedConfiguration(
        "deterministic_capacity: closed form needs alpha = 1 (got alpha = " +
        std::to_string(m.alpha()) + "); use optimize_covariance");
  }
  const Index n_t = h.n_t();
  const Index streams = h.streams();
  const auto eig = herm_eig(ComplexMatrix(h.matrix().adjoint() * h.matrix()));
  const RealVector lambda = eig.values.head(streams);
  const double s = snr.linear_value();
  const double k2n = m.kappa() * m.kappa() / static_cast<double>(n_t);

  const RealVector gains = (s * lambda.array() / (s * lambda.array() * k2n + 1.0)).matrix();
  const auto alloc = waterfill(gains);

  double bits = 0.0;
  for (Index i = 0; i < streams; ++i) bits += std::log1p(gains(i) * alloc.powers(i)) / kLn2;

  const ComplexMatrix u = eig.vectors.leftCols(streams);
  const ComplexMatrix q = u * alloc.powers.cast<Complex>().asDiagonal() * u.adjoint();
  return {bits, Covariance::nearest(q)};
}

Estimate ergodic_capacity_isotropic(const ChannelDistribution& dist, SnrPoint snr,
                                    const ImpairmentModel& m, const MonteCarloConfig& mc) {
  const Covariance iso = Covariance::isotropic(dist.n_t());
  if (dist.is_deterministic()) {
    return {mutual_information(dist.fixed(), iso, snr, m), 0.0, 1};
  }
  if (mc.trials < 1) throw ValidationError("ergodic_capacity_isotropic: trials must be >= 1");
  return monte_carlo(mc, [&](const RngStream& rng) {
    return mutual_information(sample_channel(dist, rng), iso, snr, m);
  });
}

double asymptotic_mi(const ChannelMatrix& h, const Covariance& q, const ImpairmentModel& m) {
  if (q.dim() != h.n_t()) throw ValidationError("asymptotic_mi: dimension mismatch");
  const RealVector ups = distortion_covariance(q, m).values();
  for (Index n = 0; n < ups.size(); ++n) {
    if (!(ups(n) > 0.0)) {
      throw SingularDistortion("asymptotic_mi: distortion variance of antenna " +
                               std::to_string(n) +
                               " is zero; floor the covariance diagonal before evaluating");
    }
  }
  const Index streams = h.streams();
  const auto eig = herm_eig(ComplexMatrix(h.matrix().adjoint() * h.matrix()));
  const ComplexMatrix u = eig.vectors.leftCols(streams);

  const RealVector root = ups.array().sqrt().matrix();
  const ComplexMatrix y_half = root.cast<Complex>().asDiagonal();
  const ComplexMatrix y_inv_half = root.array().inverse().matrix().cast<Complex>().asDiagonal();

  // Orthogonal projection onto the range of Y^{1/2} U_M.
  const ComplexMatrix inner = u.adjoint() * ups.cast<Complex>().asDiagonal() * u;
  const ComplexMatrix proj =
      y_half * u * hermitian_part(inner).llt().solve(u.adjoint()) * y_half;
  const ComplexMatrix whitened = y_inv_half * q.matrix() * y_inv_half;

  // Pi is idempotent, so X Pi and Pi X Pi share their nonzero eigenvalues.
  const auto mu = herm_eig(hermitian_part(ComplexMatrix(proj * whitened * proj))).values;
  double bits = 0.0;
  for (Index i = 0; i < streams; ++i) bits += std::log1p(std::max(mu(i), 0.0)) / kLn2;
  return bits;
}

double known_channel_capacity(const ChannelMatrix& h, SnrPoint snr, const ImpairmentModel& m) {
  if (m.is_ideal() || m.alpha() == 1.0) return deterministic_capacity(h, snr, m).bits;
  return optimize_covariance(h, snr, m).bits;
}

Estimate deterministic_ensemble_capacity(Index n_t, Index n_r, SnrPoint snr,
                                         const ImpairmentModel& m, const MonteCarloConfig& mc) {
  const auto dist = ChannelDistribution::iid_rayleigh(n_t, n_r);
  return monte_carlo(mc, [&](const RngStream& rng) {
    return known_channel_capacity(sample_channel(dist, rng), snr, m);
  });
}

}  // namespace mimocap
