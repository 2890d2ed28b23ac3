#include "mimocap/impairments.hpp"

#include <cmath>
#include <string>

namespace mimocap {

ImpairmentModel::ImpairmentModel(double kappa, double alpha) : kappa_(kappa), alpha_(alpha) {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
    throw ValidationError("ImpairmentModel: kappa must be finite and >= 0, got " +
                          std::to_string(kappa));
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw ValidationError("ImpairmentModel: alpha must lie in [0, 1], got " +
                          std::to_string(alpha));
  }
}

Covariance::Covariance(ComplexMatrix q) : q_(std::move(q)) {
  if (q_.rows() != q_.cols() || q_.rows() < 1) {
    throw ValidationError("Covariance: expected a non-empty square matrix");
  }
  if (!q_.allFinite()) throw ValidationError("Covariance: non-finite entry");
  if (!is_hermitian(q_, kTolerance)) throw ValidationError("Covariance: not Hermitian");
  const double trace = q_.trace().real();
  if (std::abs(trace - 1.0) > kTolerance) {
    throw ValidationError("Covariance: trace must be 1, got " + std::to_string(trace));
  }
  const double min_eig = herm_eig(q_).values.minCoeff();
  if (min_eig < -kTolerance) {
    throw ValidationError("Covariance: not positive semidefinite (min eigenvalue " +
                          std::to_string(min_eig) + ")");
  }
  q_ = hermitian_part(q_);
}

Covariance Covariance::isotropic(Index n_t) {
  if (n_t < 1) throw ValidationError("Covariance::isotropic: dimension must be >= 1");
  return {ComplexMatrix::Identity(n_t, n_t) / static_cast<double>(n_t), Trusted{}};
}

Covariance Covariance::nearest(const ComplexMatrix& a) {
  return {project_psd_unit_trace(a), Trusted{}};
}

DistortionCovariance distortion_covariance(const Covariance& q, const ImpairmentModel& m) {
  return DistortionCovariance(distortion_diagonal(q.diagonal(), m));
}

double evm(const ImpairmentModel& m) { return m.kappa() * m.kappa(); }

}  // namespace mimocap
