#pragma once

#include "mimocap/numerics.hpp"

namespace mimocap {

// Residual transmitter distortion with level kappa (EVM = kappa^2) and
// subcarrier-leakage mix alpha: alpha = 0 is single-carrier, alpha = 1 is
// many subcarriers where distortion follows the average antenna power.
class ImpairmentModel {
 public:
  ImpairmentModel(double kappa, double alpha);

  static ImpairmentModel ideal() { return {0.0, 1.0}; }

  double kappa() const { return kappa_; }
  double alpha() const { return alpha_; }
  bool is_ideal() const { return kappa_ == 0.0; }

 private:
  double kappa_;
  double alpha_;
};

// Hermitian PSD transmit covariance with unit trace.
class Covariance {
 public:
  static constexpr double kTolerance = 1e-12;

  explicit Covariance(ComplexMatrix q);

  static Covariance isotropic(Index n_t);
  // Frobenius-nearest feasible covariance to a Hermitian matrix.
  static Covariance nearest(const ComplexMatrix& a);

  const ComplexMatrix& matrix() const { return q_; }
  Index dim() const { return q_.rows(); }
  RealVector diagonal() const { return q_.diagonal().real(); }

 private:
  struct Trusted {};
  Covariance(ComplexMatrix q, Trusted) : q_(std::move(q)) {}

  ComplexMatrix q_;
};

// Diagonal of the distortion covariance, one variance per transmit antenna.
class DistortionCovariance {
 public:
  explicit DistortionCovariance(RealVector upsilon) : upsilon_(std::move(upsilon)) {}

  const RealVector& values() const { return upsilon_; }
  Index size() const { return upsilon_.size(); }
  double operator[](Index n) const { return upsilon_(n); }

 private:
  RealVector upsilon_;
};

// upsilon_n = kappa^2 ((1 - alpha) q_n + alpha sum(q) / N_t). Only the
// diagonal of the covariance enters; cross-correlation is neglected.
template <typename Derived>
RVector<typename Derived::Scalar> distortion_diagonal(const Eigen::MatrixBase<Derived>& q_diag,
                                                      const ImpairmentModel& m) {
  using Real = typename Derived::Scalar;
  const Real k2 = Real(m.kappa()) * Real(m.kappa());
  const Real a = Real(m.alpha());
  const Real mean = q_diag.sum() / Real(q_diag.size());
  return (k2 * ((Real(1) - a) * q_diag.array() + a * mean)).matrix();
}

DistortionCovariance distortion_covariance(const Covariance& q, const ImpairmentModel& m);

double evm(const ImpairmentModel& m);

}  // namespace mimocap
