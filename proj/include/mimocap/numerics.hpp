#pragma once

// Dense complex-Hermitian kernels. Everything here is a pure function of its
// arguments and accepts any Eigen expression whose scalar is std::complex<Real>.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "mimocap/errors.hpp"

namespace mimocap {

template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using Complex = std::complex<double>;
using ComplexMatrix = CMatrix<double>;
using RealVector = RVector<double>;
using Index = Eigen::Index;

// Eigenpairs of a Hermitian matrix, eigenvalues in descending order.
template <typename Real>
struct EigenDecomposition {
  RVector<Real> values;
  CMatrix<Real> vectors;  // columns are orthonormal eigenvectors

  Index size() const { return values.size(); }
};

namespace detail {

template <typename Derived>
using RealOf = typename Eigen::NumTraits<typename Derived::Scalar>::Real;

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw ValidationError(std::string(what) + ": expected a non-empty square matrix, got " +
                          std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

}  // namespace detail

// (A + A^H) / 2.
template <typename Derived>
CMatrix<detail::RealOf<Derived>> hermitian_part(const Eigen::MatrixBase<Derived>& a) {
  CMatrix<detail::RealOf<Derived>> m = a;
  return (m + m.adjoint()) / detail::RealOf<Derived>(2);
}

// True when ||A - A^H||_F <= rel_tol * max(||A||_F, 1).
template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& a, detail::RealOf<Derived> rel_tol = 1e-12) {
  if (a.rows() != a.cols()) return false;
  const auto scale = std::max<detail::RealOf<Derived>>(a.norm(), 1);
  return (a - a.adjoint()).norm() <= rel_tol * scale;
}

// Eigen-decomposition of a Hermitian matrix, eigenvalues descending. Equal
// eigenvalues keep the solver's native vector order.
template <typename Derived>
EigenDecomposition<detail::RealOf<Derived>> herm_eig(const Eigen::MatrixBase<Derived>& a) {
  using Real = detail::RealOf<Derived>;
  detail::require_square(a, "herm_eig");
  if (!is_hermitian(a)) {
    throw ValidationError("herm_eig: input is not Hermitian within 1e-12 relative tolerance");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> solver(hermitian_part(a));
  if (solver.info() != Eigen::Success) {
    throw NumericalError("herm_eig: eigensolver did not converge on a " + std::to_string(a.rows()) +
                         "x" + std::to_string(a.cols()) + " matrix with Frobenius norm " +
                         std::to_string(static_cast<double>(a.norm())));
  }
  const Index n = a.rows();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  const auto& ev = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) { return ev(i) > ev(j); });

  EigenDecomposition<Real> out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    const Index src = order[static_cast<std::size_t>(k)];
    out.values(k) = ev(src);
    out.vectors.col(k) = solver.eigenvectors().col(src);
  }
  return out;
}

// log2 det(A) for Hermitian positive-definite A via an in-place Cholesky
// factorization. The failing pivot is named when A is not positive definite.
template <typename Derived>
detail::RealOf<Derived> logdet_hpd(const Eigen::MatrixBase<Derived>& a) {
  using Real = detail::RealOf<Derived>;
  using Scalar = std::complex<Real>;
  detail::require_square(a, "logdet_hpd");
  CMatrix<Real> l = hermitian_part(a);
  const Index n = l.rows();
  Real log_sum = 0;
  for (Index j = 0; j < n; ++j) {
    Real d = l(j, j).real();
    for (Index k = 0; k < j; ++k) d -= std::norm(l(j, k));
    if (!(d > 0) || !std::isfinite(d)) {
      throw NumericalError("logdet_hpd: matrix is not positive definite (pivot " +
                           std::to_string(j) + " = " + std::to_string(static_cast<double>(d)) + ")");
    }
    const Real ljj = std::sqrt(d);
    l(j, j) = Scalar(ljj, 0);
    for (Index i = j + 1; i < n; ++i) {
      Scalar s = l(i, j);
      for (Index k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      l(i, j) = s / ljj;
    }
    log_sum += std::log(ljj);
  }
  return Real(2) * log_sum / std::numbers::ln2_v<Real>;
}

// ||H||_2^2, the largest eigenvalue of H^H H.
template <typename Derived>
detail::RealOf<Derived> spectral_norm_sq(const Eigen::MatrixBase<Derived>& h) {
  using Real = detail::RealOf<Derived>;
  // The smaller Gram matrix has the same nonzero spectrum.
  CMatrix<Real> gram = h.rows() < h.cols() ? CMatrix<Real>(h * h.adjoint())
                                           : CMatrix<Real>(h.adjoint() * h);
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> solver(hermitian_part(gram),
                                                      Eigen::EigenvaluesOnly);
  return std::max<Real>(solver.eigenvalues().maxCoeff(), 0);
}

// Euclidean projection of v onto the probability simplex {x >= 0, sum x = 1}.
template <typename Real>
RVector<Real> project_simplex(const RVector<Real>& v) {
  const Index n = v.size();
  std::vector<Real> sorted(v.data(), v.data() + n);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  Real prefix = 0;
  Real shift = 0;
  for (Index k = 0; k < n; ++k) {
    prefix += sorted[static_cast<std::size_t>(k)];
    const Real candidate = (prefix - Real(1)) / Real(k + 1);
    if (sorted[static_cast<std::size_t>(k)] - candidate > 0) shift = candidate;
  }
  return (v.array() - shift).max(Real(0)).matrix();
}

// Frobenius-nearest Hermitian PSD matrix with unit trace.
template <typename Derived>
CMatrix<detail::RealOf<Derived>> project_psd_unit_trace(const Eigen::MatrixBase<Derived>& a) {
  using Real = detail::RealOf<Derived>;
  detail::require_square(a, "project_psd_unit_trace");
  const auto eig = herm_eig(hermitian_part(a));
  RVector<Real> w = project_simplex<Real>(eig.values);
  // Exact unit trace after the shift; the simplex sum can be off by an ulp.
  w /= w.sum();
  CMatrix<Real> q = eig.vectors * w.template cast<std::complex<Real>>().asDiagonal() *
                    eig.vectors.adjoint();
  return hermitian_part(q);
}

}  // namespace mimocap
