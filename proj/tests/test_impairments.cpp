#include <doctest.h>

#include "mimocap/impairments.hpp"
#include "test_support.hpp"

using namespace mimocap;

namespace {

ComplexMatrix diag2(double a, double b) {
  ComplexMatrix q = ComplexMatrix::Zero(2, 2);
  q(0, 0) = a;
  q(1, 1) = b;
  return q;
}

}  // namespace

TEST_CASE("ImpairmentModel validation") {
  CHECK_NOTHROW(ImpairmentModel(0.0, 0.0));
  CHECK_NOTHROW(ImpairmentModel(0.1, 1.0));
  CHECK_THROWS_AS(ImpairmentModel(-0.1, 0.5), ValidationError);
  CHECK_THROWS_AS(ImpairmentModel(0.1, 1.5), ValidationError);
  CHECK_THROWS_AS(ImpairmentModel(0.1, -0.01), ValidationError);
  CHECK(ImpairmentModel::ideal().is_ideal());
}

TEST_CASE("Covariance validation") {
  CHECK_NOTHROW(Covariance(diag2(1.0, 0.0)));
  CHECK_THROWS_AS(Covariance(diag2(2.0, 0.0)), ValidationError);
  CHECK_THROWS_AS(Covariance(diag2(1.5, -0.5)), ValidationError);
  ComplexMatrix nh = diag2(0.5, 0.5);
  nh(0, 1) = 0.1;
  CHECK_THROWS_AS(Covariance{nh}, ValidationError);
  CHECK(Covariance::isotropic(4).matrix().isApprox(ComplexMatrix::Identity(4, 4) / 4.0));
}

TEST_CASE("distortion_covariance examples") {
  const auto iso = distortion_covariance(Covariance::isotropic(4), ImpairmentModel(0.05, 0.3));
  for (Index n = 0; n < 4; ++n) CHECK(iso[n] == doctest::Approx(6.25e-4).epsilon(1e-14));

  const Covariance q(diag2(1.0, 0.0));
  const auto many = distortion_covariance(q, ImpairmentModel(0.1, 1.0));
  CHECK(many[0] == doctest::Approx(0.005).epsilon(1e-14));
  CHECK(many[1] == doctest::Approx(0.005).epsilon(1e-14));

  const auto single = distortion_covariance(q, ImpairmentModel(0.1, 0.0));
  CHECK(single[0] == doctest::Approx(0.01).epsilon(1e-14));
  CHECK(single[1] == 0.0);
}

TEST_CASE("distortion_covariance ignores off-diagonal structure") {
  ComplexMatrix q = diag2(0.5, 0.5);
  q(0, 1) = Complex(0.3, 0.2);
  q(1, 0) = std::conj(q(0, 1));
  const ImpairmentModel m(0.1, 0.0);
  CHECK(distortion_covariance(Covariance(q), m).values() ==
        distortion_covariance(Covariance::isotropic(2), m).values());
}

TEST_CASE("distortion trace identity and alpha-affinity") {
  std::mt19937_64 gen(8);
  for (int rep = 0; rep < 200; ++rep) {
    const Covariance q(test::random_covariance(gen, 1 + rep % 12));
    const double kappa = 0.01 + 0.2 * (rep % 7) / 7.0;
    for (double alpha : {0.0, 0.25, 0.5, 1.0}) {
      const auto ups = distortion_covariance(q, ImpairmentModel(kappa, alpha));
      CHECK(std::abs(ups.values().sum() - kappa * kappa * q.matrix().trace().real()) <= 1e-15);
      CHECK((ups.values().array() >= 0.0).all());
    }
    const auto u0 = distortion_covariance(q, ImpairmentModel(kappa, 0.0)).values();
    const auto u1 = distortion_covariance(q, ImpairmentModel(kappa, 1.0)).values();
    const auto uh = distortion_covariance(q, ImpairmentModel(kappa, 0.5)).values();
    CHECK((uh - 0.5 * (u0 + u1)).cwiseAbs().maxCoeff() <= 1e-15);
  }
}

TEST_CASE("distortion is monotone in each antenna power") {
  std::mt19937_64 gen(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 100; ++rep) {
    const Index nt = 2 + rep % 5;
    Eigen::VectorXd q(nt);
    for (Index i = 0; i < nt; ++i) q(i) = u(gen);
    const ImpairmentModel m(0.1, u(gen));
    Eigen::VectorXd bumped = q;
    bumped(rep % nt) += 0.1 + u(gen);
    const Eigen::VectorXd before = distortion_diagonal(q, m);
    const Eigen::VectorXd after = distortion_diagonal(bumped, m);
    CHECK(((after - before).array() >= 0.0).all());
  }
}

TEST_CASE("evm equals kappa squared") {
  CHECK(evm(ImpairmentModel(0.1, 1.0)) == doctest::Approx(0.01));
  CHECK(evm(ImpairmentModel(0.0, 1.0)) == 0.0);
  CHECK(evm(ImpairmentModel(0.175, 0.0)) == doctest::Approx(0.030625));
}
