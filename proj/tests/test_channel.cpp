#include <doctest.h>

#include <sstream>

#include "mimocap/channel.hpp"
#include "mimocap/montecarlo.hpp"
#include "test_support.hpp"

using namespace mimocap;

TEST_CASE("ChannelMatrix enforces full rank") {
  CHECK_NOTHROW(ChannelMatrix(ComplexMatrix::Identity(4, 4)));
  CHECK_NOTHROW(ChannelMatrix(ComplexMatrix::Identity(4, 12)));
  CHECK_THROWS_AS(ChannelMatrix(ComplexMatrix::Zero(2, 2)), ValidationError);
  ComplexMatrix rank1 = ComplexMatrix::Ones(3, 3);
  CHECK_THROWS_AS(ChannelMatrix{rank1}, ValidationError);
  CHECK_THROWS_AS(ChannelMatrix(ComplexMatrix(0, 3)), ValidationError);
}

TEST_CASE("sample_channel passes deterministic channels through") {
  const auto h = ChannelMatrix::identity(4, 4);
  const auto dist = ChannelDistribution::deterministic(h);
  CHECK(sample_channel(dist, RngStream(1, 0)).matrix() == h.matrix());
  CHECK(sample_channel(dist, RngStream(2, 5)).matrix() == h.matrix());
}

TEST_CASE("sample_channel is reproducible per stream and distinct across streams") {
  const auto dist = ChannelDistribution::iid_rayleigh(4, 4);
  const auto a = sample_channel(dist, RngStream(42, 3)).matrix();
  const auto b = sample_channel(dist, RngStream(42, 3)).matrix();
  CHECK(a == b);
  CHECK(a != sample_channel(dist, RngStream(42, 4)).matrix());
  CHECK(a != sample_channel(dist, RngStream(43, 3)).matrix());
  CHECK(a.rows() == 4);
  CHECK(a.cols() == 4);
}

TEST_CASE("Rayleigh draws are normalized: mean tr(H^H H) = N_t N_r") {
  const auto dist = ChannelDistribution::iid_rayleigh(4, 4);
  const auto est = monte_carlo({100000, 7, 1}, [&](const RngStream& rng) {
    return frobenius_norm_sq(sample_channel(dist, rng));
  });
  CHECK(std::abs(est.mean - 16.0) < 0.2);
  // Standard error of a sum of 16 Exp(1) variables: 4 / sqrt(n).
  CHECK(est.std_error == doctest::Approx(4.0 / std::sqrt(100000.0)).epsilon(0.05));
}

TEST_CASE("siso_reference") {
  const auto det = ChannelDistribution::deterministic(ChannelMatrix::identity(2, 2));
  CHECK(std::norm(siso_reference(det, RngStream(1, 1))) == doctest::Approx(1.0));

  const auto ray = ChannelDistribution::iid_rayleigh(1, 1);
  CHECK(siso_reference(ray, RngStream(9, 2)) == siso_reference(ray, RngStream(9, 2)));
  // The SISO draw is the (0,0) entry of the MIMO draw on the same stream.
  const auto ray44 = ChannelDistribution::iid_rayleigh(4, 4);
  CHECK(siso_reference(ray44, RngStream(9, 2)) == sample_channel(ray44, RngStream(9, 2)).matrix()(0, 0));

  const auto est = monte_carlo({100000, 3, 1}, [&](const RngStream& rng) {
    return std::norm(siso_reference(ray, rng));
  });
  CHECK(std::abs(est.mean - 1.0) < 0.02);
}

TEST_CASE("frobenius_norm_sq") {
  CHECK(frobenius_norm_sq(ChannelMatrix::identity(4, 4)) == doctest::Approx(4.0));
  ComplexMatrix ones = ComplexMatrix::Ones(2, 2);
  ones(1, 1) = 2.0;  // keep it full rank; |entries|^2 = 1 + 1 + 1 + 4
  CHECK(frobenius_norm_sq(ChannelMatrix(ones)) == doctest::Approx(7.0));

  std::mt19937_64 gen(4);
  for (int rep = 0; rep < 20; ++rep) {
    const ChannelMatrix h(test::random_complex(gen, 3 + rep % 3, 2 + rep % 4));
    const double tr = (h.matrix().adjoint() * h.matrix()).trace().real();
    CHECK(std::abs(frobenius_norm_sq(h) - tr) < 1e-12 * std::max(1.0, tr));
  }
}

TEST_CASE("all-ones channel has Frobenius norm 4 but is rank deficient") {
  CHECK(ComplexMatrix::Ones(2, 2).squaredNorm() == doctest::Approx(4.0));
  CHECK_FALSE(ChannelMatrix::is_full_rank(ComplexMatrix::Ones(2, 2)));
}

TEST_CASE("channel CSV loading") {
  const auto id = load_channel_csv(MIMOCAP_TEST_DATA "/identity2.csv");
  CHECK(id.matrix() == ComplexMatrix::Identity(2, 2));

  const auto h = load_channel_csv(MIMOCAP_TEST_DATA "/h3x2.csv");
  CHECK(h.n_r() == 3);
  CHECK(h.n_t() == 2);
  CHECK(h.matrix()(0, 0) == Complex(1.5, -0.5));
  CHECK(h.matrix()(0, 1) == Complex(0.0, 2.0));
  CHECK(h.matrix()(2, 1) == Complex(0.5, 0.5));

  std::istringstream odd("1,2,3\n");
  CHECK_THROWS_AS(read_channel_csv(odd), ValidationError);
  std::istringstream ragged("1,0,0,0\n1,0\n");
  CHECK_THROWS_AS(read_channel_csv(ragged), ValidationError);
  std::istringstream junk("1,x\n");
  CHECK_THROWS_AS(read_channel_csv(junk), ValidationError);
  CHECK_THROWS_AS(load_channel_csv("/nonexistent/h.csv"), ValidationError);
}
