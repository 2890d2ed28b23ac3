// Acceptance suite. One PASS/FAIL line per criterion; exit status 1 if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "../test_support.hpp"
#include "mimocap/sweep.hpp"

using namespace mimocap;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::size_t threads() { return std::max(1u, std::thread::hardware_concurrency()); }

bool within_rel(double value, double target, double rel) {
  return std::abs(value - target) <= rel * std::abs(target);
}

void saturation_levels() {
  const auto t0 = std::chrono::steady_clock::now();
  const MonteCarloConfig mc{1000, 1, threads()};
  const auto snr = SnrPoint::db(70);
  const auto a = deterministic_ensemble_capacity(4, 4, snr, ImpairmentModel(0.05, 1.0), mc);
  const auto b = deterministic_ensemble_capacity(4, 4, snr, ImpairmentModel(0.1, 1.0), mc);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool ok = within_rel(a.mean, 34.5898, 0.01) && within_rel(b.mean, 26.6329, 0.01) && secs < 60;
  report(1, ok,
         fmt("4x4 ensemble at 70 dB: %.4f (target 34.5898), %.4f (target 26.6329), %.1f s", a.mean,
             b.mean, secs));
}

void bound_collapse_and_growth() {
  const auto snr = SnrPoint::db(70);
  const ImpairmentModel m(0.05, 1.0);
  const auto ray = ergodic_capacity_isotropic(ChannelDistribution::iid_rayleigh(12, 4), snr, m,
                                              MonteCarloConfig{10000, 2, threads()});
  const double z = (ray.mean - 34.5898) / ray.std_error;
  const bool ray_ok = std::abs(z) <= 3.0;
  const auto det = deterministic_ensemble_capacity(12, 4, snr, m, MonteCarloConfig{200, 3, threads()});
  const bool det_ok = within_rel(det.mean, 40.9221, 0.01);
  report(2, ray_ok && det_ok,
         fmt("Rayleigh 12x4 %.6f +- %.2g (%.1f SE from 34.5898; need 3); deterministic 12x4 %.4f "
             "(target 40.9221 +- 1%%)",
             ray.mean, ray.std_error, z, det.mean));
}

void waterfilling_oracle() {
  std::mt19937_64 gen(301);
  std::uniform_real_distribution<double> logc(-2.0, 3.0);
  int worse = 0;
  double worst_gap = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const Index m = 2 + rep % 2;
    Eigen::VectorXd c(m);
    for (Index i = 0; i < m; ++i) c(i) = std::pow(10.0, logc(gen));
    const auto wf = waterfill(c);
    double mine = 0.0;
    for (Index i = 0; i < m; ++i) mine += std::log2(1.0 + c(i) * wf.powers(i));
    const double grid = test::simplex_grid_best(c, 1000);
    worst_gap = std::max(worst_gap, grid - mine);
    if (mine < grid - 1e-12) ++worse;
  }
  Eigen::VectorXd c2(2);
  c2 << 10.0, 1.0;
  const auto two = waterfill(c2);
  const double err = std::max(std::abs(two.powers(0) - 0.95), std::abs(two.powers(1) - 0.05));
  report(3, worse == 0 && err <= 1e-9,
         fmt("%d/100 instances below the grid (max grid excess %.2e); c=(10,1) error %.1e", worse,
             worst_gap, err));
}

void ideal_regression() {
  std::mt19937_64 gen(401);
  std::uniform_real_distribution<double> db(-20.0, 60.0);
  double worst = 0.0;
  for (int rep = 0; rep < 1000; ++rep) {
    const Index nr = 1 + rep % 6;
    const Index nt = 1 + (rep / 6) % 6;
    ComplexMatrix hm = test::random_complex(gen, nr, nt);
    const ComplexMatrix q = test::random_covariance(gen, nt);
    const double snr = std::pow(10.0, db(gen) / 10.0);
    const double mine =
        mutual_information(ChannelMatrix(hm), Covariance(q), SnrPoint::linear(snr), ImpairmentModel::ideal());
    worst = std::max(worst, std::abs(mine - test::ideal_mi_oracle(hm, q, snr)));
  }
  report(4, worst <= 1e-9, fmt("max |kappa=0 MI - log-det oracle| = %.2e bits over 1000", worst));
}

void asymptotic_convergence() {
  std::mt19937_64 gen(501);
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const ChannelMatrix h(test::random_complex(gen, 4, 4));
    const Covariance q(test::random_covariance(gen, 4));
    const ImpairmentModel m(0.02 + 0.01 * (rep % 9), 1.0);
    const double gap = std::abs(mutual_information(h, q, SnrPoint::linear(1e10), m) - asymptotic_mi(h, q, m));
    worst = std::max(worst, gap);
  }
  report(5, worst < 1e-3, fmt("max |MI(1e10) - asymptotic| = %.2e bits over 100", worst));
}

void snr_monotonicity() {
  std::mt19937_64 gen(601);
  std::uniform_real_distribution<double> db(-30.0, 100.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int violations = 0;
  double worst = 0.0;
  for (int rep = 0; rep < 10000; ++rep) {
    const Index nr = 1 + rep % 6;
    const Index nt = 1 + (rep / 6) % 8;
    const ChannelMatrix h(test::random_complex(gen, nr, nt));
    const Covariance q(test::random_covariance(gen, nt));
    const ImpairmentModel m(0.3 * unit(gen), unit(gen));
    double a = db(gen), b = db(gen);
    if (a > b) std::swap(a, b);
    const double drop = mutual_information(h, q, SnrPoint::db(a), m) -
                        mutual_information(h, q, SnrPoint::db(b), m);
    worst = std::max(worst, drop);
    if (drop > 1e-12) ++violations;
  }
  report(6, violations == 0,
         fmt("%d violations beyond 1e-12 in 10000 pairs (largest decrease %.2e)", violations, worst));
}

void mux_gain_limits() {
  const ImpairmentModel m(0.05, 1.0);
  const MonteCarloConfig mc{4000, 7, threads()};
  const auto low = rayleigh_mux_gain(4, 4, SnrPoint::db(-40), m, mc);
  const auto high = rayleigh_mux_gain(4, 4, SnrPoint::db(80), m, mc);
  const auto det = ensemble_mux_gain(12, 4, SnrPoint::db(90), m, MonteCarloConfig{200, 8, threads()});
  const double classic = ergodic_capacity_isotropic(
                             ChannelDistribution::deterministic(ChannelMatrix::identity(4, 4)),
                             SnrPoint::linear(1e12), m, mc)
                             .mean /
                         std::log2(1e12);
  const bool ok = within_rel(low.mean, 4.0, 0.05) && within_rel(high.mean, 4.0, 0.02) &&
                  within_rel(det.mean, 4.7323, 0.02) && classic < 0.01;
  report(7, ok,
         fmt("Rayleigh 4x4 at -40 dB %.4f, at 80 dB %.4f (target 4); deterministic 12x4 at 90 dB "
             "%.4f (target 4.7323); C/log2(SNR) at 1e12 = %.4f (need < 0.01)",
             low.mean, high.mean, det.mean, classic));
}

void distortion_identities() {
  std::mt19937_64 gen(801);
  double sum_err = 0.0, affine_err = 0.0;
  for (int rep = 0; rep < 200; ++rep) {
    const Index nt = 1 + rep % 12;
    const Covariance q(test::random_covariance(gen, nt));
    const double kappa = 0.01 + 0.02 * (rep % 10);
    const double k2 = kappa * kappa;
    const RealVector u0 = distortion_covariance(q, ImpairmentModel(kappa, 0.0)).values();
    const RealVector u1 = distortion_covariance(q, ImpairmentModel(kappa, 1.0)).values();
    for (int g = 0; g <= 10; ++g) {
      const double alpha = g / 10.0;
      const RealVector u = distortion_covariance(q, ImpairmentModel(kappa, alpha)).values();
      sum_err = std::max(sum_err, std::abs(u.sum() - k2 * q.matrix().trace().real()));
      const RealVector mix = (1.0 - alpha) * u0 + alpha * u1;
      affine_err = std::max(affine_err, (u - mix).cwiseAbs().maxCoeff());
    }
  }
  report(8, sum_err <= 1e-15 && affine_err <= 1e-15,
         fmt("max |sum upsilon - kappa^2 tr Q| = %.1e, max alpha-affinity error = %.1e", sum_err,
             affine_err));
}

void optimizer_sanity() {
  std::mt19937_64 gen(901);
  const ChannelMatrix h(test::random_complex(gen, 4, 12));
  const ImpairmentModel m0(0.05, 0.0);
  const ImpairmentModel m1(0.05, 1.0);
  int below = 0;
  double worst_margin = 1e300;
  for (int k = 0; k <= 40; ++k) {
    const auto snr = SnrPoint::db(-10.0 + 2.0 * k);
    const auto opt = optimize_covariance(h, snr, m0);
    const double iso = mutual_information(h, Covariance::isotropic(12), snr, m0);
    const double wf = mutual_information(h, deterministic_capacity(h, snr, m1).covariance, snr, m0);
    const double margin = opt.bits - std::max(iso, wf);
    worst_margin = std::min(worst_margin, margin);
    if (margin < 0.0) ++below;
  }

  double worst_rel = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const ComplexMatrix q = test::random_covariance(gen, 12);
    const double snr = std::pow(10.0, -1.0 + 8.0 * (rep % 9) / 8.0);
    ComplexMatrix dir = test::random_hermitian(gen, 12);
    dir /= dir.norm();
    const auto f = [&](const ComplexMatrix& x) { return mutual_information_raw(h.matrix(), x, snr, m0); };
    const double fd = test::central_difference(f, q, dir, 1e-6);
    const double analytic = (mutual_information_gradient(h.matrix(), q, snr, m0) * dir).trace().real();
    worst_rel = std::max(worst_rel, std::abs(analytic - fd) / std::abs(fd));
  }
  report(9, below == 0 && worst_rel <= 1e-5,
         fmt("%d/41 SNRs below a baseline (min margin %.2e bits); max gradient relative error %.1e",
             below, worst_margin, worst_rel));
}

std::string sweep_csv(cli::Settings settings, const std::string& threads) {
  settings["threads"] = {threads, "acceptance"};
  const auto spec = cli::resolve_spec({}, settings);
  std::ostringstream csv;
  cli::write_csv(spec, cli::compute_sweep(spec), csv);
  return csv.str();
}

void reproducibility() {
  const std::vector<cli::Settings> setups{
      {{"scenario", {"fig2", ""}}, {"trials", {"50", ""}}, {"snr_db_step", {"10", ""}}},
      {{"scenario", {"fig3", ""}}, {"trials", {"8", ""}}, {"snr_db_step", {"20", ""}}},
      {{"scenario", {"fig4", ""}}, {"trials", {"100", ""}}, {"snr_db_step", {"20", ""}}},
      {{"scenario", {"fig5", ""}}, {"trials", {"10", ""}}, {"snr_db_step", {"40", ""}}},
  };
  int differing = 0;
  for (const auto& s : setups) {
    if (sweep_csv(s, "1") != sweep_csv(s, "8")) ++differing;
  }
  report(10, differing == 0, fmt("%d/4 scenario sweeps differ between 1 and 8 threads", differing));
}

}  // namespace

int main() {
  const auto guard = [](int id, void (*fn)()) {
    try {
      fn();
    } catch (const std::exception& e) {
      report(id, false, std::string("threw: ") + e.what());
    }
  };
  guard(1, saturation_levels);
  guard(2, bound_collapse_and_growth);
  guard(3, waterfilling_oracle);
  guard(4, ideal_regression);
  guard(5, asymptotic_convergence);
  guard(6, snr_monotonicity);
  guard(7, mux_gain_limits);
  guard(8, distortion_identities);
  guard(9, optimizer_sanity);
  guard(10, reproducibility);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
