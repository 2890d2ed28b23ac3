#include <cmath>
#include <limits>
#include <vector>

#include "mimocap/capacity.hpp"

namespace mimocap {
namespace {

struct Ascent {
  ComplexMatrix q;
  double bits;
  int iterations;
  bool converged;
};

// Projected gradient ascent with Armijo backtracking. Every accepted step
// increases the objective, so the result is never below the start value.
Ascent ascend(const ComplexMatrix& h, ComplexMatrix q, double snr, const ImpairmentModel& m,
              const OptimizerOptions& opt) {
  double f = mutual_information_raw(h, q, snr, m);
  double step = -1.0;
  constexpr int kMaxHalvings = 60;

  for (int it = 0; it < opt.max_iterations; ++it) {
    const ComplexMatrix grad = mutual_information_gradient(h, q, snr, m);
    const double gnorm = grad.norm();
    if (!(gnorm > 0.0)) return {q, f, it, true};
    step = step < 0.0 ? 1.0 / gnorm : 2.0 * step;

    bool accepted = false;
    for (int k = 0; k < kMaxHalvings; ++k, step *= 0.5) {
      const ComplexMatrix next = project_psd_unit_trace(ComplexMatrix(q + step * grad));
      const double predicted = (grad.adjoint() * (next - q)).trace().real();
      const double fn = mutual_information_raw(h, next, snr, m);
      if (fn >= f + opt.armijo * predicted && fn > f) {
        const double gain = fn - f;
        q = next;
        f = fn;
        accepted = true;
        if (gain < opt.tolerance_bits) return {q, f, it + 1, true};
        break;
      }
    }
    // No ascent step left: the iterate is stationary to working precision.
    if (!accepted) return {q, f, it + 1, true};
  }
  return {q, f, opt.max_iterations, false};
}

}  // namespace

OptimizationResult optimize_covariance(const ChannelMatrix& h, SnrPoint snr,
                                       const ImpairmentModel& m, const OptimizerOptions& options) {
  const Index n_t = h.n_t();
  const double s = snr.linear_value();
  if (n_t == 1) {
    const auto q = Covariance::isotropic(1);
    return {mutual_information(h, q, snr, m), q, 0, true};
  }

  // Waterfilling assuming isotropic distortion; exact when alpha = 1 or kappa = 0.
  const ImpairmentModel isotropic_model(m.kappa(), 1.0);
  std::vector<ComplexMatrix> starts{Covariance::isotropic(n_t).matrix(),
                                    deterministic_capacity(h, snr, isotropic_model).covariance.matrix()};

  Ascent best{ComplexMatrix(), -std::numeric_limits<double>::infinity(), 0, true};
  for (const auto& start : starts) {
    auto run = ascend(h.matrix(), start, s, m, options);
    if (run.bits > best.bits) best = std::move(run);
  }
  return {std::max(0.0, best.bits), Covariance::nearest(best.q), best.iterations, best.converged};
}

}  // namespace mimocap
