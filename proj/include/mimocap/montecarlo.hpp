#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <span>
#include <thread>
#include <vector>

#include "mimocap/rng.hpp"

namespace mimocap {

struct MonteCarloConfig {
  std::size_t trials = 1000;
  std::uint64_t master_seed = 0;
  std::size_t max_parallelism = 1;
};

// Sample mean with its standard error (sample stdev / sqrt(trials)).
struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
};

// Fixed-shape pairwise summation; the result depends only on the order of `x`.
inline double pairwise_sum(std::span<const double> x) {
  if (x.size() <= 8) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
  }
  const std::size_t half = x.size() / 2;
  return pairwise_sum(x.first(half)) + pairwise_sum(x.subspan(half));
}

inline Estimate summarize(std::span<const double> samples) {
  Estimate e;
  e.trials = samples.size();
  if (samples.empty()) return e;
  const double n = static_cast<double>(samples.size());
  e.mean = pairwise_sum(samples) / n;
  if (samples.size() > 1) {
    std::vector<double> dev(samples.size());
    std::transform(samples.begin(), samples.end(), dev.begin(),
                   [&](double v) { return (v - e.mean) * (v - e.mean); });
    e.std_error = std::sqrt(pairwise_sum(dev) / (n - 1.0)) / std::sqrt(n);
  }
  return e;
}

// Evaluates trial(RngStream(master_seed, i)) for i in [0, trials) on up to
// max_parallelism threads. Each sample lands in slot i, so the returned
// vector is the same for any thread count.
template <typename Trial>
std::vector<double> monte_carlo_samples(const MonteCarloConfig& cfg, Trial&& trial) {
  std::vector<double> samples(cfg.trials);
  const std::size_t workers = std::clamp<std::size_t>(cfg.max_parallelism, 1, std::max<std::size_t>(cfg.trials, 1));
  auto run = [&](std::size_t worker, std::exception_ptr& error) {
    try {
      for (std::size_t i = worker; i < cfg.trials; i += workers) {
        samples[i] = trial(RngStream(cfg.master_seed, i));
      }
    } catch (...) {
      error = std::current_exception();
    }
  };

  std::vector<std::exception_ptr> errors(workers);
  if (workers == 1) {
    run(0, errors[0]);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w, std::ref(errors[w]));
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return samples;
}

template <typename Trial>
Estimate monte_carlo(const MonteCarloConfig& cfg, Trial&& trial) {
  const auto samples = monte_carlo_samples(cfg, std::forward<Trial>(trial));
  return summarize(samples);
}

}  // namespace mimocap
