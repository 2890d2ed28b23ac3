#include "mimocap/rng.hpp"

#include <cmath>
#include <numbers>

namespace mimocap {
namespace {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

double Engine::uniform() {
  constexpr double scale = 1.0 / 9007199254740992.0;  // 2^-53
  return (static_cast<double>(gen_() >> 11) + 1.0) * scale;
}

std::complex<double> Engine::complex_normal() {
  // |z|^2 ~ Exp(1) and the phase is uniform.
  const double radius = std::sqrt(-std::log(uniform()));
  const double phase = 2.0 * std::numbers::pi * uniform();
  return std::polar(radius, phase);
}

RngStream RngStream::substream(std::uint64_t lane) const {
  return {splitmix64(seed_ ^ splitmix64(0xA5A5A5A5A5A5A5A5ULL + lane)), index_};
}

Engine RngStream::engine() const {
  return Engine(splitmix64(seed_ ^ splitmix64(splitmix64(index_) + 0x632BE59BD9B4E019ULL)));
}

}  // namespace mimocap
