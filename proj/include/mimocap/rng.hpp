#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace mimocap {

// Draws from one stream. Uniforms are built from the top 53 bits of a
// 64-bit Mersenne twister so sequences are identical across standard libraries.
class Engine {
 public:
  explicit Engine(std::uint64_t seed) : gen_(seed) {}

  // Uniform on (0, 1].
  double uniform();
  // Circular-symmetric complex Gaussian CN(0, 1).
  std::complex<double> complex_normal();

 private:
  std::mt19937_64 gen_;
};

// Immutable (seed, index) token naming an independent random stream. Trial i
// of a Monte Carlo run always uses stream i, whatever thread evaluates it.
class RngStream {
 public:
  constexpr RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
      : seed_(master_seed), index_(stream_index) {}

  constexpr std::uint64_t master_seed() const { return seed_; }
  constexpr std::uint64_t stream_index() const { return index_; }

  constexpr RngStream with_index(std::uint64_t index) const { return {seed_, index}; }

  // A stream family keyed by `lane`, disjoint from this one for the same index.
  RngStream substream(std::uint64_t lane) const;

  Engine engine() const;

  friend constexpr bool operator==(const RngStream&, const RngStream&) = default;

 private:
  std::uint64_t seed_;
  std::uint64_t index_;
};

}  // namespace mimocap
