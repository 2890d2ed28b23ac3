#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <variant>

#include "mimocap/numerics.hpp"
#include "mimocap/rng.hpp"

namespace mimocap {

// A full-rank N_r x N_t channel realization.
class ChannelMatrix {
 public:
  // Relative threshold on the smallest compact eigenvalue of H^H H.
  static constexpr double kRankTolerance = 1e-12;

  explicit ChannelMatrix(ComplexMatrix h);

  static ChannelMatrix identity(Index n_r, Index n_t);
  static bool is_full_rank(const ComplexMatrix& h);

  const ComplexMatrix& matrix() const { return h_; }
  Index n_t() const { return h_.cols(); }
  Index n_r() const { return h_.rows(); }
  Index streams() const { return std::min(h_.rows(), h_.cols()); }

 private:
  ComplexMatrix h_;
};

struct IidRayleigh {
  Index n_t;
  Index n_r;
};

// Either a fixed matrix or i.i.d. CN(0,1) entries.
class ChannelDistribution {
 public:
  static ChannelDistribution deterministic(ChannelMatrix h);
  static ChannelDistribution iid_rayleigh(Index n_t, Index n_r);

  bool is_deterministic() const { return std::holds_alternative<ChannelMatrix>(kind_); }
  const ChannelMatrix& fixed() const;

  Index n_t() const;
  Index n_r() const;
  Index streams() const { return std::min(n_t(), n_r()); }

 private:
  explicit ChannelDistribution(std::variant<ChannelMatrix, IidRayleigh> kind)
      : kind_(std::move(kind)) {}

  std::variant<ChannelMatrix, IidRayleigh> kind_;
};

// Entries are filled in row-major order from the stream's engine; a
// rank-deficient draw is replaced by the next one, at most three times.
ChannelMatrix sample_channel(const ChannelDistribution& dist, const RngStream& rng);

// SISO reference gain. For i.i.d. Rayleigh this is the first CN(0,1) draw of
// the stream, i.e. the (0,0) entry of the matching sample_channel draw; for a
// deterministic channel it is the unit-gain scalar 1.
Complex siso_reference(const ChannelDistribution& dist, const RngStream& rng);

double frobenius_norm_sq(const ChannelMatrix& h);

// CSV with N_r rows of 2*N_t numbers (real, imaginary alternating).
ComplexMatrix read_channel_csv(std::istream& in);
ChannelMatrix load_channel_csv(const std::filesystem::path& path);

}  // namespace mimocap
