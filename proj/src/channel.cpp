#include "mimocap/channel.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace mimocap {

ChannelMatrix::ChannelMatrix(ComplexMatrix h) : h_(std::move(h)) {
  if (h_.rows() < 1 || h_.cols() < 1) {
    throw ValidationError("ChannelMatrix: dimensions must be at least 1x1");
  }
  if (!h_.allFinite()) throw ValidationError("ChannelMatrix: non-finite entry");
  if (!is_full_rank(h_)) {
    throw ValidationError("ChannelMatrix: realization is not full rank (rank < min(N_t, N_r))");
  }
}

ChannelMatrix ChannelMatrix::identity(Index n_r, Index n_t) {
  return ChannelMatrix(ComplexMatrix::Identity(n_r, n_t));
}

bool ChannelMatrix::is_full_rank(const ComplexMatrix& h) {
  // The smaller Gram matrix carries exactly the compact eigenvalues.
  const ComplexMatrix gram = h.rows() < h.cols() ? ComplexMatrix(h * h.adjoint())
                                                 : ComplexMatrix(h.adjoint() * h);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(gram),
                                                      Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) return false;
  const double largest = solver.eigenvalues().maxCoeff();
  const double smallest = solver.eigenvalues().minCoeff();
  return largest > 0 && smallest > kRankTolerance * largest;
}

ChannelDistribution ChannelDistribution::deterministic(ChannelMatrix h) {
  return ChannelDistribution(std::move(h));
}

ChannelDistribution ChannelDistribution::iid_rayleigh(Index n_t, Index n_r) {
  if (n_t < 1 || n_r < 1) {
    throw ValidationError("iid_rayleigh: antenna counts must be at least 1");
  }
  return ChannelDistribution(IidRayleigh{n_t, n_r});
}

const ChannelMatrix& ChannelDistribution::fixed() const {
  if (const auto* h = std::get_if<ChannelMatrix>(&kind_)) return *h;
  throw ValidationError("ChannelDistribution: not a deterministic channel");
}

Index ChannelDistribution::n_t() const {
  return std::visit(
      [](const auto& k) -> Index {
        if constexpr (std::is_same_v<std::decay_t<decltype(k)>, ChannelMatrix>) {
          return k.n_t();
        } else {
          return k.n_t;
        }
      },
      kind_);
}

Index ChannelDistribution::n_r() const {
  return std::visit(
      [](const auto& k) -> Index {
        if constexpr (std::is_same_v<std::decay_t<decltype(k)>, ChannelMatrix>) {
          return k.n_r();
        } else {
          return k.n_r;
        }
      },
      kind_);
}

ChannelMatrix sample_channel(const ChannelDistribution& dist, const RngStream& rng) {
  if (dist.is_deterministic()) return dist.fixed();

  constexpr int kMaxResamples = 3;
  Engine engine = rng.engine();
  ComplexMatrix h(dist.n_r(), dist.n_t());
  for (int attempt = 0; attempt <= kMaxResamples; ++attempt) {
    for (Index r = 0; r < h.rows(); ++r) {
      for (Index c = 0; c < h.cols(); ++c) h(r, c) = engine.complex_normal();
    }
    if (ChannelMatrix::is_full_rank(h)) return ChannelMatrix(h);
  }
  throw DegenerateDistribution("sample_channel: " + std::to_string(kMaxResamples + 1) +
                               " consecutive rank-deficient draws (stream " +
                               std::to_string(rng.stream_index()) + ")");
}

Complex siso_reference(const ChannelDistribution& dist, const RngStream& rng) {
  if (dist.is_deterministic()) return {1.0, 0.0};
  return rng.engine().complex_normal();
}

double frobenius_norm_sq(const ChannelMatrix& h) { return h.matrix().squaredNorm(); }

namespace {

double parse_number(const std::string& field, std::size_t line) {
  const char* begin = field.data();
  const char* end = begin + field.size();
  while (begin != end && (*begin == ' ' || *begin == '\t')) ++begin;
  while (end != begin && (end[-1] == ' ' || end[-1] == '\t' || end[-1] == '\r')) --end;
  double value = 0;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw ValidationError("channel CSV line " + std::to_string(line) + ": invalid number '" +
                          field + "'");
  }
  return value;
}

}  // namespace

ComplexMatrix read_channel_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> values;
    std::stringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ',')) values.push_back(parse_number(field, line));
    if (values.empty() || values.size() % 2 != 0) {
      throw ValidationError("channel CSV line " + std::to_string(line) +
                            ": expected an even number of columns (real, imaginary pairs)");
    }
    if (!rows.empty() && values.size() != rows.front().size()) {
      throw ValidationError("channel CSV line " + std::to_string(line) +
                            ": column count differs from the first row");
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) throw ValidationError("channel CSV: no rows");

  const auto n_r = static_cast<Index>(rows.size());
  const auto n_t = static_cast<Index>(rows.front().size() / 2);
  ComplexMatrix h(n_r, n_t);
  for (Index r = 0; r < n_r; ++r) {
    const auto& row = rows[static_cast<std::size_t>(r)];
    for (Index c = 0; c < n_t; ++c) {
      h(r, c) = Complex(row[static_cast<std::size_t>(2 * c)],
                        row[static_cast<std::size_t>(2 * c + 1)]);
    }
  }
  return h;
}

ChannelMatrix load_channel_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open channel file " + path.string());
  return ChannelMatrix(read_channel_csv(in));
}

}  // namespace mimocap
