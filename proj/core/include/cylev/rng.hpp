#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>

namespace cylev {

/// Identifies what a random stream is used for. Two simulations with the same
/// master seed but different purposes never share randomness.
enum class StreamPurpose : std::uint64_t {
  Increments = 1,
  Action = 2,
  Subordinated = 3,
  Integral = 4,
  IntegralReversed = 5,
  OrnsteinUhlenbeck = 6,
  SeriesPaths = 7,
  SubordinatedPaths = 8,
};

/// xoshiro256** generator. Satisfies UniformRandomBitGenerator so it can be
/// handed to <random> distributions as well.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  /// State is expanded from `seed` with splitmix64.
  explicit RandomStream(std::uint64_t seed);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Uniform on the open interval (0, 1); never returns 0 or 1.
  double uniform_open();
  double standard_normal();
  /// Exp(1).
  double exponential();
  std::uint64_t poisson(double mean);

 private:
  std::array<std::uint64_t, 4> state_{};
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

/// Derives the stream for `(purpose, chunk)` from a master seed. The mapping is
/// a pure function, so a chunk of work sees the same numbers whichever worker
/// runs it.
RandomStream derive_stream(std::uint64_t master_seed, StreamPurpose purpose, std::uint64_t chunk);

struct SimulationOptions {
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

/// Number of Monte Carlo paths handled by one derived stream.
inline constexpr std::size_t kPathsPerChunk = 4096;

/// Runs `body(chunk_index, first_path, path_count)` over all chunks of
/// `total_paths`, spread over `workers` threads. Chunks write to disjoint
/// output ranges, so results do not depend on `workers`.
void for_each_chunk(std::size_t total_paths, unsigned workers,
                    const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

}  // namespace cylev
