#pragma once

#include <cstdint>
#include <random>

namespace updrift {

/// Fixed master seed used by tools when none is given, so that bare
/// invocations are reproducible.
inline constexpr std::uint64_t kDefaultMasterSeed = 20190713;

/// splitmix64 finalizer; decorrelates nearby seed values.
std::uint64_t mix64(std::uint64_t x);

/// A seeded random stream. Substreams derived from (master seed, index) are
/// statistically independent, so trials can run in any order (or in
/// parallel) without changing results.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : engine_(mix64(seed)) {}

  static RngStream substream(std::uint64_t master_seed, std::uint64_t index) {
    return RngStream(mix64(master_seed ^ mix64(index + 0x9e3779b97f4a7c15ULL)));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1).
  double next_unit();

  bool bernoulli(double p) { return next_unit() < p; }

  /// Exact binomial sample (inversion / rejection, never a normal
  /// approximation).
  std::int64_t binomial(std::int64_t trials, double p);

  /// Uniform integer in [lo, hi], inclusive.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace updrift
