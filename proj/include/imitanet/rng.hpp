#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace imitanet {

/// Seedable random source with a platform-independent output stream.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. The distribution helpers below are implemented here rather than
/// with <random> distributions, which are implementation-defined:
///   - uniform_index(n): Lemire's multiply-shift with rejection on 64 bits.
///   - uniform01():      top 53 bits of one draw, scaled by 2^-53, in [0, 1).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, n). n must be positive.
  std::size_t uniform_index(std::size_t n);

  double uniform01();

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finaliser.
std::uint64_t mix64(std::uint64_t x);

/// Child seed for item `index` of a batch started from `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace imitanet
