#pragma once

#include <cstdint>

namespace subrot {

/// Counter-based generator: draw k of stream (seed, stream) is
/// splitmix64(key + k * golden) with key = splitmix64(seed ^ splitmix64(stream)).
/// Any draw can be reproduced from (seed, stream, k) alone, so instances can be
/// generated in any order or in parallel with identical results.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept;

  std::uint64_t next_u64() noexcept;
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [lo, hi].
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) noexcept;

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace subrot
