#pragma once

#include <cstdint>

namespace sparsetd {

/// Splittable deterministic PRNG (splitmix64 core).
///
/// Every random choice in the library draws from one of these. Child
/// computations get their own stream via split(label), so results are
/// reproducible from (input, config, seed) regardless of execution
/// order, including when trials run on multiple threads.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : state_(mix(seed ^ kGamma)) {}

  /// Independent stream for a labeled child computation.
  SplitRng split(std::uint64_t label) const {
    return SplitRng(mix(state_ + kGamma * (label + 1)));
  }

  std::uint64_t next() {
    state_ += kGamma;
    return mix(state_);
  }

  /// Uniform integer in [0, n). n must be positive.
  int uniform(int n) {
    // Rejection sampling keeps the draw unbiased and portable.
    const std::uint64_t bound = n;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return static_cast<int>(x % bound);
  }

  /// Bernoulli event with probability num/den.
  bool chance(int num, int den) { return uniform(den) < num; }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_ = 0;
};

}  // namespace sparsetd
