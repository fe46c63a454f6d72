#pragma once

#include <cstdint>
#include <vector>

namespace posdec {

/// Deterministic 64-bit generator (splitmix64).  Standard-library
/// distributions are implementation-defined, so every sampled artifact
/// in the project draws from this to stay reproducible across toolchains.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform value in [0, bound).  bound must be positive.
  std::uint64_t below(std::uint64_t bound) { return next() % bound; }

  /// True with probability num/den.
  bool chance(std::uint64_t num, std::uint64_t den) {
    return below(den) < num;
  }

  template <typename T>
  const T& pick(const std::vector<T>& pool) {
    return pool[below(pool.size())];
  }

private:
  std::uint64_t state_;
};

}  // namespace posdec
