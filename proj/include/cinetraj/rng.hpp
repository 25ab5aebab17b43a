#pragma once

#include <cstdint>

namespace cinetraj {

/// Deterministic 64-bit generator (splitmix64). Used everywhere randomness is
/// seeded so outputs are reproducible bit-for-bit across platforms and
/// standard-library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t nextU64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double nextUnit() { return static_cast<double>(nextU64() >> 11) * 0x1.0p-53; }

  double nextRange(double lo, double hi) { return lo + (hi - lo) * nextUnit(); }

  /// Uniform integer in [0, n). Rejection-sampled, bias-free.
  std::uint64_t nextBelow(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = nextU64();
    } while (x >= limit);
    return x % n;
  }

  /// Uniform integer in [lo, hi] inclusive.
  int nextInt(int lo, int hi) {
    return lo + static_cast<int>(nextBelow(static_cast<std::uint64_t>(hi - lo + 1)));
  }

 private:
  std::uint64_t state_;
};

/// Derives an independent stream seed from a base seed and a stream index.
inline std::uint64_t mixSeed(std::uint64_t seed, std::uint64_t stream) {
  Rng r(seed ^ (0x632be59bd9b4e019ULL + stream * 0x9e3779b97f4a7c15ULL));
  return r.nextU64();
}

}  // namespace cinetraj
