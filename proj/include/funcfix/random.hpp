#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace funcfix {

/// Deterministic random source. Wraps mt19937_64 but maps to ranges manually so
/// draws do not depend on the standard library's distribution implementations.
class RandomSource {
 public:
  explicit RandomSource(uint64_t seed = 0) : engine_(seed) {}

  uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() { return std::ldexp(static_cast<double>(engine_() >> 11), -53); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n). n must be > 0.
  size_t index(size_t n) {
    // Rejection sampling keeps the mapping unbiased.
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return static_cast<size_t>(x % n);
  }

  int int_in(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(index(static_cast<size_t>(hi - lo + 1)));
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Weighted categorical draw; weights need not be normalized.
  size_t categorical(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double x = uniform() * total;
    for (size_t i = 0; i < weights.size(); ++i) {
      x -= weights[i];
      if (x < 0.0) return i;
    }
    return weights.size() - 1;
  }

 private:
  std::mt19937_64 engine_;
};

/// Pure per-item seed derivation: assets processed in parallel each get a seed
/// that depends only on the base seed and their index, not on schedule order.
inline uint64_t derive_seed(uint64_t base, uint64_t index) {
  uint64_t x = base ^ (index + 0x9e3779b97f4a7c15ULL + (base << 6) + (base >> 2));
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

}  // namespace funcfix
