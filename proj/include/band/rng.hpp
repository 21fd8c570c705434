#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "band/errors.hpp"

namespace band {

/// Seedable, portable pseudo-random generator (xoshiro256**) with explicit
/// stream splitting. All sampling helpers avoid std::* distributions so that
/// sequences are bit-identical across platforms and standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed) {
    // SplitMix64 expansion of the seed into the full state.
    uint64_t z = seed;
    for (auto& word : state_) {
      z += 0x9e3779b97f4a7c15ULL;
      uint64_t t = z;
      t = (t ^ (t >> 30)) * 0xbf58476d1ce4e5b9ULL;
      t = (t ^ (t >> 27)) * 0x94d049bb133111ebULL;
      word = t ^ (t >> 31);
    }
  }

  /// Derives an independent stream. Streams split from the same generator
  /// with distinct tags never share state.
  Rng split(uint64_t stream_tag) const {
    uint64_t mixed = state_[0] ^ (state_[2] * 0x9e3779b97f4a7c15ULL) ^
                     (stream_tag * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL);
    return Rng(mixed);
  }

  uint64_t next_u64() {
    uint64_t& s0 = state_[0];
    uint64_t& s1 = state_[1];
    uint64_t& s2 = state_[2];
    uint64_t& s3 = state_[3];
    const uint64_t result = rotl(s1 * 5, 7) * 9;
    const uint64_t t = s1 << 17;
    s2 ^= s0;
    s3 ^= s1;
    s1 ^= s2;
    s0 ^= s3;
    s2 ^= t;
    s3 = rotl(s3, 45);
    return result;
  }

  /// Uniform double in [0, 1).
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi].
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [lo, hi], inclusive, without modulo bias.
  int64_t uniform_int(int64_t lo, int64_t hi) {
    if (lo > hi) throw ConfigError("uniform_int: empty range");
    const uint64_t span = static_cast<uint64_t>(hi - lo);
    if (span == UINT64_MAX) return static_cast<int64_t>(next_u64());
    const uint64_t bound = span + 1;
    const uint64_t reject_above = UINT64_MAX - UINT64_MAX % bound;
    uint64_t v = next_u64();
    while (v >= reject_above) v = next_u64();
    return lo + static_cast<int64_t>(v % bound);
  }

  /// Samples an index proportionally to non-negative weights. All-zero
  /// weights fall back to a uniform choice.
  size_t sample_discrete(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w > 0.0 ? w : 0.0;
    if (total <= 0.0) return static_cast<size_t>(uniform_int(0, static_cast<int64_t>(weights.size()) - 1));
    double u = uniform01() * total;
    for (size_t k = 0; k < weights.size(); ++k) {
      const double w = weights[k] > 0.0 ? weights[k] : 0.0;
      if (u < w) return k;
      u -= w;
    }
    return weights.size() - 1;  // numeric leftovers land on the last index
  }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  uint64_t state_[4];
};

}  // namespace band
