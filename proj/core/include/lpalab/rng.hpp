#pragma once

#include <cstdint>
#include <cmath>

namespace lpalab {

// 64-bit avalanche finalizer (splitmix64's). Used for per-trial seed derivation
// and for hash-based tie breaking, so its exact form is part of the
// reproducibility contract.
inline constexpr std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xBF58476D1CE4E5B9ULL;
  x ^= x >> 27;
  x *= 0x94D049BB133111EBULL;
  x ^= x >> 31;
  return x;
}

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// Seed for trial t of a batch: decorrelates consecutive trial indices.
inline constexpr std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t t) {
  return mix64(base_seed ^ (t * kGolden));
}

// Tie-break hash over (trial seed, vertex, label); the label minimizing it wins.
inline constexpr std::uint64_t tie_hash(std::uint64_t seed, std::uint64_t vertex,
                                        std::uint64_t label) {
  return mix64(seed ^ mix64(vertex * kGolden ^ mix64(label)));
}

// xoshiro256++ seeded through splitmix64. Small, fast, and fully specified
// here, so streams are stable across platforms and compilers.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : s_) {
      x += kGolden;
      word = mix64(x);
    }
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0,1), 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound); bound >= 1. Unbiased via rejection.
  std::uint64_t next_below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t x = next_u64();
      if (x >= threshold) return x % bound;
    }
  }

  // Standard normal via Box-Muller (second value cached).
  double next_normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u, v, s;
    do {
      u = 2.0 * next_double() - 1.0;
      v = 2.0 * next_double() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    cached_ = v * f;
    have_cached_ = true;
    return u * f;
  }

  // UniformRandomBitGenerator interface so <random> distributions can run on
  // this stream where convenient.
  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~0ULL; }
  std::uint64_t operator()() { return next_u64(); }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4];
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace lpalab
