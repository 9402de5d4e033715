#pragma once

#include <cstdint>
#include <random>

#include "amt/rational.hpp"

namespace amt {

/**
 * Seedable, splittable random generator.
 *
 * The engine is std::mt19937_64 (bit-reproducible across standard libraries);
 * all distribution code is in-house because the std distributions are
 * implementation-defined. Substreams derive from the original seed and a tag,
 * never from engine state, so parallel loops can hand substream k to worker k
 * and results stay independent of thread count and draw order.
 */
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : seed_(seed), engine_(mix(seed, 0x9e3779b97f4a7c15ull)) {}

  /** Deterministic substream for a structural tag (replica index, child side, ...). */
  SplitRng split(std::uint64_t tag) const { return SplitRng(mix(seed_, tag)); }
  SplitRng split(std::uint64_t tag_a, std::uint64_t tag_b) const {
    return SplitRng(mix(mix(seed_, tag_a), tag_b));
  }

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  /** Uniform on {0, ..., bound-1}; rejection sampling, no modulo bias. */
  std::uint64_t uniform_int(std::uint64_t bound) {
    if (bound == 0) throw ValidationError("uniform_int with zero bound");
    const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % bound;
    std::uint64_t draw;
    do {
      draw = next_u64();
    } while (draw >= limit);
    return draw % bound;
  }

  /** Uniform on [0,1) with 53 random bits. */
  double uniform01() { return double(next_u64() >> 11) * 0x1.0p-53; }

  /** Uniform big integer on {0, ..., bound-1} by block rejection. */
  Int uniform_big(const Int& bound) {
    if (bound <= 0) throw ValidationError("uniform_big with non-positive bound");
    const unsigned bits = static_cast<unsigned>(msb(bound)) + 1;
    const unsigned words = (bits + 63) / 64;
    while (true) {
      Int draw = 0;
      for (unsigned w = 0; w < words; ++w) draw = (draw << 64) | next_u64();
      draw >>= words * 64 - bits;
      if (draw < bound) return draw;
    }
  }

  /** Index i drawn with probability weights[i] / sum(weights). */
  std::size_t discrete(const std::vector<double>& weights) {
    double total = 0;
    for (double w : weights) total += w;
    if (total <= 0) throw ValidationError("discrete distribution with non-positive total");
    double point = uniform01() * total;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      point -= weights[i];
      if (point < 0) return i;
    }
    return weights.size() - 1;
  }

 private:
  // splitmix64 finalizer; decorrelates related seeds/tags.
  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ull * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace amt
