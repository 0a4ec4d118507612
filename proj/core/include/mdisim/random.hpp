#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace mdisim {

/// Seeded random source with a fixed draw discipline.
///
/// All randomness in a session flows through instances of this class so that
/// a transcript is reproducible byte-for-byte from its seed. Distributions
/// are implemented by hand on top of std::mt19937_64 (whose output sequence
/// the standard pins down exactly); std::uniform_real_distribution and
/// friends are implementation-defined and must not be used here.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : seed_(seed), engine_(scramble(seed)) {}

  /// Independent child stream. Derivation uses only the original seed and the
  /// tag, so adding draws to one stream never shifts another.
  RandomSource derive(std::uint64_t tag) const {
    return RandomSource(scramble(seed_ ^ (0x9E3779B97F4A7C15ULL * (tag + 1))));
  }

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n), unbiased via rejection.
  std::uint64_t uniform_int(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_int: n must be positive");
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % n;
  }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Samples an index from a finite discrete distribution. Entries with
  /// probability <= 0 are pruned first and can never be returned; the last
  /// positive entry absorbs any floating-point residue.
  std::size_t pick(std::span<const double> probabilities) {
    std::size_t last_positive = probabilities.size();
    double total = 0.0;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
      if (probabilities[i] > 0.0) {
        total += probabilities[i];
        last_positive = i;
      }
    }
    if (last_positive == probabilities.size()) {
      throw std::invalid_argument("pick: no positive probability entry");
    }
    const double u = uniform01() * total;
    double cumulative = 0.0;
    for (std::size_t i = 0; i < probabilities.size(); ++i) {
      if (probabilities[i] <= 0.0) continue;
      cumulative += probabilities[i];
      if (u < cumulative) return i;
    }
    return last_positive;
  }

  /// Fisher-Yates shuffle (std::shuffle is implementation-defined).
  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[uniform_int(i)]);
    }
  }

 private:
  static std::uint64_t scramble(std::uint64_t x) {
    // splitmix64 finalizer; decorrelates nearby seeds before they reach the engine
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace mdisim
