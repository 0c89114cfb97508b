#pragma once

#include <cstdint>

namespace nsx {

/// SplitMix64: tiny, fully specified, and splittable, so every stream in a
/// run derives from one seed independently of the standard library.
class Rng {
 public:
  static constexpr std::uint64_t kDefaultSeed = 0xC0FFEE;

  explicit Rng(std::uint64_t seed = kDefaultSeed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi].
  long range(long lo, long hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long>(next() % span);
  }

  /// Independent child stream keyed by `stream`.
  Rng split(std::uint64_t stream) const {
    Rng child(state_ ^ (0xD1B54A32D192ED03ull * (stream + 1)));
    child.next();
    return child;
  }

 private:
  std::uint64_t state_;
};

}  // namespace nsx
