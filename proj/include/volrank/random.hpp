#pragma once

#include <cstdint>
#include <random>

namespace volrank {

/// Seedable generator with a portable output sequence: mt19937_64 is fully
/// specified by the standard, and the real-valued draws below avoid the
/// implementation-defined std::*_distribution classes.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace volrank
