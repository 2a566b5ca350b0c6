#pragma once

#include <cstdint>
#include <random>

namespace tempsweep {

/// Seeded generator with a fixed uint64 -> double mapping. std::mt19937_64 has
/// a standard-mandated output sequence, and the explicit 53-bit conversion
/// avoids the implementation-defined behaviour of uniform_real_distribution,
/// so replays are bit-identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform double in [0, 1).
  double next_uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace tempsweep
