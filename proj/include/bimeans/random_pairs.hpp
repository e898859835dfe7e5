#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "bimeans/means.hpp"

namespace bimeans {

/// Seeded source of test pairs.
///
/// Bits come from std::mt19937_64, whose output sequence is fixed by the
/// standard; doubles are formed as (bits >> 11) * 2^-53 rather than through
/// std::uniform_real_distribution, whose algorithm is implementation-defined.
class PairSampler {
 public:
  explicit PairSampler(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1p-53; }

  /// a, b log-uniform on [lo, hi], redrawn until a != b.
  PositivePair log_uniform_pair(double lo = 1e-3, double hi = 1e3);

  /// a, b uniform on (0, 1/2), redrawn until both are nonzero and a != b.
  PositivePair ky_fan_pair();

 private:
  std::mt19937_64 engine_;
};

std::vector<PositivePair> log_uniform_pairs(std::uint64_t seed, std::size_t n);
std::vector<PositivePair> ky_fan_pairs(std::uint64_t seed, std::size_t n);

}  // namespace bimeans
