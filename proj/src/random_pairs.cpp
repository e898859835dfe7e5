#include "bimeans/random_pairs.hpp"

#include <cmath>

namespace bimeans {

PositivePair PairSampler::log_uniform_pair(double lo, double hi) {
  const double log_lo = std::log(lo);
  const double span = std::log(hi) - log_lo;
  for (;;) {
    const double a = std::exp(log_lo + span * uniform());
    const double b = std::exp(log_lo + span * uniform());
    if (a != b) return PositivePair(a, b);
  }
}

PositivePair PairSampler::ky_fan_pair() {
  for (;;) {
    const double a = 0.5 * uniform();
    const double b = 0.5 * uniform();
    if (a > 0.0 && b > 0.0 && a != b) return PositivePair(a, b);
  }
}

std::vector<PositivePair> log_uniform_pairs(std::uint64_t seed, std::size_t n) {
  PairSampler sampler(seed);
  std::vector<PositivePair> pairs;
  pairs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) pairs.push_back(sampler.log_uniform_pair());
  return pairs;
}

std::vector<PositivePair> ky_fan_pairs(std::uint64_t seed, std::size_t n) {
  PairSampler sampler(seed);
  std::vector<PositivePair> pairs;
  pairs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) pairs.push_back(sampler.ky_fan_pair());
  return pairs;
}

}  // namespace bimeans
