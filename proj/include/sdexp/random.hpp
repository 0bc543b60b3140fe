#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace sdexp {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014). Used to derive
/// independent sub-seeds from (seed, stream index).
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream));
}

/// Seedable generator on top of std::mt19937_64, whose output sequence is
/// fixed by the C++ standard. Distributions are computed here rather than
/// through <random> distributions, whose algorithms are library-defined:
///   uniform01  = (next() >> 11) * 2^-53
///   normal     = Box-Muller on two uniform01 draws (cosine branch only)
///   below(n)   = floor(uniform01 * n)
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double normal(double mean = 0.0, double sigma = 1.0) {
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    return mean + sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  std::size_t below(std::size_t n) {
    return static_cast<std::size_t>(uniform01() * static_cast<double>(n));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace sdexp
