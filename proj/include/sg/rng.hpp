#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <utility>

namespace sg {

/// SplitMix64 finalizer (Steele, Lea & Flood 2014).
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent random stream for item `index` of a run seeded with `seed`.
///
/// The engine is std::mt19937_64 (exactly specified by the standard) seeded
/// with splitmix64(splitmix64(seed) ^ index), so item i draws the same numbers
/// whether items are processed serially or by any number of threads.
/// Uniform and normal variates are computed here rather than with
/// std::uniform_real_distribution/std::normal_distribution, whose algorithms
/// differ between standard library implementations.
class AtomStream {
public:
  AtomStream(std::uint64_t seed, std::uint64_t index)
      : engine_(splitmix64(splitmix64(seed) ^ index)) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Standard normal pair by the Box-Muller transform.
  std::pair<double, double> normal_pair() {
    const double u1 = 1.0 - uniform(); // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(a), r * std::sin(a)};
  }

private:
  std::mt19937_64 engine_;
};

} // namespace sg
