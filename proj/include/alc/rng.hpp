#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace alc {

namespace detail {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t avalanche(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// Counter-based seed derivation: a fixed 64-bit avalanche of (seed, index).
/// Every random quantity in the library is a pure function of such pairs,
/// so there is no hidden generator state. Test vectors live in test_rng.cpp.
constexpr std::uint64_t mix(std::uint64_t seed, std::uint64_t index) noexcept {
  return detail::avalanche(detail::avalanche(seed) + (index + 1) * detail::kGolden);
}

/// Sequential view over the counter stream mix(seed, 0), mix(seed, 1), ...
class CounterRng {
 public:
  explicit constexpr CounterRng(std::uint64_t seed, std::uint64_t counter = 0) noexcept
      : seed_(seed), counter_(counter) {}

  constexpr std::uint64_t next() noexcept { return mix(seed_, counter_++); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double uniform_open_zero() noexcept {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound). Rejection sampling keeps it unbiased.
  std::uint64_t below(std::uint64_t bound) noexcept {
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t v = next();
    while (v >= limit) v = next();
    return v % bound;
  }

  /// Standard normal via Box-Muller. Always consumes exactly two counters.
  double normal() noexcept {
    const double u1 = uniform_open_zero();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Standard normal conditioned on being nonzero.
  double nonzero_normal() noexcept {
    double v = normal();
    while (v == 0.0) v = normal();
    return v;
  }

  constexpr std::uint64_t seed() const noexcept { return seed_; }
  constexpr std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

}  // namespace alc
