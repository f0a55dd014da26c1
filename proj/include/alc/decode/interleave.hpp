#pragma once

// Binary digit interleaving: an injective map of the p-digit grid of [0,1)^2
// into [0,1). Lifting (x, y) to (x, y, interleave(x, y)) gives a surface in
// R^3 from which the single linear coordinate v -> v_3 recovers (x, y).

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <utility>

#include "alc/error.hpp"

namespace alc {

inline constexpr int kMaxInterleaveDigits = 26;

namespace detail {

inline void check_digits(int p) {
  if (p < 1 || p > kMaxInterleaveDigits)
    throw invalid_argument("interleave: precision must be in [1, 26]");
}

// Spreads the low 32 bits of v into the even bit positions.
constexpr std::uint64_t spread_bits(std::uint64_t v) noexcept {
  v &= 0xFFFFFFFFULL;
  v = (v | (v << 16)) & 0x0000FFFF0000FFFFULL;
  v = (v | (v << 8)) & 0x00FF00FF00FF00FFULL;
  v = (v | (v << 4)) & 0x0F0F0F0F0F0F0F0FULL;
  v = (v | (v << 2)) & 0x3333333333333333ULL;
  v = (v | (v << 1)) & 0x5555555555555555ULL;
  return v;
}

constexpr std::uint64_t gather_bits(std::uint64_t v) noexcept {
  v &= 0x5555555555555555ULL;
  v = (v | (v >> 1)) & 0x3333333333333333ULL;
  v = (v | (v >> 2)) & 0x0F0F0F0F0F0F0F0FULL;
  v = (v | (v >> 4)) & 0x00FF00FF00FF00FFULL;
  v = (v | (v >> 8)) & 0x0000FFFF0000FFFFULL;
  v = (v | (v >> 16)) & 0x00000000FFFFFFFFULL;
  return v;
}

}  // namespace detail

/// z = sum_i x_i 2^-(2i-1) + y_i 2^-2i over the first p binary digits.
inline double interleave_compress(double x, double y, int p) {
  detail::check_digits(p);
  if (!(x >= 0.0 && x < 1.0) || !(y >= 0.0 && y < 1.0))
    throw invalid_argument("interleave_compress: inputs must lie in [0, 1)");
  const double grid = std::ldexp(1.0, p);
  const auto xi = static_cast<std::uint64_t>(std::floor(x * grid));
  const auto yi = static_cast<std::uint64_t>(std::floor(y * grid));
  const std::uint64_t z = (detail::spread_bits(xi) << 1) | detail::spread_bits(yi);
  return std::ldexp(static_cast<double>(z), -2 * p);
}

/// Inverse of interleave_compress on the p-digit grid.
inline std::pair<double, double> deinterleave(double z, int p) {
  detail::check_digits(p);
  if (!(z >= 0.0 && z < 1.0)) throw invalid_argument("deinterleave: input must lie in [0, 1)");
  const auto zi = static_cast<std::uint64_t>(std::floor(std::ldexp(z, 2 * p)));
  return {std::ldexp(static_cast<double>(detail::gather_bits(zi >> 1)), -p),
          std::ldexp(static_cast<double>(detail::gather_bits(zi)), -p)};
}

/// (x, y) -> (x, y, interleave(x, y)).
inline Eigen::Vector3d interleave_lift(double x, double y, int p) {
  return {x, y, interleave_compress(x, y, p)};
}

/// The one linear measurement f(v) = v_3.
inline double last_coordinate(const Eigen::Vector3d& v) { return v(2); }

}  // namespace alc
