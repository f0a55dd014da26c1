// A 2-parameter surface in R^3 whose points are recovered from one linear
// coordinate: (x, y) -> (x, y, interleave(x, y)), measured by v -> v_3.

#include <cstdio>

#include "alc/decode/interleave.hpp"

int main() {
  const int p = 20;
  const double x = 0.3125, y = 0.71875;
  const auto v = alc::interleave_lift(x, y, p);
  const double measurement = alc::last_coordinate(v);
  const auto [rx, ry] = alc::deinterleave(measurement, p);
  std::printf("point (%.6f, %.6f, %.12f)\nmeasurement %.12f -> (%.6f, %.6f)\n", v(0), v(1), v(2), measurement, rx, ry);
}
