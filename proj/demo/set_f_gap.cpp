// Box-counting sees F = {0, 1/2, 1/3, ...} as half-dimensional, while a
// cover by finite blocks brings every block estimate down to 0.

#include <cstdio>

#include "alc/fracdim.hpp"
#include "alc/setgen.hpp"

int main() {
  const auto f = alc::gen_set_f(100000);
  const auto sched = alc::ScaleSchedule::dyadic(4, 12);
  const auto whole = alc::minkowski_dim(f, sched);
  std::printf("box-counting slope of F: %.3f (saturated scales: %zu)\n", whole.slope, whole.saturated_scales());

  auto blocks = alc::set_f_blocks(f, 50);
  blocks.pop_back();  // residual block near 0
  const auto cover = alc::modified_minkowski_dim(blocks, sched);
  std::printf("largest slope over %zu finite blocks: %.3f\n", blocks.size(), cover.best.slope);
  for (const auto& sc : whole.per_scale) std::printf("  rho=%-12g N=%lld\n", sc.rho, static_cast<long long>(sc.count));
}
