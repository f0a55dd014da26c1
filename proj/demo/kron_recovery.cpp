// Recovers a 4x4-sparse Kronecker vector in R^64 (16 nonzeros) from 9
// Gaussian measurements, below the 16 that sparsity alone would need.

#include <cstdio>

#include "alc/decode.hpp"
#include "alc/measureop.hpp"
#include "alc/setgen.hpp"

int main() {
  const alc::Index k = 8, l = 8, r = 4, t = 4, n = 9;
  const auto a = alc::sample_matrix(n, k * l, 11);
  const auto truth = alc::gen_kron(k, l, r, t, 12);
  const auto x = alc::embed(truth);
  std::printf("nonzeros: %ld, measurements: %ld\n", static_cast<long>((x.array() != 0.0).count()), static_cast<long>(n));

  alc::KronDecodeOptions opt;
  opt.starts = 50;
  opt.seed = 13;
  const auto out = alc::kron_decode(a, alc::apply(a, x), k, l, r, t, opt);
  std::printf("status: %s, residual: %.3g\n", alc::to_string(out.status).c_str(), out.residual);
  if (out.status == alc::DecodeStatus::unique)
    std::printf("max abs error: %.3g\n", (out.estimate - x).cwiseAbs().maxCoeff());
}
