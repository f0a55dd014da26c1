#pragma once

// Exhaustive-support l0 decoder.

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "alc/decode/outcome.hpp"
#include "alc/error.hpp"
#include "alc/measureop.hpp"

namespace alc {

inline constexpr double kMaxSupportCount = 1e7;

/// C(n, k) as a double (exact well past the support budget).
inline double binomial(Index n, Index k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (Index i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(c);
}

/// Advances `idx` to the next size-|idx| subset of [0, n) in lexicographic
/// order. Returns false after the last one.
inline bool next_combination(std::vector<Index>& idx, Index n) {
  const auto k = static_cast<Index>(idx.size());
  for (Index i = k - 1; i >= 0; --i) {
    auto& v = idx[static_cast<std::size_t>(i)];
    if (v < n - k + i) {
      ++v;
      for (Index j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
      return true;
    }
  }
  return false;
}

/// Calls fn(support) for every size-k subset of [0, n), lexicographically.
template <class Fn>
void for_each_subset(Index n, Index k, Fn&& fn) {
  std::vector<Index> idx(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  do {
    fn(static_cast<const std::vector<Index>&>(idx));
  } while (k > 0 && next_combination(idx, n));
}

/// Tries every support of size s, s-1, ..., 0. A support of size q is an
/// exact fit when its least-squares residual is within tol * max(1, ||y||)
/// and all q recovered entries are nonzero (above zero_threshold).
inline DecodeOutcome l0_decode(const MeasurementMatrix& a, const Vector& y, Index s,
                               const DecodeOptions& opt = {}) {
  const Index n = a.n(), m = a.m();
  if (y.size() != n) throw invalid_argument("l0_decode: y has wrong length");
  if (s < 0 || s > m) throw invalid_argument("l0_decode: need 0 <= s <= m");
  if (s > n) throw invalid_argument("l0_decode: need s <= n for overdetermined support solves");
  if (binomial(m, s) > kMaxSupportCount)
    throw resource_limit("l0_decode: C(" + std::to_string(m) + "," + std::to_string(s) +
                         ") supports exceed the 1e7 budget");

  const double y_scale = std::max(1.0, y.norm());
  const double accept = opt.tol * y_scale;
  DecodeOutcome out;
  std::vector<Candidate> accepted;
  Matrix sub(n, s);
  double best_residual = std::numeric_limits<double>::infinity();

  for (Index q = s; q >= 0; --q) {
    for_each_subset(m, q, [&](const std::vector<Index>& support) {
      Vector z;
      double residual;
      if (q == 0) {
        residual = y.norm();
      } else {
        sub.resize(n, q);
        for (Index j = 0; j < q; ++j) sub.col(j) = a.entries().col(support[static_cast<std::size_t>(j)]);
        z = sub.colPivHouseholderQr().solve(y);
        residual = (sub * z - y).norm();
      }
      best_residual = std::min(best_residual, residual);
      const bool nonzero = q == 0 || z.cwiseAbs().minCoeff() >= opt.zero_threshold;
      if (residual <= accept && nonzero) {
        Candidate c;
        c.support = support;
        c.x = Vector::Zero(m);
        for (Index j = 0; j < q; ++j) c.x(support[static_cast<std::size_t>(j)]) = z(j);
        c.residual = residual;
        accepted.push_back(std::move(c));
      } else if (residual > accept) {
        out.margin = std::min(out.margin, residual / y_scale);
      }
    });
  }
  std::stable_sort(accepted.begin(), accepted.end(),
                   [](const Candidate& l, const Candidate& r) { return l.support < r.support; });
  detail::resolve(out, std::move(accepted), opt);
  if (out.status == DecodeStatus::no_solution) out.residual = best_residual;
  return out;
}

}  // namespace alc
