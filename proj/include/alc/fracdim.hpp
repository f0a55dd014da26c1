#pragma once

// Covering numbers, box-counting dimension estimates, Hausdorff delta-measures
// and Jacobians on finite samples.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <ostream>
#include <vector>

#include <nlohmann/json.hpp>

#include "alc/error.hpp"
#include "alc/numfmt.hpp"
#include "alc/setgen.hpp"

namespace alc {

/// Strictly decreasing list of positive radii (at least three).
class ScaleSchedule {
 public:
  explicit ScaleSchedule(std::vector<double> radii) : radii_(std::move(radii)) {
    if (radii_.size() < 3) throw invalid_argument("ScaleSchedule: need at least 3 radii");
    for (std::size_t i = 0; i < radii_.size(); ++i) {
      if (!(radii_[i] > 0.0) || !std::isfinite(radii_[i]))
        throw invalid_argument("ScaleSchedule: radii must be finite and positive");
      if (i > 0 && !(radii_[i] < radii_[i - 1]))
        throw invalid_argument("ScaleSchedule: radii must be strictly decreasing");
    }
  }

  /// base^-j for j = j_min..j_max.
  static ScaleSchedule geometric(double base, int j_min, int j_max) {
    if (!(base > 1.0)) throw invalid_argument("ScaleSchedule: base must exceed 1");
    std::vector<double> r;
    for (int j = j_min; j <= j_max; ++j) r.push_back(std::pow(base, -j));
    return ScaleSchedule(std::move(r));
  }

  static ScaleSchedule dyadic(int j_min, int j_max) { return geometric(2.0, j_min, j_max); }

  const std::vector<double>& radii() const noexcept { return radii_; }
  std::size_t size() const noexcept { return radii_.size(); }

 private:
  std::vector<double> radii_;
};

struct ScaleCount {
  double rho = 0.0;
  std::int64_t count = 0;
  bool saturated = false;  // count == 1 or count == |points|
};

/// Log-log regression of covering counts against 1/rho.
///
/// The slope is fitted on the non-saturated scales only; when fewer than two
/// scales remain the sample is resolved at every scale and the estimate is 0.
/// slope_lo / slope_hi are the extreme two-point slopes between consecutive
/// fitted scales, the finite-sample stand-ins for liminf / limsup.
struct DimensionEstimate {
  std::vector<ScaleCount> per_scale;
  double slope = 0.0;
  double slope_lo = 0.0;
  double slope_hi = 0.0;
  double r2 = 0.0;
  std::vector<double> local_slopes;

  std::size_t saturated_scales() const {
    return static_cast<std::size_t>(std::count_if(per_scale.begin(), per_scale.end(),
                                                  [](const ScaleCount& s) { return s.saturated; }));
  }
  bool saturation_warning() const { return saturated_scales() > 0; }
};

/// Number of occupied cells of the axis-aligned grid with side 2*rho/sqrt(m),
/// anchored at `anchor` (origin by default). Every cell fits inside a ball of
/// radius rho, so this upper-bounds the ball covering number; the two differ
/// by at most an m-dependent constant factor.
inline std::int64_t covering_number(const PointCloud& cloud, double rho,
                                    const Vector& anchor = Vector()) {
  if (!(rho > 0.0)) throw invalid_argument("covering_number: rho must be > 0");
  const Index m = cloud.ambient_dim();
  const Index n = cloud.size();
  if (anchor.size() != 0 && anchor.size() != m)
    throw invalid_argument("covering_number: anchor dimension mismatch");
  const double side = 2.0 * rho / std::sqrt(static_cast<double>(m));
  const Matrix& pts = cloud.points();

  if (m == 1) {
    const double a = anchor.size() ? anchor(0) : 0.0;
    std::vector<std::int64_t> cells(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i)
      cells[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(std::floor((pts(0, i) - a) / side));
    std::sort(cells.begin(), cells.end());
    return std::unique(cells.begin(), cells.end()) - cells.begin();
  }

  std::vector<std::int64_t> keys(static_cast<std::size_t>(n * m));
  for (Index i = 0; i < n; ++i)
    for (Index d = 0; d < m; ++d) {
      const double a = anchor.size() ? anchor(d) : 0.0;
      keys[static_cast<std::size_t>(i * m + d)] =
          static_cast<std::int64_t>(std::floor((pts(d, i) - a) / side));
    }
  auto key_less = [&](Index x, Index y) {
    return std::lexicographical_compare(keys.begin() + x * m, keys.begin() + (x + 1) * m,
                                        keys.begin() + y * m, keys.begin() + (y + 1) * m);
  };
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), key_less);
  std::int64_t count = n > 0 ? 1 : 0;
  for (std::size_t i = 1; i < order.size(); ++i)
    if (key_less(order[i - 1], order[i])) ++count;
  return count;
}

namespace detail {

inline DimensionEstimate fit_counts(std::vector<ScaleCount> per_scale) {
  DimensionEstimate est;
  est.per_scale = std::move(per_scale);
  std::vector<double> xs, ys;
  for (const auto& sc : est.per_scale) {
    if (sc.saturated) continue;
    xs.push_back(std::log(1.0 / sc.rho));
    ys.push_back(std::log(static_cast<double>(sc.count)));
  }
  if (xs.size() < 2) return est;

  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  est.slope = std::max(0.0, sxy / sxx);
  est.r2 = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;

  est.slope_lo = std::numeric_limits<double>::infinity();
  est.slope_hi = 0.0;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double local = std::max(0.0, (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]));
    est.local_slopes.push_back(local);
    est.slope_lo = std::min(est.slope_lo, local);
    est.slope_hi = std::max(est.slope_hi, local);
  }
  return est;
}

}  // namespace detail

/// Box-counting (Minkowski) dimension estimate over a radius schedule.
inline DimensionEstimate minkowski_dim(const PointCloud& cloud, const ScaleSchedule& sched,
                                       const Vector& anchor = Vector()) {
  std::vector<ScaleCount> per_scale;
  per_scale.reserve(sched.size());
  for (double rho : sched.radii()) {
    const auto count = covering_number(cloud, rho, anchor);
    per_scale.push_back({rho, count, count == 1 || count == cloud.size()});
  }
  return detail::fit_counts(std::move(per_scale));
}

struct BlockDimensionEstimate {
  DimensionEstimate best;   // block with the largest slope
  std::size_t best_block = 0;
  std::vector<double> block_slopes;
};

/// Evaluates sup over a caller-supplied finite cover of per-block estimates.
inline BlockDimensionEstimate modified_minkowski_dim(const std::vector<PointCloud>& blocks,
                                                     const ScaleSchedule& sched) {
  if (blocks.empty()) throw invalid_argument("modified_minkowski_dim: empty block list");
  BlockDimensionEstimate out;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    auto est = minkowski_dim(blocks[i], sched);
    out.block_slopes.push_back(est.slope);
    if (i == 0 || est.slope > out.best.slope) {
      out.best = std::move(est);
      out.best_block = i;
    }
  }
  return out;
}

/// (V(s,1)/2^s) * sum_i d_i^s, with d^0 = 1 for every cover element.
inline double hausdorff_measure_delta(const std::vector<double>& diameters, double s) {
  if (!(s >= 0.0)) throw invalid_argument("hausdorff_measure_delta: s must be >= 0");
  if (diameters.empty()) throw invalid_argument("hausdorff_measure_delta: empty cover");
  double sum = 0.0;
  for (double d : diameters) sum += s == 0.0 ? 1.0 : std::pow(d, s);
  return ball_volume(s, 1.0) / std::pow(2.0, s) * sum;
}

/// Formula evaluated on one given cover: an upper bound on the infimum.
inline double hausdorff_measure_delta(const std::vector<PointCloud>& cover, double s) {
  if (cover.empty()) throw invalid_argument("hausdorff_measure_delta: empty cover");
  std::vector<double> diameters;
  diameters.reserve(cover.size());
  for (const auto& piece : cover) diameters.push_back(diam(piece));
  return hausdorff_measure_delta(diameters, s);
}

/// Cover of the cloud by the bounding boxes of its points inside each cell of
/// the grid with side delta/sqrt(m). Each piece has diameter at most delta.
/// Returns the piece diameters in cell order.
inline std::vector<double> grid_cover_diameters(const PointCloud& cloud, double delta) {
  if (!(delta > 0.0)) throw invalid_argument("grid_cover_diameters: delta must be > 0");
  const Index m = cloud.ambient_dim();
  const Index n = cloud.size();
  const double side = delta / std::sqrt(static_cast<double>(m));
  const Matrix& pts = cloud.points();
  std::vector<std::int64_t> keys(static_cast<std::size_t>(n * m));
  for (Index i = 0; i < n; ++i)
    for (Index d = 0; d < m; ++d)
      keys[static_cast<std::size_t>(i * m + d)] = static_cast<std::int64_t>(std::floor(pts(d, i) / side));
  auto key_less = [&](Index x, Index y) {
    return std::lexicographical_compare(keys.begin() + x * m, keys.begin() + (x + 1) * m,
                                        keys.begin() + y * m, keys.begin() + (y + 1) * m);
  };
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), key_less);

  std::vector<double> diameters;
  Vector lo = pts.col(order[0]), hi = lo;
  for (std::size_t i = 1; i <= order.size(); ++i) {
    if (i == order.size() || key_less(order[i - 1], order[i])) {
      diameters.push_back((hi - lo).norm());
      if (i == order.size()) break;
      lo = hi = pts.col(order[i]);
    } else {
      lo = lo.cwiseMin(pts.col(order[i]));
      hi = hi.cwiseMax(pts.col(order[i]));
    }
  }
  return diameters;
}

struct HausdorffSweep {
  std::vector<double> s_grid;      // increasing
  std::vector<double> delta_grid;  // decreasing
  Matrix values;                   // values(i, j) = H^{s_i}_{delta_j} on the grid cover
  double transition_s = 0.0;
  bool transition_found = false;
};

/// Sweeps H^s_delta over (s, delta) using grid covers and locates the
/// dimension where the measure stops growing as delta shrinks.
///
/// transition_s is the smallest s at which
///   H^s(finest delta) < drop_ratio * H^s(coarsest delta)
/// (or the finest value is 0), linearly interpolated in log-ratio between
/// adjacent grid points. For s below the dimension the ratio exceeds 1 and
/// above it falls below 1, so drop_ratio = 1 marks the crossover.
inline HausdorffSweep hausdorff_dim_estimate(const PointCloud& cloud, std::vector<double> s_grid,
                                             std::vector<double> delta_grid,
                                             double drop_ratio = 1.0) {
  if (s_grid.size() < 2) throw invalid_argument("hausdorff_dim_estimate: need >= 2 s values");
  if (delta_grid.size() < 2) throw invalid_argument("hausdorff_dim_estimate: need >= 2 deltas");
  for (std::size_t i = 1; i < s_grid.size(); ++i)
    if (!(s_grid[i] > s_grid[i - 1])) throw invalid_argument("hausdorff_dim_estimate: s_grid must increase");
  if (s_grid.front() < 0.0) throw invalid_argument("hausdorff_dim_estimate: s must be >= 0");
  for (std::size_t j = 0; j < delta_grid.size(); ++j) {
    if (!(delta_grid[j] > 0.0)) throw invalid_argument("hausdorff_dim_estimate: delta must be > 0");
    if (j > 0 && !(delta_grid[j] < delta_grid[j - 1]))
      throw invalid_argument("hausdorff_dim_estimate: delta_grid must decrease");
  }
  if (!(drop_ratio > 0.0)) throw invalid_argument("hausdorff_dim_estimate: drop_ratio must be > 0");

  HausdorffSweep sweep;
  sweep.values.resize(static_cast<Index>(s_grid.size()), static_cast<Index>(delta_grid.size()));
  for (std::size_t j = 0; j < delta_grid.size(); ++j) {
    const auto diameters = grid_cover_diameters(cloud, delta_grid[j]);
    for (std::size_t i = 0; i < s_grid.size(); ++i)
      sweep.values(static_cast<Index>(i), static_cast<Index>(j)) =
          hausdorff_measure_delta(diameters, s_grid[i]);
  }

  const Index fine = sweep.values.cols() - 1;
  auto log_excess = [&](std::size_t i) {
    const double v_fine = sweep.values(static_cast<Index>(i), fine);
    const double v_coarse = sweep.values(static_cast<Index>(i), 0);
    if (v_fine == 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(v_fine / v_coarse) - std::log(drop_ratio);
  };
  sweep.transition_s = s_grid.back();
  double prev = log_excess(0);
  if (prev < 0.0) {
    sweep.transition_s = s_grid.front();
    sweep.transition_found = true;
  } else {
    for (std::size_t i = 1; i < s_grid.size(); ++i) {
      const double cur = log_excess(i);
      if (cur < 0.0) {
        sweep.transition_s = std::isinf(cur)
                                 ? s_grid[i]
                                 : s_grid[i - 1] + (s_grid[i] - s_grid[i - 1]) * prev / (prev - cur);
        sweep.transition_found = true;
        break;
      }
      prev = cur;
    }
  }
  sweep.s_grid = std::move(s_grid);
  sweep.delta_grid = std::move(delta_grid);
  return sweep;
}

/// min(k,l)-dimensional Jacobian of a differential D (l x k).
inline double jacobian(const Matrix& D) {
  if (!D.allFinite()) throw invalid_argument("jacobian: non-finite entries");
  const double det = D.rows() < D.cols() ? (D * D.transpose()).determinant()
                                         : (D.transpose() * D).determinant();
  if (det < 0.0 && -det < 1e-12) return 0.0;
  return std::sqrt(std::max(det, 0.0));
}

// ---- serialization --------------------------------------------------------

inline void write_csv(std::ostream& out, const DimensionEstimate& est) {
  out << "rho,count\n";
  for (const auto& sc : est.per_scale) out << format_double(sc.rho) << ',' << sc.count << '\n';
}

inline nlohmann::json to_json(const DimensionEstimate& est) {
  return {{"slope", est.slope},
          {"slope_lo", est.slope_lo},
          {"slope_hi", est.slope_hi},
          {"r2", est.r2},
          {"saturated_scales", est.saturated_scales()}};
}

inline void write_csv(std::ostream& out, const HausdorffSweep& sweep) {
  out << "s,delta,value\n";
  for (std::size_t i = 0; i < sweep.s_grid.size(); ++i)
    for (std::size_t j = 0; j < sweep.delta_grid.size(); ++j)
      out << format_double(sweep.s_grid[i]) << ',' << format_double(sweep.delta_grid[j]) << ','
          << format_double(sweep.values(static_cast<Index>(i), static_cast<Index>(j))) << '\n';
}

}  // namespace alc
