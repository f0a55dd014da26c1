#pragma once

// Example sets, structured random signals and elementary geometry.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "alc/error.hpp"
#include "alc/numfmt.hpp"
#include "alc/rng.hpp"

namespace alc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Finite sample of points in R^m. Points are stored as columns.
class PointCloud {
 public:
  PointCloud(Matrix points, std::string label = {}, std::optional<std::uint64_t> seed = {})
      : points_(std::move(points)), label_(std::move(label)), seed_(seed) {
    if (points_.rows() < 1) throw invalid_argument("PointCloud: ambient dimension must be >= 1");
    if (points_.cols() < 1) throw invalid_argument("PointCloud: needs at least one point");
    if (!points_.allFinite()) throw invalid_argument("PointCloud: coordinates must be finite");
  }

  /// Builds a one-dimensional cloud from scalar samples.
  static PointCloud from_scalars(const std::vector<double>& xs, std::string label = {},
                                 std::optional<std::uint64_t> seed = {}) {
    Matrix pts(1, static_cast<Index>(xs.size()));
    for (std::size_t i = 0; i < xs.size(); ++i) pts(0, static_cast<Index>(i)) = xs[i];
    return PointCloud(std::move(pts), std::move(label), seed);
  }

  Index ambient_dim() const noexcept { return points_.rows(); }
  Index size() const noexcept { return points_.cols(); }
  const Matrix& points() const noexcept { return points_; }
  auto point(Index i) const { return points_.col(i); }
  const std::string& label() const noexcept { return label_; }
  std::optional<std::uint64_t> seed() const noexcept { return seed_; }

 private:
  Matrix points_;
  std::string label_;
  std::optional<std::uint64_t> seed_;
};

/// One chart of a rectifiable set: parameter samples and their images.
struct Chart {
  Matrix params;  // param_dim x count
  Matrix images;  // ambient_dim x count
};

/// Countable (here: finite) union of Lipschitz chart images.
class ChartedSet {
 public:
  ChartedSet(Index param_dim, Index ambient_dim, std::vector<Chart> charts = {})
      : param_dim_(param_dim), ambient_dim_(ambient_dim) {
    if (param_dim < 1 || ambient_dim < 1)
      throw invalid_argument("ChartedSet: dimensions must be positive");
    if (param_dim > ambient_dim) throw invalid_argument("ChartedSet: param_dim > ambient_dim");
    for (auto& c : charts) add(std::move(c));
  }

  void add(Chart chart) {
    if (chart.params.rows() != param_dim_ || chart.images.rows() != ambient_dim_)
      throw invalid_argument("ChartedSet: chart dimension mismatch");
    if (chart.params.cols() != chart.images.cols())
      throw invalid_argument("ChartedSet: |param_grid| != |images|");
    charts_.push_back(std::move(chart));
  }

  Index param_dim() const noexcept { return param_dim_; }
  Index ambient_dim() const noexcept { return ambient_dim_; }
  const std::vector<Chart>& charts() const noexcept { return charts_; }

  /// All image samples of all charts as one cloud.
  PointCloud pooled(std::string label = "charted") const {
    Index total = 0;
    for (const auto& c : charts_) total += c.images.cols();
    Matrix pts(ambient_dim_, total);
    Index at = 0;
    for (const auto& c : charts_) {
      pts.middleCols(at, c.images.cols()) = c.images;
      at += c.images.cols();
    }
    return PointCloud(std::move(pts), std::move(label));
  }

 private:
  Index param_dim_;
  Index ambient_dim_;
  std::vector<Chart> charts_;
};

/// Samples `phi` on a regular grid of `per_axis`^d points over the box [lo, hi].
/// `phi` maps an Eigen vector of length d to a vector of length ambient_dim.
template <class Map>
Chart chart_grid(Map&& phi, const Vector& lo, const Vector& hi, Index per_axis) {
  if (lo.size() != hi.size() || lo.size() < 1) throw invalid_argument("chart_grid: bad box");
  if (per_axis < 2) throw invalid_argument("chart_grid: per_axis must be >= 2");
  const Index d = lo.size();
  Index count = 1;
  for (Index i = 0; i < d; ++i) count *= per_axis;
  Chart chart;
  chart.params.resize(d, count);
  std::vector<Index> digit(static_cast<std::size_t>(d), 0);
  for (Index c = 0; c < count; ++c) {
    for (Index i = 0; i < d; ++i) {
      const double frac = static_cast<double>(digit[static_cast<std::size_t>(i)]) /
                          static_cast<double>(per_axis - 1);
      chart.params(i, c) = lo(i) + frac * (hi(i) - lo(i));
    }
    for (Index i = 0; i < d; ++i) {
      if (++digit[static_cast<std::size_t>(i)] < per_axis) break;
      digit[static_cast<std::size_t>(i)] = 0;
    }
  }
  for (Index c = 0; c < count; ++c) {
    Vector img = phi(Vector(chart.params.col(c)));
    if (c == 0) chart.images.resize(img.size(), count);
    chart.images.col(c) = img;
  }
  return chart;
}

/// s-sparse vector in R^m: sorted support and nonzero values.
struct SparseSignal {
  Index m = 0;
  std::vector<Index> support;
  std::vector<double> values;
};

/// x = a (x) b with a in R^k, b in R^l. The first nonzero of a equals 1.
struct KroneckerSignal {
  Index k = 0;
  Index l = 0;
  std::vector<Index> a_support;
  std::vector<double> a_values;
  std::vector<Index> b_support;
  std::vector<double> b_values;
};

using StructuredSignal = std::variant<SparseSignal, KroneckerSignal>;

namespace detail {

/// Uniform size-s subset of [0, n), sorted. Partial Fisher-Yates.
inline std::vector<Index> draw_subset(CounterRng& rng, Index n, Index s) {
  std::vector<Index> pool(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
  for (Index i = 0; i < s; ++i) {
    const auto j = i + static_cast<Index>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
  }
  pool.resize(static_cast<std::size_t>(s));
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace detail

/// Uniform support of size s, i.i.d. standard normal (nonzero) values.
inline SparseSignal gen_sparse(Index m, Index s, std::uint64_t seed) {
  if (m < 1) throw invalid_argument("gen_sparse: m must be >= 1");
  if (s < 1 || s > m) throw invalid_argument("gen_sparse: need 1 <= s <= m");
  CounterRng rng(seed);
  SparseSignal sig;
  sig.m = m;
  sig.support = detail::draw_subset(rng, m, s);
  sig.values.reserve(static_cast<std::size_t>(s));
  for (Index i = 0; i < s; ++i) sig.values.push_back(rng.nonzero_normal());
  return sig;
}

/// Random Kronecker signal, a normalized so its first nonzero entry is 1.
inline KroneckerSignal gen_kron(Index k, Index l, Index r, Index t, std::uint64_t seed) {
  if (k < 1 || l < 1 || r < 1 || t < 1) throw invalid_argument("gen_kron: sizes must be >= 1");
  if (r > k || t > l) throw invalid_argument("gen_kron: need r <= k and t <= l");
  CounterRng rng(seed);
  KroneckerSignal sig;
  sig.k = k;
  sig.l = l;
  sig.a_support = detail::draw_subset(rng, k, r);
  for (Index i = 0; i < r; ++i) sig.a_values.push_back(rng.nonzero_normal());
  sig.b_support = detail::draw_subset(rng, l, t);
  for (Index j = 0; j < t; ++j) sig.b_values.push_back(rng.nonzero_normal());
  const double scale = sig.a_values.front();
  for (auto& v : sig.a_values) v /= scale;
  for (auto& v : sig.b_values) v *= scale;
  sig.a_values.front() = 1.0;
  return sig;
}

inline Vector embed(const SparseSignal& sig) {
  Vector x = Vector::Zero(sig.m);
  for (std::size_t i = 0; i < sig.support.size(); ++i) x(sig.support[i]) = sig.values[i];
  return x;
}

/// Entry i*l + j holds a_i * b_j (row-major reshape to k x l).
inline Vector embed(const KroneckerSignal& sig) {
  Vector x = Vector::Zero(sig.k * sig.l);
  for (std::size_t i = 0; i < sig.a_support.size(); ++i)
    for (std::size_t j = 0; j < sig.b_support.size(); ++j)
      x(sig.a_support[i] * sig.l + sig.b_support[j]) = sig.a_values[i] * sig.b_values[j];
  return x;
}

inline Vector embed(const StructuredSignal& sig) {
  return std::visit([](const auto& s) { return embed(s); }, sig);
}

/// F = {0} u {1/i : i = 2..count+1}.
inline PointCloud gen_set_f(Index count) {
  if (count < 1) throw invalid_argument("gen_set_f: count must be >= 1");
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(count) + 1);
  xs.push_back(0.0);
  for (Index i = 2; i <= count + 1; ++i) xs.push_back(1.0 / static_cast<double>(i));
  return PointCloud::from_scalars(xs, "set_f");
}

/// Left endpoints of the 2^depth intervals of the middle-thirds construction.
inline PointCloud gen_cantor(int depth) {
  if (depth < 1) throw invalid_argument("gen_cantor: depth must be >= 1");
  if (depth > 26) throw resource_limit("gen_cantor: depth > 26 exceeds the point budget");
  const std::size_t count = std::size_t{1} << depth;
  std::vector<double> xs(count);
  for (std::size_t code = 0; code < count; ++code) {
    // bit (depth-1-i) of code selects ternary digit i+1 in {0, 2}
    double x = 0.0;
    double place = 1.0 / 3.0;
    for (int i = depth - 1; i >= 0; --i) {
      if ((code >> i) & 1u) x += 2.0 * place;
      place /= 3.0;
    }
    xs[code] = x;
  }
  return PointCloud::from_scalars(xs, "cantor");
}

/// `count` uniform points on [0,1] x {0}^(m-1).
inline PointCloud gen_segment(Index count, Index ambient_dim, std::uint64_t seed) {
  if (count < 1 || ambient_dim < 1) throw invalid_argument("gen_segment: bad size");
  CounterRng rng(seed);
  Matrix pts = Matrix::Zero(ambient_dim, count);
  for (Index i = 0; i < count; ++i) pts(0, i) = rng.uniform();
  return PointCloud(std::move(pts), "segment", seed);
}

/// `count` uniform points on the filled unit square [0,1]^2 x {0}^(m-2).
inline PointCloud gen_square(Index count, Index ambient_dim, std::uint64_t seed) {
  if (count < 1 || ambient_dim < 2) throw invalid_argument("gen_square: bad size");
  CounterRng rng(seed);
  Matrix pts = Matrix::Zero(ambient_dim, count);
  for (Index i = 0; i < count; ++i) {
    pts(0, i) = rng.uniform();
    pts(1, i) = rng.uniform();
  }
  return PointCloud(std::move(pts), "square", seed);
}

/// `count` uniform points in the cube [0,1]^m.
inline PointCloud gen_cube(Index count, Index ambient_dim, std::uint64_t seed) {
  if (count < 1 || ambient_dim < 1) throw invalid_argument("gen_cube: bad size");
  CounterRng rng(seed);
  Matrix pts(ambient_dim, count);
  for (Index i = 0; i < count; ++i)
    for (Index d = 0; d < ambient_dim; ++d) pts(d, i) = rng.uniform();
  return PointCloud(std::move(pts), "cube", seed);
}

/// Splits a one-dimensional cloud into the points lying in each closed
/// interval [lo, hi]. Empty intervals are dropped.
inline std::vector<PointCloud> interval_blocks(const PointCloud& cloud,
                                               const std::vector<std::pair<double, double>>& intervals) {
  if (cloud.ambient_dim() != 1) throw invalid_argument("interval_blocks: cloud must be one-dimensional");
  std::vector<PointCloud> blocks;
  for (const auto& [lo, hi] : intervals) {
    std::vector<double> xs;
    for (Index i = 0; i < cloud.size(); ++i) {
      const double x = cloud.points()(0, i);
      if (x >= lo && x <= hi) xs.push_back(x);
    }
    if (!xs.empty()) blocks.push_back(PointCloud::from_scalars(xs, cloud.label()));
  }
  return blocks;
}

/// Cover of F by B_i = F n [1/(i+1), 1/i] for i = 1..finite, followed by the
/// residual block F n [0, 1/(finite+1)] as the last element.
inline std::vector<PointCloud> set_f_blocks(const PointCloud& f, Index finite = 50) {
  if (finite < 1) throw invalid_argument("set_f_blocks: need at least one finite block");
  std::vector<std::pair<double, double>> intervals;
  for (Index i = 1; i <= finite; ++i)
    intervals.emplace_back(1.0 / static_cast<double>(i + 1), 1.0 / static_cast<double>(i));
  intervals.emplace_back(0.0, 1.0 / static_cast<double>(finite + 1));
  return interval_blocks(f, intervals);
}

/// Largest pairwise Euclidean distance. O(N^2).
inline double diam(const Matrix& points) {
  double best = 0.0;
  const Index n = points.cols();
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      best = std::max(best, (points.col(i) - points.col(j)).squaredNorm());
  return std::sqrt(best);
}

inline double diam(const PointCloud& cloud) { return diam(cloud.points()); }

/// Volume of the k-dimensional ball of radius rho; k may be fractional.
inline double ball_volume(double k, double rho) {
  if (!(k >= 0.0)) throw invalid_argument("ball_volume: k must be >= 0");
  if (!(rho > 0.0)) throw invalid_argument("ball_volume: rho must be > 0");
  return std::pow(std::numbers::pi, k / 2.0) * std::pow(rho, k) / std::tgamma(k / 2.0 + 1.0);
}

// ---- CSV ----------------------------------------------------------------

/// One point per row, header x0..x{m-1}, shortest round-trip number format.
inline void write_csv(std::ostream& out, const PointCloud& cloud) {
  const Index m = cloud.ambient_dim();
  for (Index d = 0; d < m; ++d) out << (d ? "," : "") << 'x' << d;
  out << '\n';
  for (Index i = 0; i < cloud.size(); ++i) {
    for (Index d = 0; d < m; ++d) out << (d ? "," : "") << format_double(cloud.points()(d, i));
    out << '\n';
  }
}

inline PointCloud read_point_cloud_csv(std::istream& in, std::string label = {}) {
  std::string line;
  if (!std::getline(in, line)) throw invalid_argument("point cloud CSV: missing header");
  Index m = 0;
  {
    std::stringstream header(line);
    std::string col;
    while (std::getline(header, col, ',')) {
      if (trim(col) != "x" + std::to_string(m))
        throw invalid_argument("point cloud CSV: unexpected header column '" + col + "'");
      ++m;
    }
  }
  if (m == 0) throw invalid_argument("point cloud CSV: empty header");
  std::vector<double> flat;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::stringstream row(line);
    std::string cell;
    Index cols = 0;
    while (std::getline(row, cell, ',')) {
      flat.push_back(parse_double(cell));
      ++cols;
    }
    if (cols != m) throw invalid_argument("point cloud CSV: row has wrong column count");
  }
  const Index n = static_cast<Index>(flat.size()) / m;
  Matrix pts = Eigen::Map<Matrix>(flat.data(), m, n);
  return PointCloud(std::move(pts), std::move(label));
}

}  // namespace alc
