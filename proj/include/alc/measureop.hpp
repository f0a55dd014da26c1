#pragma once

// Gaussian measurement operators, numerical kernels and empirical
// null-space-property probes.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "alc/error.hpp"
#include "alc/numfmt.hpp"
#include "alc/parallel.hpp"
#include "alc/rng.hpp"
#include "alc/setgen.hpp"

namespace alc {

/// Dense n x m operator with the seed it was drawn from.
class MeasurementMatrix {
 public:
  MeasurementMatrix(Matrix entries, std::uint64_t seed = 0) : entries_(std::move(entries)), seed_(seed) {
    if (entries_.rows() < 1 || entries_.cols() < 1)
      throw invalid_argument("MeasurementMatrix: dimensions must be positive");
    if (entries_.rows() > entries_.cols()) throw invalid_argument("MeasurementMatrix: need n <= m");
    if (!entries_.allFinite()) throw invalid_argument("MeasurementMatrix: entries must be finite");
  }

  Index n() const noexcept { return entries_.rows(); }
  Index m() const noexcept { return entries_.cols(); }
  const Matrix& entries() const noexcept { return entries_; }
  std::uint64_t seed() const noexcept { return seed_; }

  MeasurementMatrix scaled(double c) const { return MeasurementMatrix(c * entries_, seed_); }

 private:
  Matrix entries_;
  std::uint64_t seed_;
};

/// i.i.d. standard normal entries. Entry (i, j) is drawn from counters
/// 2(i*m + j) and 2(i*m + j) + 1, so a taller draw with the same seed
/// extends a shorter one row by row.
inline MeasurementMatrix sample_matrix(Index n, Index m, std::uint64_t seed) {
  if (n < 1 || m < 1) throw invalid_argument("sample_matrix: dimensions must be positive");
  if (n > m) throw invalid_argument("sample_matrix: need n <= m");
  CounterRng rng(seed);
  Matrix a(n, m);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < m; ++j) a(i, j) = rng.normal();
  return MeasurementMatrix(std::move(a), seed);
}

inline Vector apply(const MeasurementMatrix& a, const Vector& x) {
  if (x.size() != a.m())
    throw invalid_argument("apply: vector length " + std::to_string(x.size()) + " != m = " +
                           std::to_string(a.m()));
  return a.entries() * x;
}

/// Singular values below rel_tol * sigma_max count as zero.
inline Index numerical_rank(const Matrix& a, double rel_tol = 1e-10) {
  const Vector sv = Eigen::JacobiSVD<Matrix>(a).singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > rel_tol * sv(0)) ++rank;
  return rank;
}

struct KernelBasis {
  Matrix vectors;  // m x (m - rank), orthonormal columns
  double tol = 0.0;
  Index rank = 0;

  Index size() const noexcept { return vectors.cols(); }
};

/// Orthonormal basis of the numerical null space. Singular values at or below
/// `tol` are treated as zero; by default tol = 1e-10 * sigma_max.
inline KernelBasis kernel_basis(const MeasurementMatrix& a, std::optional<double> tol = {}) {
  if (tol && !(*tol > 0.0)) throw invalid_argument("kernel_basis: tol must be > 0");
  Eigen::JacobiSVD<Matrix> svd(a.entries(), Eigen::ComputeFullV);
  const Vector& sv = svd.singularValues();
  const double sigma_max = sv.size() ? sv(0) : 0.0;
  KernelBasis kb;
  kb.tol = tol ? *tol : (sigma_max > 0.0 ? 1e-10 * sigma_max : 1e-10);
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > kb.tol) ++kb.rank;
  kb.vectors = svd.matrixV().rightCols(a.m() - kb.rank);
  return kb;
}

/// Result of sampling unit vectors from a signal family and recording the
/// smallest image norm. Empirical evidence only: a positive min_gain says no
/// sampled direction fell in the kernel.
struct NspReport {
  std::int64_t trials = 0;
  double min_gain = std::numeric_limits<double>::infinity();
  Vector argmin_u;
  std::int64_t argmin_trial = -1;
};

namespace detail {

inline constexpr int kMaxRedraws = 64;

template <class Family>
Vector draw_nonzero(Family& family, std::uint64_t seed) {
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    Vector x = family(mix(seed, static_cast<std::uint64_t>(attempt)));
    if (x.squaredNorm() > 0.0) return x;
  }
  throw invalid_argument("signal family produced only zero vectors");
}

}  // namespace detail

/// Signal family: s-sparse Gaussian vectors in R^m.
inline auto sparse_family(Index m, Index s) {
  return [m, s](std::uint64_t seed) { return embed(gen_sparse(m, s, seed)); };
}

/// Signal family: Kronecker vectors a (x) b with |supp a| = r, |supp b| = t.
inline auto kron_family(Index k, Index l, Index r, Index t) {
  return [k, l, r, t](std::uint64_t seed) { return embed(gen_kron(k, l, r, t, seed)); };
}

/// Signal family: Gaussian values on a fixed support.
inline auto fixed_support_family(Index m, std::vector<Index> support) {
  for (Index i : support)
    if (i < 0 || i >= m) throw invalid_argument("fixed_support_family: index out of range");
  return [m, support = std::move(support)](std::uint64_t seed) {
    CounterRng rng(seed);
    Vector x = Vector::Zero(m);
    for (Index i : support) x(i) = rng.nonzero_normal();
    return x;
  };
}

/// min over `trials` draws u (normalized) of ||A u||. Trial i draws from
/// mix(seed, i); ties keep the lowest trial index.
template <class Family>
NspReport nsp_min_gain(const MeasurementMatrix& a, Family family, std::int64_t trials,
                       std::uint64_t seed, unsigned threads = 1) {
  if (trials < 1) throw invalid_argument("nsp_min_gain: trials must be >= 1");
  std::vector<double> gains(static_cast<std::size_t>(trials));
  parallel_for(gains.size(), threads, [&](std::size_t i) {
    Vector u = detail::draw_nonzero(family, mix(seed, i));
    u.normalize();
    gains[i] = apply(a, u).norm();
  });
  NspReport report;
  report.trials = trials;
  for (std::size_t i = 0; i < gains.size(); ++i)
    if (gains[i] < report.min_gain) {
      report.min_gain = gains[i];
      report.argmin_trial = static_cast<std::int64_t>(i);
    }
  report.argmin_u = detail::draw_nonzero(family, mix(seed, static_cast<std::uint64_t>(report.argmin_trial)));
  report.argmin_u.normalize();
  return report;
}

/// Injectivity probe on sampled pairs: min over `pairs` draws of
/// ||A(x1 - x2)|| / ||x1 - x2||. Pairs with identical embeddings are skipped.
template <class Family>
NspReport pair_min_gain(const MeasurementMatrix& a, Family family, std::int64_t pairs,
                        std::uint64_t seed, unsigned threads = 1) {
  if (pairs < 1) throw invalid_argument("pair_min_gain: pairs must be >= 1");
  auto difference = [&](std::uint64_t s) -> Vector {
    for (int attempt = 0; attempt < detail::kMaxRedraws; ++attempt) {
      const std::uint64_t base = mix(s, static_cast<std::uint64_t>(attempt));
      Vector d = family(mix(base, 0)) - family(mix(base, 1));
      if (d.squaredNorm() > 0.0) return d.normalized();
    }
    throw invalid_argument("pair_min_gain: family produced only identical pairs");
  };
  std::vector<double> gains(static_cast<std::size_t>(pairs));
  parallel_for(gains.size(), threads, [&](std::size_t i) { gains[i] = apply(a, difference(mix(seed, i))).norm(); });
  NspReport report;
  report.trials = pairs;
  for (std::size_t i = 0; i < gains.size(); ++i)
    if (gains[i] < report.min_gain) {
      report.min_gain = gains[i];
      report.argmin_trial = static_cast<std::int64_t>(i);
    }
  report.argmin_u = difference(mix(seed, static_cast<std::uint64_t>(report.argmin_trial)));
  return report;
}

/// Unit vector supported on {0, ..., n} with A u = 0, for s >= n + 1.
/// Returns nullopt when s <= n: no sparse kernel vector is guaranteed then.
inline std::optional<Vector> sparse_kernel_witness(const MeasurementMatrix& a, Index s) {
  const Index n = a.n();
  if (s <= n) return std::nullopt;
  if (n + 1 > a.m()) throw invalid_argument("sparse_kernel_witness: need n + 1 <= m");
  const Matrix sub = a.entries().leftCols(n + 1);
  Eigen::JacobiSVD<Matrix> svd(sub, Eigen::ComputeFullV);
  Vector u = Vector::Zero(a.m());
  u.head(n + 1) = svd.matrixV().col(n);
  u.normalize();
  return u;
}

// ---- serialization --------------------------------------------------------

/// Header line `# n m seed`, then n comma-separated rows.
inline void write_csv(std::ostream& out, const MeasurementMatrix& a) {
  out << "# " << a.n() << ' ' << a.m() << ' ' << a.seed() << '\n';
  for (Index i = 0; i < a.n(); ++i) {
    for (Index j = 0; j < a.m(); ++j) out << (j ? "," : "") << format_double(a.entries()(i, j));
    out << '\n';
  }
}

inline MeasurementMatrix read_matrix_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0)
    throw invalid_argument("matrix CSV: missing '# n m seed' header");
  std::istringstream header(line.substr(2));
  Index n = 0, m = 0;
  std::uint64_t seed = 0;
  if (!(header >> n >> m >> seed) || n < 1 || m < 1)
    throw invalid_argument("matrix CSV: malformed header");
  Matrix a(n, m);
  for (Index i = 0; i < n; ++i) {
    if (!std::getline(in, line)) throw invalid_argument("matrix CSV: too few rows");
    std::stringstream row(line);
    std::string cell;
    Index j = 0;
    while (std::getline(row, cell, ',')) {
      if (j >= m) throw invalid_argument("matrix CSV: too many columns");
      a(i, j++) = parse_double(cell);
    }
    if (j != m) throw invalid_argument("matrix CSV: too few columns");
  }
  return MeasurementMatrix(std::move(a), seed);
}

inline nlohmann::json to_json(const NspReport& r) {
  return {{"trials", r.trials},
          {"min_gain", r.min_gain},
          {"argmin_u", std::vector<double>(r.argmin_u.data(), r.argmin_u.data() + r.argmin_u.size())}};
}

}  // namespace alc
