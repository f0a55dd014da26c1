#pragma once

// Brute-force reference for exhaustive sparse decoding, written without the
// library's solver: supports come from bitmasks, least squares from the
// normal equations solved by Cramer's rule (Cramer on A_S directly when the
// system is square). Only |support| <= 2.

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace oracle {

struct Fit {
  std::vector<long> support;
  std::vector<double> values;
};

inline double dot(const Eigen::MatrixXd& a, long i, const Eigen::VectorXd& v) {
  double s = 0.0;
  for (long r = 0; r < a.rows(); ++r) s += a(r, i) * v(r);
  return s;
}

inline double dot_cols(const Eigen::MatrixXd& a, long i, long j) {
  double s = 0.0;
  for (long r = 0; r < a.rows(); ++r) s += a(r, i) * a(r, j);
  return s;
}

/// Every support of size <= s whose fit is exact (residual <= tol*max(1,|y|))
/// with all entries of magnitude >= zero_threshold, sorted lexicographically.
inline std::vector<Fit> exact_fits(const Eigen::MatrixXd& a, const Eigen::VectorXd& y, int s,
                                   double tol = 1e-9, double zero_threshold = 1e-8) {
  if (s < 0 || s > 2) throw std::invalid_argument("oracle handles s <= 2 only");
  const long m = a.cols();
  if (m > 20) throw std::invalid_argument("oracle handles m <= 20 only");
  double ynorm2 = 0.0;
  for (long r = 0; r < y.size(); ++r) ynorm2 += y(r) * y(r);
  const double accept = tol * std::max(1.0, std::sqrt(ynorm2));

  std::vector<Fit> fits;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    const int size = std::popcount(mask);
    if (size > s) continue;
    std::vector<long> sup;
    for (long i = 0; i < m; ++i)
      if (mask & (1u << i)) sup.push_back(i);
    std::vector<double> z;
    if (size == 1) {
      z = {dot(a, sup[0], y) / dot_cols(a, sup[0], sup[0])};
    } else if (size == 2 && a.rows() == 2) {
      // square: Cramer on A_S itself, the Gram matrix would square its condition
      const double det = a(0, sup[0]) * a(1, sup[1]) - a(0, sup[1]) * a(1, sup[0]);
      if (std::abs(det) < 1e-300) continue;
      z = {(y(0) * a(1, sup[1]) - a(0, sup[1]) * y(1)) / det, (a(0, sup[0]) * y(1) - y(0) * a(1, sup[0])) / det};
    } else if (size == 2) {
      const double g00 = dot_cols(a, sup[0], sup[0]), g01 = dot_cols(a, sup[0], sup[1]);
      const double g11 = dot_cols(a, sup[1], sup[1]);
      const double b0 = dot(a, sup[0], y), b1 = dot(a, sup[1], y);
      const double det = g00 * g11 - g01 * g01;
      if (std::abs(det) < 1e-300) continue;
      z = {(b0 * g11 - g01 * b1) / det, (g00 * b1 - g01 * b0) / det};
    }
    double res2 = 0.0;
    for (long r = 0; r < y.size(); ++r) {
      double v = -y(r);
      for (std::size_t j = 0; j < sup.size(); ++j) v += a(r, sup[j]) * z[j];
      res2 += v * v;
    }
    if (std::sqrt(res2) > accept) continue;
    if (std::any_of(z.begin(), z.end(), [&](double v) { return std::abs(v) < zero_threshold; })) continue;
    fits.push_back({sup, z});
  }
  std::sort(fits.begin(), fits.end(), [](const Fit& l, const Fit& r) { return l.support < r.support; });
  return fits;
}

}  // namespace oracle
