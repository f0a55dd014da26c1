#pragma once

// Multi-start damped Gauss-Newton decoder for Kronecker signals a (x) b.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "alc/decode/l0.hpp"
#include "alc/decode/outcome.hpp"
#include "alc/error.hpp"
#include "alc/measureop.hpp"
#include "alc/rng.hpp"

namespace alc {

inline constexpr double kMaxSupportPairs = 1e6;

/// Levenberg damping schedule shared by the bilinear solvers.
struct DampingSchedule {
  double initial = 1e-3;
  double shrink = 0.5;   // after an accepted step
  double grow = 4.0;     // after a rejected step
  double give_up = 1e12;
  int max_iterations = 200;
  /// A start is abandoned when `window` iterations fail to shrink the cost
  /// below progress_ratio times its value at the start of the window.
  int window = 5;
  double progress_ratio = 0.9;
};

struct KronDecodeOptions : DecodeOptions {
  int starts = 20;
  std::uint64_t seed = 0;
  DampingSchedule damping{};
};

namespace detail {

/// Bilinear least-squares problem on one support pair:
///   minimize || sum_i a_i B_i b - y ||,  a_0 = 1,
/// where B_i (n x t) are the measurement columns of row i of the support block.
///
/// For fixed a the problem is linear in b, so b is eliminated by least squares
/// and damped Gauss-Newton runs on the r-1 free entries of a (variable
/// projection with the Kaufman Jacobian column (I - P) B_i b).
class BilinearFit {
 public:
  BilinearFit(const Matrix& block, const Vector& y, Index r, Index t)
      : block_(block), y_(y), r_(r), t_(t),
        jac_(y.size(), r - 1), mixed_(y.size(), t), trial_mixed_(y.size(), t), gram_(t, t), chol_(t),
        trial_chol_(t), normal_(r - 1, r - 1), ldlt_(r - 1), b_(t), trial_b_(t), coeff_(t),
        residual_(y.size()), trial_residual_(y.size()), column_(y.size()), gradient_(r - 1),
        step_(r - 1), a_free_(r - 1), trial_(r - 1) {}

  /// Runs damped Gauss-Newton from the a part of theta = [a_1..a_{r-1}, b];
  /// writes the final a and its least-squares b back. Returns the residual norm.
  double minimize(Vector& theta, double accept, const DampingSchedule& sched) {
    a_free_ = theta.head(r_ - 1);
    double cost_now = reduced_cost(a_free_, mixed_, chol_, b_, residual_);
    double lambda = sched.initial;
    double checkpoint = cost_now;
    for (int it = 0; it < sched.max_iterations && r_ > 1; ++it) {
      if (std::sqrt(cost_now) <= accept) break;
      if (it > 0 && it % sched.window == 0) {
        if (cost_now > sched.progress_ratio * checkpoint) break;
        checkpoint = cost_now;
      }
      for (Index i = 1; i < r_; ++i) {
        column_.noalias() = block_.middleCols(i * t_, t_) * b_;
        coeff_.noalias() = mixed_.transpose() * column_;
        chol_.solveInPlace(coeff_);
        jac_.col(i - 1) = column_;
        jac_.col(i - 1).noalias() -= mixed_ * coeff_;
      }
      normal_.noalias() = jac_.transpose() * jac_;
      gradient_.noalias() = jac_.transpose() * residual_;
      normal_.diagonal().array() += lambda;
      ldlt_.compute(normal_);
      step_ = gradient_;
      ldlt_.solveInPlace(step_);
      trial_ = a_free_ - step_;
      const double cost_trial = reduced_cost(trial_, trial_mixed_, trial_chol_, trial_b_, trial_residual_);
      if (cost_trial < cost_now) {
        a_free_.swap(trial_);
        mixed_.swap(trial_mixed_);
        std::swap(chol_, trial_chol_);
        b_.swap(trial_b_);
        residual_.swap(trial_residual_);
        cost_now = cost_trial;
        lambda *= sched.shrink;
      } else {
        lambda *= sched.grow;
        if (lambda > sched.give_up) break;
      }
    }
    // Final b from an orthogonal factorization; the Gram solve above squares
    // the condition number.
    b_ = mixed_.colPivHouseholderQr().solve(y_);
    residual_.noalias() = mixed_ * b_ - y_;
    theta.head(r_ - 1) = a_free_;
    theta.tail(t_) = b_;
    return residual_.norm();
  }

 private:
  // mixed = sum_i a_i B_i; b = argmin ||mixed b - y|| via the Gram matrix.
  double reduced_cost(const Vector& a_free, Matrix& mixed, Eigen::LLT<Matrix>& chol, Vector& b,
                      Vector& residual) {
    mixed = block_.leftCols(t_);
    for (Index i = 1; i < r_; ++i) mixed += a_free(i - 1) * block_.middleCols(i * t_, t_);
    gram_.noalias() = mixed.transpose() * mixed;
    chol.compute(gram_);
    if (chol.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
    b.noalias() = mixed.transpose() * y_;
    chol.solveInPlace(b);
    residual.noalias() = mixed * b;
    residual -= y_;
    return residual.squaredNorm();
  }

  const Matrix& block_;
  const Vector& y_;
  Index r_, t_;
  Matrix jac_, mixed_, trial_mixed_, gram_;
  Eigen::LLT<Matrix> chol_, trial_chol_;
  Matrix normal_;
  Eigen::LDLT<Matrix> ldlt_;
  Vector b_, trial_b_, coeff_, residual_, trial_residual_, column_, gradient_, step_, a_free_, trial_;
};

inline KroneckerSignal make_kron(Index k, Index l, const std::vector<Index>& sa,
                                 const std::vector<Index>& sb, const Vector& theta) {
  const auto r = static_cast<Index>(sa.size());
  const auto t = static_cast<Index>(sb.size());
  KroneckerSignal sig;
  sig.k = k;
  sig.l = l;
  sig.a_support = sa;
  sig.b_support = sb;
  sig.a_values.push_back(1.0);
  for (Index i = 1; i < r; ++i) sig.a_values.push_back(theta(i - 1));
  for (Index j = 0; j < t; ++j) sig.b_values.push_back(theta(r - 1 + j));
  return sig;
}

}  // namespace detail

/// Decodes y = A (a (x) b) with |supp a| = r, |supp b| = t and a's first
/// nonzero fixed to 1. Every support pair gets `starts` seeded Gauss-Newton
/// runs; fits within tol * max(1, ||y||) with all factor entries nonzero are
/// accepted. Unique when all accepted fits share one embedding.
/// Gauss-Newton can stall in local minima, so no_solution is a possible and
/// counted outcome.
inline DecodeOutcome kron_decode(const MeasurementMatrix& a, const Vector& y, Index k, Index l,
                                 Index r, Index t, const KronDecodeOptions& opt = {}) {
  const Index n = a.n();
  if (y.size() != n) throw invalid_argument("kron_decode: y has wrong length");
  if (k < 1 || l < 1 || r < 1 || t < 1 || r > k || t > l)
    throw invalid_argument("kron_decode: need 1 <= r <= k and 1 <= t <= l");
  if (a.m() != k * l) throw invalid_argument("kron_decode: A must have k*l columns");
  if (n < r + t) throw invalid_argument("kron_decode: need n >= r + t");
  if (opt.starts < 1) throw invalid_argument("kron_decode: starts must be >= 1");
  if (binomial(k, r) * binomial(l, t) > kMaxSupportPairs)
    throw resource_limit("kron_decode: support pairs exceed the 1e6 budget");

  DecodeOutcome out;
  if (y.squaredNorm() == 0.0) {
    out.status = DecodeStatus::unique;
    out.estimate = Vector::Zero(k * l);
    out.residual = 0.0;
    out.candidate_count = out.distinct_count = 1;
    return out;
  }

  const double y_scale = std::max(1.0, y.norm());
  const double accept = opt.tol * y_scale;
  std::vector<Candidate> accepted;
  std::vector<KroneckerSignal> accepted_factors;
  Matrix block(n, r * t);
  Vector theta(r + t - 1);
  double best_residual = std::numeric_limits<double>::infinity();
  std::uint64_t pair_index = 0;

  for_each_subset(k, r, [&](const std::vector<Index>& sa) {
    for_each_subset(l, t, [&](const std::vector<Index>& sb) {
      for (Index i = 0; i < r; ++i)
        for (Index j = 0; j < t; ++j)
          block.col(i * t + j) = a.entries().col(sa[static_cast<std::size_t>(i)] * l + sb[static_cast<std::size_t>(j)]);
      detail::BilinearFit fit(block, y, r, t);
      const std::uint64_t pair_seed = mix(opt.seed, pair_index++);
      for (int start = 0; start < opt.starts; ++start) {
        CounterRng rng(mix(pair_seed, static_cast<std::uint64_t>(start)));
        for (Index i = 0; i + 1 < r; ++i) theta(i) = rng.normal();
        const double res = fit.minimize(theta, accept, opt.damping);
        best_residual = std::min(best_residual, res);
        const bool nonzero = theta.cwiseAbs().minCoeff() >= opt.zero_threshold;
        if (res <= accept && nonzero) {
          auto sig = detail::make_kron(k, l, sa, sb, theta);
          Candidate c;
          c.x = embed(sig);
          c.support = detail::support_of(c.x);
          c.residual = res;
          c.start = start;
          accepted.push_back(std::move(c));
          accepted_factors.push_back(std::move(sig));
        } else if (res > accept) {
          out.margin = std::min(out.margin, res / y_scale);
        }
      }
    });
  });

  const KroneckerSignal first = accepted_factors.empty() ? KroneckerSignal{} : accepted_factors.front();
  detail::resolve(out, std::move(accepted), opt);
  if (out.status == DecodeStatus::unique) out.kron = first;
  if (out.status == DecodeStatus::no_solution) out.residual = best_residual;
  return out;
}

}  // namespace alc
