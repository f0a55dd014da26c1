#pragma once

// Search for pairs of distinct Kronecker signals with equal measurements.
// Below the injectivity threshold such pairs exist; finding one shows the
// operator is not one-to-one on the signal set.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "alc/decode/kron.hpp"
#include "alc/error.hpp"
#include "alc/measureop.hpp"
#include "alc/rng.hpp"
#include "alc/setgen.hpp"

namespace alc {

struct KronShape {
  Index k = 0, l = 0, r = 0, t = 0;
};

struct CollisionReport {
  KroneckerSignal x1, x2;
  double objective = 0.0;   // ||A (embed(x1) - embed(x2))||
  double separation = 0.0;  // ||embed(x1) - embed(x2)||

  /// Recomputes objective and separation from the stored signals.
  static CollisionReport measure(const MeasurementMatrix& a, KroneckerSignal x1, KroneckerSignal x2) {
    const Vector d = embed(x1) - embed(x2);
    return {std::move(x1), std::move(x2), apply(a, d).norm(), d.norm()};
  }
};

struct CollisionOptions {
  double objective_threshold = 1e-10;
  double min_separation = 1e-3;
  double zero_threshold = 1e-8;
  DampingSchedule damping{};
};

namespace detail {

/// Parameters: [a1 free (r-1), b1 (t), a2 free (r-1), b2 (t)].
class CollisionProblem {
 public:
  CollisionProblem(const MeasurementMatrix& a, const KroneckerSignal& x1, const KroneckerSignal& x2)
      : a_(&a), x1_(x1), x2_(x2),
        p1_(static_cast<Index>(x1.a_values.size() + x1.b_values.size()) - 1),
        p2_(static_cast<Index>(x2.a_values.size() + x2.b_values.size()) - 1) {}

  Index params() const noexcept { return p1_ + p2_; }

  Vector pack() const {
    Vector theta(params());
    pack_one(x1_, theta.head(p1_));
    pack_one(x2_, theta.tail(p2_));
    return theta;
  }

  void unpack(const Vector& theta) {
    unpack_one(x1_, theta.head(p1_));
    unpack_one(x2_, theta.tail(p2_));
  }

  const KroneckerSignal& x1() const noexcept { return x1_; }
  const KroneckerSignal& x2() const noexcept { return x2_; }

  Vector difference() const { return embed(x1_) - embed(x2_); }

  /// Rescales both b factors so the embeddings differ by a unit vector.
  /// False when the two embeddings coincide.
  bool project() {
    const double sep = difference().norm();
    if (!(sep > 0.0) || !std::isfinite(sep)) return false;
    for (auto& v : x1_.b_values) v /= sep;
    for (auto& v : x2_.b_values) v /= sep;
    return true;
  }

  /// Residual [A d; ||d||^2 - 1] and its Jacobian.
  void evaluate(Vector& residual, Matrix* jac) const {
    const Vector d = difference();
    const Index n = a_->n();
    residual.resize(n + 1);
    residual.head(n) = a_->entries() * d;
    residual(n) = d.squaredNorm() - 1.0;
    if (!jac) return;
    Matrix dd(d.size(), params());
    partials(x1_, 1.0, dd.leftCols(p1_));
    partials(x2_, -1.0, dd.rightCols(p2_));
    jac->resize(n + 1, params());
    jac->topRows(n) = a_->entries() * dd;
    jac->row(n) = 2.0 * d.transpose() * dd;
  }

 private:
  static void pack_one(const KroneckerSignal& x, Eigen::Ref<Vector> out) {
    Index at = 0;
    for (std::size_t i = 1; i < x.a_values.size(); ++i) out(at++) = x.a_values[i];
    for (double v : x.b_values) out(at++) = v;
  }

  static void unpack_one(KroneckerSignal& x, const Eigen::Ref<const Vector>& in) {
    Index at = 0;
    for (std::size_t i = 1; i < x.a_values.size(); ++i) x.a_values[i] = in(at++);
    for (auto& v : x.b_values) v = in(at++);
  }

  static void partials(const KroneckerSignal& x, double sign, Eigen::Ref<Matrix> out) {
    out.setZero();
    Index col = 0;
    for (std::size_t i = 1; i < x.a_support.size(); ++i, ++col)
      for (std::size_t j = 0; j < x.b_support.size(); ++j)
        out(x.a_support[i] * x.l + x.b_support[j], col) = sign * x.b_values[j];
    for (std::size_t j = 0; j < x.b_support.size(); ++j, ++col)
      for (std::size_t i = 0; i < x.a_support.size(); ++i)
        out(x.a_support[i] * x.l + x.b_support[j], col) = sign * x.a_values[i];
  }

  const MeasurementMatrix* a_;
  KroneckerSignal x1_, x2_;
  Index p1_, p2_;
};

inline bool factors_nonzero(const KroneckerSignal& x, double threshold) {
  for (double v : x.a_values)
    if (std::abs(v) < threshold) return false;
  for (double v : x.b_values)
    if (std::abs(v) < threshold) return false;
  return true;
}

}  // namespace detail

/// Projected Gauss-Newton from the pair (x1, x2): minimizes ||A d|| subject to
/// ||d|| = 1, d = embed(x1) - embed(x2), supports held fixed. Returns a report
/// only if the objective drops below the threshold with separation intact.
inline std::optional<CollisionReport> refine_collision(const MeasurementMatrix& a, const KroneckerSignal& x1,
                                                       const KroneckerSignal& x2,
                                                       const CollisionOptions& opt = {}) {
  if (x1.k * x1.l != a.m() || x2.k * x2.l != a.m())
    throw invalid_argument("refine_collision: signal length does not match A");
  detail::CollisionProblem prob(a, x1, x2);
  if (!prob.project()) return std::nullopt;

  const auto& sched = opt.damping;
  Vector residual, trial_residual;
  Matrix jac;
  prob.evaluate(residual, nullptr);
  double cost = residual.squaredNorm();
  double lambda = sched.initial;
  double checkpoint = cost;
  for (int it = 0; it < sched.max_iterations; ++it) {
    if (residual.head(a.n()).norm() < 1e-3 * opt.objective_threshold) break;
    if (it > 0 && it % sched.window == 0) {
      if (cost > sched.progress_ratio * checkpoint) break;
      checkpoint = cost;
    }
    prob.evaluate(residual, &jac);
    Matrix normal = jac.transpose() * jac;
    normal.diagonal().array() += lambda;
    const Vector theta = prob.pack();
    const Vector step = normal.ldlt().solve(-(jac.transpose() * residual));
    detail::CollisionProblem trial = prob;
    trial.unpack(theta + step);
    if (!trial.project()) {
      lambda *= sched.grow;
      continue;
    }
    trial.evaluate(trial_residual, nullptr);
    const double trial_cost = trial_residual.squaredNorm();
    if (trial_cost < cost) {
      prob = std::move(trial);
      residual = trial_residual;
      cost = trial_cost;
      lambda *= sched.shrink;
    } else {
      lambda *= sched.grow;
      if (lambda > sched.give_up) break;
    }
  }

  auto report = CollisionReport::measure(a, prob.x1(), prob.x2());
  if (report.objective < opt.objective_threshold && report.separation >= opt.min_separation &&
      detail::factors_nonzero(report.x1, opt.zero_threshold) &&
      detail::factors_nonzero(report.x2, opt.zero_threshold))
    return report;
  return std::nullopt;
}

/// Multi-start collision search. Start i draws two Kronecker signals with
/// different support pairs from mix(seed, i) and refines them; the pair with
/// the smallest objective among successful starts is returned.
/// nullopt means no collision was found, not that A is one-to-one.
inline std::optional<CollisionReport> collision_search(const MeasurementMatrix& a, const KronShape& shape,
                                                       int starts, std::uint64_t seed,
                                                       const CollisionOptions& opt = {}) {
  if (starts < 1) throw invalid_argument("collision_search: starts must be >= 1");
  if (shape.k * shape.l != a.m()) throw invalid_argument("collision_search: A must have k*l columns");
  if (binomial(shape.k, shape.r) * binomial(shape.l, shape.t) < 2)
    throw invalid_argument("collision_search: need at least two distinct support pairs");
  std::optional<CollisionReport> best;
  for (int i = 0; i < starts; ++i) {
    const std::uint64_t s = mix(seed, static_cast<std::uint64_t>(i));
    const auto x1 = gen_kron(shape.k, shape.l, shape.r, shape.t, mix(s, 0));
    KroneckerSignal x2;
    for (std::uint64_t attempt = 1;; ++attempt) {
      x2 = gen_kron(shape.k, shape.l, shape.r, shape.t, mix(s, attempt));
      if (x2.a_support != x1.a_support || x2.b_support != x1.b_support) break;
    }
    auto found = refine_collision(a, x1, x2, opt);
    if (found && (!best || found->objective < best->objective)) best = std::move(found);
  }
  return best;
}

inline nlohmann::json to_json(const KroneckerSignal& x) {
  return {{"k", x.k}, {"l", x.l}, {"a_support", x.a_support}, {"a_values", x.a_values},
          {"b_support", x.b_support}, {"b_values", x.b_values}};
}

inline nlohmann::json to_json(const CollisionReport& c) {
  return {{"objective", c.objective}, {"separation", c.separation}, {"x1", to_json(c.x1)}, {"x2", to_json(c.x2)}};
}

}  // namespace alc
