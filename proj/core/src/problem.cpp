// SPDX-FileCopyrightText: (c) 2026 The odcsgd Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "odcsgd/problem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "odcsgd/errors.hpp"

namespace odcsgd {

double ProblemSequence::value(int t, const Vector& x) const {
  double total = 0.0;
  for (int i = 0; i < agents(); ++i) total += local_value(i, t, x);
  return total;
}

Vector ProblemSequence::gradient(int t, const Vector& x) const {
  Vector total = Vector::Zero(dimension());
  for (int i = 0; i < agents(); ++i) total += local_gradient(i, t, x);
  return total;
}

const Vector& TrackingTarget::at(int t) const {
  if (positions.empty()) throw std::logic_error("empty target trajectory");
  const auto last = static_cast<int>(positions.size()) - 1;
  return positions[static_cast<std::size_t>(std::clamp(t, 0, last))];
}

TrackingTarget target_trajectory(int horizon, bool noise_on, RandomStream& stream) {
  if (horizon < 1) throw std::invalid_argument("target horizon must be >= 1");
  const double T = horizon;
  const double noise_std = 1.0 / T;

  TrackingTarget target;
  target.noisy = noise_on;
  target.positions.reserve(static_cast<std::size_t>(horizon) + 1);
  target.positions.push_back(Vector::Constant(2, 10.0));
  for (int t = 1; t <= horizon; ++t) {
    Vector drift(2);
    drift << -10.0 / T, -10.0 * (std::sqrt(t / T) - std::sqrt((t - 1) / T));
    Vector next = target.positions.back() + drift;
    if (noise_on) {
      next[0] += noise_std * stream.normal();
      next[1] += noise_std * stream.normal();
    }
    target.positions.push_back(std::move(next));
  }
  return target;
}

TrackingProblem::TrackingProblem(TrackingLoss loss, TrackingTarget target, int agents,
                                 double box_bound, std::optional<double> loss_scale)
    : loss_(loss),
      target_(std::move(target)),
      agents_(agents),
      box_(box_bound),
      scale_(loss_scale.value_or(loss == TrackingLoss::quadratic ? 0.5 : 0.25)),
      max_target_coord_(0.0) {
  if (agents_ < 1) throw std::invalid_argument("tracking problem needs at least one agent");
  if (!(box_ > 0.0)) throw std::invalid_argument("box bound must be positive");
  if (!(scale_ > 0.0)) throw std::invalid_argument("loss scale must be positive");
  if (target_.positions.size() < 2) throw std::invalid_argument("target needs T >= 1");
  for (const auto& p : target_.positions) max_target_coord_ = std::max(max_target_coord_, p.cwiseAbs().maxCoeff());
}

std::string_view TrackingProblem::name() const {
  return loss_ == TrackingLoss::quadratic ? "tracking_convex" : "tracking_nonconvex";
}

double TrackingProblem::axis_value(double z, double u) const {
  if (loss_ == TrackingLoss::quadratic) {
    const double r = z - u;
    return scale_ * r * r;
  }
  const double r = z * z - u * u;
  return scale_ * r * r;
}

double TrackingProblem::axis_gradient(double z, double u) const {
  if (loss_ == TrackingLoss::quadratic) return 2.0 * scale_ * (u - z);
  return -4.0 * scale_ * (z * z - u * u) * u;
}

int TrackingProblem::observers(int k) const {
  int count = 0;
  for (int i = 0; i < agents_; ++i) count += observation_axis(i) == k ? 1 : 0;
  return count;
}

double TrackingProblem::local_value(int i, int t, const Vector& x) const {
  const int k = observation_axis(i);
  return axis_value(target_.at(t)[k], x[k]);
}

Vector TrackingProblem::local_gradient(int i, int t, const Vector& x) const {
  const int k = observation_axis(i);
  Vector g = Vector::Zero(2);
  g[k] = axis_gradient(target_.at(t)[k], x[k]);
  return g;
}

std::optional<Vector> TrackingProblem::minimizer(int t) const {
  if (observers(0) == 0 || observers(1) == 0) return std::nullopt;
  return target_.at(t);
}

Vector global_minimizer(const TrackingProblem& problem, int t) {
  for (int k = 0; k < problem.dimension(); ++k) {
    if (problem.observers(k) == 0) {
      throw CoordinateUnobserved("coordinate " + std::to_string(k) +
                                 " has no observing agent; the minimizer is not unique");
    }
  }
  return problem.target().at(t);
}

ProblemConstants TrackingProblem::constants() const {
  const double b = box_;
  const double z = max_target_coord_;
  if (loss_ == TrackingLoss::quadratic) {
    return {2.0 * scale_, 2.0 * scale_ * (b + z), b};
  }
  // sup of |u (z^2 - u^2)| over |u| <= b and |z| <= zmax.
  double peak = b * b * b;
  if (z <= std::sqrt(3.0) * b) {
    peak = std::max(peak, 2.0 * z * z * z / (3.0 * std::sqrt(3.0)));
  } else {
    peak = std::max(peak, b * (z * z - b * b));
  }
  const double curvature = std::max(3.0 * b * b, z * z);
  return {4.0 * scale_ * curvature, 4.0 * scale_ * peak, b};
}

double TrackingProblem::variation_increment(int t) const {
  if (t < 2) throw std::invalid_argument("variation increment needs t >= 2");
  const Vector& now = target_.at(t);
  const Vector& before = target_.at(t - 1);

  // The global difference is a sum of one-dimensional terms h_k(x_k).
  double sum_max = 0.0;
  double sum_min = 0.0;
  for (int k = 0; k < 2; ++k) {
    const double weight = observers(k);
    const double a = now[k];
    const double c = before[k];
    const auto h = [&](double u) { return weight * (axis_value(a, u) - axis_value(c, u)); };
    // The quadratic difference is affine in u, so the box faces suffice.
    double hi = std::max(h(-box_), h(box_));
    double lo = std::min(h(-box_), h(box_));
    if (loss_ == TrackingLoss::quartic) {
      for (int j = 0; j < kVariationGridPoints; ++j) {
        const double u = -box_ + 2.0 * box_ * j / (kVariationGridPoints - 1);
        const double v = h(u);
        hi = std::max(hi, v);
        lo = std::min(lo, v);
      }
    }
    sum_max += hi;
    sum_min += lo;
  }
  return std::max(std::abs(sum_max), std::abs(sum_min));
}

QuadraticProblem::QuadraticProblem(int agents, int dimension, int horizon, CenterFn centers,
                                   double box_bound)
    : agents_(agents), dimension_(dimension), horizon_(horizon), centers_(std::move(centers)), box_(box_bound) {
  if (agents_ < 1 || dimension_ < 1 || horizon_ < 1) {
    throw std::invalid_argument("quadratic problem needs positive agents, dimension and horizon");
  }
  if (!centers_) throw std::invalid_argument("quadratic problem needs a centre function");
}

double QuadraticProblem::local_value(int i, int t, const Vector& x) const {
  return 0.5 * (x - centers_(i, t)).squaredNorm();
}

Vector QuadraticProblem::local_gradient(int i, int t, const Vector& x) const {
  return x - centers_(i, t);
}

std::optional<Vector> QuadraticProblem::minimizer(int t) const {
  Vector mean = Vector::Zero(dimension_);
  for (int i = 0; i < agents_; ++i) mean += centers_(i, t);
  return mean / static_cast<double>(agents_);
}

ProblemConstants QuadraticProblem::constants() const {
  double max_center = 0.0;
  for (int t = 1; t <= horizon_ + 1; ++t) {
    for (int i = 0; i < agents_; ++i) max_center = std::max(max_center, centers_(i, t).norm());
  }
  return {1.0, box_ * std::sqrt(static_cast<double>(dimension_)) + max_center, box_};
}

double QuadraticProblem::variation_increment(int t) const {
  if (t < 2) throw std::invalid_argument("variation increment needs t >= 2");
  Vector slope = Vector::Zero(dimension_);
  double offset = 0.0;
  for (int i = 0; i < agents_; ++i) {
    const Vector c = centers_(i, t);
    const Vector d = centers_(i, t - 1);
    slope += d - c;
    offset += 0.5 * (c.squaredNorm() - d.squaredNorm());
  }
  return box_ * slope.lpNorm<1>() + std::abs(offset);
}

}  // namespace odcsgd
