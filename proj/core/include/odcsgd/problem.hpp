// SPDX-FileCopyrightText: (c) 2026 The odcsgd Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "odcsgd/random.hpp"
#include "odcsgd/types.hpp"

namespace odcsgd {

/// Smoothness, gradient and state bounds used by the bound evaluators.
struct ProblemConstants {
  double smoothness;      // L
  double gradient_bound;  // B_g
  double state_bound;     // B_X
};

/// Time-indexed family of local objectives f_{i,t}, i in [0, N), t >= 1.
/// The global objective is f_t = sum_i f_{i,t}.
class ProblemSequence {
 public:
  virtual ~ProblemSequence() = default;

  virtual std::string_view name() const = 0;
  virtual int dimension() const = 0;
  virtual int agents() const = 0;
  virtual int horizon() const = 0;
  virtual bool convex() const = 0;

  virtual double local_value(int i, int t, const Vector& x) const = 0;
  virtual Vector local_gradient(int i, int t, const Vector& x) const = 0;

  double value(int t, const Vector& x) const;
  Vector gradient(int t, const Vector& x) const;

  /// Global minimizer x*_t when one is known in closed form.
  virtual std::optional<Vector> minimizer(int /*t*/) const { return std::nullopt; }

  /// Axis along which agent i's gradient noise enters; nullopt means
  /// isotropic vector noise.
  virtual std::optional<int> noise_axis(int /*i*/) const { return std::nullopt; }

  virtual ProblemConstants constants() const = 0;

  /// sup over the box [-B_X, B_X]^d of |f_t(x) - f_{t-1}(x)|, t >= 2.
  virtual double variation_increment(int t) const = 0;
};

/// Moving target x*_0..x*_T in the plane.
struct TrackingTarget {
  std::vector<Vector> positions;  // positions[t] = x*_t
  bool noisy = false;

  int horizon() const { return static_cast<int>(positions.size()) - 1; }
  /// x*_t for t in [0, T]; times beyond T hold the final position.
  const Vector& at(int t) const;
};

/// x*_0 = (10, 10), x*_t = x*_{t-1} + v_t + w_t for t = 1..T with
/// v_t = -10 (1/T, sqrt(t/T) - sqrt((t-1)/T)) and w_t ~ N(0, T^-2 I).
/// The noiseless target ends exactly at the origin.
TrackingTarget target_trajectory(int horizon, bool noise_on, RandomStream& stream);

/// Agent i (0-based) observes coordinate i mod 2.
constexpr int observation_axis(int agent) { return agent % 2; }

enum class TrackingLoss { quadratic, quartic };

/// Sensor-network tracking. Agent i observes z_{i,t} = x*_t[k_i] and holds
///   quadratic: f_{i,t}(x) = s (z - x[k_i])^2           (s defaults to 1/2)
///   quartic:   f_{i,t}(x) = s (z^2 - x[k_i]^2)^2       (s defaults to 1/4)
class TrackingProblem final : public ProblemSequence {
 public:
  TrackingProblem(TrackingLoss loss, TrackingTarget target, int agents, double box_bound,
                  std::optional<double> loss_scale = std::nullopt);

  std::string_view name() const override;
  int dimension() const override { return 2; }
  int agents() const override { return agents_; }
  int horizon() const override { return target_.horizon(); }
  bool convex() const override { return loss_ == TrackingLoss::quadratic; }

  double local_value(int i, int t, const Vector& x) const override;
  Vector local_gradient(int i, int t, const Vector& x) const override;
  std::optional<Vector> minimizer(int t) const override;
  std::optional<int> noise_axis(int i) const override { return observation_axis(i); }
  ProblemConstants constants() const override;
  double variation_increment(int t) const override;

  const TrackingTarget& target() const { return target_; }
  TrackingLoss loss() const { return loss_; }
  double loss_scale() const { return scale_; }
  /// Number of agents observing coordinate k.
  int observers(int k) const;

 private:
  double axis_value(double z, double u) const;
  double axis_gradient(double z, double u) const;

  TrackingLoss loss_;
  TrackingTarget target_;
  int agents_;
  double box_;
  double scale_;
  double max_target_coord_;
};

/// x*_t for the convex tracking problem. Throws CoordinateUnobserved when
/// some coordinate has no observing agent.
Vector global_minimizer(const TrackingProblem& problem, int t);

/// Grid resolution used for the quartic variation supremum (points per axis).
inline constexpr int kVariationGridPoints = 401;

/// f_{i,t}(x) = 1/2 ||x - c_{i,t}||^2 with caller-supplied centres.
class QuadraticProblem final : public ProblemSequence {
 public:
  using CenterFn = std::function<Vector(int i, int t)>;

  QuadraticProblem(int agents, int dimension, int horizon, CenterFn centers, double box_bound);

  std::string_view name() const override { return "quadratic"; }
  int dimension() const override { return dimension_; }
  int agents() const override { return agents_; }
  int horizon() const override { return horizon_; }
  bool convex() const override { return true; }

  double local_value(int i, int t, const Vector& x) const override;
  Vector local_gradient(int i, int t, const Vector& x) const override;
  std::optional<Vector> minimizer(int t) const override;
  ProblemConstants constants() const override;
  double variation_increment(int t) const override;

 private:
  int agents_;
  int dimension_;
  int horizon_;
  CenterFn centers_;
  double box_;
};

}  // namespace odcsgd
