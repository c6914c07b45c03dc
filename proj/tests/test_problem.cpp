// SPDX-FileCopyrightText: (c) 2026 The odcsgd Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <memory>
#include <random>

#include "odcsgd/algorithm.hpp"
#include "odcsgd/config.hpp"
#include "odcsgd/errors.hpp"
#include "odcsgd/problem.hpp"

using namespace odcsgd;

namespace {

TrackingTarget noiseless_target(int horizon) {
  RandomStream stream(1, 0, 0, StreamDomain::target_noise);
  return target_trajectory(horizon, false, stream);
}

TrackingTarget noisy_target(int horizon, std::uint64_t seed) {
  RandomStream stream(seed, 0, 0, StreamDomain::target_noise);
  return target_trajectory(horizon, true, stream);
}

Vector random_point(std::mt19937_64& rng, double half_width) {
  std::uniform_real_distribution<double> u(-half_width, half_width);
  return (Vector(2) << u(rng), u(rng)).finished();
}

double fd_relative_error(const ProblemSequence& problem, int i, int t, const Vector& x) {
  const double h = 1e-5;
  Vector fd(x.size());
  for (int k = 0; k < x.size(); ++k) {
    Vector up = x, down = x;
    up[k] += h;
    down[k] -= h;
    fd[k] = (problem.local_value(i, t, up) - problem.local_value(i, t, down)) / (2.0 * h);
  }
  const Vector g = problem.local_gradient(i, t, x);
  return (fd - g).norm() / std::max(1.0, g.norm());
}

// sup over a dense 2-D grid of |f_t - f_{t-1}|.
double grid_variation(const ProblemSequence& problem, int t, double box, int points) {
  double best = 0.0;
  for (int a = 0; a < points; ++a) {
    for (int b = 0; b < points; ++b) {
      const Vector x = (Vector(2) << -box + 2.0 * box * a / (points - 1), -box + 2.0 * box * b / (points - 1)).finished();
      best = std::max(best, std::abs(problem.value(t, x) - problem.value(t - 1, x)));
    }
  }
  return best;
}

}  // namespace

TEST(TargetTrajectory, StartsAtTenTenAndEndsAtOrigin) {
  for (int horizon : {1, 2, 7, 100, 5000}) {
    const auto target = noiseless_target(horizon);
    EXPECT_EQ(target.horizon(), horizon);
    EXPECT_EQ(target.at(0), Vector::Constant(2, 10.0));
    EXPECT_LE(target.at(horizon).cwiseAbs().maxCoeff(), 1e-12) << horizon;
    EXPECT_FALSE(target.noisy);
  }
  EXPECT_EQ(noisy_target(50, 3).at(0), Vector::Constant(2, 10.0));
}

TEST(TargetTrajectory, FollowsDriftRecursion) {
  const int horizon = 40;
  const auto target = noiseless_target(horizon);
  for (int t = 1; t <= horizon; ++t) {
    const double T = horizon;
    const Vector v = (Vector(2) << -10.0 / T, -10.0 * (std::sqrt(t / T) - std::sqrt((t - 1) / T))).finished();
    EXPECT_LE((target.at(t) - target.at(t - 1) - v).norm(), 1e-13);
  }
}

TEST(TargetTrajectory, NoisyEndpointStaysNearOrigin) {
  double sum = 0.0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) sum += noisy_target(5000, seed).at(5000).norm();
  EXPECT_LE(sum / 100.0, 0.1);
}

TEST(TargetTrajectory, ClampsBeyondHorizonAndRejectsEmpty) {
  const auto target = noiseless_target(10);
  EXPECT_EQ(target.at(11), target.at(10));
  EXPECT_EQ(target.at(500), target.at(10));
  RandomStream stream(1, 0, 0, StreamDomain::target_noise);
  EXPECT_THROW(target_trajectory(0, false, stream), std::invalid_argument);
}

TEST(ObservationAxis, ParityOfAgent) {
  for (int i = 0; i < 10; ++i) EXPECT_EQ(observation_axis(i), i % 2);
}

TEST(TrackingProblem, ConvexGradientExamples) {
  const TrackingProblem problem(TrackingLoss::quadratic, noiseless_target(100), 6, 25.0);
  const Vector target = problem.target().at(30);
  for (int i = 0; i < 6; ++i) EXPECT_EQ(problem.local_gradient(i, 30, target), Vector::Zero(2));
  const Vector x = target + (Vector(2) << 3.0, 7.0).finished();
  EXPECT_LE((problem.local_gradient(0, 30, x) - (Vector(2) << 3.0, 0.0).finished()).norm(), 1e-12);
  EXPECT_LE((problem.local_gradient(1, 30, x) - (Vector(2) << 0.0, 7.0).finished()).norm(), 1e-12);
}

TEST(TrackingProblem, NonconvexGradientExamples) {
  const TrackingProblem problem(TrackingLoss::quartic, noisy_target(100, 4), 6, 25.0);
  for (int t : {1, 50, 100}) {
    const Vector target = problem.target().at(t);
    for (int i = 0; i < 6; ++i) {
      EXPECT_LE(problem.local_gradient(i, t, target).norm(), 1e-12);
      EXPECT_LE(problem.local_gradient(i, t, -target).norm(), 1e-12);
    }
    EXPECT_LE(problem.gradient(t, target).norm(), 1e-12);
  }
  const Vector x = (Vector(2) << 2.0, -3.0).finished();
  const double z = problem.target().at(10)[0];
  EXPECT_NEAR(problem.local_gradient(0, 10, x)[0], -(z * z - 4.0) * 2.0, 1e-10);
}

TEST(TrackingProblem, GradientsMatchFiniteDifferences) {
  std::mt19937_64 rng(10);
  for (auto loss : {TrackingLoss::quadratic, TrackingLoss::quartic}) {
    const TrackingProblem problem(loss, noisy_target(200, 2), 6, 25.0);
    for (int trial = 0; trial < 100; ++trial) {
      const Vector x = random_point(rng, 20.0);
      const int t = 1 + static_cast<int>(rng() % 200);
      for (int i = 0; i < 6; ++i) ASSERT_LE(fd_relative_error(problem, i, t, x), 1e-5);
    }
  }
}

TEST(QuadraticProblem, GradientsMatchFiniteDifferences) {
  std::mt19937_64 rng(11);
  const auto centres = [](int i, int t) { return (Vector(2) << std::sin(i + 0.1 * t), std::cos(2.0 * i - t)).finished(); };
  const QuadraticProblem problem(4, 2, 50, centres, 10.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Vector x = random_point(rng, 10.0);
    for (int i = 0; i < 4; ++i) ASSERT_LE(fd_relative_error(problem, i, 1 + trial % 50, x), 1e-5);
  }
}

TEST(GlobalMinimizer, MinimizesConvexObjective) {
  const TrackingProblem problem(TrackingLoss::quadratic, noisy_target(100, 3), 6, 25.0);
  EXPECT_EQ(global_minimizer(problem, 0), Vector::Constant(2, 10.0));
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    const int t = 1 + trial;
    const Vector star = global_minimizer(problem, t);
    EXPECT_EQ(star, *problem.minimizer(t));
    const Vector x = random_point(rng, 25.0);
    EXPECT_LE(problem.value(t, star), problem.value(t, x));
    EXPECT_GE(problem.value(t, x) - problem.value(t, star), 0.0);
  }
}

TEST(GlobalMinimizer, SingleAgentLeavesCoordinateUnobserved) {
  const TrackingProblem problem(TrackingLoss::quadratic, noiseless_target(10), 1, 25.0);
  EXPECT_THROW(global_minimizer(problem, 1), CoordinateUnobserved);
  EXPECT_FALSE(problem.minimizer(1).has_value());
  EXPECT_EQ(problem.observers(0), 1);
  EXPECT_EQ(problem.observers(1), 0);
}

TEST(TrackingProblem, ConstantsFromTheBox) {
  const TrackingProblem convex(TrackingLoss::quadratic, noiseless_target(10), 6, 25.0);
  const auto c = convex.constants();
  EXPECT_DOUBLE_EQ(c.smoothness, 1.0);
  EXPECT_DOUBLE_EQ(c.gradient_bound, 35.0);
  EXPECT_DOUBLE_EQ(c.state_bound, 25.0);
  const TrackingProblem quartic(TrackingLoss::quartic, noiseless_target(10), 6, 25.0);
  EXPECT_DOUBLE_EQ(quartic.constants().smoothness, 3.0 * 625.0);
  EXPECT_DOUBLE_EQ(quartic.constants().gradient_bound, 25.0 * 25.0 * 25.0);
}

TEST(TrackingProblem, GradientBoundHoldsOnTheBoxAndAlongRuns) {
  std::mt19937_64 rng(13);
  for (auto kind : {ProblemKind::tracking_convex, ProblemKind::tracking_nonconvex}) {
    RunConfig config = default_config(kind);
    config.horizon = 2000;
    const SimulationSpec spec = build_simulation(config, 1);
    const double bound = spec.problem->constants().gradient_bound;
    for (int trial = 0; trial < 2000; ++trial) {
      const Vector x = random_point(rng, 25.0);
      for (int i = 0; i < 6; ++i) ASSERT_LE(spec.problem->local_gradient(i, 1 + trial, x).norm(), bound);
    }
    const RunTrace trace = run(spec);
    double worst = 0.0;
    for (int t = 1; t <= trace.horizon(); ++t) {
      for (int i = 0; i < 6; ++i) {
        worst = std::max(worst, spec.problem->local_gradient(i, t, trace.at(t).row(i).transpose()).norm());
      }
    }
    EXPECT_LE(worst, bound) << to_string(kind);
  }
}

TEST(VariationIncrement, ZeroWhenTargetStands) {
  TrackingTarget still;
  still.positions = {Vector::Constant(2, 1.0), Vector::Constant(2, 1.0), Vector::Constant(2, 1.0)};
  for (auto loss : {TrackingLoss::quadratic, TrackingLoss::quartic}) {
    const TrackingProblem problem(loss, still, 6, 25.0);
    EXPECT_EQ(problem.variation_increment(2), 0.0);
  }
  EXPECT_THROW(TrackingProblem(TrackingLoss::quadratic, still, 6, 25.0).variation_increment(1), std::invalid_argument);
}

TEST(VariationIncrement, ConvexClosedFormMatchesGrid) {
  const double delta = 0.3;
  TrackingTarget target;
  target.positions = {Vector::Constant(2, 10.0), Vector::Constant(2, 2.0),
                      (Vector(2) << 2.0 + delta, 2.0).finished()};
  const TrackingProblem problem(TrackingLoss::quadratic, target, 6, 25.0);
  const double closed = problem.variation_increment(2);
  const double grid = grid_variation(problem, 2, 25.0, 401);
  EXPECT_NEAR(closed, grid, 0.01 * grid);
  // Three observers of axis 0: 3 * 1/2 * |(a-u)^2 - (c-u)^2| peaks at u = -25.
  EXPECT_NEAR(closed, 1.5 * std::abs((2.0 + delta + 25.0) * (2.0 + delta + 25.0) - 27.0 * 27.0), 1e-9);
}

TEST(VariationIncrement, MatchesGridOnNoisyTargets) {
  for (auto loss : {TrackingLoss::quadratic, TrackingLoss::quartic}) {
    const TrackingProblem problem(loss, noisy_target(50, 8), 6, 25.0);
    for (int t : {2, 17, 50}) {
      const double value = problem.variation_increment(t);
      const double grid = grid_variation(problem, t, 25.0, 301);
      EXPECT_GE(value, grid * (1.0 - 1e-12));
      EXPECT_NEAR(value, grid, 0.01 * grid);
    }
  }
}

TEST(QuadraticProblem, MinimizerConstantsAndVariation) {
  const auto centres = [](int i, int t) { return (Vector(2) << i + 0.5 * t, -i).finished(); };
  const QuadraticProblem problem(3, 2, 20, centres, 4.0);
  const Vector star = *problem.minimizer(5);
  EXPECT_LE((star - (Vector(2) << 3.5, -1.0).finished()).norm(), 1e-14);
  EXPECT_LE(problem.gradient(5, star).norm(), 1e-12);
  EXPECT_EQ(problem.constants().smoothness, 1.0);
  EXPECT_NEAR(problem.variation_increment(5), grid_variation(problem, 5, 4.0, 201), 1e-9);
}
