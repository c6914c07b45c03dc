// SPDX-FileCopyrightText: (c) 2026 The odcsgd Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "odcsgd/graph_schedule.hpp"
#include "odcsgd/noise.hpp"
#include "odcsgd/problem.hpp"
#include "odcsgd/random.hpp"
#include "odcsgd/types.hpp"

namespace odcsgd {

/// min{1, lambda / ||y||} y, with clip(0) = 0.
Vector clip(const Vector& y, double lambda);

/// eta_t = (a t + b)^-kappa.
struct StepSchedule {
  double a = 0.5;
  double b = 10.0;
  double kappa = 0.5;

  double operator()(int t) const;
};

/// lambda_t = c0 t^alpha.
struct ClipSchedule {
  double c0 = 2.0;
  double alpha = 0.1;

  double operator()(int t) const;
};

inline double step_size(const StepSchedule& schedule, int t) { return schedule(t); }
inline double clip_level(const ClipSchedule& schedule, int t) { return schedule(t); }

struct StepResult {
  SwarmState next;       // x_{t+1}
  SwarmState consensus;  // y_t
  Vector clipped_norms;  // ||clip(g_i)|| per agent
};

/// One iteration: consensus with W, clip the stochastic gradient taken at the
/// pre-consensus state, descend from the consensus point. Agent i's noise is
/// drawn from streams.at(i, swarm.t).
StepResult odcsgd_step(const SwarmState& swarm, const WeightMatrix& w, const GradientOracle& oracle,
                       double eta, double lambda, const StreamFamily& streams);

/// Full record of one simulated run. states[k] holds x_{k+1}, so a run of
/// horizon T stores T + 1 snapshots.
struct RunTrace {
  std::uint64_t seed = 0;
  std::vector<Matrix> states;
  Matrix clipped_norms;              // T x N
  std::vector<double> disagreement;  // T + 1 values, max_i ||x_{i,t} - mean_t||
  std::vector<double> eta;           // eta_t, t = 1..T
  std::vector<double> lambda;        // lambda_t, t = 1..T

  int horizon() const { return static_cast<int>(states.size()) - 1; }
  int agents() const { return states.empty() ? 0 : static_cast<int>(states.front().rows()); }
  /// x_{i,t} for t in [1, T+1].
  const Matrix& at(int t) const { return states.at(static_cast<std::size_t>(t - 1)); }
  Vector mean(int t) const { return at(t).colwise().mean().transpose(); }
  double max_state_norm() const;
  /// max_i ||x_{i,1}||.
  double initial_radius() const;
};

struct InitialBox {
  double lo = 9.0;
  double hi = 10.0;
};

struct SimulationSpec {
  std::shared_ptr<const ProblemSequence> problem;
  GraphSchedule graph = default_schedule();
  NoiseModel noise;
  StepSchedule step;
  ClipSchedule clip;
  InitialBox init;
  int horizon = 5000;
  std::uint64_t seed = 1;
};

/// Initial states drawn uniformly from the box, one stream per agent.
Matrix initial_states(int agents, int dimension, const InitialBox& box, std::uint64_t seed);

/// Runs `horizon` steps. Throws NonFiniteState (with seed and step) when a
/// state leaves the finite range and DimensionMismatch for inconsistent inputs.
RunTrace run(const SimulationSpec& spec);

}  // namespace odcsgd
