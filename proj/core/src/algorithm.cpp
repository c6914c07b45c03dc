// SPDX-FileCopyrightText: (c) 2026 The odcsgd Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "odcsgd/algorithm.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "odcsgd/errors.hpp"

namespace odcsgd {

Vector clip(const Vector& y, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("clip level must be positive");
  double norm = y.norm();
  if (std::isinf(norm)) norm = y.stableNorm();
  // Norms within a few ulps of lambda count as inside the ball.
  if (norm <= lambda * (1.0 + 8.0 * std::numeric_limits<double>::epsilon())) return y;
  return (lambda / norm) * y;
}

double StepSchedule::operator()(int t) const {
  if (t < 1) throw std::invalid_argument("step schedule is indexed from t = 1");
  return std::pow(a * t + b, -kappa);
}

double ClipSchedule::operator()(int t) const {
  if (t < 1) throw std::invalid_argument("clip schedule is indexed from t = 1");
  return c0 * std::pow(static_cast<double>(t), alpha);
}

StepResult odcsgd_step(const SwarmState& swarm, const WeightMatrix& w, const GradientOracle& oracle,
                       double eta, double lambda, const StreamFamily& streams) {
  if (!(eta > 0.0) || !(lambda > 0.0)) throw std::invalid_argument("eta and lambda must be positive");
  if (swarm.dimension() != oracle.problem().dimension()) {
    throw DimensionMismatch("swarm dimension " + std::to_string(swarm.dimension()) +
                            " != problem dimension " + std::to_string(oracle.problem().dimension()));
  }

  SwarmState consensus = apply_consensus(w, swarm);
  StepResult result{consensus, consensus, Vector(swarm.agents())};
  result.next.t = swarm.t + 1;
  for (int i = 0; i < swarm.agents(); ++i) {
    RandomStream stream = streams.at(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(swarm.t));
    const Vector x_i = swarm.states.row(i).transpose();
    const Vector g = clip(oracle(i, swarm.t, x_i, stream), lambda);
    result.clipped_norms[i] = g.norm();
    result.next.states.row(i) -= eta * g.transpose();
  }
  return result;
}

double RunTrace::max_state_norm() const {
  double m = 0.0;
  for (const auto& s : states) m = std::max(m, s.rowwise().norm().maxCoeff());
  return m;
}

double RunTrace::initial_radius() const {
  if (states.empty()) return 0.0;
  return states.front().rowwise().norm().maxCoeff();
}

Matrix initial_states(int agents, int dimension, const InitialBox& box, std::uint64_t seed) {
  if (!(box.lo <= box.hi)) throw std::invalid_argument("initial box needs lo <= hi");
  const StreamFamily family{seed, StreamDomain::initial_state};
  Matrix x(agents, dimension);
  for (int i = 0; i < agents; ++i) {
    RandomStream stream = family.at(static_cast<std::uint32_t>(i), 0);
    for (int k = 0; k < dimension; ++k) x(i, k) = box.lo + (box.hi - box.lo) * stream.uniform();
  }
  return x;
}

RunTrace run(const SimulationSpec& spec) {
  if (!spec.problem) throw std::invalid_argument("simulation needs a problem");
  if (spec.horizon < 0) throw std::invalid_argument("horizon must be nonnegative");
  const ProblemSequence& problem = *spec.problem;
  const int n = problem.agents();
  const int d = problem.dimension();
  if (spec.graph.n() != n) {
    throw DimensionMismatch("graph schedule has " + std::to_string(spec.graph.n()) +
                            " nodes but the problem has " + std::to_string(n) + " agents");
  }

  const GradientOracle oracle(problem, spec.noise);
  const StreamFamily streams{spec.seed, StreamDomain::gradient_noise};

  RunTrace trace;
  trace.seed = spec.seed;
  trace.states.reserve(static_cast<std::size_t>(spec.horizon) + 1);
  trace.eta.reserve(static_cast<std::size_t>(spec.horizon));
  trace.lambda.reserve(static_cast<std::size_t>(spec.horizon));
  trace.disagreement.reserve(static_cast<std::size_t>(spec.horizon) + 1);
  trace.clipped_norms.resize(spec.horizon, n);

  SwarmState swarm{initial_states(n, d, spec.init, spec.seed), 1};
  trace.states.push_back(swarm.states);
  trace.disagreement.push_back(swarm.disagreement());

  for (int t = 1; t <= spec.horizon; ++t) {
    const double eta = spec.step(t);
    const double lambda = spec.clip(t);
    StepResult step = odcsgd_step(swarm, spec.graph.at(t), oracle, eta, lambda, streams);
    if (!step.next.states.allFinite()) {
      throw NonFiniteState("non-finite state at step " + std::to_string(t) + " (seed " +
                               std::to_string(spec.seed) + ")",
                           spec.seed, t);
    }
    swarm = std::move(step.next);
    trace.eta.push_back(eta);
    trace.lambda.push_back(lambda);
    trace.clipped_norms.row(t - 1) = step.clipped_norms.transpose();
    trace.states.push_back(swarm.states);
    trace.disagreement.push_back(swarm.disagreement());
  }
  return trace;
}

}  // namespace odcsgd
