// SPDX-FileCopyrightText: (c) 2026 The odcsgd Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "odcsgd/graph_schedule.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "odcsgd/errors.hpp"

namespace odcsgd {

WeightMatrix::WeightMatrix(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() == 0 || entries_.rows() != entries_.cols()) {
    throw DimensionMismatch("weight matrix must be square and nonempty, got " +
                            std::to_string(entries_.rows()) + "x" +
                            std::to_string(entries_.cols()));
  }
}

WeightMatrix WeightMatrix::identity(int n) { return WeightMatrix(Matrix::Identity(n, n)); }

WeightMatrix WeightMatrix::uniform(int n) {
  return WeightMatrix(Matrix::Constant(n, n, 1.0 / static_cast<double>(n)));
}

double WeightMatrix::min_positive() const {
  double floor = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < entries_.size(); ++i) {
    const double v = entries_.data()[i];
    if (v > 0.0 && v < floor) floor = v;
  }
  return floor;
}

WeightMatrix build_edge_weight_matrix(int n, const std::vector<Edge>& edges, double w) {
  if (n < 1) throw std::invalid_argument("agent count must be positive");
  if (!(w > 0.0 && w < 1.0)) throw std::invalid_argument("edge weight must lie in (0,1)");

  Matrix entries = Matrix::Zero(n, n);
  for (const auto& [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n || b >= n || a == b) {
      throw std::invalid_argument("invalid edge (" + std::to_string(a) + "," + std::to_string(b) +
                                  ") for " + std::to_string(n) + " nodes");
    }
    entries(a, b) = w;
    entries(b, a) = w;
  }
  for (int i = 0; i < n; ++i) {
    const double incident = entries.row(i).sum();
    const double self = 1.0 - incident;
    if (self <= 0.0) {
      throw NegativeSelfLoop("node " + std::to_string(i) + " has incident weight " +
                             std::to_string(incident) + " >= 1");
    }
    entries(i, i) = self;
  }
  return WeightMatrix(std::move(entries));
}

bool validate_doubly_stochastic(const WeightMatrix& w, double tol) {
  const Matrix& m = w.entries();
  if ((m.array() < 0.0).any()) return false;
  const auto in_band = [tol](double s) { return std::abs(s - 1.0) <= tol; };
  for (int i = 0; i < w.n(); ++i) {
    if (!in_band(m.row(i).sum()) || !in_band(m.col(i).sum())) return false;
  }
  return true;
}

GraphSchedule::GraphSchedule(std::vector<WeightMatrix> matrices, int window_b)
    : matrices_(std::move(matrices)), window_b_(window_b) {
  if (matrices_.empty()) throw std::invalid_argument("graph schedule needs at least one phase");
  if (window_b_ < 1) throw std::invalid_argument("window_B must be positive");
  for (const auto& m : matrices_) {
    if (m.n() != matrices_.front().n()) {
      throw DimensionMismatch("all phases of a graph schedule must share the agent count");
    }
  }
}

const WeightMatrix& GraphSchedule::at(int t) const {
  if (t < 1) throw std::out_of_range("graph schedule is indexed from t = 1");
  return matrices_[static_cast<std::size_t>((t - 1) % period())];
}

double GraphSchedule::weight_floor() const {
  double floor = std::numeric_limits<double>::infinity();
  for (const auto& m : matrices_) floor = std::min(floor, m.min_positive());
  return floor;
}

GraphSchedule make_schedule(int n, const std::vector<std::vector<Edge>>& phases, double edge_weight,
                            int window_b) {
  std::vector<WeightMatrix> matrices;
  matrices.reserve(phases.size());
  for (const auto& edges : phases) matrices.push_back(build_edge_weight_matrix(n, edges, edge_weight));
  return GraphSchedule(std::move(matrices), window_b);
}

std::vector<std::vector<Edge>> ring_phases(int n) {
  std::vector<std::vector<Edge>> phases(4);
  if (n < 2) return phases;
  if (n == 2) {
    phases[0].emplace_back(0, 1);
    return phases;
  }
  for (int j = 0; j + 1 < n; ++j) phases[static_cast<std::size_t>(j % 3)].emplace_back(j, j + 1);
  phases[3].emplace_back(n - 1, 0);
  return phases;
}

GraphSchedule default_schedule(int n, double edge_weight) {
  return make_schedule(n, ring_phases(n), edge_weight, 4);
}

bool strongly_connected(const std::vector<std::vector<bool>>& adjacency) {
  const std::size_t n = adjacency.size();
  std::vector<std::size_t> frontier;
  for (std::size_t source = 0; source < n; ++source) {
    std::vector<bool> seen(n, false);
    seen[source] = true;
    frontier.assign(1, source);
    std::size_t reached = 1;
    while (!frontier.empty()) {
      const std::size_t u = frontier.back();
      frontier.pop_back();
      for (std::size_t v = 0; v < n; ++v) {
        if (adjacency[u][v] && !seen[v]) {
          seen[v] = true;
          ++reached;
          frontier.push_back(v);
        }
      }
    }
    if (reached != n) return false;
  }
  return true;
}

bool check_B_strong_connectivity(const GraphSchedule& schedule, int b, int horizon) {
  if (b < 1 || horizon < b) throw std::invalid_argument("need 1 <= B <= horizon");
  const int n = schedule.n();
  // Windows repeat with the schedule period.
  const int starts = std::min(horizon - b + 1, schedule.period());
  for (int start = 1; start <= starts; ++start) {
    std::vector<std::vector<bool>> adjacency(static_cast<std::size_t>(n),
                                             std::vector<bool>(static_cast<std::size_t>(n), false));
    for (int l = 0; l < b; ++l) {
      const WeightMatrix& w = schedule.at(start + l);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          // (i, j) in E_t means i receives from j: information flows j -> i.
          if (w.has_edge(i, j)) adjacency[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = true;
        }
      }
    }
    if (!strongly_connected(adjacency)) return false;
  }
  return true;
}

MixingConstants mixing_constants(double w_min, int n, int b) {
  if (!(w_min > 0.0 && w_min < 1.0) || n < 1 || b < 1) {
    throw std::invalid_argument("mixing_constants needs w_min in (0,1), n >= 1, B >= 1");
  }
  const double base = 1.0 - w_min / (2.0 * static_cast<double>(n) * static_cast<double>(n));
  return {std::pow(base, -2.0), std::pow(base, 1.0 / static_cast<double>(b))};
}

SwarmState apply_consensus(const WeightMatrix& w, const SwarmState& swarm) {
  if (w.n() != swarm.agents()) {
    throw DimensionMismatch("weight matrix is " + std::to_string(w.n()) + "x" +
                            std::to_string(w.n()) + " but swarm has " +
                            std::to_string(swarm.agents()) + " agents");
  }
  return SwarmState{w.entries() * swarm.states, swarm.t};
}

}  // namespace odcsgd
