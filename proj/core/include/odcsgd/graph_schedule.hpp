// SPDX-FileCopyrightText: (c) 2026 The odcsgd Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <utility>
#include <vector>

#include "odcsgd/types.hpp"

namespace odcsgd {

/// Square nonnegative mixing matrix. Entry (i, j) is the weight agent i puts
/// on the state received from agent j. Double stochasticity is checked by
/// validate_doubly_stochastic, not enforced here.
class WeightMatrix {
 public:
  /// Throws DimensionMismatch unless `entries` is square and nonempty.
  explicit WeightMatrix(Matrix entries);

  static WeightMatrix identity(int n);
  static WeightMatrix uniform(int n);

  int n() const { return static_cast<int>(entries_.rows()); }
  const Matrix& entries() const { return entries_; }
  double operator()(int i, int j) const { return entries_(i, j); }

  /// Smallest strictly positive entry.
  double min_positive() const;
  bool has_edge(int i, int j) const { return i != j && entries_(i, j) > 0.0; }

 private:
  Matrix entries_;
};

using Edge = std::pair<int, int>;

/// Symmetric weights `w` on each undirected edge (0-based nodes), self-loop
/// takes the remainder. Throws NegativeSelfLoop when a node's incident weight
/// exceeds one and std::invalid_argument for w outside (0,1) or bad node ids.
WeightMatrix build_edge_weight_matrix(int n, const std::vector<Edge>& edges, double w);

bool validate_doubly_stochastic(const WeightMatrix& w, double tol);

/// Cyclic sequence of mixing matrices; W_t = matrices[(t - 1) % period].
class GraphSchedule {
 public:
  GraphSchedule(std::vector<WeightMatrix> matrices, int window_b);

  int n() const { return matrices_.front().n(); }
  int period() const { return static_cast<int>(matrices_.size()); }
  int window_b() const { return window_b_; }
  const std::vector<WeightMatrix>& matrices() const { return matrices_; }

  /// Mixing matrix at time t >= 1.
  const WeightMatrix& at(int t) const;

  /// Smallest positive weight over all phases (the weight floor).
  double weight_floor() const;

 private:
  std::vector<WeightMatrix> matrices_;
  int window_b_;
};

/// Builds a schedule from per-phase undirected edge lists.
GraphSchedule make_schedule(int n, const std::vector<std::vector<Edge>>& phases, double edge_weight,
                            int window_b);

/// Ring over n nodes split into four matchings cycled in order; every window
/// of four consecutive phases covers the whole ring. For n = 6 the phases are
/// {01,34}, {12,45}, {23}, {50}.
std::vector<std::vector<Edge>> ring_phases(int n);

GraphSchedule default_schedule(int n = 6, double edge_weight = 0.8);

/// True iff the union of edges over every window [t, t + b - 1],
/// t = 1..horizon - b + 1, forms a strongly connected directed graph.
bool check_B_strong_connectivity(const GraphSchedule& schedule, int b, int horizon);

/// Strong connectivity of an adjacency relation, by reachability from every node.
bool strongly_connected(const std::vector<std::vector<bool>>& adjacency);

struct MixingConstants {
  double gamma;
  double beta;
};

/// gamma = (1 - w_min / (2 n^2))^-2, beta = (1 - w_min / (2 n^2))^(1/b).
MixingConstants mixing_constants(double w_min, int n, int b);

/// y_i = sum_j W_ij x_j. Throws DimensionMismatch when W.n() != agent count.
SwarmState apply_consensus(const WeightMatrix& w, const SwarmState& swarm);

}  // namespace odcsgd
