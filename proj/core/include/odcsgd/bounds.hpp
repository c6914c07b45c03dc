// SPDX-FileCopyrightText: (c) 2026 The odcsgd Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "odcsgd/algorithm.hpp"
#include "odcsgd/graph_schedule.hpp"
#include "odcsgd/noise.hpp"
#include "odcsgd/problem.hpp"

namespace odcsgd {

/// Constants and schedules needed to evaluate the network-error and regret
/// bounds of one run.
struct BoundContext {
  MixingConstants mixing{1.0, 0.5};
  int agents = 1;
  int horizon = 1;
  double r1 = 0.0;  // max_i ||x_{i,1}||
  double gradient_bound = 0.0;
  double state_bound = 0.0;
  double smoothness = 0.0;
  double sigma_p = 0.0;
  double tail_p = 2.0;
  StepSchedule step;
  ClipSchedule clip;
  double delta = 0.1;
  /// sum_i ||x_{i,1} - x*_1||^2; used by the convex regret bound.
  double initial_gap_sq = 0.0;
  /// f_1(mean_1) - f_{T+1}(mean_{T+1}); used by the non-convex regret bound.
  double value_drop = 0.0;

  double eta(int t) const { return step(t); }
  double lambda(int t) const { return clip(t); }
  /// Throws ValidationError when delta is outside (0, 1) or constants are invalid.
  void validate() const;
};

/// Decay exponents satisfy kappa > 2 alpha > 0.
bool theory_applicable(const StepSchedule& step, const ClipSchedule& clip);

/// Context for one trace. B_X is the realised max of ||x_{i,t}|| and ||x*_t||
/// unless `state_bound_override` is given; B_g and L come from the problem.
BoundContext make_bound_context(const RunTrace& trace, const ProblemSequence& problem,
                                const GraphSchedule& graph, const NoiseModel& noise,
                                const StepSchedule& step, const ClipSchedule& clip, double delta,
                                std::optional<double> state_bound_override = std::nullopt);

/// N gamma beta^t R1 + 2 lambda_t eta_t + N gamma sum_{l<t} beta^(t-l) lambda_l eta_l.
double lemma2_rhs(int t, const BoundContext& ctx);
/// lemma2_rhs(t) for t = 1..horizon in O(horizon).
std::vector<double> lemma2_rhs_series(const BoundContext& ctx, int horizon);

/// 3 N^2 gamma^2 R1^2 / (1 - beta^2) + 12 sum eta^2 lambda^2
///   + 3 N^2 gamma^2 / (1 - beta)^2 sum eta^3 lambda^2, sums over t = 1..T.
double lemma3_rhs(int horizon, const BoundContext& ctx);

/// Outcome of a bound that must hold on every trajectory.
struct PathwiseCheck {
  std::string name;
  std::size_t checked = 0;
  std::size_t violations = 0;
  double worst_ratio = 0.0;  // max realized / bound
  double worst_realized = 0.0;
  double worst_bound = 0.0;
  int worst_t = 0;

  bool passed() const { return violations == 0; }
  void merge(const PathwiseCheck& other);
};

/// ||x_{i,t+1} - mean_{t+1}|| <= lemma2_rhs(t) for every agent and t = 1..T.
PathwiseCheck check_lemma2(const RunTrace& trace, const BoundContext& ctx);
/// sum_{s<=t} ||x_{i,s} - mean_s||^2 <= lemma3_rhs(t) for every agent and prefix t.
PathwiseCheck check_lemma3(const RunTrace& trace, const BoundContext& ctx);

/// Monte-Carlo split of the clipped gradient error into its fluctuation
/// (theta_u = clip(g) - E clip(g)) and bias (theta_b = E clip(g) - grad f).
struct ClipDecomposition {
  std::size_t samples = 0;
  Vector theta_b;
  double theta_b_norm = 0.0;
  double theta_b_se = 0.0;
  double theta_u_sq_mean = 0.0;
  double theta_u_sq_se = 0.0;
  double max_theta_u_norm = 0.0;
  double bias_bound = 0.0;      // 4 sigma^p lambda^(1-p)
  double variance_bound = 0.0;  // 16 sigma^p lambda^(2-p)
  double lambda = 0.0;

  bool bias_ok() const { return theta_b_norm <= bias_bound + 3.0 * theta_b_se; }
  bool variance_ok() const { return theta_u_sq_mean <= variance_bound + 3.0 * theta_u_sq_se; }
  bool per_sample_ok() const { return max_theta_u_norm <= 2.0 * lambda; }
};

/// Throws HypothesisViolated when ||grad f_{i,t}(x)|| > lambda / 2 and
/// std::invalid_argument when samples < 1e4.
ClipDecomposition clip_decomposition_estimate(const GradientOracle& oracle, const Vector& x, int i,
                                              int t, double lambda, std::size_t samples,
                                              RandomStream& stream);

struct BoundTerm {
  std::string name;
  double value;
};

struct BoundBreakdown {
  std::vector<BoundTerm> terms;
  double total = 0.0;
  /// Convex bound only: the log(2/delta) term with the (32/3) B_X^2 L
  /// coefficient carried by the longer derivation, for comparison.
  double alternate_log_term = 0.0;
};

/// Convex high-probability bound on the dynamic regret given the path length.
BoundBreakdown theorem1_terms(const BoundContext& ctx, double path_length);
double theorem1_rhs(const BoundContext& ctx, double path_length);

struct NonconvexBound {
  double nreg_over_2n;
  double nreg;
};

/// Non-convex high-probability bound on NREG / (2N) given the variation D_T.
BoundBreakdown theorem2_terms(const BoundContext& ctx, double variation);
NonconvexBound theorem2_rhs(const BoundContext& ctx, double variation);

struct BoundSample {
  double realized;
  double bound;
};

struct HighProbabilityReport {
  std::size_t runs = 0;
  std::size_t within = 0;
  double fraction = 0.0;
  double threshold = 0.0;  // 1 - delta - 2 sqrt(delta (1 - delta) / runs)
  bool passed = false;
};

/// Needs at least 20 runs.
HighProbabilityReport high_probability_check(std::span<const BoundSample> samples, double delta);
HighProbabilityReport high_probability_check(
    std::span<const RunTrace> runs, const std::function<BoundSample(const RunTrace&)>& evaluate,
    double delta);

struct RateReport {
  double slope = 0.0;
  double target = 0.0;     // (1 + p) / (2p)
  double threshold = 0.0;  // min(0.95, target + 0.15)
  bool passed = false;
};

RateReport corollary_rate_check(std::span<const double> series, double p, int t_lo, int t_hi);

}  // namespace odcsgd
