// SPDX-FileCopyrightText: (c) 2026 The odcsgd Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "odcsgd/algorithm.hpp"
#include "odcsgd/problem.hpp"

namespace odcsgd {

/// Performance measures of one run. Series are indexed by t - 1.
struct RegretLedger {
  std::vector<double> reg_d;         // empty when no minimizer is available
  std::vector<double> nreg_d;
  double c_path = 0.0;               // 0 when no minimizer is available
  double d_var = 0.0;
  std::vector<double> disagreement;  // max_i ||x_{i,t} - mean_t||, t = 1..T

  int horizon() const { return static_cast<int>(nreg_d.size()); }
  bool has_dynamic_regret() const { return !reg_d.empty(); }
};

/// Partial sums of sum_i [f_s(x_{i,s}) - f_s(x*_s)] for s <= t, t = 1..T,
/// evaluated with the exact global objective. Throws MinimizerUnavailable.
std::vector<double> dynamic_regret(const RunTrace& trace, const ProblemSequence& problem);

/// Partial sums of sum_i ||grad f_s(x_{i,s})||^2.
std::vector<double> nonconvex_regret(const RunTrace& trace, const ProblemSequence& problem);

/// sum_{t=2..T} ||x*_t - x*_{t-1}|| over minimizers[0] = x*_1, ..., x*_T.
double path_length(std::span<const Vector> minimizers);
/// Path length of positions x*_1..x*_T.
double path_length(const TrackingTarget& target);
/// Path length of problem.minimizer(t), t = 1..T. Throws MinimizerUnavailable.
double path_length(const ProblemSequence& problem);

/// sum of variation increments over t in [t_from, t_to]; t_to < 0 means T.
double function_variation(const ProblemSequence& problem, int t_from = 2, int t_to = -1);

/// Least-squares slope of log(series[t-1]) against log t for t in [t_lo, t_hi].
/// Throws NonPositiveSeries when a value in the window is not positive.
double sublinearity_slope(std::span<const double> series, int t_lo, int t_hi);

/// Full ledger; dynamic regret and path length are skipped (left empty/zero)
/// when the problem exposes no minimizer.
RegretLedger compute_ledger(const RunTrace& trace, const ProblemSequence& problem);

}  // namespace odcsgd
