// SPDX-FileCopyrightText: (c) 2026 The odcsgd Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "odcsgd/algorithm.hpp"
#include "odcsgd/config.hpp"
#include "odcsgd/regret.hpp"

namespace odcsgd {

struct SeedSummary {
  std::uint64_t seed = 0;
  int horizon = 0;
  double reg_d = 0.0;        // REG_T, nan without a minimizer
  double nreg_d = 0.0;       // NREG_T
  double c_path = 0.0;
  double d_var = 0.0;
  double reg_slope = 0.0;    // log-log slope over [T/10, T], nan when undefined
  double nreg_slope = 0.0;
  double max_state_norm = 0.0;
  double wall_seconds = 0.0;
};

enum class CheckStatus { pass, fail, inapplicable };

std::string_view to_string(CheckStatus status);

struct CheckOutcome {
  std::string name;
  double bound = 0.0;
  double realized = 0.0;
  double margin = 0.0;  // bound - realized
  CheckStatus status = CheckStatus::inapplicable;
  std::string detail;
};

struct Aggregate {
  std::string name;
  double median = 0.0;
  double q10 = 0.0;
  double q90 = 0.0;
};

struct ExperimentReport {
  RunConfig config;
  std::vector<SeedSummary> seeds;
  std::vector<RegretLedger> ledgers;
  std::vector<RunTrace> traces;  // filled only with ExperimentOptions::keep_traces
  std::vector<Aggregate> aggregates;
  std::vector<CheckOutcome> checks;
  std::vector<std::filesystem::path> csv_files;
  double wall_seconds = 0.0;

  /// True iff no check failed (inapplicable counts as passing).
  bool all_passed() const;
  const Aggregate* aggregate(std::string_view name) const;
};

struct ExperimentOptions {
  bool write_csv = true;
  bool run_checks = true;
  bool keep_traces = false;
};

/// Median (mean of the middle pair for even sizes). Throws on empty input.
double median(std::vector<double> values);
/// Linear-interpolation quantile, q in [0, 1].
double quantile(std::vector<double> values, double q);

/// Median over seeds of ledger series value / t at time t, for "reg" or "nreg".
double median_over_t(std::span<const RegretLedger> ledgers, std::string_view series, int t);

/// One run per seed on a worker pool, then ledgers, checks and CSVs. Results
/// are ordered as config.seeds; a worker failure is rethrown for the first
/// failing seed in that order.
ExperimentReport run_experiment(const RunConfig& config, const ExperimentOptions& options = {});

/// Applies one sweep value to a copy of config. Axes: alpha, kappa,
/// noise.scale, noise.kind, T, N. Throws UnknownAxis otherwise.
RunConfig with_axis_value(const RunConfig& config, std::string_view axis, std::string_view value);

/// One report per value with the same seeds. A single value gives the same
/// report as run_experiment on the unchanged config.
std::vector<ExperimentReport> sweep(const RunConfig& config, std::string_view axis,
                                    std::span<const std::string> values,
                                    const ExperimentOptions& options = {});

/// Per-seed summary CSV (no timing columns).
void write_summary_csv(const std::filesystem::path& path, const ExperimentReport& report);

/// One line per check: name, bound, realized, margin, PASS/FAIL/INAPPLICABLE.
std::string format_checks(const ExperimentReport& report);
std::string format_report(const ExperimentReport& report);

}  // namespace odcsgd
