// SPDX-FileCopyrightText: (c) 2026 The odcsgd Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "odcsgd/algorithm.hpp"
#include "odcsgd/graph_schedule.hpp"
#include "odcsgd/noise.hpp"
#include "odcsgd/problem.hpp"

namespace odcsgd {

enum class ProblemKind { tracking_convex, tracking_nonconvex };

std::string_view to_string(ProblemKind kind);
ProblemKind problem_kind_from_string(std::string_view name);

struct GraphConfig {
  double edge_weight = 0.8;
  int window_b = 4;
  /// Undirected edges per phase (0-based nodes); empty means the default
  /// four-phase ring over N nodes.
  std::vector<std::vector<Edge>> phases;
};

/// Everything needed to run one multi-seed experiment. Defaults reproduce the
/// convex tracking experiment: N = 6, T = 5000, eta_t = (0.5 t + 10)^-0.5,
/// lambda_t = 2 t^0.1, Student-t2 gradient noise, initial states in [9,10]^2.
struct RunConfig {
  std::string name = "tracking_convex";
  ProblemKind problem = ProblemKind::tracking_convex;
  int agents = 6;
  int dimension = 2;
  int horizon = 5000;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  GraphConfig graph;
  NoiseModel noise = make_noise_model(NoiseKind::student_t2, 1.0, 1.5);
  StepSchedule step;
  ClipSchedule clip;
  InitialBox init;
  double delta = 0.1;
  bool target_noise = true;
  double box_bound = 25.0;
  std::optional<double> loss_scale;
  /// Declared B_X for the bound checks; the realised trace maximum otherwise.
  std::optional<double> state_bound;
  std::filesystem::path output_dir = "odcsgd_out";
  bool save_states = false;
  int threads = 0;  // 0: hardware concurrency

  /// kappa > 2 alpha > 0; when false the regret-bound checks are reported as
  /// inapplicable but the simulation still runs.
  bool theory_applicable() const;
  /// Throws ValidationError naming the violated invariant.
  void validate() const;
};

/// Defaults for a problem kind; the non-convex preset uses kappa = 0.4.
RunConfig default_config(ProblemKind kind = ProblemKind::tracking_convex);

/// Parses a YAML config. Missing keys take the defaults of the selected
/// problem. Throws ParseError (with line) for malformed text or unknown keys
/// and ValidationError for invalid values.
RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_text(std::string_view text,
                            const std::filesystem::path& base_dir = std::filesystem::current_path());

/// Overrides output_dir from ODCSGD_OUTPUT_DIR when set.
void apply_environment(RunConfig& config);

/// Default noise parameters for a kind at the given scale (sigma_p exact).
NoiseModel default_noise(NoiseKind kind, double scale = 1.0);

GraphSchedule build_schedule(const RunConfig& config);
std::shared_ptr<const TrackingProblem> build_problem(const RunConfig& config, std::uint64_t seed);
SimulationSpec build_simulation(const RunConfig& config, std::uint64_t seed);

}  // namespace odcsgd
