// SPDX-FileCopyrightText: (c) 2026 The odcsgd Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "odcsgd/config.hpp"
#include "odcsgd/errors.hpp"

using namespace odcsgd;

namespace {

const std::filesystem::path kConfigDir = ODCSGD_CONFIG_DIR;

std::filesystem::path scratch_dir(const std::string& name) {
  const char* root = std::getenv("ODCSGD_TEST_TMP");
  auto dir = std::filesystem::path(root ? root : std::filesystem::temp_directory_path().string()) / name;
  std::filesystem::create_directories(dir);
  return dir;
}

int parse_error_line(std::string_view text) {
  try {
    parse_config_text(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST(Config, EmptyDocumentGivesDefaults) {
  const RunConfig config = parse_config_text("");
  EXPECT_EQ(config.problem, ProblemKind::tracking_convex);
  EXPECT_EQ(config.agents, 6);
  EXPECT_EQ(config.dimension, 2);
  EXPECT_EQ(config.horizon, 5000);
  EXPECT_EQ(config.seeds.size(), 10u);
  EXPECT_EQ(config.step.a, 0.5);
  EXPECT_EQ(config.step.b, 10.0);
  EXPECT_EQ(config.step.kappa, 0.5);
  EXPECT_EQ(config.clip.c0, 2.0);
  EXPECT_EQ(config.clip.alpha, 0.1);
  EXPECT_EQ(config.noise.kind, NoiseKind::student_t2);
  EXPECT_EQ(config.noise.tail_p, 1.5);
  EXPECT_EQ(config.graph.edge_weight, 0.8);
  EXPECT_EQ(config.graph.window_b, 4);
  EXPECT_EQ(config.init.lo, 9.0);
  EXPECT_EQ(config.init.hi, 10.0);
  EXPECT_EQ(config.delta, 0.1);
  EXPECT_TRUE(config.theory_applicable());
}

TEST(Config, NonconvexPresetUsesSlowerStepDecay) {
  const RunConfig config = parse_config_text("problem: tracking_nonconvex\n");
  EXPECT_EQ(config.step.kappa, 0.4);
  EXPECT_EQ(config.name, "tracking_nonconvex");
  EXPECT_EQ(default_config(ProblemKind::tracking_nonconvex).step.kappa, 0.4);
}

TEST(Config, OutsideTheoryRangeStillLoads) {
  const RunConfig config = parse_config_text("step: {kappa: 0.2}\nclip: {alpha: 0.3}\n");
  EXPECT_EQ(config.step.kappa, 0.2);
  EXPECT_EQ(config.clip.alpha, 0.3);
  EXPECT_FALSE(config.theory_applicable());
}

TEST(Config, InvalidValuesAreRejected) {
  for (const char* text :
       {"T: -5\n", "T: 0\n", "N: 0\n", "d: 3\n", "seeds: []\n", "seeds: [1, 1]\n", "delta: 0\n", "delta: 1\n",
        "step: {a: 0}\n", "step: {b: -1}\n", "step: {kappa: -0.1}\n", "clip: {c0: 0}\n", "clip: {alpha: -1}\n",
        "noise: {scale: -1}\n", "init_box: {lo: 2, hi: 1}\n", "box_bound: 0\n", "threads: -1\n",
        "graph: {edge_weight: 1.0}\n", "graph: {window_B: 0}\n", "graph: {window_B: 3}\n",
        "graph: {phases: [[[0, 1]]]}\n", "graph: {phases: [[[0, 1], [0, 2]]], edge_weight: 0.8}\n"}) {
    EXPECT_THROW(parse_config_text(text), ValidationError) << text;
  }
}

TEST(Config, UnknownKeysReportTheirLine) {
  EXPECT_EQ(parse_error_line("N: 6\nT: 100\nhorizon: 5\n"), 3);
  EXPECT_EQ(parse_error_line("N: 6\nstep:\n  a: 0.5\n  rate: 2\n"), 4);
  EXPECT_EQ(parse_error_line("noise: {kind: cauchy}\n"), 1);
  EXPECT_EQ(parse_error_line("problem: logistic\n"), 1);
}

TEST(Config, MalformedYamlReportsLine) {
  EXPECT_GT(parse_error_line("N: 6\nT: [1, 2\nstep: {a: 1}\n"), 0);
  EXPECT_EQ(parse_error_line("- 1\n- 2\n"), 1);
  EXPECT_GT(parse_error_line("T: many\n"), 0);
}

TEST(Config, SeedForms) {
  EXPECT_EQ(parse_config_text("seeds: [3, 5, 8]\n").seeds, (std::vector<std::uint64_t>{3, 5, 8}));
  EXPECT_EQ(parse_config_text("seeds: {count: 3, first: 7}\n").seeds, (std::vector<std::uint64_t>{7, 8, 9}));
  EXPECT_EQ(parse_config_text("seeds: 42\n").seeds, (std::vector<std::uint64_t>{42}));
}

TEST(Config, NoiseSection) {
  const RunConfig gaussian = parse_config_text("noise: {kind: gaussian, scale: 2}\n");
  EXPECT_EQ(gaussian.noise.kind, NoiseKind::gaussian);
  EXPECT_EQ(gaussian.noise.tail_p, 2.0);
  EXPECT_NEAR(gaussian.noise.sigma_p, 2.0, 1e-12);
  const RunConfig none = parse_config_text("noise: {kind: none}\n");
  EXPECT_EQ(none.noise.sigma_p, 0.0);
  const RunConfig declared = parse_config_text("noise: {kind: student_t2, tail_p: 1.2, sigma_p: 3}\n");
  EXPECT_EQ(declared.noise.tail_p, 1.2);
  EXPECT_EQ(declared.noise.sigma_p, 3.0);
}

TEST(Config, GraphFileIsRelativeToConfig) {
  const auto dir = scratch_dir("config_graph");
  {
    std::ofstream(dir / "line.yaml") << "edge_weight: 0.5\nwindow_B: 2\nphases:\n  - [[0, 1]]\n  - [[1, 2]]\n";
    std::ofstream(dir / "run.yaml") << "N: 3\nT: 20\ngraph: line.yaml\n";
  }
  const RunConfig config = parse_config(dir / "run.yaml");
  EXPECT_EQ(config.agents, 3);
  EXPECT_EQ(config.graph.edge_weight, 0.5);
  EXPECT_EQ(config.graph.window_b, 2);
  ASSERT_EQ(config.graph.phases.size(), 2u);
  const GraphSchedule schedule = build_schedule(config);
  EXPECT_EQ(schedule.n(), 3);
  EXPECT_EQ(schedule.period(), 2);
  EXPECT_THROW(parse_config_text("graph: missing.yaml\n", dir), ParseError);
  EXPECT_THROW(parse_config(dir / "absent.yaml"), ParseError);
}

TEST(Config, ShippedConfigsParse) {
  const RunConfig convex = parse_config(kConfigDir / "convex.yaml");
  EXPECT_EQ(convex.problem, ProblemKind::tracking_convex);
  EXPECT_EQ(convex.graph.phases.size(), 4u);
  EXPECT_EQ(convex.seeds.size(), 10u);
  EXPECT_TRUE(convex.theory_applicable());
  const GraphSchedule ring = build_schedule(convex);
  const GraphSchedule reference = build_schedule(default_config());
  for (int t = 1; t <= 8; ++t) EXPECT_EQ(ring.at(t).entries(), reference.at(t).entries()) << t;

  const RunConfig nonconvex = parse_config(kConfigDir / "nonconvex.yaml");
  EXPECT_EQ(nonconvex.problem, ProblemKind::tracking_nonconvex);
  EXPECT_EQ(nonconvex.step.kappa, 0.4);
  EXPECT_TRUE(nonconvex.theory_applicable());
}

TEST(Config, EnvironmentOverridesOutputDir) {
  RunConfig config = default_config();
  config.output_dir = "from_file";
  ::unsetenv("ODCSGD_OUTPUT_DIR");
  apply_environment(config);
  EXPECT_EQ(config.output_dir, "from_file");
  ::setenv("ODCSGD_OUTPUT_DIR", "/tmp/elsewhere", 1);
  apply_environment(config);
  EXPECT_EQ(config.output_dir, "/tmp/elsewhere");
  ::unsetenv("ODCSGD_OUTPUT_DIR");
}

TEST(Config, BuildSimulationIsSeeded) {
  RunConfig config = default_config();
  config.horizon = 50;
  const SimulationSpec a = build_simulation(config, 3);
  const SimulationSpec b = build_simulation(config, 3);
  const SimulationSpec c = build_simulation(config, 4);
  EXPECT_EQ(a.seed, 3u);
  EXPECT_EQ(a.horizon, 50);
  const auto& pa = dynamic_cast<const TrackingProblem&>(*a.problem);
  const auto& pb = dynamic_cast<const TrackingProblem&>(*b.problem);
  const auto& pc = dynamic_cast<const TrackingProblem&>(*c.problem);
  EXPECT_EQ(pa.target().at(30), pb.target().at(30));
  EXPECT_NE(pa.target().at(30), pc.target().at(30));
  config.target_noise = false;
  const auto& quiet = dynamic_cast<const TrackingProblem&>(*build_simulation(config, 3).problem);
  const auto& quiet2 = dynamic_cast<const TrackingProblem&>(*build_simulation(config, 4).problem);
  EXPECT_EQ(quiet.target().at(30), quiet2.target().at(30));
}
