// SPDX-FileCopyrightText: (c) 2026 The odcsgd Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "odcsgd/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <stdexcept>

#include "odcsgd/bounds.hpp"
#include "odcsgd/errors.hpp"

namespace odcsgd {

std::string_view to_string(ProblemKind kind) {
  return kind == ProblemKind::tracking_convex ? "tracking_convex" : "tracking_nonconvex";
}

ProblemKind problem_kind_from_string(std::string_view name) {
  if (name == "tracking_convex") return ProblemKind::tracking_convex;
  if (name == "tracking_nonconvex") return ProblemKind::tracking_nonconvex;
  throw std::invalid_argument("unknown problem '" + std::string(name) + "'");
}

bool RunConfig::theory_applicable() const { return odcsgd::theory_applicable(step, clip); }

NoiseModel default_noise(NoiseKind kind, double scale) {
  const double tail_p = kind == NoiseKind::student_t2 ? 1.5 : 2.0;
  return {kind, scale, tail_p, exact_sigma_p(kind, scale, tail_p)};
}

RunConfig default_config(ProblemKind kind) {
  RunConfig config;
  config.problem = kind;
  config.name = std::string(to_string(kind));
  if (kind == ProblemKind::tracking_nonconvex) config.step.kappa = 0.4;
  return config;
}

void RunConfig::validate() const {
  if (agents < 1) throw ValidationError("N must be >= 1");
  if (dimension != 2) throw ValidationError("tracking problems require d = 2");
  if (horizon < 1) throw ValidationError("T must be >= 1");
  if (seeds.empty()) throw ValidationError("seeds must not be empty");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
    throw ValidationError("seeds must be distinct");
  }
  if (!(step.a > 0.0 && step.b > 0.0 && step.kappa >= 0.0)) {
    throw ValidationError("step schedule needs a > 0, b > 0, kappa >= 0");
  }
  if (!(clip.c0 > 0.0 && clip.alpha >= 0.0)) throw ValidationError("clip schedule needs c0 > 0, alpha >= 0");
  noise.validate();
  if (!(init.lo <= init.hi)) throw ValidationError("init_box needs lo <= hi");
  if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("delta must lie in (0, 1)");
  if (!(box_bound > 0.0)) throw ValidationError("box_bound must be positive");
  if (loss_scale && !(*loss_scale > 0.0)) throw ValidationError("loss_scale must be positive");
  if (state_bound && !(*state_bound > 0.0)) throw ValidationError("state_bound must be positive");
  if (threads < 0) throw ValidationError("threads must be >= 0");
  if (!(graph.edge_weight > 0.0 && graph.edge_weight < 1.0)) {
    throw ValidationError("graph.edge_weight must lie in (0, 1)");
  }
  if (graph.window_b < 1) throw ValidationError("graph.window_B must be >= 1");

  GraphSchedule schedule = [&] {
    try {
      return build_schedule(*this);
    } catch (const NegativeSelfLoop& e) {
      throw ValidationError(std::string("graph phase is too dense: ") + e.what());
    } catch (const std::invalid_argument& e) {
      throw ValidationError(std::string("graph: ") + e.what());
    }
  }();
  for (const auto& w : schedule.matrices()) {
    if (!validate_doubly_stochastic(w, 1e-12)) throw ValidationError("graph phase is not doubly stochastic");
  }
  const int span = std::max(horizon, graph.window_b + schedule.period());
  if (!check_B_strong_connectivity(schedule, graph.window_b, span)) {
    throw ValidationError("graph schedule is not window_B-strongly connected");
  }
}

GraphSchedule build_schedule(const RunConfig& config) {
  const auto phases = config.graph.phases.empty() ? ring_phases(config.agents) : config.graph.phases;
  return make_schedule(config.agents, phases, config.graph.edge_weight, config.graph.window_b);
}

std::shared_ptr<const TrackingProblem> build_problem(const RunConfig& config, std::uint64_t seed) {
  RandomStream stream(seed, 0, 0, StreamDomain::target_noise);
  TrackingTarget target = target_trajectory(config.horizon, config.target_noise, stream);
  const TrackingLoss loss =
      config.problem == ProblemKind::tracking_convex ? TrackingLoss::quadratic : TrackingLoss::quartic;
  return std::make_shared<const TrackingProblem>(loss, std::move(target), config.agents,
                                                 config.box_bound, config.loss_scale);
}

SimulationSpec build_simulation(const RunConfig& config, std::uint64_t seed) {
  SimulationSpec spec;
  spec.problem = build_problem(config, seed);
  spec.graph = build_schedule(config);
  spec.noise = config.noise;
  spec.step = config.step;
  spec.clip = config.clip;
  spec.init = config.init;
  spec.horizon = config.horizon;
  spec.seed = seed;
  return spec;
}

void apply_environment(RunConfig& config) {
  if (const char* dir = std::getenv("ODCSGD_OUTPUT_DIR"); dir != nullptr && *dir != '\0') {
    config.output_dir = dir;
  }
}

namespace {

int line_of(const YAML::Node& node) {
  const YAML::Mark mark = node.Mark();
  return mark.is_null() ? -1 : mark.line + 1;
}

[[noreturn]] void fail(const YAML::Node& node, const std::string& what) {
  throw ParseError(what, line_of(node));
}

template <typename T>
T read(const YAML::Node& node, std::string_view key) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    fail(node, "key '" + std::string(key) + "' has the wrong type");
  }
}

void require_map(const YAML::Node& node, std::string_view key) {
  if (!node.IsMap()) fail(node, "key '" + std::string(key) + "' must be a mapping");
}

void check_keys(const YAML::Node& map, std::initializer_list<std::string_view> allowed,
                std::string_view where) {
  for (const auto& entry : map) {
    const auto key = entry.first.as<std::string>();
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail(entry.first, "unknown key '" + key + "' in " + std::string(where));
    }
  }
}

Edge read_edge(const YAML::Node& node) {
  if (!node.IsSequence() || node.size() != 2) fail(node, "graph edges must be [i, j] pairs");
  return {read<int>(node[0], "edge"), read<int>(node[1], "edge")};
}

void read_graph(const YAML::Node& node, GraphConfig& graph, const std::filesystem::path& base_dir) {
  YAML::Node map = node;
  if (node.IsScalar()) {
    const std::filesystem::path path = base_dir / node.as<std::string>();
    try {
      map = YAML::LoadFile(path.string());
    } catch (const YAML::BadFile&) {
      fail(node, "cannot open graph file '" + path.string() + "'");
    } catch (const YAML::ParserException& e) {
      throw ParseError(path.string() + ": " + e.msg, e.mark.line + 1);
    }
  }
  require_map(map, "graph");
  check_keys(map, {"edge_weight", "window_B", "phases"}, "graph");
  if (map["edge_weight"]) graph.edge_weight = read<double>(map["edge_weight"], "edge_weight");
  if (map["window_B"]) graph.window_b = read<int>(map["window_B"], "window_B");
  if (const YAML::Node phases = map["phases"]) {
    if (!phases.IsSequence()) fail(phases, "graph.phases must be a list of edge lists");
    graph.phases.clear();
    for (const auto& phase : phases) {
      if (!phase.IsSequence()) fail(phase, "each graph phase must be a list of edges");
      std::vector<Edge> edges;
      for (const auto& edge : phase) edges.push_back(read_edge(edge));
      graph.phases.push_back(std::move(edges));
    }
  }
}

void read_noise(const YAML::Node& node, NoiseModel& noise) {
  require_map(node, "noise");
  check_keys(node, {"kind", "scale", "tail_p", "sigma_p"}, "noise");
  NoiseKind kind = noise.kind;
  if (node["kind"]) {
    try {
      kind = noise_kind_from_string(read<std::string>(node["kind"], "kind"));
    } catch (const std::invalid_argument& e) {
      fail(node["kind"], e.what());
    }
  }
  const double scale = node["scale"] ? read<double>(node["scale"], "scale") : noise.scale;
  NoiseModel model = default_noise(kind, 1.0);
  model.scale = scale;
  if (node["tail_p"]) model.tail_p = read<double>(node["tail_p"], "tail_p");
  model.sigma_p = node["sigma_p"] ? read<double>(node["sigma_p"], "sigma_p")
                                  : exact_sigma_p(kind, scale, model.tail_p);
  noise = model;
}

std::vector<std::uint64_t> read_seeds(const YAML::Node& node) {
  std::vector<std::uint64_t> seeds;
  if (node.IsSequence()) {
    for (const auto& s : node) seeds.push_back(read<std::uint64_t>(s, "seeds"));
  } else if (node.IsMap()) {
    check_keys(node, {"count", "first"}, "seeds");
    const int count = node["count"] ? read<int>(node["count"], "count") : 10;
    const auto first = node["first"] ? read<std::uint64_t>(node["first"], "first") : 1;
    if (count < 1) fail(node, "seeds.count must be >= 1");
    for (int k = 0; k < count; ++k) seeds.push_back(first + static_cast<std::uint64_t>(k));
  } else {
    seeds.push_back(read<std::uint64_t>(node, "seeds"));
  }
  return seeds;
}

}  // namespace

RunConfig parse_config_text(std::string_view text, const std::filesystem::path& base_dir) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ParseError(e.msg, e.mark.line + 1);
  }
  if (!root || root.IsNull()) {
    RunConfig config = default_config();
    config.validate();
    return config;
  }
  if (!root.IsMap()) fail(root, "config must be a mapping of keys to values");
  check_keys(root, {"name", "problem", "N", "d", "T", "seeds", "delta", "step", "clip", "noise",
                    "graph", "init_box", "target_noise", "box_bound", "loss_scale", "state_bound",
                    "output_dir", "save_states", "threads"},
             "config");

  ProblemKind kind = ProblemKind::tracking_convex;
  if (root["problem"]) {
    try {
      kind = problem_kind_from_string(read<std::string>(root["problem"], "problem"));
    } catch (const std::invalid_argument& e) {
      fail(root["problem"], e.what());
    }
  }
  RunConfig config = default_config(kind);

  if (root["name"]) config.name = read<std::string>(root["name"], "name");
  if (root["N"]) config.agents = read<int>(root["N"], "N");
  if (root["d"]) config.dimension = read<int>(root["d"], "d");
  if (root["T"]) config.horizon = read<int>(root["T"], "T");
  if (root["seeds"]) config.seeds = read_seeds(root["seeds"]);
  if (root["delta"]) config.delta = read<double>(root["delta"], "delta");
  if (const YAML::Node step = root["step"]) {
    require_map(step, "step");
    check_keys(step, {"a", "b", "kappa"}, "step");
    if (step["a"]) config.step.a = read<double>(step["a"], "a");
    if (step["b"]) config.step.b = read<double>(step["b"], "b");
    if (step["kappa"]) config.step.kappa = read<double>(step["kappa"], "kappa");
  }
  if (const YAML::Node clip = root["clip"]) {
    require_map(clip, "clip");
    check_keys(clip, {"c0", "alpha"}, "clip");
    if (clip["c0"]) config.clip.c0 = read<double>(clip["c0"], "c0");
    if (clip["alpha"]) config.clip.alpha = read<double>(clip["alpha"], "alpha");
  }
  if (root["noise"]) read_noise(root["noise"], config.noise);
  if (root["graph"]) read_graph(root["graph"], config.graph, base_dir);
  if (const YAML::Node box = root["init_box"]) {
    require_map(box, "init_box");
    check_keys(box, {"lo", "hi"}, "init_box");
    if (box["lo"]) config.init.lo = read<double>(box["lo"], "lo");
    if (box["hi"]) config.init.hi = read<double>(box["hi"], "hi");
  }
  if (root["target_noise"]) config.target_noise = read<bool>(root["target_noise"], "target_noise");
  if (root["box_bound"]) config.box_bound = read<double>(root["box_bound"], "box_bound");
  if (root["loss_scale"]) config.loss_scale = read<double>(root["loss_scale"], "loss_scale");
  if (root["state_bound"]) config.state_bound = read<double>(root["state_bound"], "state_bound");
  if (root["output_dir"]) config.output_dir = read<std::string>(root["output_dir"], "output_dir");
  if (root["save_states"]) config.save_states = read<bool>(root["save_states"], "save_states");
  if (root["threads"]) config.threads = read<int>(root["threads"], "threads");

  config.validate();
  return config;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config '" + path.string() + "'", -1);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path.parent_path());
}

}  // namespace odcsgd
