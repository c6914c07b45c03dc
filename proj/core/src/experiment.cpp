// SPDX-FileCopyrightText: (c) 2026 The odcsgd Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "odcsgd/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "odcsgd/bounds.hpp"
#include "odcsgd/csv.hpp"
#include "odcsgd/errors.hpp"

namespace odcsgd {

std::string_view to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::pass:
      return "PASS";
    case CheckStatus::fail:
      return "FAIL";
    case CheckStatus::inapplicable:
      return "INAPPLICABLE";
  }
  return "?";
}

bool ExperimentReport::all_passed() const {
  return std::none_of(checks.begin(), checks.end(),
                      [](const CheckOutcome& c) { return c.status == CheckStatus::fail; });
}

const Aggregate* ExperimentReport::aggregate(std::string_view name) const {
  for (const auto& a : aggregates) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of an empty set");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile level outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  if (frac == 0.0) return values[lo];
  return values[lo] + frac * (values[hi] - values[lo]);
}

double median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

double median_over_t(std::span<const RegretLedger> ledgers, std::string_view series, int t) {
  std::vector<double> values;
  for (const auto& ledger : ledgers) {
    const auto& s = series == "reg" ? ledger.reg_d : ledger.nreg_d;
    if (series != "reg" && series != "nreg") throw std::invalid_argument("series must be reg or nreg");
    if (t < 1 || t > static_cast<int>(s.size())) throw std::out_of_range("t outside the ledger");
    values.push_back(s[static_cast<std::size_t>(t - 1)] / t);
  }
  return median(std::move(values));
}

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

struct SeedResult {
  SeedSummary summary;
  RegretLedger ledger;
  std::optional<RunTrace> trace;
  PathwiseCheck network;
  PathwiseCheck cumulative;
  BoundSample regret{kNan, kNan};
  std::optional<RateReport> rate;
  std::vector<std::filesystem::path> files;
};

std::pair<int, int> rate_window(int horizon) { return {std::max(1, horizon / 10), horizon}; }

double slope_or_nan(const std::vector<double>& series, int horizon) {
  const auto [lo, hi] = rate_window(horizon);
  if (series.empty() || hi <= lo) return kNan;
  try {
    return sublinearity_slope(series, lo, hi);
  } catch (const NonPositiveSeries&) {
    return kNan;
  }
}

SeedResult run_seed(const RunConfig& config, std::uint64_t seed, const ExperimentOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const SimulationSpec spec = build_simulation(config, seed);
  RunTrace trace = run(spec);

  SeedResult result;
  result.ledger = compute_ledger(trace, *spec.problem);
  const RegretLedger& ledger = result.ledger;
  const int horizon = trace.horizon();

  SeedSummary& s = result.summary;
  s.seed = seed;
  s.horizon = horizon;
  s.reg_d = ledger.has_dynamic_regret() ? ledger.reg_d.back() : kNan;
  s.nreg_d = ledger.nreg_d.back();
  s.c_path = ledger.c_path;
  s.d_var = ledger.d_var;
  s.reg_slope = slope_or_nan(ledger.reg_d, horizon);
  s.nreg_slope = slope_or_nan(ledger.nreg_d, horizon);
  s.max_state_norm = trace.max_state_norm();

  if (options.run_checks) {
    const BoundContext ctx = make_bound_context(trace, *spec.problem, spec.graph, spec.noise,
                                                spec.step, spec.clip, config.delta, config.state_bound);
    result.network = check_lemma2(trace, ctx);
    result.cumulative = check_lemma3(trace, ctx);
    if (config.theory_applicable()) {
      const bool convex = config.problem == ProblemKind::tracking_convex;
      if (convex && ledger.has_dynamic_regret()) {
        result.regret = {s.reg_d, theorem1_rhs(ctx, ledger.c_path)};
      } else if (!convex) {
        result.regret = {s.nreg_d, theorem2_rhs(ctx, ledger.d_var).nreg};
      }
      const auto& series = convex ? ledger.reg_d : ledger.nreg_d;
      const auto [lo, hi] = rate_window(horizon);
      if (!series.empty() && hi > lo) {
        try {
          result.rate = corollary_rate_check(series, config.noise.tail_p, lo, hi);
        } catch (const NonPositiveSeries&) {
          result.rate = RateReport{kNan, 0.0, 0.0, false};
        }
      }
    }
  }

  if (options.write_csv) {
    const auto stem = config.name + "_seed" + std::to_string(seed);
    const auto ledger_path = config.output_dir / (stem + ".csv");
    write_ledger_csv(ledger_path, ledger, trace);
    result.files.push_back(ledger_path);
    if (config.save_states) {
      const auto states_path = config.output_dir / (stem + "_states.csv");
      write_states_csv(states_path, trace);
      result.files.push_back(states_path);
    }
  }
  if (options.keep_traces) result.trace = std::move(trace);
  s.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

CheckOutcome pathwise_outcome(const std::string& name, const std::vector<SeedResult>& results,
                              PathwiseCheck SeedResult::*member) {
  PathwiseCheck merged;
  merged.name = name;
  for (const auto& r : results) merged.merge(r.*member);
  CheckOutcome out;
  out.name = name;
  out.bound = merged.worst_bound;
  out.realized = merged.worst_realized;
  out.margin = merged.worst_bound - merged.worst_realized;
  out.status = merged.passed() ? CheckStatus::pass : CheckStatus::fail;
  std::ostringstream detail;
  detail << "violations=" << merged.violations << "/" << merged.checked
         << " worst_ratio=" << merged.worst_ratio << " worst_t=" << merged.worst_t;
  out.detail = detail.str();
  return out;
}

CheckOutcome regret_outcome(const RunConfig& config, const std::vector<SeedResult>& results) {
  const bool convex = config.problem == ProblemKind::tracking_convex;
  CheckOutcome out;
  out.name = convex ? "convex_regret_bound" : "nonconvex_regret_bound";
  if (!config.theory_applicable()) {
    out.detail = "kappa > 2 alpha > 0 does not hold";
    return out;
  }
  std::vector<BoundSample> samples;
  for (const auto& r : results) {
    if (!std::isnan(r.regret.bound)) samples.push_back(r.regret);
  }
  if (samples.empty()) {
    out.detail = "no minimizer available";
    return out;
  }
  const auto tightest = std::min_element(samples.begin(), samples.end(), [](const auto& a, const auto& b) {
    return a.bound - a.realized < b.bound - b.realized;
  });
  out.bound = tightest->bound;
  out.realized = tightest->realized;
  out.margin = tightest->bound - tightest->realized;
  std::ostringstream detail;
  if (samples.size() >= 20) {
    const HighProbabilityReport hp = high_probability_check(samples, config.delta);
    out.status = hp.passed ? CheckStatus::pass : CheckStatus::fail;
    detail << "within=" << hp.within << "/" << hp.runs << " fraction=" << hp.fraction
           << " threshold=" << hp.threshold;
  } else {
    const auto within = static_cast<std::size_t>(std::count_if(
        samples.begin(), samples.end(), [](const BoundSample& s) { return s.realized <= s.bound; }));
    out.status = within == samples.size() ? CheckStatus::pass : CheckStatus::fail;
    detail << "within=" << within << "/" << samples.size() << " (every seed required below 20 runs)";
  }
  out.detail = detail.str();
  return out;
}

CheckOutcome rate_outcome(const RunConfig& config, const std::vector<SeedResult>& results) {
  const bool convex = config.problem == ProblemKind::tracking_convex;
  CheckOutcome out;
  out.name = convex ? "regret_rate" : "nonconvex_regret_rate";
  if (!config.theory_applicable()) {
    out.detail = "kappa > 2 alpha > 0 does not hold";
    return out;
  }
  std::vector<double> slopes;
  std::size_t passed = 0;
  double threshold = 0.0;
  for (const auto& r : results) {
    if (!r.rate) continue;
    slopes.push_back(r.rate->slope);
    threshold = r.rate->threshold;
    if (r.rate->passed) ++passed;
  }
  if (slopes.empty()) {
    out.detail = "horizon too short for a slope fit";
    return out;
  }
  const auto needed = static_cast<std::size_t>(std::ceil(0.9 * static_cast<double>(slopes.size())));
  out.bound = threshold;
  out.realized = median(slopes);
  out.margin = out.bound - out.realized;
  out.status = passed >= needed ? CheckStatus::pass : CheckStatus::fail;
  std::ostringstream detail;
  detail << "seeds_within=" << passed << "/" << slopes.size() << " required=" << needed;
  out.detail = detail.str();
  return out;
}

Aggregate aggregate_of(std::string name, const std::vector<double>& values) {
  return {std::move(name), median(values), quantile(values, 0.1), quantile(values, 0.9)};
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

ExperimentReport run_experiment(const RunConfig& config, const ExperimentOptions& options) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::size_t count = config.seeds.size();
  std::vector<std::optional<SeedResult>> results(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t k = next++; k < count; k = next++) {
      try {
        results[k] = run_seed(config, config.seeds[k], options);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  std::size_t threads = config.threads > 0 ? static_cast<std::size_t>(config.threads)
                                           : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t k = 0; k < threads; ++k) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<SeedResult> done;
  done.reserve(count);
  for (auto& r : results) done.push_back(std::move(*r));

  ExperimentReport report;
  report.config = config;
  std::vector<double> reg_over_t, nreg_over_t, c_path, d_var;
  for (auto& r : done) {
    report.seeds.push_back(r.summary);
    if (!std::isnan(r.summary.reg_d)) reg_over_t.push_back(r.summary.reg_d / r.summary.horizon);
    nreg_over_t.push_back(r.summary.nreg_d / r.summary.horizon);
    c_path.push_back(r.summary.c_path);
    d_var.push_back(r.summary.d_var);
    report.csv_files.insert(report.csv_files.end(), r.files.begin(), r.files.end());
    report.ledgers.push_back(r.ledger);
    if (r.trace) report.traces.push_back(std::move(*r.trace));
  }
  if (!reg_over_t.empty()) report.aggregates.push_back(aggregate_of("reg_d_over_t", reg_over_t));
  report.aggregates.push_back(aggregate_of("nreg_d_over_t", nreg_over_t));
  report.aggregates.push_back(aggregate_of("c_path", c_path));
  report.aggregates.push_back(aggregate_of("d_var", d_var));

  if (options.run_checks) {
    report.checks.push_back(pathwise_outcome("network_error", done, &SeedResult::network));
    report.checks.push_back(pathwise_outcome("cumulative_network_error", done, &SeedResult::cumulative));
    report.checks.push_back(regret_outcome(config, done));
    report.checks.push_back(rate_outcome(config, done));
  }
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

RunConfig with_axis_value(const RunConfig& config, std::string_view axis, std::string_view value) {
  RunConfig out = config;
  const std::string v(value);
  auto number = [&] {
    try {
      std::size_t used = 0;
      const double x = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
      return x;
    } catch (const std::logic_error&) {
      throw ValidationError("sweep value '" + v + "' is not a number");
    }
  };
  auto integer = [&] {
    const double x = number();
    if (x != std::floor(x)) throw ValidationError("sweep value '" + v + "' is not an integer");
    return static_cast<int>(x);
  };
  if (axis == "alpha") {
    out.clip.alpha = number();
  } else if (axis == "kappa") {
    out.step.kappa = number();
  } else if (axis == "noise.scale") {
    out.noise.scale = number();
    out.noise.sigma_p = exact_sigma_p(out.noise.kind, out.noise.scale, out.noise.tail_p);
  } else if (axis == "noise.kind") {
    try {
      out.noise = default_noise(noise_kind_from_string(v), config.noise.scale);
    } catch (const std::invalid_argument& e) {
      throw ValidationError(e.what());
    }
  } else if (axis == "T") {
    out.horizon = integer();
  } else if (axis == "N") {
    out.agents = integer();
  } else {
    throw UnknownAxis("unknown sweep axis '" + std::string(axis) +
                      "' (expected alpha, kappa, noise.scale, noise.kind, T or N)");
  }
  out.validate();
  return out;
}

std::vector<ExperimentReport> sweep(const RunConfig& config, std::string_view axis,
                                    std::span<const std::string> values,
                                    const ExperimentOptions& options) {
  std::vector<RunConfig> configs;
  for (const auto& value : values) {
    RunConfig c = with_axis_value(config, axis, value);
    if (values.size() > 1) c.output_dir = config.output_dir / (std::string(axis) + "_" + value);
    configs.push_back(std::move(c));
  }
  std::vector<ExperimentReport> reports;
  for (const auto& c : configs) reports.push_back(run_experiment(c, options));
  return reports;
}

void write_summary_csv(const std::filesystem::path& path, const ExperimentReport& report) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << "seed,T,reg_d,reg_d_over_t,nreg_d,nreg_d_over_t,c_path,d_var,reg_slope,nreg_slope,max_state_norm\n";
  auto f17 = [](double v) {
    if (std::isnan(v)) return std::string("nan");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (const auto& s : report.seeds) {
    out << s.seed << ',' << s.horizon << ',' << f17(s.reg_d) << ',' << f17(s.reg_d / s.horizon) << ','
        << f17(s.nreg_d) << ',' << f17(s.nreg_d / s.horizon) << ',' << f17(s.c_path) << ','
        << f17(s.d_var) << ',' << f17(s.reg_slope) << ',' << f17(s.nreg_slope) << ','
        << f17(s.max_state_norm) << '\n';
  }
}

std::string format_checks(const ExperimentReport& report) {
  std::ostringstream out;
  for (const auto& c : report.checks) {
    out << c.name << " bound=" << fmt(c.bound) << " realized=" << fmt(c.realized)
        << " margin=" << fmt(c.margin) << ' ' << to_string(c.status);
    if (!c.detail.empty()) out << " (" << c.detail << ')';
    out << '\n';
  }
  return out.str();
}

std::string format_report(const ExperimentReport& report) {
  std::ostringstream out;
  const RunConfig& c = report.config;
  out << c.name << ": " << to_string(c.problem) << " N=" << c.agents << " T=" << c.horizon
      << " seeds=" << report.seeds.size() << " noise=" << to_string(c.noise.kind)
      << " wall=" << fmt(report.wall_seconds) << "s\n";
  for (const auto& s : report.seeds) {
    out << "  seed " << s.seed << ": REG/T=" << fmt(s.reg_d / s.horizon)
        << " NREG/T=" << fmt(s.nreg_d / s.horizon) << " C_T=" << fmt(s.c_path)
        << " slope=" << fmt(c.problem == ProblemKind::tracking_convex ? s.reg_slope : s.nreg_slope)
        << " time=" << fmt(s.wall_seconds) << "s\n";
  }
  for (const auto& a : report.aggregates) {
    out << "  " << a.name << ": median=" << fmt(a.median) << " q10=" << fmt(a.q10)
        << " q90=" << fmt(a.q90) << '\n';
  }
  return out.str();
}

}  // namespace odcsgd
