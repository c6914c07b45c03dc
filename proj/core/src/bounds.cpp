// SPDX-FileCopyrightText: (c) 2026 The odcsgd Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "odcsgd/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "odcsgd/errors.hpp"
#include "odcsgd/regret.hpp"

namespace odcsgd {
namespace {

// Schedule sums over t = 1..T shared by both regret bounds.
struct ScheduleSums {
  double eta2_lambda2 = 0.0;
  double eta2_lambda = 0.0;
  double lambda_1mp_eta = 0.0;
  double lambda_2mp_eta2 = 0.0;
  double eta3_lambda2 = 0.0;
};

ScheduleSums schedule_sums(const BoundContext& ctx) {
  ScheduleSums s;
  const double p = ctx.tail_p;
  for (int t = 1; t <= ctx.horizon; ++t) {
    const double eta = ctx.eta(t);
    const double lambda = ctx.lambda(t);
    s.eta2_lambda2 += eta * eta * lambda * lambda;
    s.eta2_lambda += eta * eta * lambda;
    s.lambda_1mp_eta += std::pow(lambda, 1.0 - p) * eta;
    s.lambda_2mp_eta2 += std::pow(lambda, 2.0 - p) * eta * eta;
    s.eta3_lambda2 += eta * eta * eta * lambda * lambda;
  }
  return s;
}

BoundBreakdown finish(std::vector<BoundTerm> terms) {
  BoundBreakdown out;
  out.terms = std::move(terms);
  for (const auto& term : out.terms) out.total += term.value;
  return out;
}

}  // namespace

void BoundContext::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("delta must lie in (0, 1)");
  if (agents < 1 || horizon < 1) throw ValidationError("bound context needs N >= 1 and T >= 1");
  if (!(mixing.beta > 0.0 && mixing.beta < 1.0)) throw ValidationError("beta must lie in (0, 1)");
  if (!(tail_p >= 1.0 && tail_p <= 2.0)) throw ValidationError("tail_p must lie in (1, 2]");
}

bool theory_applicable(const StepSchedule& step, const ClipSchedule& clip) {
  return step.kappa > 2.0 * clip.alpha && clip.alpha > 0.0;
}

BoundContext make_bound_context(const RunTrace& trace, const ProblemSequence& problem,
                                const GraphSchedule& graph, const NoiseModel& noise,
                                const StepSchedule& step, const ClipSchedule& clip, double delta,
                                std::optional<double> state_bound_override) {
  if (trace.horizon() < 1) throw std::invalid_argument("bound context needs a trace with T >= 1");
  const ProblemConstants constants = problem.constants();
  const int horizon = trace.horizon();

  BoundContext ctx;
  ctx.mixing = mixing_constants(graph.weight_floor(), graph.n(), graph.window_b());
  ctx.agents = trace.agents();
  ctx.horizon = horizon;
  ctx.r1 = trace.initial_radius();
  ctx.gradient_bound = constants.gradient_bound;
  ctx.smoothness = constants.smoothness;
  ctx.sigma_p = noise.sigma_p;
  ctx.tail_p = noise.tail_p;
  ctx.step = step;
  ctx.clip = clip;
  ctx.delta = delta;

  double realized = trace.max_state_norm();
  if (const auto first = problem.minimizer(1)) {
    const Matrix& x1 = trace.at(1);
    for (int i = 0; i < x1.rows(); ++i) ctx.initial_gap_sq += (x1.row(i).transpose() - *first).squaredNorm();
    for (int t = 1; t <= horizon + 1; ++t) {
      if (const auto m = problem.minimizer(t)) realized = std::max(realized, m->norm());
    }
  }
  ctx.state_bound = state_bound_override.value_or(realized);
  ctx.value_drop = problem.value(1, trace.mean(1)) - problem.value(horizon + 1, trace.mean(horizon + 1));
  ctx.validate();
  return ctx;
}

double lemma2_rhs(int t, const BoundContext& ctx) {
  if (t < 1) throw std::invalid_argument("lemma2_rhs needs t >= 1");
  const double n = ctx.agents;
  const double gamma = ctx.mixing.gamma;
  const double beta = ctx.mixing.beta;
  double tail = 0.0;
  for (int l = 1; l < t; ++l) tail += std::pow(beta, t - l) * ctx.lambda(l) * ctx.eta(l);
  return n * gamma * std::pow(beta, t) * ctx.r1 + 2.0 * ctx.lambda(t) * ctx.eta(t) + n * gamma * tail;
}

std::vector<double> lemma2_rhs_series(const BoundContext& ctx, int horizon) {
  const double n = ctx.agents;
  const double gamma = ctx.mixing.gamma;
  const double beta = ctx.mixing.beta;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(std::max(horizon, 0)));
  double tail = 0.0;      // sum_{l<t} beta^(t-l) lambda_l eta_l
  double beta_pow = 1.0;  // beta^t
  for (int t = 1; t <= horizon; ++t) {
    beta_pow *= beta;
    const double le = ctx.lambda(t) * ctx.eta(t);
    out.push_back(n * gamma * beta_pow * ctx.r1 + 2.0 * le + n * gamma * tail);
    tail = beta * (tail + le);
  }
  return out;
}

double lemma3_rhs(int horizon, const BoundContext& ctx) {
  if (horizon < 1) throw std::invalid_argument("lemma3_rhs needs T >= 1");
  const double n = ctx.agents;
  const double gamma = ctx.mixing.gamma;
  const double beta = ctx.mixing.beta;
  double sq = 0.0;
  double cube = 0.0;
  for (int t = 1; t <= horizon; ++t) {
    const double eta = ctx.eta(t);
    const double lambda = ctx.lambda(t);
    sq += eta * eta * lambda * lambda;
    cube += eta * eta * eta * lambda * lambda;
  }
  const double ng2 = n * n * gamma * gamma;
  return 3.0 * ng2 * ctx.r1 * ctx.r1 / (1.0 - beta * beta) + 12.0 * sq +
         3.0 * ng2 / ((1.0 - beta) * (1.0 - beta)) * cube;
}

void PathwiseCheck::merge(const PathwiseCheck& other) {
  const bool empty = checked == 0;
  checked += other.checked;
  violations += other.violations;
  if (empty || other.worst_ratio > worst_ratio) {
    worst_ratio = other.worst_ratio;
    worst_realized = other.worst_realized;
    worst_bound = other.worst_bound;
    worst_t = other.worst_t;
  }
}

namespace {

void record(PathwiseCheck& check, double realized, double bound, int t) {
  ++check.checked;
  if (realized > bound) ++check.violations;
  const double ratio = realized / bound;
  if (check.checked == 1 || ratio > check.worst_ratio) {
    check.worst_ratio = ratio;
    check.worst_realized = realized;
    check.worst_bound = bound;
    check.worst_t = t;
  }
}

}  // namespace

PathwiseCheck check_lemma2(const RunTrace& trace, const BoundContext& ctx) {
  PathwiseCheck check{"network_error"};
  const std::vector<double> rhs = lemma2_rhs_series(ctx, trace.horizon());
  for (int t = 1; t <= trace.horizon(); ++t) {
    const Matrix& x = trace.at(t + 1);
    const Eigen::RowVectorXd mean = x.colwise().mean();
    for (int i = 0; i < x.rows(); ++i) {
      record(check, (x.row(i) - mean).norm(), rhs[static_cast<std::size_t>(t - 1)], t);
    }
  }
  return check;
}

PathwiseCheck check_lemma3(const RunTrace& trace, const BoundContext& ctx) {
  PathwiseCheck check{"cumulative_network_error"};
  const int n = trace.agents();
  const double ng2 = static_cast<double>(n) * n * ctx.mixing.gamma * ctx.mixing.gamma;
  const double beta = ctx.mixing.beta;
  const double head = 3.0 * ng2 * ctx.r1 * ctx.r1 / (1.0 - beta * beta);
  const double tail_coeff = 3.0 * ng2 / ((1.0 - beta) * (1.0 - beta));

  Vector cumulative = Vector::Zero(n);
  double sq = 0.0;
  double cube = 0.0;
  for (int t = 1; t <= trace.horizon(); ++t) {
    const double eta = ctx.eta(t);
    const double lambda = ctx.lambda(t);
    sq += eta * eta * lambda * lambda;
    cube += eta * eta * eta * lambda * lambda;
    const double bound = head + 12.0 * sq + tail_coeff * cube;

    const Matrix& x = trace.at(t);
    const Eigen::RowVectorXd mean = x.colwise().mean();
    for (int i = 0; i < n; ++i) {
      cumulative[i] += (x.row(i) - mean).squaredNorm();
      record(check, cumulative[i], bound, t);
    }
  }
  return check;
}

ClipDecomposition clip_decomposition_estimate(const GradientOracle& oracle, const Vector& x, int i,
                                              int t, double lambda, std::size_t samples,
                                              RandomStream& stream) {
  if (samples < 10'000) throw std::invalid_argument("clip decomposition needs >= 1e4 samples");
  if (!(lambda > 0.0)) throw std::invalid_argument("clip level must be positive");
  const Vector grad = oracle.problem().local_gradient(i, t, x);
  if (grad.norm() > lambda / 2.0) {
    throw HypothesisViolated("||grad f|| = " + std::to_string(grad.norm()) + " exceeds lambda/2 = " +
                             std::to_string(lambda / 2.0));
  }

  const auto d = static_cast<Eigen::Index>(grad.size());
  Matrix draws(d, static_cast<Eigen::Index>(samples));
  for (std::size_t s = 0; s < samples; ++s) {
    draws.col(static_cast<Eigen::Index>(s)) = clip(oracle(i, t, x, stream), lambda);
  }
  const double count = static_cast<double>(samples);
  const Vector mean = draws.rowwise().mean();
  const Matrix centred = draws.colwise() - mean;

  ClipDecomposition out;
  out.samples = samples;
  out.lambda = lambda;
  out.theta_b = mean - grad;
  out.theta_b_norm = out.theta_b.norm();
  // Standard error of the mean vector, summed over coordinates.
  out.theta_b_se = std::sqrt((centred.array().square().rowwise().sum() / (count - 1.0)).sum() / count);

  const Eigen::ArrayXd sq_norms = centred.colwise().squaredNorm().transpose().array();
  out.theta_u_sq_mean = sq_norms.mean();
  out.theta_u_sq_se =
      std::sqrt((sq_norms - out.theta_u_sq_mean).square().sum() / (count - 1.0) / count);
  out.max_theta_u_norm = std::sqrt(sq_norms.maxCoeff());

  const double p = oracle.noise().tail_p;
  const double sigma_pow = std::pow(oracle.noise().sigma_p, p);
  out.bias_bound = 4.0 * sigma_pow * std::pow(lambda, 1.0 - p);
  out.variance_bound = 16.0 * sigma_pow * std::pow(lambda, 2.0 - p);
  return out;
}

BoundBreakdown theorem1_terms(const BoundContext& ctx, double path_length) {
  const ScheduleSums s = schedule_sums(ctx);
  const double n = ctx.agents;
  const double gamma = ctx.mixing.gamma;
  const double inv_gap = 1.0 / (1.0 - ctx.mixing.beta);
  const double bx = ctx.state_bound;
  const double bg = ctx.gradient_bound;
  const double sigma_pow = std::pow(ctx.sigma_p, ctx.tail_p);
  const double eta_t = ctx.eta(ctx.horizon);
  const double log_term = std::log(2.0 / ctx.delta);

  const double p_const =
      (2.0 * bx * ctx.lambda(1) + 2.0 * bg * n * n) * n * gamma * ctx.eta(1) * inv_gap +
      0.5 * ctx.initial_gap_sq;
  const double q_const = (5.0 + 2.0 * n * gamma * inv_gap) * n;
  const double r_const = 2.0 * bg * n * n * (2.0 + n * gamma * inv_gap);

  BoundBreakdown out = finish({
      {"initial", p_const / eta_t},
      {"clip_squared", q_const * s.eta2_lambda2 / eta_t},
      {"clip_linear", r_const * s.eta2_lambda / eta_t},
      {"path_length", 2.0 * bx * path_length / eta_t},
      {"confidence", 16.0 * n / 3.0 * bx * bg * log_term / eta_t},
      {"clip_bias", 8.0 * n * bx * sigma_pow * s.lambda_1mp_eta / eta_t},
      {"clip_fluctuation", 8.0 * n * std::sqrt(sigma_pow) * bx * std::sqrt(s.lambda_2mp_eta2) / eta_t},
  });
  out.alternate_log_term = 32.0 / 3.0 * bx * bx * ctx.smoothness * log_term / eta_t;
  return out;
}

double theorem1_rhs(const BoundContext& ctx, double path_length) {
  return theorem1_terms(ctx, path_length).total;
}

BoundBreakdown theorem2_terms(const BoundContext& ctx, double variation) {
  const ScheduleSums s = schedule_sums(ctx);
  const double n = ctx.agents;
  const double gamma = ctx.mixing.gamma;
  const double beta = ctx.mixing.beta;
  const double inv_gap = 1.0 / (1.0 - beta);
  const double bg = ctx.gradient_bound;
  const double l = ctx.smoothness;
  const double sigma_pow = std::pow(ctx.sigma_p, ctx.tail_p);
  const double eta_t = ctx.eta(ctx.horizon);
  const double log_term = std::log(2.0 / ctx.delta);

  const double p_const = n * ctx.value_drop + n * gamma * ctx.eta(1) * inv_gap * ctx.r1 * bg * l +
                         36.0 * n * n * n * l * l * ctx.r1 * ctx.r1 / (1.0 - beta * beta);
  const double q_const = bg * l * (2.0 + n * gamma * inv_gap);
  const double r_const = l / 2.0 + 12.0 * n * l * l;

  return finish({
      {"initial", p_const / eta_t},
      {"clip_linear", q_const * s.eta2_lambda / eta_t},
      {"clip_squared", r_const * s.eta2_lambda2},
      {"clip_bias", 4.0 * n * bg * sigma_pow * s.lambda_1mp_eta / eta_t},
      {"variation", n * variation / eta_t},
      {"clip_fluctuation", 4.0 * n * bg * std::sqrt(sigma_pow) / eta_t * std::sqrt(s.lambda_2mp_eta2)},
      {"confidence", 8.0 / 3.0 * bg * bg * log_term / eta_t},
      {"network", 3.0 * n * n * n * l * l * gamma * gamma * inv_gap * inv_gap * s.eta3_lambda2},
  });
}

NonconvexBound theorem2_rhs(const BoundContext& ctx, double variation) {
  const double per = theorem2_terms(ctx, variation).total;
  return {per, 2.0 * ctx.agents * per};
}

HighProbabilityReport high_probability_check(std::span<const BoundSample> samples, double delta) {
  if (samples.size() < 20) throw std::invalid_argument("high-probability check needs >= 20 runs");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  HighProbabilityReport report;
  report.runs = samples.size();
  report.within = static_cast<std::size_t>(std::count_if(
      samples.begin(), samples.end(), [](const BoundSample& s) { return s.realized <= s.bound; }));
  const double runs = static_cast<double>(report.runs);
  report.fraction = static_cast<double>(report.within) / runs;
  report.threshold = 1.0 - delta - 2.0 * std::sqrt(delta * (1.0 - delta) / runs);
  report.passed = report.fraction >= report.threshold;
  return report;
}

HighProbabilityReport high_probability_check(
    std::span<const RunTrace> runs, const std::function<BoundSample(const RunTrace&)>& evaluate,
    double delta) {
  std::vector<BoundSample> samples;
  samples.reserve(runs.size());
  for (const auto& trace : runs) samples.push_back(evaluate(trace));
  return high_probability_check(samples, delta);
}

RateReport corollary_rate_check(std::span<const double> series, double p, int t_lo, int t_hi) {
  if (!(p >= 1.0 && p <= 2.0)) throw std::invalid_argument("tail index must lie in [1, 2]");
  RateReport report;
  report.slope = sublinearity_slope(series, t_lo, t_hi);
  report.target = (1.0 + p) / (2.0 * p);
  report.threshold = std::min(0.95, report.target + 0.15);
  report.passed = report.slope <= report.threshold;
  return report;
}

}  // namespace odcsgd
