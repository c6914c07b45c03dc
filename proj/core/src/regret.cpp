// SPDX-FileCopyrightText: (c) 2026 The odcsgd Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "odcsgd/regret.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "odcsgd/errors.hpp"

namespace odcsgd {
namespace {

void check_horizons(const RunTrace& trace, const ProblemSequence& problem) {
  if (trace.horizon() > problem.horizon()) {
    throw DimensionMismatch("trace horizon " + std::to_string(trace.horizon()) +
                            " exceeds problem horizon " + std::to_string(problem.horizon()));
  }
}

Vector require_minimizer(const ProblemSequence& problem, int t) {
  auto m = problem.minimizer(t);
  if (!m) {
    throw MinimizerUnavailable(std::string(problem.name()) + " exposes no minimizer at t = " +
                               std::to_string(t));
  }
  return *std::move(m);
}

}  // namespace

std::vector<double> dynamic_regret(const RunTrace& trace, const ProblemSequence& problem) {
  check_horizons(trace, problem);
  std::vector<double> series;
  series.reserve(static_cast<std::size_t>(trace.horizon()));
  double total = 0.0;
  for (int t = 1; t <= trace.horizon(); ++t) {
    const double optimum = problem.value(t, require_minimizer(problem, t));
    const Matrix& x = trace.at(t);
    for (int i = 0; i < x.rows(); ++i) total += problem.value(t, x.row(i).transpose()) - optimum;
    series.push_back(total);
  }
  return series;
}

std::vector<double> nonconvex_regret(const RunTrace& trace, const ProblemSequence& problem) {
  check_horizons(trace, problem);
  std::vector<double> series;
  series.reserve(static_cast<std::size_t>(trace.horizon()));
  double total = 0.0;
  for (int t = 1; t <= trace.horizon(); ++t) {
    const Matrix& x = trace.at(t);
    for (int i = 0; i < x.rows(); ++i) total += problem.gradient(t, x.row(i).transpose()).squaredNorm();
    series.push_back(total);
  }
  return series;
}

double path_length(std::span<const Vector> minimizers) {
  double total = 0.0;
  for (std::size_t t = 1; t < minimizers.size(); ++t) total += (minimizers[t] - minimizers[t - 1]).norm();
  return total;
}

double path_length(const TrackingTarget& target) {
  if (target.horizon() < 1) return 0.0;
  return path_length(std::span<const Vector>(target.positions).subspan(1));
}

double path_length(const ProblemSequence& problem) {
  std::vector<Vector> minimizers;
  minimizers.reserve(static_cast<std::size_t>(problem.horizon()));
  for (int t = 1; t <= problem.horizon(); ++t) minimizers.push_back(require_minimizer(problem, t));
  return path_length(minimizers);
}

double function_variation(const ProblemSequence& problem, int t_from, int t_to) {
  if (t_to < 0) t_to = problem.horizon();
  if (t_from < 2) throw std::invalid_argument("function variation starts at t >= 2");
  double total = 0.0;
  for (int t = t_from; t <= t_to; ++t) total += problem.variation_increment(t);
  return total;
}

double sublinearity_slope(std::span<const double> series, int t_lo, int t_hi) {
  if (!(1 <= t_lo && t_lo < t_hi && static_cast<std::size_t>(t_hi) <= series.size())) {
    throw std::invalid_argument("slope window must satisfy 1 <= t_lo < t_hi <= T");
  }
  const auto count = static_cast<std::size_t>(t_hi - t_lo + 1);
  std::vector<double> lx(count), ly(count);
  for (int t = t_lo; t <= t_hi; ++t) {
    const double v = series[static_cast<std::size_t>(t - 1)];
    if (!(v > 0.0)) {
      throw NonPositiveSeries("series value at t = " + std::to_string(t) + " is not positive");
    }
    lx[static_cast<std::size_t>(t - t_lo)] = std::log(static_cast<double>(t));
    ly[static_cast<std::size_t>(t - t_lo)] = std::log(v);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    mx += lx[k];
    my += ly[k];
  }
  mx /= static_cast<double>(count);
  my /= static_cast<double>(count);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    sxx += (lx[k] - mx) * (lx[k] - mx);
    sxy += (lx[k] - mx) * (ly[k] - my);
  }
  return sxy / sxx;
}

RegretLedger compute_ledger(const RunTrace& trace, const ProblemSequence& problem) {
  RegretLedger ledger;
  ledger.nreg_d = nonconvex_regret(trace, problem);
  if (problem.minimizer(1)) {
    ledger.reg_d = dynamic_regret(trace, problem);
    ledger.c_path = path_length(problem);
  }
  ledger.d_var = problem.horizon() >= 2 ? function_variation(problem) : 0.0;
  ledger.disagreement.assign(trace.disagreement.begin(),
                             trace.disagreement.begin() + trace.horizon());
  return ledger;
}

}  // namespace odcsgd
