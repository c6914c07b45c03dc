// SPDX-FileCopyrightText: (c) 2026 The odcsgd Authors
//
// SPDX-License-Identifier: Apache-2.0

#include "odcsgd/noise.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "odcsgd/errors.hpp"

namespace odcsgd {

std::string_view to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::none: return "none";
    case NoiseKind::gaussian: return "gaussian";
    case NoiseKind::student_t2: return "student_t2";
    case NoiseKind::pareto_symmetric: return "pareto_symmetric";
  }
  return "unknown";
}

NoiseKind noise_kind_from_string(std::string_view name) {
  if (name == "none") return NoiseKind::none;
  if (name == "gaussian") return NoiseKind::gaussian;
  if (name == "student_t2") return NoiseKind::student_t2;
  if (name == "pareto_symmetric") return NoiseKind::pareto_symmetric;
  throw std::invalid_argument("unknown noise kind '" + std::string(name) + "'");
}

void NoiseModel::validate() const {
  if (!(scale > 0.0)) throw ValidationError("noise.scale must be positive");
  if (!(tail_p > 1.0 && tail_p <= 2.0)) throw ValidationError("noise.tail_p must lie in (1, 2]");
  if (kind == NoiseKind::student_t2 && !(tail_p < 2.0)) {
    throw ValidationError("noise.tail_p must be < 2 for student_t2 (infinite variance)");
  }
  if (kind == NoiseKind::none) {
    if (sigma_p < 0.0) throw ValidationError("noise.sigma_p must be nonnegative");
  } else if (!(sigma_p > 0.0) || !std::isfinite(sigma_p)) {
    throw ValidationError("noise.sigma_p must be positive and finite");
  }
}

NoiseModel make_noise_model(NoiseKind kind, double scale, double tail_p) {
  NoiseModel model{kind, scale, tail_p, exact_sigma_p(kind, scale, tail_p)};
  model.validate();
  return model;
}

double sample_t2(RandomStream& stream) {
  const double z = stream.normal();
  const double e = stream.exponential();
  return z / std::sqrt(e);
}

double t2_density(double x) {
  // Gamma(3/2) / (Gamma(1) sqrt(2 pi)) = 1 / (2 sqrt 2).
  const double c = std::tgamma(1.5) / (std::tgamma(1.0) * std::sqrt(2.0 * std::numbers::pi));
  return c * std::pow(1.0 + 0.5 * x * x, -1.5);
}

double t2_cdf(double x) { return 0.5 + x / (2.0 * std::sqrt(2.0 + x * x)); }

double sample_scalar(const NoiseModel& model, RandomStream& stream) {
  switch (model.kind) {
    case NoiseKind::none: return 0.0;
    case NoiseKind::gaussian: return model.scale * stream.normal();
    case NoiseKind::student_t2: return model.scale * sample_t2(stream);
    case NoiseKind::pareto_symmetric: {
      const double sign = stream.uniform() < 0.5 ? -1.0 : 1.0;
      const double magnitude = std::pow(stream.uniform(), -1.0 / kParetoShape) - 1.0;
      // Lomax(3, 1) has E[Y^2] = 1.
      return model.scale * sign * magnitude;
    }
  }
  return 0.0;
}

Vector sample_noise(const NoiseModel& model, int dim, RandomStream& stream) {
  if (dim < 1) throw std::invalid_argument("noise dimension must be >= 1");
  Vector out(dim);
  for (int k = 0; k < dim; ++k) out[k] = sample_scalar(model, stream);
  return out;
}

double unit_abs_moment(NoiseKind kind, double p) {
  const double inf = std::numeric_limits<double>::infinity();
  switch (kind) {
    case NoiseKind::none: return 0.0;
    case NoiseKind::gaussian:
      return std::pow(2.0, p / 2.0) * std::tgamma((p + 1.0) / 2.0) / std::sqrt(std::numbers::pi);
    case NoiseKind::student_t2:
      if (p >= 2.0) return inf;
      return std::pow(2.0, p / 2.0) * std::tgamma((p + 1.0) / 2.0) * std::tgamma(1.0 - p / 2.0) /
             std::sqrt(std::numbers::pi);
    case NoiseKind::pareto_symmetric:
      if (p >= kParetoShape) return inf;
      return std::tgamma(p + 1.0) * std::tgamma(kParetoShape - p) / std::tgamma(kParetoShape);
  }
  return inf;
}

double exact_sigma_p(NoiseKind kind, double scale, double p) {
  if (kind == NoiseKind::none) return 0.0;
  return scale * std::pow(unit_abs_moment(kind, p), 1.0 / p);
}

double pth_moment_estimate(const NoiseModel& model, double p, std::size_t samples,
                           RandomStream& stream) {
  if (!(p >= 1.0 && p <= 2.0)) throw std::invalid_argument("moment order must lie in [1, 2]");
  if (samples < 10'000) throw std::invalid_argument("pth_moment_estimate needs >= 1e4 samples");
  if (model.kind == NoiseKind::none) return 0.0;
  // Kahan summation: heavy tails put most of the mass in rare large terms.
  double sum = 0.0;
  double carry = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const double term = std::pow(std::abs(sample_scalar(model, stream)), p) - carry;
    const double next = sum + term;
    carry = (next - sum) - term;
    sum = next;
  }
  return sum / static_cast<double>(samples);
}

Vector GradientOracle::operator()(int i, int t, const Vector& x, RandomStream& stream) const {
  Vector g = problem_->local_gradient(i, t, x);
  if (noise_.kind == NoiseKind::none) return g;
  if (const auto axis = problem_->noise_axis(i)) {
    g[*axis] += sample_scalar(noise_, stream);
  } else {
    g += sample_noise(noise_, static_cast<int>(g.size()), stream);
  }
  return g;
}

}  // namespace odcsgd
