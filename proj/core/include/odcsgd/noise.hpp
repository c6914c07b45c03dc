// SPDX-FileCopyrightText: (c) 2026 The odcsgd Authors
//
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "odcsgd/problem.hpp"
#include "odcsgd/random.hpp"
#include "odcsgd/types.hpp"

namespace odcsgd {

enum class NoiseKind { none, gaussian, student_t2, pareto_symmetric };

std::string_view to_string(NoiseKind kind);
/// Throws std::invalid_argument for unknown names.
NoiseKind noise_kind_from_string(std::string_view name);

/// Shape of the symmetric Lomax law behind NoiseKind::pareto_symmetric
/// (unit variance at scale 1).
inline constexpr double kParetoShape = 3.0;

/// Zero-mean symmetric additive noise. `tail_p` is the moment order certified
/// finite and `sigma_p` the sigma with E|xi|^p <= sigma^p.
struct NoiseModel {
  NoiseKind kind = NoiseKind::student_t2;
  double scale = 1.0;
  double tail_p = 1.5;
  double sigma_p = 0.0;

  /// Throws ValidationError naming the violated invariant.
  void validate() const;
};

/// Builds a model whose sigma_p is the exact p-th absolute moment root.
NoiseModel make_noise_model(NoiseKind kind, double scale, double tail_p);

/// Student-t with two degrees of freedom: Z / sqrt(E) with Z standard normal
/// and E unit exponential (chi-square_2 / 2 = E).
double sample_t2(RandomStream& stream);

double t2_density(double x);
double t2_cdf(double x);

/// One scalar draw from the model, including its scale.
double sample_scalar(const NoiseModel& model, RandomStream& stream);
Vector sample_noise(const NoiseModel& model, int dim, RandomStream& stream);

/// E|X|^p of the unit-scale law, closed form. Infinite when p reaches the
/// tail index. Zero for NoiseKind::none.
double unit_abs_moment(NoiseKind kind, double p);

/// scale * (E|X|^p)^(1/p).
double exact_sigma_p(NoiseKind kind, double scale, double p);

/// Monte-Carlo estimate of E|xi|^p for scalar draws.
double pth_moment_estimate(const NoiseModel& model, double p, std::size_t samples,
                           RandomStream& stream);

/// Stochastic gradient with conditional mean equal to the true gradient.
/// For problems exposing a noise axis the scalar noise enters along that
/// axis; otherwise every coordinate gets an independent draw.
class GradientOracle {
 public:
  GradientOracle(const ProblemSequence& problem, NoiseModel noise)
      : problem_(&problem), noise_(noise) {}

  const ProblemSequence& problem() const { return *problem_; }
  const NoiseModel& noise() const { return noise_; }

  Vector operator()(int i, int t, const Vector& x, RandomStream& stream) const;

 private:
  const ProblemSequence* problem_;
  NoiseModel noise_;
};

inline Vector noisy_gradient(const GradientOracle& oracle, int i, int t, const Vector& x,
                             RandomStream& stream) {
  return oracle(i, t, x, stream);
}

}  // namespace odcsgd
