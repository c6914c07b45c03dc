// SPDX-FileCopyrightText: (c) 2026 The odcsgd Authors
//
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "odcsgd/errors.hpp"
#include "odcsgd/noise.hpp"
#include "odcsgd/problem.hpp"

using namespace odcsgd;

namespace {

std::vector<double> draws(const NoiseModel& model, std::size_t n, std::uint64_t seed) {
  RandomStream stream(seed, 0, 0, StreamDomain::monte_carlo);
  std::vector<double> out(n);
  for (auto& v : out) v = sample_scalar(model, stream);
  return out;
}

double gaussian_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

double lomax_symmetric_pdf(double x) {
  const double a = kParetoShape;
  return 0.5 * a * std::pow(1.0 + std::abs(x), -(a + 1.0));
}

// 2 * integral_0^inf x^p f(x) dx.
template <typename F>
double quadrature_abs_moment(F density, double p) {
  boost::math::quadrature::exp_sinh<double> integrator;
  return 2.0 * integrator.integrate([&](double x) { return std::pow(x, p) * density(x); });
}

std::shared_ptr<TrackingProblem> tracking(TrackingLoss loss) {
  RandomStream stream(1, 0, 0, StreamDomain::target_noise);
  return std::make_shared<TrackingProblem>(loss, target_trajectory(100, false, stream), 6, 25.0);
}

}  // namespace

TEST(NoiseKind, RoundTripsNames) {
  for (auto kind : {NoiseKind::none, NoiseKind::gaussian, NoiseKind::student_t2, NoiseKind::pareto_symmetric}) {
    EXPECT_EQ(noise_kind_from_string(to_string(kind)), kind);
  }
  EXPECT_THROW(noise_kind_from_string("cauchy"), std::invalid_argument);
}

TEST(NoiseModel, Validation) {
  EXPECT_NO_THROW(make_noise_model(NoiseKind::gaussian, 1.0, 2.0));
  EXPECT_THROW(make_noise_model(NoiseKind::student_t2, 1.0, 2.0), ValidationError);
  EXPECT_THROW(make_noise_model(NoiseKind::gaussian, 0.0, 2.0), ValidationError);
  EXPECT_THROW(make_noise_model(NoiseKind::gaussian, 1.0, 1.0), ValidationError);
  EXPECT_THROW(make_noise_model(NoiseKind::gaussian, 1.0, 2.5), ValidationError);
  NoiseModel missing_sigma{NoiseKind::gaussian, 1.0, 2.0, 0.0};
  EXPECT_THROW(missing_sigma.validate(), ValidationError);
}

TEST(T2Density, ValueAtZeroAndSymmetry) {
  EXPECT_NEAR(t2_density(0.0), 1.0 / (2.0 * std::sqrt(2.0)), 1e-15);
  EXPECT_NEAR(t2_density(0.0), 0.353553, 5e-7);
  for (double x : {0.1, 0.7, 1.0, 3.0, 25.0}) EXPECT_DOUBLE_EQ(t2_density(x), t2_density(-x));
}

TEST(T2Density, NormalizedAndConsistentWithCdf) {
  boost::math::quadrature::tanh_sinh<double> finite;
  boost::math::quadrature::exp_sinh<double> half_line;
  const double half = half_line.integrate(t2_density);
  EXPECT_NEAR(2.0 * half, 1.0, 1e-10);
  for (double x : {-2.0, -1.0, 0.0, 1.0, 2.0, std::sqrt(2.0)}) {
    const double mass = x >= 0.0 ? half + finite.integrate(t2_density, 0.0, x)
                                 : half - finite.integrate(t2_density, x, 0.0);
    EXPECT_NEAR(t2_cdf(x), mass, 1e-10) << x;
  }
  EXPECT_NEAR(t2_cdf(std::sqrt(2.0)), 0.853553, 5e-7);
}

TEST(SampleT2, EmpiricalCdfMatchesClosedForm) {
  const auto x = draws(make_noise_model(NoiseKind::student_t2, 1.0, 1.5), 1'000'000, 21);
  auto ecdf = [&](double at) {
    return static_cast<double>(std::count_if(x.begin(), x.end(), [&](double v) { return v <= at; })) /
           static_cast<double>(x.size());
  };
  for (double at : {-2.0, -1.0, 0.0, 1.0, 2.0}) EXPECT_NEAR(ecdf(at), t2_cdf(at), 0.005) << at;
  const double at_root2 = ecdf(std::sqrt(2.0));
  EXPECT_GE(at_root2, 0.848);
  EXPECT_LE(at_root2, 0.859);
}

TEST(SampleScalar, MediansAreZero) {
  for (auto kind : {NoiseKind::gaussian, NoiseKind::student_t2, NoiseKind::pareto_symmetric}) {
    auto x = draws(make_noise_model(kind, 1.0, 1.5), 1'000'000, 31);
    std::nth_element(x.begin(), x.begin() + static_cast<long>(x.size() / 2), x.end());
    EXPECT_NEAR(x[x.size() / 2], 0.0, 0.01) << to_string(kind);
  }
}

TEST(SampleNoise, NoneIsZero) {
  RandomStream stream(1, 0, 0, StreamDomain::monte_carlo);
  const NoiseModel none{NoiseKind::none, 1.0, 2.0, 0.0};
  EXPECT_EQ(sample_noise(none, 3, stream), Vector::Zero(3));
  EXPECT_THROW(sample_noise(none, 0, stream), std::invalid_argument);
}

TEST(SampleNoise, GaussianCoordinatesHaveZeroMean) {
  RandomStream stream(41, 0, 0, StreamDomain::monte_carlo);
  const auto model = make_noise_model(NoiseKind::gaussian, 1.0, 2.0);
  Vector sum = Vector::Zero(3);
  const int n = 1'000'000;
  for (int k = 0; k < n; ++k) sum += sample_noise(model, 3, stream);
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(sum[k] / n, 0.0, 0.004);
}

TEST(SampleNoise, StudentSecondMomentDoesNotStabilize) {
  // Median over blocks of the block mean of xi^2, for small and large blocks of the same draws.
  auto block_medians = [](NoiseKind kind) {
    RandomStream stream(51, 0, 0, StreamDomain::monte_carlo);
    const auto model = make_noise_model(kind, 1.0, kind == NoiseKind::student_t2 ? 1.5 : 2.0);
    constexpr std::size_t kSmall = 10'000;
    constexpr std::size_t kLarge = 1'000'000;
    std::vector<double> small_means, large_means;
    double small_sum = 0.0, large_sum = 0.0;
    for (std::size_t k = 1; k <= 10 * kLarge; ++k) {
      const double v = sample_scalar(model, stream);
      small_sum += v * v;
      large_sum += v * v;
      if (k % kSmall == 0) {
        small_means.push_back(small_sum / kSmall);
        small_sum = 0.0;
      }
      if (k % kLarge == 0) {
        large_means.push_back(large_sum / kLarge);
        large_sum = 0.0;
      }
    }
    auto med = [](std::vector<double> v) {
      std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2), v.end());
      return v[v.size() / 2];
    };
    return std::pair{med(small_means), med(large_means)};
  };
  const auto [t2_small, t2_large] = block_medians(NoiseKind::student_t2);
  const auto [g_small, g_large] = block_medians(NoiseKind::gaussian);
  EXPECT_GT(t2_large, 1.25 * t2_small) << t2_small << " " << t2_large;
  EXPECT_NEAR(g_small, 1.0, 0.03);
  EXPECT_NEAR(g_large, 1.0, 0.01);
}

TEST(UnitAbsMoment, MatchesQuadrature) {
  for (double p : {1.0, 1.5, 2.0}) {
    EXPECT_NEAR(unit_abs_moment(NoiseKind::gaussian, p), quadrature_abs_moment(gaussian_pdf, p), 1e-9) << p;
    EXPECT_NEAR(unit_abs_moment(NoiseKind::pareto_symmetric, p),
                quadrature_abs_moment(lomax_symmetric_pdf, p), 1e-7)
        << p;
  }
  for (double p : {1.0, 1.25, 1.5}) {
    EXPECT_NEAR(unit_abs_moment(NoiseKind::student_t2, p), quadrature_abs_moment(t2_density, p), 1e-7) << p;
  }
  EXPECT_NEAR(unit_abs_moment(NoiseKind::student_t2, 1.0), std::sqrt(2.0), 1e-12);
  EXPECT_TRUE(std::isinf(unit_abs_moment(NoiseKind::student_t2, 2.0)));
  EXPECT_EQ(unit_abs_moment(NoiseKind::none, 1.5), 0.0);
}

TEST(ExactSigmaP, ScalesLinearly) {
  EXPECT_NEAR(exact_sigma_p(NoiseKind::gaussian, 3.0, 2.0), 3.0, 1e-14);
  EXPECT_NEAR(exact_sigma_p(NoiseKind::student_t2, 2.0, 1.5),
              2.0 * exact_sigma_p(NoiseKind::student_t2, 1.0, 1.5), 1e-14);
  EXPECT_EQ(exact_sigma_p(NoiseKind::none, 1.0, 2.0), 0.0);
}

TEST(PthMomentEstimate, GaussianSecondMoment) {
  RandomStream stream(61, 0, 0, StreamDomain::monte_carlo);
  const double m = pth_moment_estimate(make_noise_model(NoiseKind::gaussian, 1.0, 2.0), 2.0, 1'000'000, stream);
  EXPECT_GE(m, 0.97);
  EXPECT_LE(m, 1.03);
}

TEST(PthMomentEstimate, StudentFirstAbsoluteMoment) {
  RandomStream stream(71, 0, 0, StreamDomain::monte_carlo);
  const double m = pth_moment_estimate(make_noise_model(NoiseKind::student_t2, 1.0, 1.5), 1.0, 1'000'000, stream);
  const double oracle = quadrature_abs_moment(t2_density, 1.0);
  EXPECT_NEAR(m, oracle, 0.05 * oracle);
  EXPECT_NEAR(m, 1.414214, 0.05 * 1.414214);
}

TEST(PthMomentEstimate, NoneAndArgumentChecks) {
  RandomStream stream(1, 0, 0, StreamDomain::monte_carlo);
  const NoiseModel none{NoiseKind::none, 1.0, 2.0, 0.0};
  EXPECT_EQ(pth_moment_estimate(none, 1.5, 10'000, stream), 0.0);
  const auto gauss = make_noise_model(NoiseKind::gaussian, 1.0, 2.0);
  EXPECT_THROW(pth_moment_estimate(gauss, 0.5, 10'000, stream), std::invalid_argument);
  EXPECT_THROW(pth_moment_estimate(gauss, 2.5, 10'000, stream), std::invalid_argument);
  EXPECT_THROW(pth_moment_estimate(gauss, 2.0, 9'999, stream), std::invalid_argument);
}

TEST(GradientOracle, NoiseFreeIsExactAndRepeatable) {
  const auto problem = tracking(TrackingLoss::quadratic);
  const GradientOracle oracle(*problem, NoiseModel{NoiseKind::none, 1.0, 2.0, 0.0});
  const Vector x = Vector::Constant(2, 3.5);
  for (int i = 0; i < 6; ++i) {
    RandomStream a(1, 0, 0, StreamDomain::gradient_noise);
    RandomStream b(2, 5, 9, StreamDomain::gradient_noise);
    const Vector ga = noisy_gradient(oracle, i, 7, x, a);
    EXPECT_EQ(ga, problem->local_gradient(i, 7, x));
    EXPECT_EQ(ga, noisy_gradient(oracle, i, 7, x, b));
  }
}

TEST(GradientOracle, TrackingNoiseAlongObservationAxis) {
  const auto problem = tracking(TrackingLoss::quadratic);
  const GradientOracle oracle(*problem, make_noise_model(NoiseKind::student_t2, 1.0, 1.5));
  RandomStream stream(3, 0, 0, StreamDomain::gradient_noise);
  const Vector x = Vector::Constant(2, -1.0);
  for (int i = 0; i < 6; ++i) {
    for (int rep = 0; rep < 100; ++rep) {
      const Vector diff = oracle(i, 10, x, stream) - problem->local_gradient(i, 10, x);
      EXPECT_EQ(diff[1 - observation_axis(i)], 0.0);
    }
  }
}

TEST(GradientOracle, UnbiasedUnderGaussianNoise) {
  const auto centres = [](int i, int t) { return Vector::Constant(3, 0.1 * i + 0.01 * t); };
  const QuadraticProblem problem(2, 3, 10, centres, 10.0);
  const GradientOracle oracle(problem, make_noise_model(NoiseKind::gaussian, 1.0, 2.0));
  RandomStream stream(81, 0, 0, StreamDomain::monte_carlo);
  const Vector x = Vector::LinSpaced(3, -1.0, 2.0);
  const int n = 100'000;
  Vector sum = Vector::Zero(3);
  for (int k = 0; k < n; ++k) sum += oracle(1, 4, x, stream);
  const Vector mean = sum / n;
  // Per-coordinate SE is 1/sqrt(n); the vector SE is sqrt(3/n).
  EXPECT_LE((mean - problem.local_gradient(1, 4, x)).norm(), 3.0 * std::sqrt(3.0 / n));
}
