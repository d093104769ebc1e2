#include <cmath>

#include <gtest/gtest.h>

#include "support/shooting_oracle.hpp"
#include "targetlab/measurement.hpp"
#include "targetlab/shooting.hpp"

using namespace targetlab;

namespace {

const radial::ShootingSolution& default_solution() {
  static const auto sol = radial::shoot_spiral_amplitude();
  return sol;
}

}  // namespace

TEST(Shooting, LaunchCondition) {
  const auto& sol = default_solution();
  const auto& p = sol.profile;
  EXPECT_EQ(p.values[0], 0.0);
  EXPECT_DOUBLE_EQ(p.r(1), 1e-3);
  EXPECT_NEAR(p.values[1] / 1e-3, sol.slope_origin, 1e-6);
  EXPECT_GT(sol.slope_origin, 0.0);
}

TEST(Shooting, SlopeMatchesRelaxationOracle) {
  // Independent oracle: Newton relaxation of the finite-difference BVP.
  static const double oracle = targetlab::testing::vortex_slope_oracle();
  EXPECT_NEAR(oracle, 0.58319, 1e-4);
  EXPECT_NEAR(default_solution().slope_origin, oracle, 1e-6);
}

TEST(Shooting, SlopeIndependentOfLaunchRadiusAndDomain) {
  const double ref = default_solution().slope_origin;
  radial::ShootingOptions fine;
  fine.r0 = 1e-4;
  EXPECT_NEAR(radial::shoot_spiral_amplitude(20.0, 1e-6, fine).slope_origin, ref, 1e-5);
  EXPECT_NEAR(radial::shoot_spiral_amplitude(40.0, 1e-6).slope_origin, ref, 1e-5);
  EXPECT_NEAR(radial::shoot_spiral_amplitude(40.0, 1e-6, fine).slope_origin, ref, 1e-5);
}

TEST(Shooting, TailBalance) {
  const auto& sol = default_solution();
  const auto& p = sol.profile;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double r = p.r(i);
    if (r < 10.0) continue;
    const double d = r * r * (1.0 - p.values[i] * p.values[i]);
    ASSERT_GE(d, 0.8) << r;
    ASSERT_LE(d, 1.2) << r;
  }
  EXPECT_LE(std::abs(1.0 - p.values.back()), sol.tail_residual);
  EXPECT_GT(sol.splice_radius, 10.0);
}

TEST(Shooting, OneMinusRhoSquaredDecaysLikeInverseSquare) {
  const auto& p = default_solution().profile;
  std::vector<double> defect(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) defect[i] = std::max(1e-300, 1.0 - p.values[i] * p.values[i]);
  const radial::RadialProfile d(p.grid, defect);
  EXPECT_NEAR(measure::estimate_decay_exponent(d, {10.0, 20.0}).exponent, -2.0, 0.1);
}

TEST(Shooting, MonotoneAtTightTolerance) {
  const auto sol = radial::shoot_spiral_amplitude(20.0, 1e-8);
  const auto& v = sol.profile.values;
  for (std::size_t i = 1; i < v.size(); ++i) ASSERT_GT(v[i], v[i - 1]) << sol.profile.r(i);
  EXPECT_LT(v.back(), 1.0);
  EXPECT_NEAR(sol.slope_origin, default_solution().slope_origin, 1e-6);
}

TEST(Shooting, ProfileSatisfiesOdeBeforeSplice) {
  const auto& sol = default_solution();
  const auto& p = sol.profile;
  const auto d2 = radial::derivative(p.grid, p.values, 2);
  const auto d1 = radial::derivative(p.grid, p.values, 1);
  for (std::size_t i = 5; i < p.size(); ++i) {
    const double r = p.r(i);
    if (r < 0.5 || r > sol.splice_radius - 1.5) continue;
    const double u = p.values[i];
    // Dense-output noise of the integrator is amplified by 1/h^2 here.
    ASSERT_NEAR(d2[i] + d1[i] / r - u / (r * r) + u - u * u * u, 0.0, 1e-5) << r;
  }
}

TEST(Shooting, TailExpansion) {
  EXPECT_NEAR(radial::spiral_amplitude_tail(20.0), 1.0 - 1.0 / 800.0 - 9.0 / (8.0 * 160000.0), 1e-16);
  // Residual of the expansion in the ODE is O(r^-6).
  for (double r : {10.0, 20.0, 40.0}) {
    const double h = 1e-3;
    const auto f = radial::spiral_amplitude_tail;
    const double u = f(r);
    const double d1 = (f(r + h) - f(r - h)) / (2 * h), d2 = (f(r + h) - 2 * u + f(r - h)) / (h * h);
    EXPECT_LT(std::abs(d2 + d1 / r - u / (r * r) + u - u * u * u), 30.0 / std::pow(r, 6)) << r;
  }
}

TEST(Shooting, Errors) {
  auto code = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::io;
  };
  EXPECT_EQ(code([] { radial::shoot_spiral_amplitude(10.0); }), ErrorCode::parameter);
  EXPECT_EQ(code([] { radial::shoot_spiral_amplitude(20.0, 1e-4); }), ErrorCode::parameter);
  radial::ShootingOptions bad;
  bad.slope_lo = 0.7;
  bad.slope_hi = 1.0;
  EXPECT_EQ(code([&] { radial::shoot_spiral_amplitude(20.0, 1e-6, bad); }), ErrorCode::bracket);
}
