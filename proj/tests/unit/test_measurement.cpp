#include <cmath>
#include <utility>
#include <vector>

#include <gtest/gtest.h>

#include "targetlab/measurement.hpp"
#include "targetlab/spectral2d.hpp"

using namespace targetlab;
using spectral::Field2D;
using spectral::GridSpec2D;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::io;
}

std::vector<std::pair<double, double>> k_law(double C, const std::vector<double>& a) {
  std::vector<std::pair<double, double>> pts;
  for (double ai : a) pts.emplace_back(ai, C * std::exp(-1.0 / ai));
  return pts;
}

std::vector<double> sweep_a() {
  std::vector<double> a;
  for (int j = 3; j <= 19; j += 2) a.push_back(0.15 * j);
  return a;
}

// Textbook two-pass correlation, independent of the library routine.
double correlation(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= x.size();
  my /= y.size();
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

TEST(Azimuthal, ConstantField) {
  const GridSpec2D g{64, 100.0};
  const auto avg = measure::azimuthal_average(Field2D(g, 1.0), 33);
  for (std::size_t i = 0; i < avg.profile.size(); ++i) EXPECT_DOUBLE_EQ(avg.profile.values[i], 1.0) << i;
  EXPECT_EQ(avg.profile.size(), 33u);
  EXPECT_DOUBLE_EQ(avg.bin_width, 50.0 / 32.0);
}

TEST(Azimuthal, RadialFieldRoundTrip) {
  const GridSpec2D g{128, 100.0};
  const auto f = [](double r) { return std::sin(0.2 * r) + 0.01 * r * r; };
  const auto field = spectral::sample_radial(g, f);
  const auto avg = measure::azimuthal_average(field, 65);
  double fprime = 0.0;
  for (double r = 0; r <= 50; r += 0.01) fprime = std::max(fprime, std::abs(0.2 * std::cos(0.2 * r) + 0.02 * r));
  for (std::size_t i = 0; i < avg.profile.size(); ++i) {
    EXPECT_NEAR(avg.profile.values[i], f(avg.profile.r(i)), g.h() * fprime) << i;
  }
}

TEST(Azimuthal, OddFieldAveragesToZero) {
  const GridSpec2D g{64, 100.0};
  Field2D field(g);
  for (std::size_t iy = 0; iy < g.N; ++iy) {
    for (std::size_t ix = 0; ix < g.N; ++ix) field(ix, iy) = g.coord(ix) - g.center();
  }
  const auto avg = measure::azimuthal_average(field, 32);
  for (std::size_t i = 0; i < avg.profile.size(); ++i) EXPECT_LE(std::abs(avg.profile.values[i]), 1e-12 * g.L) << i;
}

TEST(Azimuthal, EmptyBinsAreInterpolatedAndFlagged) {
  const GridSpec2D g{64, 100.0};
  const auto field = spectral::sample_radial(g, [](double r) { return 2.0 * r; });
  const auto avg = measure::azimuthal_average(field, 400);
  bool any = false;
  for (std::size_t i = 0; i < avg.profile.size(); ++i) {
    if (avg.counts[i] == 0) {
      EXPECT_TRUE(avg.interpolated[i]);
      any = true;
    } else {
      EXPECT_FALSE(avg.interpolated[i]);
    }
  }
  EXPECT_TRUE(any);
  EXPECT_TRUE(avg.profile.all_finite());
  EXPECT_EQ(code_of([&] { measure::azimuthal_average(field, 8); }), ErrorCode::parameter);
}

TEST(Wavenumber, ConeAndFlat) {
  const GridSpec2D g{256, 100.0};
  const auto cone = spectral::sample_radial(g, [](double r) { return 0.3 * r; });
  EXPECT_NEAR(measure::measure_wavenumber(cone, measure::default_annulus(g.L)), 0.3, 0.003);
  EXPECT_NEAR(measure::measure_wavenumber(Field2D(g, 5.0), {10.0, 40.0}), 0.0, 1e-14);
}

TEST(Wavenumber, AnnulusValidation) {
  const GridSpec2D g{64, 100.0};
  const Field2D f(g);
  EXPECT_EQ(code_of([&] { measure::measure_wavenumber(f, {0.0, 40.0}); }), ErrorCode::parameter);
  EXPECT_EQ(code_of([&] { measure::measure_wavenumber(f, {30.0, 20.0}); }), ErrorCode::parameter);
  EXPECT_EQ(code_of([&] { measure::measure_wavenumber(f, {30.0, 46.0}); }), ErrorCode::parameter);
  EXPECT_EQ(code_of([&] { measure::measure_wavenumber(f, {30.0, 30.5}); }), ErrorCode::statistics);
}

TEST(FitLine, NormalEquations) {
  const std::vector<double> x{0.0, 1.0, 2.5, 4.0, 7.0};
  const std::vector<double> y{1.0, 2.9, 6.2, 8.8, 15.5};
  const auto fit = measure::fit_line(x, y);
  double mx = 0, my = 0, r0 = 0, r1 = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / x.size();
    my += y[i] / y.size();
    const double res = y[i] - fit.slope * x[i] - fit.intercept;
    r0 += res;
    r1 += res * x[i];
  }
  EXPECT_NEAR(fit.slope * mx + fit.intercept, my, 1e-13);
  EXPECT_NEAR(r0, 0.0, 1e-12);
  EXPECT_NEAR(r1, 0.0, 1e-12);
  EXPECT_LE(std::abs(fit.pearson_r), 1.0);
  EXPECT_NEAR(fit.pearson_r, correlation(x, y), 1e-14);
  EXPECT_EQ(fit.points.size(), x.size());
}

TEST(KLaw, ExactLinearisationWhenPrefactorIsE) {
  const auto fit = measure::fit_k_law(k_law(std::exp(1.0), {0.45, 0.75, 1.05, 1.5, 2.1, 3.0}));
  EXPECT_NEAR(fit.transform.slope, -1.0, 1e-12);
  EXPECT_NEAR(fit.transform.intercept, 0.0, 1e-12);
  EXPECT_NEAR(std::abs(fit.transform.pearson_r), 1.0, 1e-12);
  EXPECT_NEAR(fit.direct.slope, 1.0, 1e-12);
  EXPECT_NEAR(fit.direct.intercept, 1.0, 1e-12);
}

TEST(KLaw, SweepRangeCorrelation) {
  // For k = 0.9 exp(-1/a) the transform is only nearly linear over the sweep.
  const auto pts = k_law(0.9, sweep_a());
  std::vector<double> a, y;
  for (const auto& [ai, ki] : pts) {
    a.push_back(ai);
    y.push_back(1.0 / (std::log(ki) - 1.0));
  }
  const double oracle = correlation(a, y);
  const auto fit = measure::fit_k_law(pts);
  EXPECT_NEAR(fit.transform.pearson_r, oracle, 1e-12);
  EXPECT_NEAR(std::abs(fit.transform.pearson_r), 0.9588, 1e-4);
  EXPECT_NEAR(fit.direct.slope, 1.0, 1e-12);
  EXPECT_NEAR(fit.direct.intercept, std::log(0.9), 1e-12);
}

TEST(KLaw, FlatDataAndDomain) {
  std::vector<std::pair<double, double>> flat;
  for (double a : sweep_a()) flat.emplace_back(a, 0.4);
  const auto fit = measure::fit_k_law(flat);
  EXPECT_NEAR(fit.transform.slope, 0.0, 1e-15);
  EXPECT_NEAR(fit.transform.pearson_r, 0.0, 1e-12);
  auto bad = flat;
  bad[2].second = 0.0;
  EXPECT_EQ(code_of([&] { measure::fit_k_law(bad); }), ErrorCode::domain);
  bad[2].second = 3.0;
  EXPECT_EQ(code_of([&] { measure::fit_k_law(bad); }), ErrorCode::domain);
  bad.resize(3);
  EXPECT_EQ(code_of([&] { measure::fit_k_law(bad); }), ErrorCode::statistics);
}

TEST(KLaw, RoundTripThroughFittedModel) {
  const auto fit = measure::fit_k_law(k_law(0.9, sweep_a())).transform;
  std::vector<std::pair<double, double>> model;
  for (double a : sweep_a()) model.emplace_back(a, std::exp(1.0 + 1.0 / (fit.slope * a + fit.intercept)));
  const auto again = measure::fit_k_law(model).transform;
  EXPECT_NEAR(again.slope, fit.slope, 1e-12 * std::abs(fit.slope));
  EXPECT_NEAR(again.intercept, fit.intercept, 1e-12 * std::max(1.0, std::abs(fit.intercept)));
}

TEST(Decay, PowerLaws) {
  const auto grid = radial::RadialGrid::geometric(100.0, 0.05, 1.05);
  const auto inv_sq = radial::RadialProfile::sample(grid, [](double r) { return r > 0 ? 3.0 / (r * r) : 0.0; });
  const auto e1 = measure::estimate_decay_exponent(inv_sq, {5.0, 80.0});
  EXPECT_NEAR(e1.exponent, -2.0, 1e-6);
  EXPECT_NEAR(e1.prefactor, 3.0, 1e-6);
  const auto fam = radial::RadialProfile::sample(grid, [](double r) { return std::pow(1.0 + r * r, -0.8); });
  EXPECT_NEAR(measure::estimate_decay_exponent(fam, {10.0, 40.0}).exponent, -1.6, 0.02);
  EXPECT_EQ(code_of([&] { measure::estimate_decay_exponent(inv_sq, {0.0, 10.0}); }), ErrorCode::domain);
  EXPECT_EQ(code_of([&] { measure::estimate_decay_exponent(inv_sq, {200.0, 300.0}); }), ErrorCode::statistics);
}
