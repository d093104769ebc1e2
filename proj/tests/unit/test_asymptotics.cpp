#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "targetlab/asymptotics.hpp"
#include "targetlab/error.hpp"
#include "targetlab/specfun.hpp"

using namespace targetlab;
namespace as = targetlab::asymptotics;

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

const double kPrefactor = 2.0 * std::exp(-0.57721566490153286);

}  // namespace

TEST(PredictLambda, Values) {
  EXPECT_EQ(as::predict_lambda(-1e-4), 0.0);
  EXPECT_NEAR(as::predict_lambda(-1.0), kPrefactor * std::exp(-1.0), 1e-15);
  EXPECT_NEAR(as::predict_lambda(-1.0), 0.41310, 1e-5);
  EXPECT_LT(as::predict_lambda(-0.5), as::predict_lambda(-2.0));
  EXPECT_EQ(code_of([] { as::predict_lambda(0.0); }), ErrorCode::convention);
  EXPECT_EQ(code_of([] { as::predict_lambda(0.3); }), ErrorCode::convention);
  EXPECT_EQ(code_of([] { as::predict_lambda_simulation(-0.3); }), ErrorCode::convention);
}

TEST(PredictLambda, ConventionDuality) {
  for (double a : {0.05, 0.3, 1.0, 2.19, 7.5}) {
    EXPECT_EQ(as::predict_lambda(-a), as::predict_lambda_simulation(a)) << a;
    EXPECT_EQ(as::predict_lambda_simulation(a), kPrefactor * std::exp(-1.0 / a)) << a;
  }
}

TEST(PredictLambda, SmallerThanAnyPower) {
  for (int n = 0; n <= 8; ++n) {
    double prev = INFINITY;
    for (double a : {-0.05, -0.02, -0.01}) {
      const double ratio = as::predict_lambda(a) / std::pow(std::abs(a), n);
      EXPECT_LT(ratio, prev) << "n = " << n << " a = " << a;
      prev = ratio;
    }
    EXPECT_LT(prev, 1e-25) << n;
  }
}

TEST(PredictOmega, Values) {
  EXPECT_NEAR(as::predict_omega(-1.0, 1.0), std::pow(kPrefactor * std::exp(-1.0), 2), 1e-15);
  EXPECT_NEAR(as::predict_omega(-1.0, 1.0), 0.17065, 1e-5);
  for (double a : {-0.4, -1.0, -3.0}) {
    EXPECT_DOUBLE_EQ(as::predict_omega(a, 2.0), as::predict_omega(a, 1.0) / 2.0);
    EXPECT_DOUBLE_EQ(as::predict_omega(a, 1.0, 3.0), 3.0 * as::predict_omega(a, 1.0));
  }
  const double mid = as::predict_omega(-1.35, 1.0);
  EXPECT_GT(mid, 0.0);
  EXPECT_LT(mid, 1.0);
  EXPECT_EQ(code_of([] { as::predict_omega(-1.0, 0.0); }), ErrorCode::parameter);
}

TEST(Prediction, StoredFieldsConsistent) {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> A(-5.0, -0.1), B(0.1, 4.0), C(0.2, 5.0);
  for (int i = 0; i < 100; ++i) {
    const double a = A(rng), b = B(rng);
    const auto p = i % 2 ? as::make_prediction(a, b) : as::make_prediction(a, b, C(rng));
    EXPECT_NEAR(p.lambda * p.lambda, b * p.omega, 1e-14 * b * p.omega);
    EXPECT_DOUBLE_EQ(p.k, p.lambda / b);
    EXPECT_GE(p.omega, 0.0);
    EXPECT_EQ(p.a_sim, -a);
    EXPECT_EQ(p.omega_exponent, "exp(2/a)");
  }
  const auto with_c = as::make_prediction(-1.0, 1.0, 2.0);
  ASSERT_TRUE(with_c.C_fitted.has_value());
  EXPECT_EQ(*with_c.C_fitted, 2.0);
  EXPECT_EQ(as::to_string(as::Convention::theorem), "theorem");
}

TEST(Family, Branches) {
  const auto closed = as::predict_k_for_family(1.5, 1.5);
  EXPECT_EQ(closed.branch, as::Branch::closed_form);
  EXPECT_NEAR(closed.a_sim, 1.5, 1e-15);
  EXPECT_NEAR(closed.k_shape, std::exp(-2.0 / 3.0), 1e-15);
  EXPECT_NEAR(closed.k_shape, 0.51342, 1e-5);

  const auto trunc = as::predict_k_for_family(1.5, 0.8);
  EXPECT_EQ(trunc.branch, as::Branch::truncated);
  const double a = 1.5 * (std::pow(10.0, 0.2) - 1.0) / 0.4;
  EXPECT_NEAR(trunc.a_sim, a, 1e-10);
  EXPECT_NEAR(trunc.a_sim, 2.19335, 1e-5);
  EXPECT_NEAR(trunc.k_shape, std::exp(-1.0 / a), 1e-10);
  EXPECT_EQ(as::to_string(trunc.branch), "truncated");

  // p = 1 sits on the truncated branch with a logarithmic mass.
  EXPECT_NEAR(as::predict_k_for_family(1.5, 1.0).a_sim, 0.75 * std::log(10.0), 1e-10);
  // A custom truncation radius.
  EXPECT_NEAR(as::predict_k_for_family(1.5, 0.8, 5.0).a_sim, 1.5 * (std::pow(26.0, 0.2) - 1.0) / 0.4, 1e-10);
  EXPECT_NEAR(as::predict_k_for_family(1.5, 2.0, as::Branch::truncated, 3.0).a_sim, 1.5 * 0.5 * (1.0 - 0.1), 1e-10);
}

TEST(Family, WavenumberFallsWithDecayRateOnEachBranch) {
  double prev = INFINITY;
  for (double p : {1.2, 1.5, 2.0, 2.5, 3.0}) {
    const double k = as::predict_k_for_family(1.5, p).k_shape;
    EXPECT_LT(k, prev) << p;
    prev = k;
  }
  prev = INFINITY;
  for (double p : {0.6, 0.8, 1.0, 1.2, 1.5, 2.0, 3.0}) {
    const double k = as::predict_k_for_family(1.5, p, as::Branch::truncated, 3.0).k_shape;
    EXPECT_LT(k, prev) << p;
    prev = k;
  }
}

TEST(Family, Errors) {
  EXPECT_EQ(code_of([] { as::predict_k_for_family(1.5, 0.5); }), ErrorCode::out_of_regime);
  EXPECT_EQ(code_of([] { as::predict_k_for_family(1.5, 0.3); }), ErrorCode::out_of_regime);
  EXPECT_EQ(code_of([] { as::predict_k_for_family(1.5, 0.8, as::Branch::closed_form, 3.0); }),
            ErrorCode::divergent_mass);
}

TEST(Compare, SyntheticExactLaw) {
  const double C = 0.83;
  std::vector<as::RunRecord> runs;
  for (double a : {0.5, 0.9, 1.4, 2.2, 3.1}) runs.push_back({1.0, a, C * std::exp(-1.0 / a), true});
  const auto cmp = as::compare_prediction_to_runs(runs);
  EXPECT_NEAR(cmp.C, C, 1e-14);
  EXPECT_NEAR(cmp.rms_log_residual, 0.0, 1e-14);
  EXPECT_NEAR(cmp.pearson_log_k, 1.0, 1e-14);
  EXPECT_EQ(cmp.used, 5u);
  for (const auto& row : cmp.rows) EXPECT_NEAR(row.k_predicted, row.k_measured, 1e-14);
}

TEST(Compare, UnsteadyRunsAreFlagged) {
  std::vector<as::RunRecord> runs{
      {1.2, 3.75, 0.6, true}, {1.5, 1.5, 0.4, true}, {2.0, 0.75, 0.2, false}, {3.0, 0.375, 0.0, true}};
  const auto cmp = as::compare_prediction_to_runs(runs);
  ASSERT_EQ(cmp.rows.size(), 4u);
  EXPECT_EQ(cmp.used, 2u);
  EXPECT_FALSE(cmp.rows[0].excluded);
  EXPECT_TRUE(cmp.rows[2].excluded);
  EXPECT_EQ(cmp.rows[2].reason, "not steady");
  EXPECT_TRUE(cmp.rows[3].excluded);
  EXPECT_EQ(cmp.rows[3].reason, "nonpositive wavenumber");
  // The prefactor is the geometric mean of k / k_shape over used runs.
  const double c0 = 0.6 / std::exp(-1.0 / 3.75), c1 = 0.4 / std::exp(-1.0 / 1.5);
  EXPECT_NEAR(cmp.C, std::sqrt(c0 * c1), 1e-14);
}

TEST(Compare, NeedsEnoughRuns) {
  std::vector<as::RunRecord> two{{1.2, 3.75, 0.6, true}, {1.5, 1.5, 0.4, true}};
  EXPECT_EQ(code_of([&] { as::compare_prediction_to_runs(two); }), ErrorCode::statistics);
  std::vector<as::RunRecord> one_usable{{1.2, 3.75, 0.6, true}, {1.5, 1.5, 0.4, false}, {2.0, 0.75, 0.2, false}};
  EXPECT_EQ(code_of([&] { as::compare_prediction_to_runs(one_usable); }), ErrorCode::statistics);
}
