#include "targetlab/asymptotics.hpp"

#include <cmath>

#include "targetlab/error.hpp"
#include "targetlab/measurement.hpp"
#include "targetlab/profiles.hpp"
#include "targetlab/specfun.hpp"

namespace targetlab::asymptotics {
namespace {

const double kTwoExpMinusGamma = 2.0 * std::exp(-specfun::kEulerGamma);

}  // namespace

double predict_lambda(double a_signed) {
  if (!(a_signed < 0.0)) {
    throw Error(ErrorCode::convention,
                "predict_lambda takes the negative matching constant a < 0; for a > 0 use "
                "predict_lambda_simulation (Lambda ~ exp(-1/a))");
  }
  return kTwoExpMinusGamma * std::exp(1.0 / a_signed);
}

double predict_lambda_simulation(double a_sim) {
  if (!(a_sim > 0.0)) throw Error(ErrorCode::convention, "simulation convention needs a > 0");
  return kTwoExpMinusGamma * std::exp(-1.0 / a_sim);
}

double predict_omega(double a_signed, double b, std::optional<double> C) {
  if (!(b > 0.0)) throw Error(ErrorCode::parameter, "predict_omega needs b > 0");
  const double lambda = predict_lambda(a_signed);
  return C.value_or(1.0) * lambda * lambda / b;
}

AsymptoticPrediction make_prediction(double a_signed, double b, std::optional<double> C) {
  AsymptoticPrediction out;
  out.a_signed = a_signed;
  out.a_sim = -a_signed;
  out.b = b;
  out.lambda = predict_lambda(a_signed);
  out.omega = predict_omega(a_signed, b, C);
  // Keep Lambda^2 = b Omega exact when a prefactor scales Omega.
  if (C) out.lambda = std::sqrt(b * out.omega);
  out.k = out.lambda / b;
  out.C_fitted = C;
  return out;
}

FamilyPrediction predict_k_for_family(double A, double p, Branch branch, double R) {
  if (!(p > 0.5)) {
    throw Error(ErrorCode::out_of_regime,
                "p <= 1/2: the defect decays too slowly to select a target pattern");
  }
  FamilyPrediction out;
  out.A = A;
  out.p = p;
  out.R = R;
  out.branch = branch;
  profiles::InhomogeneitySpec spec{A, p, 1.0};
  if (branch == Branch::closed_form) {
    out.a_sim = profiles::core_mass(spec, {profiles::MassConvention::closed_form, R});
  } else {
    out.a_sim = profiles::core_mass(spec, {profiles::MassConvention::truncated, R});
  }
  out.k_shape = out.a_sim > 0.0 ? std::exp(-1.0 / out.a_sim) : 0.0;
  return out;
}

FamilyPrediction predict_k_for_family(double A, double p, std::optional<double> R) {
  const Branch branch = p > 1.0 ? Branch::closed_form : Branch::truncated;
  return predict_k_for_family(A, p, branch, R.value_or(3.0));
}

std::string to_string(Branch b) { return b == Branch::closed_form ? "closed_form" : "truncated"; }

std::string to_string(Convention c) { return c == Convention::theorem ? "theorem" : "simulation"; }

Comparison compare_prediction_to_runs(const std::vector<RunRecord>& runs) {
  if (runs.size() < 3) throw Error(ErrorCode::statistics, "comparison needs at least 3 runs");
  Comparison out;
  std::vector<double> inv_a;
  std::vector<double> log_k;
  double sum = 0.0;
  for (const RunRecord& run : runs) {
    ComparisonRow row;
    row.p = run.p;
    row.a_sim = run.a_sim;
    row.k_measured = run.k_measured;
    row.k_shape = run.a_sim > 0.0 ? std::exp(-1.0 / run.a_sim) : 0.0;
    if (!run.steady) {
      row.excluded = true;
      row.reason = "not steady";
    } else if (!(run.k_measured > 0.0)) {
      row.excluded = true;
      row.reason = "nonpositive wavenumber";
    } else if (!(run.a_sim > 0.0)) {
      row.excluded = true;
      row.reason = "nonpositive a";
    }
    if (!row.excluded) {
      sum += std::log(row.k_measured) - std::log(row.k_shape);
      inv_a.push_back(-1.0 / run.a_sim);
      log_k.push_back(std::log(run.k_measured));
    }
    out.rows.push_back(row);
  }
  out.used = inv_a.size();
  if (out.used < 2) throw Error(ErrorCode::statistics, "fewer than 2 usable runs");
  const double log_c = sum / static_cast<double>(out.used);
  out.C = std::exp(log_c);
  double ss = 0.0;
  for (ComparisonRow& row : out.rows) {
    row.k_predicted = out.C * row.k_shape;
    if (row.excluded) continue;
    row.log_residual = std::log(row.k_measured) - std::log(row.k_predicted);
    ss += row.log_residual * row.log_residual;
  }
  out.rms_log_residual = std::sqrt(ss / static_cast<double>(out.used));
  out.pearson_log_k = measure::pearson(inv_a, log_k);
  return out;
}

}  // namespace targetlab::asymptotics
