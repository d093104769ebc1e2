#pragma once

#include <optional>
#include <string>
#include <vector>

namespace targetlab::asymptotics {

// theorem: a < 0 and Lambda ~ exp(1/a).  simulation: a > 0 and exp(-1/a).
enum class Convention { theorem, simulation };

struct AsymptoticPrediction {
  double a_signed = 0.0;
  double a_sim = 0.0;
  double b = 1.0;
  double lambda = 0.0;
  double omega = 0.0;  // lambda^2 / b
  double k = 0.0;      // lambda / b
  Convention convention = Convention::theorem;
  std::optional<double> C_fitted;
  // Omega is formed by squaring Lambda (exp(2/a)); the single-exponent form
  // exp(1/a) for Omega is not used.
  std::string omega_exponent = "exp(2/a)";
};

/// 2 e^{-gamma} exp(1/a_signed). Throws Error(convention) unless a_signed < 0.
double predict_lambda(double a_signed);

/// 2 e^{-gamma} exp(-1/a_sim) for a_sim > 0 (the mirrored sign convention).
double predict_lambda_simulation(double a_sim);

/// C * predict_lambda(a)^2 / b.
double predict_omega(double a_signed, double b, std::optional<double> C = std::nullopt);

/// Lambda, Omega and k with Lambda^2 = b Omega exact in the stored fields.
AsymptoticPrediction make_prediction(double a_signed, double b, std::optional<double> C = std::nullopt);

enum class Branch { closed_form, truncated };

struct FamilyPrediction {
  double A = 0.0;
  double p = 0.0;
  double R = 3.0;
  double a_sim = 0.0;
  double k_shape = 0.0;  // exp(-1/a_sim); the measured k is C * k_shape
  Branch branch = Branch::truncated;
};

/// a_sim = A / (2p - 2) for p > 1, A * int_0^R r dr / (1 + r^2)^p otherwise.
/// Throws Error(out_of_regime) for p <= 1/2.
FamilyPrediction predict_k_for_family(double A, double p, std::optional<double> R = std::nullopt);

/// Same, forcing a branch (closed form still needs p > 1).
FamilyPrediction predict_k_for_family(double A, double p, Branch branch, double R = 3.0);

std::string to_string(Branch b);
std::string to_string(Convention c);

struct RunRecord {
  double p = 0.0;
  double a_sim = 0.0;
  double k_measured = 0.0;
  bool steady = true;
};

struct ComparisonRow {
  double p = 0.0;
  double a_sim = 0.0;
  double k_measured = 0.0;
  double k_shape = 0.0;
  double k_predicted = 0.0;   // C * k_shape
  double log_residual = 0.0;  // log k_measured - log k_predicted
  bool excluded = false;
  std::string reason;
};

struct Comparison {
  std::vector<ComparisonRow> rows;
  double C = 0.0;
  double rms_log_residual = 0.0;
  double pearson_log_k = 0.0;  // log k_measured against -1/a_sim
  std::size_t used = 0;
};

/// Fits the prefactor C by least squares on log k over the steady runs.
/// Needs >= 3 runs in total and >= 2 usable ones; unsteady or nonpositive-k
/// runs are flagged and excluded.
Comparison compare_prediction_to_runs(const std::vector<RunRecord>& runs);

}  // namespace targetlab::asymptotics
