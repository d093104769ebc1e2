#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "targetlab/error.hpp"
#include "targetlab/profiles.hpp"
#include "targetlab/radial_grid.hpp"

namespace targetlab::radial {

using RadialFunction = std::function<double(double)>;

// ---------------------------------------------------------------------------
// Corrector K:  K'' + K'/r + b g_f = 0,  K(1) = 0.
// ---------------------------------------------------------------------------

/// K(r) = -b * int_1^r (1/s) int_0^s g_f(t) t dt ds, evaluated panel by panel
/// with adaptive Gauss-Kronrod. Throws Error(precondition) when g_f is
/// nonzero somewhere on [0, 1).
RadialProfile solve_corrector_K(const RadialGrid& grid, const RadialFunction& g_far, double b);

/// Same, for a sampled g_f (integrates its piecewise-cubic interpolant).
RadialProfile solve_corrector_K(const RadialProfile& g_far, double b);

/// sup over nodes in [r_lo, r_hi] of |K'' + K'/r + b g_f| by finite differences.
double corrector_residual(const RadialProfile& K, const RadialFunction& g_far, double b,
                          double r_lo, double r_hi);

// ---------------------------------------------------------------------------
// L_lambda = d/dr + 1/r + lambda and its explicit inverse.
// ---------------------------------------------------------------------------

/// u(r) = (1/r) int_0^r exp(lambda (s - r)) f(s) s ds. Throws Error(domain)
/// for lambda <= 0.
RadialProfile apply_inverse_L_lambda(const RadialGrid& grid, const RadialFunction& f, double lambda);
RadialProfile apply_inverse_L_lambda(const RadialProfile& f, double lambda);

/// (d/dr + 1/r + lambda) u at every node by finite differences.
std::vector<double> apply_L_lambda(const RadialProfile& u, double lambda);

// ---------------------------------------------------------------------------
// Far-field ansatz phi0 = -(1/b) chi(Lambda r) log K0(Lambda r).
// ---------------------------------------------------------------------------

struct FarFieldAnsatz {
  double lambda = 0.0;  // Lambda > 0
  double b = 1.0;
  profiles::CutoffSpec cutoff = profiles::CutoffSpec::chi();

  double omega() const noexcept { return lambda * lambda / b; }
  void validate() const;
};

double far_field_phi0(const FarFieldAnsatz& ansatz, double r);

/// phi0 with its first and second radial derivatives (analytic).
profiles::Jet far_field_phi0_jet(const FarFieldAnsatz& ansatz, double r);

// ---------------------------------------------------------------------------
// Gradient corrections psi = phi1' around a base ansatz.
//
// The equation solved is
//     psi' + psi/r - 2 b phi_base' psi - b psi^2 + G = 0,
//     G = Lap0 phi_base - b (phi_base')^2 + Omega - eps g,
// on [r_inner, r_max], by damped fixed-point iteration on
//     psi = -P^{-1} [ (-2 b phi_base' - c) psi - b psi^2 + G ],
// where P = d/dr + 1/r + c(r) is inverted explicitly.
// ---------------------------------------------------------------------------

enum class Sweep {
  outward,  // psi(r_inner) = 0, integrate from the inner boundary
  inward,   // psi(r_max) = 0, integrate from the outer boundary
};

struct Preconditioner {
  // c(r) = rate - (linearize_base ? 2 b phi_base'(r) : 0)
  double rate = 0.0;
  bool linearize_base = true;
  Sweep sweep = Sweep::inward;
};

struct GradientCorrectionProblem {
  RadialGrid grid;
  RadialFunction base_potential;  // phi_base(r)
  RadialFunction base_gradient;   // phi_base'(r)
  RadialFunction base_source;     // G(r)
  double b = 1.0;
  double r_inner = 0.0;
  // Normalisation for the reported residual (Omega for the far field).
  double residual_scale = 1.0;
};

struct FixedPointOptions {
  double tol = 1e-8;            // sup-norm change between iterates
  int max_iterations = 400;
  int divergence_window = 5;    // consecutive growing increments => failure
  double damping = 0.5;         // applied once the iteration oscillates
};

struct CorrectionResult {
  RadialProfile psi;             // zero-extended on [0, r_inner)
  std::vector<double> increments;  // sup |psi_{n+1} - psi_n| per iteration
  int iterations = 0;
  bool damped = false;
  double contraction_rate = 0.0;   // geometric mean of increment ratios
  double residual = 0.0;           // sup |equation residual| / residual_scale
};

// Carries the last iterate so callers can inspect the failure.
class NonContractionError : public Error {
 public:
  NonContractionError(const std::string& what, CorrectionResult last)
      : Error(ErrorCode::non_contraction, what), last_(std::move(last)) {}
  const CorrectionResult& last_iterate() const noexcept { return last_; }

 private:
  CorrectionResult last_;
};

CorrectionResult solve_gradient_correction(const GradientCorrectionProblem& problem,
                                           const Preconditioner& pre,
                                           const FixedPointOptions& opts = {});

/// Residual of the corrected equation at each node of [r_inner, r_max]
/// (NaN outside), unnormalised.
std::vector<double> correction_residual(const GradientCorrectionProblem& problem,
                                        const RadialProfile& psi);

enum class FarFieldPreconditioner {
  // P = d/dr + 1/r - 2 b phi0', swept inward from r_max (default).
  linearized_inward,
  // P = L_{lambda_pre} swept outward from r_inner, as in the fixed-point
  // form with the constant 2 Lambda shift.
  constant_outward,
};

struct FarFieldOptions {
  FarFieldPreconditioner preconditioner = FarFieldPreconditioner::linearized_inward;
  double r_inner = 0.0;  // 0 means 1/Lambda, the start of the cut-off collar
  FixedPointOptions fixed_point{};
};

/// Correction psi = phi1' to the far-field ansatz for the full steady
/// equation with defect eps * g.
CorrectionResult solve_far_field_correction(const FarFieldAnsatz& ansatz, const RadialGrid& grid,
                                            const RadialFunction& g, double eps, double lambda_pre,
                                            const FarFieldOptions& opts = {});

CorrectionResult solve_far_field_correction(const FarFieldAnsatz& ansatz, const RadialProfile& g,
                                            double eps, double lambda_pre,
                                            const FarFieldOptions& opts = {});

// Intermediate first-order ansatz:
//   phi0 = -(1/b) chi_M log(1 + a log r + eps K),  a = -eps b int g_c r dr,
//   phi1' = (a/b) (chi log r)' + (eps/r) int_0^r g_c t dt.
struct IntermediateAnsatz {
  profiles::InhomogeneitySpec defect;  // eps is defect.strength
  double b = 1.0;
  double M = 10.0;
  RadialGrid grid;
  RadialProfile K;       // corrector on grid
  double a_signed = 0.0;
  double core_mass = 0.0;  // int g_c r dr (without eps)

  double phi0(double r) const;
  double phi0_gradient(double r) const;
  double phi1_gradient(double r) const;
};

IntermediateAnsatz build_intermediate_ansatz(const profiles::InhomogeneitySpec& defect,
                                             const RadialGrid& grid, double b, double M);

/// Solves for psi = phi2' in the intermediate equation (Omega = 0) using the
/// same fixed-point machinery, preconditioned by an outward L_lambda sweep.
CorrectionResult solve_intermediate_correction(const IntermediateAnsatz& ansatz, double lambda,
                                               const FixedPointOptions& opts = {});

// ---------------------------------------------------------------------------
// Hopf-Cole check: Psi = exp(-b phi) should satisfy Lap Psi + eps g Psi = Omega Psi.
// ---------------------------------------------------------------------------

struct Window {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
};

/// sup |Lap0 Psi + eps g Psi - Omega Psi| / sup |Psi| over the window.
/// Throws Error(range) when Psi underflows on more than half of the nodes.
double hopf_cole_residual(const RadialProfile& phi, const RadialProfile& g, double eps, double omega,
                          double b, Window window = {});

// ---------------------------------------------------------------------------
// Reduction of the spiral amplitude equation to the eikonal equation.
// ---------------------------------------------------------------------------

struct SpiralCoefficients {
  double beta_r = 0.0;
  double beta_i = 0.0;
  double lambda_r = 0.0;
  double alpha_tilde_i = 0.0;
  double lambda_tilde_i = 0.0;
};

struct EikonalCoefficients {
  double b = 0.0;
  double omega = 0.0;
  double c = 0.0;
};

/// b = (bI lR - bR aI) / D,  Omega = ltI lR / D,  c = -(bI lR + aI bR) / (bR D)
/// with D = aI bI + lR bR. Throws Error(singular_parameters) if D == 0 (or
/// bR == 0, which makes c singular).
EikonalCoefficients eikonal_coefficients(const SpiralCoefficients& s);

}  // namespace targetlab::radial
