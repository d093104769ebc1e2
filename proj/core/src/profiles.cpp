#include "targetlab/profiles.hpp"

#include <cmath>
#include <string>

#include "targetlab/error.hpp"
#include "targetlab/quadrature.hpp"

namespace targetlab::profiles {

double evaluate_g(const InhomogeneitySpec& spec, double r) {
  if (spec.amplitude == 0.0 || spec.strength == 0.0) return 0.0;
  return spec.strength * spec.amplitude * std::pow(1.0 + r * r, -spec.decay_exponent);
}

CutoffSpec CutoffSpec::chi_m(double M) {
  if (!(M > 2.0)) {
    throw Error(ErrorCode::parameter, "chi_M needs M > 2, got " + std::to_string(M));
  }
  return {CutoffKind::chi_m, M};
}

Jet smoothstep_jet(double x) {
  if (x <= 0.0) return {0.0, 0.0, 0.0};
  if (x >= 1.0) return {1.0, 0.0, 0.0};
  // h = sigma(q) with q = 1/(1-x) - 1/x, sigma the logistic function.
  const double y = 1.0 - x;
  const double q = 1.0 / y - 1.0 / x;
  const double s = q >= 0.0 ? 1.0 / (1.0 + std::exp(-q)) : std::exp(q) / (1.0 + std::exp(q));
  const double ds = s * (1.0 - s);
  const double dq = 1.0 / (y * y) + 1.0 / (x * x);
  const double ddq = 2.0 / (y * y * y) - 2.0 / (x * x * x);
  return {s, ds * dq, ds * (1.0 - 2.0 * s) * dq * dq + ds * ddq};
}

Jet smooth_cutoff_jet(const CutoffSpec& spec, double r) {
  if (spec.kind == CutoffKind::chi_m && !(spec.M > 2.0)) {
    throw Error(ErrorCode::parameter, "chi_M needs M > 2");
  }
  if (r <= 2.0 || spec.kind == CutoffKind::chi) return smoothstep_jet(r - 1.0);
  if (r <= spec.M) return {1.0, 0.0, 0.0};
  const Jet h = smoothstep_jet((r - spec.M) / spec.M);
  return {1.0 - h.value, -h.d1 / spec.M, -h.d2 / (spec.M * spec.M)};
}

double smooth_cutoff(const CutoffSpec& spec, double r) { return smooth_cutoff_jet(spec, r).value; }

DefectSplit split_defect(const InhomogeneitySpec& spec, const radial::RadialGrid& grid, double b) {
  if (!(grid.r_max() > 4.0)) {
    throw Error(ErrorCode::precondition, "split_defect needs r_max > 4");
  }
  const std::size_t transition_nodes = grid.count_in(1.0, 2.0);
  if (transition_nodes < 8) {
    throw Error(ErrorCode::resolution, "only " + std::to_string(transition_nodes) +
                                           " nodes resolve the cut-off transition on [1, 2]");
  }
  const CutoffSpec chi = CutoffSpec::chi();
  std::vector<double> core(grid.size());
  std::vector<double> far(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid[i];
    const double g = evaluate_g(spec, r);
    const double c = smooth_cutoff(chi, r);
    far[i] = c * g;
    core[i] = g - far[i];
  }

  DefectSplit out;
  out.g_core = radial::RadialProfile(grid, std::move(core));
  out.g_far = radial::RadialProfile(grid, std::move(far));
  out.b = b;
  auto integrand = [&](double r) { return (1.0 - smooth_cutoff(chi, r)) * evaluate_g(spec, r) * r; };
  out.core_mass_integral = integrate(integrand, 0.0, 1.0) + integrate(integrand, 1.0, 2.0);
  out.a_signed = -b * out.core_mass_integral;
  out.a_sim = std::abs(out.a_signed);
  return out;
}

double core_mass(const InhomogeneitySpec& spec, const CoreMassOptions& opts) {
  if (spec.strength == 0.0 || spec.amplitude == 0.0) return 0.0;
  const double p = spec.decay_exponent;
  if (opts.convention == MassConvention::closed_form) {
    if (!(p > 1.0)) {
      throw Error(ErrorCode::divergent_mass,
                  "integral of g r dr diverges for p = " + std::to_string(p) +
                      " <= 1; use the truncated convention");
    }
    return spec.strength * spec.amplitude / (2.0 * p - 2.0);
  }
  if (!(opts.R > 0.0)) throw Error(ErrorCode::parameter, "truncation radius must be positive");
  auto integrand = [&](double r) { return evaluate_g(spec, r) * r; };
  // Split at r = 1 where the integrand changes character.
  const double split = std::min(1.0, opts.R);
  return integrate(integrand, 0.0, split) + integrate(integrand, split, opts.R);
}

}  // namespace targetlab::profiles
