#pragma once

#include "targetlab/radial_grid.hpp"

namespace targetlab::profiles {

// g(r) = strength * amplitude / (1 + r^2)^decay_exponent.
// The tail decays like r^(-m) with m = 2 * decay_exponent.
struct InhomogeneitySpec {
  double amplitude = 1.0;
  double decay_exponent = 1.0;
  double strength = 1.0;

  double m() const noexcept { return 2.0 * decay_exponent; }
  // Target patterns with bounded far-field gradient need m in (1, 2].
  bool in_target_regime() const noexcept {
    return decay_exponent > 0.5 && decay_exponent <= 1.0;
  }
};

double evaluate_g(const InhomogeneitySpec& spec, double r);

enum class CutoffKind { chi, chi_m };

// chi: 0 on [0,1), 1 on (2, inf). chi_m: additionally 0 beyond 2M, 1 on (2, M).
struct CutoffSpec {
  CutoffKind kind = CutoffKind::chi;
  double M = 0.0;

  static CutoffSpec chi() { return {CutoffKind::chi, 0.0}; }
  static CutoffSpec chi_m(double M);
};

// Value and first two radial derivatives of a cut-off.
struct Jet {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

// C-infinity transition 0 -> 1 on [0, 1] built from exp(-1/x).
Jet smoothstep_jet(double x);

double smooth_cutoff(const CutoffSpec& spec, double r);
Jet smooth_cutoff_jet(const CutoffSpec& spec, double r);

struct DefectSplit {
  radial::RadialProfile g_core;  // (1 - chi) g
  radial::RadialProfile g_far;   // chi g
  // strength * integral_0^inf g_core r dr (exact: g_core vanishes past r = 2).
  double core_mass_integral = 0.0;
  double b = 1.0;
  // Matching constant in both sign conventions: a_signed = -b * mass < 0
  // (theorem convention), a_sim = |a_signed| (simulation convention).
  double a_signed = 0.0;
  double a_sim = 0.0;
};

DefectSplit split_defect(const InhomogeneitySpec& spec, const radial::RadialGrid& grid, double b = 1.0);

enum class MassConvention { truncated, closed_form };

struct CoreMassOptions {
  MassConvention convention = MassConvention::truncated;
  double R = 3.0;  // truncation radius for MassConvention::truncated
};

// strength * integral of g(r) r dr, either over [0, R] or over [0, inf)
// (closed form amplitude / (2p - 2), requires p > 1).
double core_mass(const InhomogeneitySpec& spec, const CoreMassOptions& opts = {});

}  // namespace targetlab::profiles
