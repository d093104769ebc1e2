#pragma once

#include "targetlab/radial_grid.hpp"

namespace targetlab::radial {

// rho'' + rho'/r - rho/r^2 + rho - rho^3 = 0, rho(0) = 0, rho(inf) = 1.
struct ShootingSolution {
  double slope_origin = 0.0;  // rho ~ slope_origin * r near 0
  RadialProfile profile;
  // Bound on |rho(r) - rho_true(r)| at r_max, including the distance to 1.
  double tail_residual = 0.0;
  // Radius beyond which the profile follows 1 - 1/(2r^2) - 9/(8r^4).
  double splice_radius = 0.0;
  int bisection_steps = 0;
};

struct ShootingOptions {
  double r0 = 1e-3;
  double slope_lo = 0.1;
  double slope_hi = 1.0;
  double sample_spacing = 0.01;
  int max_bisections = 200;
};

/// Bisects on the launch slope until the IVP trajectory neither collapses
/// nor blows up. Needs r_max >= 20 and tol <= 1e-6; throws Error(bracket)
/// when [slope_lo, slope_hi] does not bracket the solution.
ShootingSolution shoot_spiral_amplitude(double r_max = 20.0, double tol = 1e-6,
                                        const ShootingOptions& opts = {});

// Large-r expansion of the vortex profile.
double spiral_amplitude_tail(double r);

}  // namespace targetlab::radial
