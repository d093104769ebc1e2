#pragma once

#include <functional>

#include "targetlab/measurement.hpp"
#include "targetlab/profiles.hpp"
#include "targetlab/radial_grid.hpp"
#include "targetlab/spectral2d.hpp"

namespace targetlab::spectral {

struct RunConfig {
  GridSpec2D grid{};
  double dt = 0.5;
  double b = 1.0;
  // eps is defect.strength; the simulator forces with eps * A / (1 + r^2)^p.
  profiles::InhomogeneitySpec defect{};
  double t_max = 5000.0;
  double steady_tol = 1e-5;
  int check_every = 20;
  double disk_fraction = 0.45;
  measure::Annulus annulus{};  // r_out == 0 selects (0.35 L, 0.45 L)
  std::size_t n_bins = 0;       // 0 selects N/2 + 1 (bin width L/N)
};

struct CheckSample {
  double t = 0.0;
  double residual = 0.0;  // max |phi_t - mean phi_t| on the disk
  double omega = 0.0;     // -mean phi_t on the disk
};

struct SteadyStateReport {
  double k_measured = 0.0;
  double omega_drift = 0.0;
  double steady_residual = 0.0;
  bool steady = false;
  double t = 0.0;
  long steps = 0;
  measure::Annulus annulus{};
  radial::RadialProfile radial_profile;  // azimuthal average of d phi / dr
  // Unweighted mean of the bins of radial_profile inside the annulus.
  double plateau_k = 0.0;
  double gradient_030 = 0.0;  // radial_profile at 0.30 L
  double gradient_045 = 0.0;  // radial_profile at 0.45 L
  double gradient_growth = 0.0;  // gradient_045 / gradient_030 - 1
  bool plateau = false;          // |gradient_growth| <= 0.2
  double corner_ratio = 0.0;     // g(corner) / g(0)
  bool corner_warning = false;   // corner_ratio > 1e-3: wrap-around not negligible
  double max_top_third_energy = 0.0;
  double eps = 0.0;
  double b = 1.0;
};

struct SteadyRun {
  Field2D phi;
  SteadyStateReport report;
};

/// Unit-strength defect A / (1 + r^2)^p on the cell centres.
Field2D defect_field(const GridSpec2D& grid, const profiles::InhomogeneitySpec& defect);

/// Advances from phi = 0 until the fluctuation of phi_t over the disk of
/// radius disk_fraction * L drops below steady_tol (checked every
/// check_every steps, starting at t = 0) or t_max is reached. Blow-up
/// propagates as BlowUpError; reaching t_max returns steady == false.
SteadyRun run_to_steady(const RunConfig& config,
                        const std::function<void(const CheckSample&)>& on_check = {});

/// Fills the measurement fields of a report from a field snapshot.
void measure_snapshot(const Field2D& phi, const RunConfig& config, SteadyStateReport& report);

}  // namespace targetlab::spectral
