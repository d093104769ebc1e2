#include "targetlab/steady.hpp"

#include <cmath>

namespace targetlab::spectral {
namespace {

CheckSample disk_statistics(const Field2D& phi_t, double radius) {
  double sum = 0.0;
  std::size_t count = 0;
  const auto& g = phi_t.grid;
  for (std::size_t iy = 0; iy < g.N; ++iy) {
    for (std::size_t ix = 0; ix < g.N; ++ix) {
      if (phi_t.radius(ix, iy) > radius) continue;
      sum += phi_t(ix, iy);
      ++count;
    }
  }
  const double mean = sum / static_cast<double>(count);
  double dev = 0.0;
  for (std::size_t iy = 0; iy < g.N; ++iy) {
    for (std::size_t ix = 0; ix < g.N; ++ix) {
      if (phi_t.radius(ix, iy) > radius) continue;
      dev = std::max(dev, std::abs(phi_t(ix, iy) - mean));
    }
  }
  return {0.0, dev, -mean};
}

}  // namespace

Field2D defect_field(const GridSpec2D& grid, const profiles::InhomogeneitySpec& defect) {
  profiles::InhomogeneitySpec unit = defect;
  unit.strength = 1.0;
  return sample_radial(grid, [&](double r) { return profiles::evaluate_g(unit, r); });
}

void measure_snapshot(const Field2D& phi, const RunConfig& config, SteadyStateReport& report) {
  const double L = phi.grid.L;
  report.annulus = config.annulus.r_out > 0.0 ? config.annulus : measure::default_annulus(L);
  report.k_measured = measure::measure_wavenumber(phi, report.annulus);
  const std::size_t bins = config.n_bins > 0 ? config.n_bins : phi.grid.N / 2 + 1;
  const auto az = measure::azimuthal_average(measure::radial_gradient(phi), bins);
  report.radial_profile = az.profile;
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < az.profile.size(); ++i) {
    const double r = az.profile.grid[i];
    if (r < report.annulus.r_in || r > report.annulus.r_out) continue;
    sum += az.profile.values[i];
    ++count;
  }
  report.plateau_k = count > 0 ? sum / static_cast<double>(count) : 0.0;
  report.gradient_030 = az.profile.at(0.30 * L);
  report.gradient_045 = az.profile.at(0.45 * L);
  report.gradient_growth = report.gradient_030 != 0.0 ? report.gradient_045 / report.gradient_030 - 1.0 : 0.0;
  report.plateau = std::abs(report.gradient_growth) <= 0.2;
}

SteadyRun run_to_steady(const RunConfig& config, const std::function<void(const CheckSample&)>& on_check) {
  config.grid.validate();
  if (!(config.dt > 0.0) || !(config.t_max >= 0.0) || config.check_every < 1) {
    throw Error(ErrorCode::parameter, "run_to_steady needs dt > 0, t_max >= 0 and check_every >= 1");
  }
  const GridSpec2D& grid = config.grid;
  const Field2D g = defect_field(grid, config.defect);
  const double eps = config.defect.strength;
  EikonalSimulator sim(grid, config.dt, config.b, eps, g);

  SteadyStateReport report;
  report.eps = eps;
  report.b = config.b;
  profiles::InhomogeneitySpec unit = config.defect;
  unit.strength = 1.0;
  const double g0 = profiles::evaluate_g(unit, 0.0);
  report.corner_ratio = g0 != 0.0 ? profiles::evaluate_g(unit, std::sqrt(0.5) * grid.L) / g0 : 0.0;
  report.corner_warning = report.corner_ratio > 1e-3;

  const auto max_steps = static_cast<long>(std::ceil(config.t_max / config.dt - 1e-9));
  const double radius = config.disk_fraction * grid.L;
  CheckSample last;
  for (long s = 0;; ++s) {
    if (s % config.check_every == 0 || s == max_steps) {
      last = disk_statistics(sim.time_derivative(), radius);
      last.t = sim.time();
      report.max_top_third_energy = std::max(report.max_top_third_energy, sim.top_third_energy_fraction());
      if (on_check) on_check(last);
      if (last.residual < config.steady_tol) {
        report.steady = true;
        break;
      }
    }
    if (s >= max_steps) break;
    sim.step();
  }
  report.steady_residual = last.residual;
  report.omega_drift = last.omega;
  report.t = sim.time();
  report.steps = sim.steps();

  SteadyRun out{sim.field(), std::move(report)};
  measure_snapshot(out.phi, config, out.report);
  return out;
}

}  // namespace targetlab::spectral
