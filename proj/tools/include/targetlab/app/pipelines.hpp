#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "targetlab/app/io.hpp"
#include "targetlab/asymptotics.hpp"
#include "targetlab/measurement.hpp"
#include "targetlab/shooting.hpp"
#include "targetlab/steady.hpp"

namespace targetlab::app {

// Exit codes shared by every subcommand.
enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericalFailure = 3, kPartialResults = 4 };

using Log = std::function<void(const std::string&)>;

struct SimulateParams {
  std::size_t N = 256;
  double L = 100.0;
  double dt = 0.5;
  double A = 1.0;
  double p = 0.8;
  double eps = 1.0;
  double b = 1.0;
  double t_max = 5000.0;
  double steady_tol = 1e-5;
  int check_every = 20;
  bool dealias = true;
  double r_in = 0.0;  // 0: default annulus (0.35 L, 0.45 L)
  double r_out = 0.0;

  spectral::RunConfig run_config() const;
  json to_json() const;
};

// eps * int_0^3 g r dr for the unit-strength family (the simulation a).
double truncated_a(double A, double p, double eps, double R = 3.0);

json report_to_json(const spectral::SteadyStateReport& r);

// report.json, profile.csv, field.bin + field.json under dir.
void write_simulation(const fs::path& dir, const SimulateParams& params, const spectral::SteadyRun& run);

struct MemberResult {
  SimulateParams params;
  double a_sim = 0.0;
  spectral::SteadyStateReport report;
  std::string error;  // non-empty when the run threw
};

/// Runs each parameter set, at most `jobs` concurrently. Each member writes
/// into its own directory when `dirs` is non-empty.
std::vector<MemberResult> run_members(const std::vector<SimulateParams>& members, int jobs,
                                      const std::vector<fs::path>& dirs, const Log& log);

// --- Figure 1: a-sweep at fixed p -------------------------------------------------

struct Figure1Params {
  std::size_t N = 512;
  double L = 100.0;
  double dt = 0.5;
  double p = 0.8;
  double A = 1.0;
  double b = 1.0;
  double R = 3.0;
  std::vector<double> a_values = {0.45, 0.75, 1.05, 1.35, 1.65, 1.95, 2.25, 2.55, 2.85};
  double t_max = 5000.0;
  double steady_tol = 1e-5;
  int jobs = 1;
  bool dry_run = false;

  std::vector<SimulateParams> members() const;
  json to_json() const;
};

struct Figure1Result {
  std::vector<MemberResult> runs;
  std::optional<measure::KLawFit> fit;
  bool all_steady = true;
  bool k_monotone = true;
};

Figure1Result run_figure1(const Figure1Params& params, const Log& log = {});
void write_figure1(const fs::path& dir, const Figure1Params& params, const Figure1Result& result);

// --- Figure 2: p-sweep at fixed A -------------------------------------------------

struct Figure2Params {
  std::size_t N = 512;
  double L = 100.0;
  double dt = 0.5;
  double A = 1.5;
  double eps = 1.0;
  double b = 1.0;
  double R = 3.0;
  std::vector<double> p_grid = {0.3, 0.5, 0.8, 1.0, 1.2, 1.5, 2.0, 2.5, 3.0};
  std::vector<double> profile_ps = {0.3, 0.8, 1.5};
  double t_max = 5000.0;
  double steady_tol = 1e-5;
  int jobs = 1;
  bool dry_run = false;

  std::vector<SimulateParams> members() const;
  json to_json() const;
};

struct Figure2Row {
  double p = 0.0;
  bool in_regime = false;  // p > 1/2
  asymptotics::Branch branch = asymptotics::Branch::truncated;
  double a_sim = 0.0;        // branch actually used
  double a_truncated = 0.0;  // A eps int_0^R g r dr
  double a_closed = 0.0;     // A eps / (2p - 2), NaN for p <= 1
  MemberResult run;
};

struct Figure2Result {
  std::vector<Figure2Row> rows;
  std::optional<asymptotics::Comparison> comparison;  // in-regime rows only
  bool k_decreasing = true;  // over in-regime steady rows
  bool all_steady = true;
};

Figure2Result run_figure2(const Figure2Params& params, const Log& log = {});
void write_figure2(const fs::path& dir, const Figure2Params& params, const Figure2Result& result);

// --- Figure 3: vortex amplitude -------------------------------------------------

struct Figure3Params {
  double r_max = 20.0;
  double tol = 1e-6;
  json to_json() const;
};

void write_figure3(const fs::path& dir, const radial::ShootingSolution& sol);

}  // namespace targetlab::app
