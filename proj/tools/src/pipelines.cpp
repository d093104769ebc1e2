#include "targetlab/app/pipelines.hpp"

#include <cmath>
#include <cstdio>
#include <future>
#include <limits>

#include "targetlab/error.hpp"
#include "targetlab/profiles.hpp"

namespace targetlab::app {
namespace {

std::string dir_label(const char* prefix, double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s_%.4f", prefix, v);
  return buf;
}

double transform_or_nan(double k) {
  try {
    return measure::k_law_transform(k);
  } catch (const Error&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

json fit_to_json(const measure::FitResult& f) {
  json pts = json::array();
  for (const auto& [x, y] : f.points) pts.push_back({x, y});
  return {{"slope", f.slope}, {"intercept", f.intercept}, {"pearson_r", f.pearson_r}, {"points", pts}};
}

}  // namespace

spectral::RunConfig SimulateParams::run_config() const {
  spectral::RunConfig c;
  c.grid = {N, L, dealias ? spectral::Dealias::two_thirds : spectral::Dealias::none};
  c.dt = dt;
  c.b = b;
  c.defect = {A, p, eps};
  c.t_max = t_max;
  c.steady_tol = steady_tol;
  c.check_every = check_every;
  if (r_out > 0.0) c.annulus = {r_in, r_out};
  return c;
}

json SimulateParams::to_json() const {
  return {{"N", N},         {"L", L},     {"dt", dt},
          {"A", A},         {"p", p},     {"eps", eps},
          {"b", b},         {"t_max", t_max}, {"steady_tol", steady_tol},
          {"check_every", check_every}, {"dealias", dealias ? "two_thirds" : "none"},
          {"r_in", r_in},   {"r_out", r_out}};
}

double truncated_a(double A, double p, double eps, double R) {
  return profiles::core_mass({A, p, eps}, {profiles::MassConvention::truncated, R});
}

json report_to_json(const spectral::SteadyStateReport& r) {
  return {
      {"k_measured", r.k_measured},
      {"omega_drift", r.omega_drift},
      {"omega_converged", r.steady},
      {"steady_residual", r.steady_residual},
      {"steady", r.steady},
      {"t", r.t},
      {"steps", r.steps},
      {"annulus", {r.annulus.r_in, r.annulus.r_out}},
      {"plateau_k", r.plateau_k},
      {"gradient_030L", r.gradient_030},
      {"gradient_045L", r.gradient_045},
      {"gradient_growth", r.gradient_growth},
      {"plateau", r.plateau},
      {"corner_ratio", r.corner_ratio},
      {"corner_warning", r.corner_warning},
      {"max_top_third_energy", r.max_top_third_energy},
      {"eps", r.eps},
      {"b", r.b},
  };
}

void write_simulation(const fs::path& dir, const SimulateParams& params, const spectral::SteadyRun& run) {
  fs::create_directories(dir);
  json report = report_to_json(run.report);
  report["params"] = params.to_json();
  report["a_sim_truncated"] = truncated_a(params.A, params.p, params.eps);
  write_json(dir / "report.json", report);
  write_profile_csv(dir / "profile.csv", run.report.radial_profile, "dphi_dr");
  write_field(dir / "field", run.phi, {{"t", run.report.t}});
}

std::vector<MemberResult> run_members(const std::vector<SimulateParams>& members, int jobs,
                                      const std::vector<fs::path>& dirs, const Log& log) {
  std::vector<MemberResult> out(members.size());
  auto one = [&](std::size_t i) {
    MemberResult& res = out[i];
    res.params = members[i];
    res.a_sim = truncated_a(members[i].A, members[i].p, members[i].eps);
    try {
      const spectral::SteadyRun run = spectral::run_to_steady(members[i].run_config());
      res.report = run.report;
      if (!dirs.empty()) write_simulation(dirs[i], members[i], run);
    } catch (const Error& e) {
      res.error = e.what();
    }
    if (log) {
      char buf[200];
      std::snprintf(buf, sizeof buf, "member %zu/%zu: p=%.3g eps=%.6g a=%.4g steady=%d t=%.1f k=%.6g omega=%.6g%s",
                    i + 1, members.size(), members[i].p, members[i].eps, res.a_sim, res.report.steady ? 1 : 0,
                    res.report.t, res.report.k_measured, res.report.omega_drift,
                    res.error.empty() ? "" : (" error: " + res.error).c_str());
      log(buf);
    }
  };
  const std::size_t width = static_cast<std::size_t>(std::max(1, jobs));
  for (std::size_t start = 0; start < members.size(); start += width) {
    std::vector<std::future<void>> batch;
    for (std::size_t i = start; i < std::min(members.size(), start + width); ++i) {
      if (width == 1) {
        one(i);
      } else {
        batch.push_back(std::async(std::launch::async, one, i));
      }
    }
    for (auto& f : batch) f.get();
  }
  return out;
}

// --- Figure 1 -----------------------------------------------------------------------

std::vector<SimulateParams> Figure1Params::members() const {
  if (a_values.empty()) throw Error(ErrorCode::config, "figure1 needs at least one a value");
  const double unit_mass = truncated_a(A, p, 1.0, R);
  std::vector<SimulateParams> out;
  for (double a : a_values) {
    if (!(a > 0.0)) throw Error(ErrorCode::config, "figure1 a values must be positive");
    SimulateParams s;
    s.N = N;
    s.L = L;
    s.dt = dt;
    s.A = A;
    s.p = p;
    s.b = b;
    s.eps = a / unit_mass;  // eps int_0^R g r dr = a
    s.t_max = t_max;
    s.steady_tol = steady_tol;
    out.push_back(s);
  }
  return out;
}

json Figure1Params::to_json() const {
  return {{"N", N}, {"L", L}, {"dt", dt}, {"p", p}, {"A", A}, {"b", b}, {"R", R},
          {"a_values", a_values}, {"t_max", t_max}, {"steady_tol", steady_tol}, {"jobs", jobs},
          {"dry_run", dry_run}};
}

Figure1Result run_figure1(const Figure1Params& params, const Log& log) {
  Figure1Result res;
  res.runs = run_members(params.members(), params.jobs, {}, log);
  std::vector<std::pair<double, double>> points;
  double last_k = -1.0;
  for (const MemberResult& m : res.runs) {
    const bool ok = m.error.empty() && m.report.steady;
    res.all_steady = res.all_steady && ok;
    if (!ok) continue;
    if (m.report.k_measured <= last_k) res.k_monotone = false;
    last_k = m.report.k_measured;
    points.emplace_back(m.a_sim, m.report.k_measured);
  }
  if (points.size() >= 4) {
    try {
      res.fit = measure::fit_k_law(points);
    } catch (const Error& e) {
      if (log) log(std::string("fit skipped: ") + e.what());
    }
  }
  return res;
}

void write_figure1(const fs::path& dir, const Figure1Params& params, const Figure1Result& result) {
  fs::create_directories(dir);
  {
    CsvWriter w(dir / "fig1b_transform.csv", {"a", "eps", "k", "omega", "y_transform", "steady"});
    for (const MemberResult& m : result.runs) {
      w.row({m.a_sim, m.params.eps, m.report.k_measured, m.report.omega_drift,
             transform_or_nan(m.report.k_measured), m.report.steady ? 1.0 : 0.0});
    }
  }
  {
    std::vector<std::string> header{"r"};
    for (const MemberResult& m : result.runs) header.push_back(dir_label("dphi_dr_a", m.a_sim));
    CsvWriter w(dir / "fig1a_profiles.csv", header);
    if (!result.runs.empty() && result.runs.front().report.radial_profile.size() > 0) {
      const auto& grid = result.runs.front().report.radial_profile.grid;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        std::vector<double> row{grid[i]};
        for (const MemberResult& m : result.runs) {
          const auto& prof = m.report.radial_profile;
          row.push_back(i < prof.size() ? prof.values[i] : std::numeric_limits<double>::quiet_NaN());
        }
        w.row(row);
      }
    }
  }
  json runs = json::array();
  for (const MemberResult& m : result.runs) {
    json r = report_to_json(m.report);
    r["a_sim"] = m.a_sim;
    r["params"] = m.params.to_json();
    if (!m.error.empty()) r["error"] = m.error;
    runs.push_back(r);
  }
  json summary = {{"params", params.to_json()}, {"all_steady", result.all_steady},
                  {"k_monotone_in_a", result.k_monotone}, {"runs", runs}};
  if (result.fit) {
    summary["fit_transform"] = fit_to_json(result.fit->transform);
    summary["fit_direct"] = fit_to_json(result.fit->direct);
  }
  write_json(dir / "fig1_fit.json", summary);
}

// --- Figure 2 -----------------------------------------------------------------------

std::vector<SimulateParams> Figure2Params::members() const {
  if (p_grid.empty()) throw Error(ErrorCode::config, "figure2 needs at least one p value");
  std::vector<SimulateParams> out;
  for (double p : p_grid) {
    SimulateParams s;
    s.N = N;
    s.L = L;
    s.dt = dt;
    s.A = A;
    s.p = p;
    s.eps = eps;
    s.b = b;
    s.t_max = t_max;
    s.steady_tol = steady_tol;
    out.push_back(s);
  }
  return out;
}

json Figure2Params::to_json() const {
  return {{"N", N}, {"L", L}, {"dt", dt}, {"A", A}, {"eps", eps}, {"b", b}, {"R", R},
          {"p_grid", p_grid}, {"profile_ps", profile_ps}, {"t_max", t_max},
          {"steady_tol", steady_tol}, {"jobs", jobs}, {"dry_run", dry_run}};
}

Figure2Result run_figure2(const Figure2Params& params, const Log& log) {
  Figure2Result res;
  const auto runs = run_members(params.members(), params.jobs, {}, log);
  std::vector<asymptotics::RunRecord> records;
  double last_k = std::numeric_limits<double>::infinity();
  for (const MemberResult& m : runs) {
    Figure2Row row;
    row.p = m.params.p;
    row.run = m;
    row.in_regime = row.p > 0.5;
    row.a_truncated = truncated_a(params.A, row.p, params.eps, params.R);
    row.a_closed = row.p > 1.0 ? params.eps * params.A / (2.0 * row.p - 2.0)
                               : std::numeric_limits<double>::quiet_NaN();
    if (row.in_regime) {
      const auto pred = asymptotics::predict_k_for_family(params.A * params.eps, row.p, params.R);
      row.branch = pred.branch;
      row.a_sim = pred.a_sim;
    } else {
      row.a_sim = row.a_truncated;
    }
    const bool ok = m.error.empty() && m.report.steady;
    res.all_steady = res.all_steady && ok;
    if (row.in_regime && ok) {
      if (!(m.report.k_measured < last_k)) res.k_decreasing = false;
      last_k = m.report.k_measured;
    }
    if (row.in_regime) records.push_back({row.p, row.a_sim, m.report.k_measured, ok});
    res.rows.push_back(std::move(row));
  }
  if (records.size() >= 3) {
    try {
      res.comparison = asymptotics::compare_prediction_to_runs(records);
    } catch (const Error& e) {
      if (log) log(std::string("comparison skipped: ") + e.what());
    }
  }
  return res;
}

void write_figure2(const fs::path& dir, const Figure2Params& params, const Figure2Result& result) {
  fs::create_directories(dir);
  const double C = result.comparison ? result.comparison->C : std::numeric_limits<double>::quiet_NaN();
  {
    CsvWriter w(dir / "fig2a_k_vs_p.csv",
                {"p", "a_sim", "a_truncated", "a_closed", "k_measured", "omega", "k_pred_solid",
                 "k_pred_dashed", "plateau", "gradient_growth", "steady", "closed_form_branch"});
    for (const Figure2Row& r : result.rows) {
      const double solid = r.p > 1.0 ? C * std::exp(-1.0 / r.a_closed) : std::numeric_limits<double>::quiet_NaN();
      const double dashed = r.in_regime ? C * std::exp(-1.0 / r.a_truncated) : std::numeric_limits<double>::quiet_NaN();
      w.row({r.p, r.a_sim, r.a_truncated, r.a_closed, r.run.report.k_measured, r.run.report.omega_drift, solid,
             dashed, r.run.report.plateau ? 1.0 : 0.0, r.run.report.gradient_growth,
             r.run.report.steady ? 1.0 : 0.0, r.branch == asymptotics::Branch::closed_form ? 1.0 : 0.0});
    }
  }
  {
    std::vector<const Figure2Row*> chosen;
    for (double p : params.profile_ps) {
      for (const Figure2Row& r : result.rows) {
        if (std::abs(r.p - p) < 1e-12 && r.run.report.radial_profile.size() > 0) chosen.push_back(&r);
      }
    }
    std::vector<std::string> header{"r"};
    for (const Figure2Row* r : chosen) header.push_back(dir_label("dphi_dr_p", r->p));
    CsvWriter w(dir / "fig2b_profiles.csv", header);
    if (!chosen.empty()) {
      const auto& grid = chosen.front()->run.report.radial_profile.grid;
      for (std::size_t i = 0; i < grid.size(); ++i) {
        std::vector<double> row{grid[i]};
        for (const Figure2Row* r : chosen) row.push_back(r->run.report.radial_profile.values[i]);
        w.row(row);
      }
    }
  }
  json rows = json::array();
  for (const Figure2Row& r : result.rows) {
    json j = report_to_json(r.run.report);
    j["p"] = r.p;
    j["a_sim"] = r.a_sim;
    j["in_regime"] = r.in_regime;
    j["branch"] = r.in_regime ? asymptotics::to_string(r.branch) : "out_of_regime";
    if (!r.in_regime) {
      j["expected_outcome"] = "no gradient plateau (sub-critical decay)";
    }
    if (!r.run.error.empty()) j["error"] = r.run.error;
    rows.push_back(j);
  }
  json summary = {{"params", params.to_json()}, {"k_decreasing_in_p", result.k_decreasing},
                  {"all_steady", result.all_steady}, {"rows", rows}};
  if (result.comparison) {
    const auto& c = *result.comparison;
    json table = json::array();
    for (const auto& row : c.rows) {
      table.push_back({{"p", row.p}, {"a_sim", row.a_sim}, {"k_measured", row.k_measured},
                       {"k_shape", row.k_shape}, {"k_predicted", row.k_predicted},
                       {"log_residual", row.log_residual}, {"excluded", row.excluded}, {"reason", row.reason}});
    }
    summary["comparison"] = {{"C", c.C}, {"rms_log_residual", c.rms_log_residual},
                             {"pearson_log_k_vs_minus_inv_a", c.pearson_log_k}, {"used", c.used},
                             {"rows", table}};
  }
  write_json(dir / "fig2_summary.json", summary);
}

// --- Figure 3 -----------------------------------------------------------------------

json Figure3Params::to_json() const { return {{"r_max", r_max}, {"tol", tol}}; }

void write_figure3(const fs::path& dir, const radial::ShootingSolution& sol) {
  fs::create_directories(dir);
  const auto& prof = sol.profile;
  {
    CsvWriter w(dir / "rho.csv", {"r", "rho", "one_minus_rho_sq_times_r2"});
    for (std::size_t i = 0; i < prof.size(); ++i) {
      const double r = prof.grid[i];
      const double rho = prof.values[i];
      w.row({r, rho, r * r * (1.0 - rho * rho)});
    }
  }
  {
    CsvWriter w(dir / "tail.csv", {"r", "one_minus_rho_sq_times_r2"});
    for (std::size_t i = 0; i < prof.size(); ++i) {
      const double r = prof.grid[i];
      if (r < 1.0) continue;
      const double rho = prof.values[i];
      w.row({r, r * r * (1.0 - rho * rho)});
    }
  }
  write_json(dir / "shooting.json", {{"slope_origin", sol.slope_origin},
                                     {"tail_residual", sol.tail_residual},
                                     {"splice_radius", sol.splice_radius},
                                     {"bisection_steps", sol.bisection_steps},
                                     {"rho_at_rmax", prof.values.back()}});
}

}  // namespace targetlab::app
