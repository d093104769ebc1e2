#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "targetlab/app/io.hpp"
#include "targetlab/app/manifest.hpp"
#include "targetlab/app/pipelines.hpp"
#include "targetlab/asymptotics.hpp"
#include "targetlab/error.hpp"
#include "targetlab/measurement.hpp"
#include "targetlab/profiles.hpp"
#include "targetlab/radial_solvers.hpp"
#include "targetlab/shooting.hpp"
#include "targetlab/specfun.hpp"

using namespace targetlab;
using namespace targetlab::app;

namespace {

void log_line(const std::string& s) { std::cerr << s << '\n'; }

json conventions() {
  return {{"a_sign", "a_sim = |a| > 0 in outputs, a_signed = -a_sim in the matching formula"},
          {"omega", "Omega = Lambda^2 / b"},
          {"grid", "cell centred, origin of the defect at (L/2, L/2)"},
          {"csv", "17 significant digits"}};
}

// Flat JSON config: each key names a long option of the subcommand ('_' or
// '-' separators). Options given on the command line win.
void apply_config(CLI::App& sub, const std::string& path) {
  if (path.empty()) return;
  const json cfg = read_json(path);
  if (!cfg.is_object()) throw Error(ErrorCode::config, "config must be a flat JSON object");
  for (const auto& [key, value] : cfg.items()) {
    std::string name = key;
    for (char& c : name) {
      if (c == '_') c = '-';
    }
    if (name == "config") continue;
    CLI::Option* opt = sub.get_option_no_throw("--" + name);
    if (opt == nullptr) throw Error(ErrorCode::config, "unknown config key '" + key + "' for " + sub.get_name());
    if (opt->count() > 0) continue;
    auto text = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
    if (value.is_array()) {
      for (const json& e : value) opt->add_result(text(e));
    } else if (value.is_object() || value.is_null()) {
      throw Error(ErrorCode::config, "config key '" + key + "' must be a scalar or a list");
    } else {
      opt->add_result(text(value));
    }
    opt->run_callback();
  }
}

int exit_for(const Error& e) {
  if (e.is_config_error() || e.code() == ErrorCode::out_of_regime || e.code() == ErrorCode::convention ||
      e.code() == ErrorCode::divergent_mass) {
    return kConfigError;
  }
  return kNumericalFailure;
}

// Runs body against a manifest for `dir`; numerical failures still leave a
// manifest behind with status "failed".
int with_manifest(const std::string& command, const json& config, const fs::path& dir,
                  const std::function<int(RunManifest&)>& body) {
  RunManifest manifest(command, config);
  manifest.set_conventions(conventions());
  fs::create_directories(dir);
  int code = kOk;
  try {
    code = body(manifest);
  } catch (const Error& e) {
    if (exit_for(e) == kConfigError) throw;
    manifest.set_status("failed");
    manifest.add_note(e.what());
    log_line(e.what());
    code = kNumericalFailure;
  }
  if (code == kPartialResults) manifest.set_status("partial");
  manifest.finish(dir);
  return code;
}

void add_simulate_options(CLI::App* sub, SimulateParams& s, std::vector<double>& annulus, bool& no_dealias) {
  sub->add_option("--N", s.N, "grid points per side (power of two, >= 64)")->capture_default_str();
  sub->add_option("--L", s.L, "box side length")->capture_default_str();
  sub->add_option("--dt", s.dt, "time step")->capture_default_str();
  sub->add_option("--A", s.A, "defect amplitude")->capture_default_str();
  sub->add_option("--p", s.p, "defect decay exponent")->capture_default_str();
  sub->add_option("--eps", s.eps, "defect strength")->capture_default_str();
  sub->add_option("--b", s.b, "nonlinearity coefficient")->capture_default_str();
  sub->add_option("--tmax", s.t_max, "final time if not steady")->capture_default_str();
  sub->add_option("--steady-tol", s.steady_tol, "steadiness tolerance on phi_t")->capture_default_str();
  sub->add_option("--check-every", s.check_every, "steps between steadiness checks")->capture_default_str();
  sub->add_option("--annulus", annulus, "measurement annulus r_in,r_out")->delimiter(',')->expected(2);
  sub->add_flag("--no-dealias", no_dealias, "disable 2/3 dealiasing");
}

void finalize_simulate(SimulateParams& s, const std::vector<double>& annulus, bool no_dealias) {
  s.dealias = !no_dealias;
  if (annulus.size() == 2) {
    s.r_in = annulus[0];
    s.r_out = annulus[1];
  }
}

// Reads <dir>/*/report.json, sorted by directory name.
std::vector<std::pair<fs::path, json>> read_reports(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error(ErrorCode::io, "not a directory: " + dir.string());
  std::vector<fs::path> subdirs;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_directory() && fs::exists(e.path() / "report.json")) subdirs.push_back(e.path());
  }
  std::sort(subdirs.begin(), subdirs.end());
  std::vector<std::pair<fs::path, json>> out;
  for (const auto& d : subdirs) out.emplace_back(d, read_json(d / "report.json"));
  return out;
}

double nan_or_transform(double k) {
  if (!(k > 0.0) || !(k < std::exp(1.0))) return std::nan("");
  return measure::k_law_transform(k);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"targetlab: target patterns of the forced eikonal equation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version_string());
  std::string config_path;

  std::map<std::string, std::function<int()>> handlers;
  auto add = [&](const std::string& name, const std::string& help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "flat JSON file of option values");
    return sub;
  };

  // simulate
  SimulateParams sim;
  std::vector<double> sim_annulus;
  bool sim_no_dealias = false;
  std::string sim_out = "targetlab_simulate";
  bool sim_verbose = false;
  {
    CLI::App* sub = add("simulate", "run one simulation to steady state");
    add_simulate_options(sub, sim, sim_annulus, sim_no_dealias);
    sub->add_option("--out", sim_out, "output directory")->capture_default_str();
    sub->add_flag("--verbose", sim_verbose, "log every steadiness check");
    handlers["simulate"] = [&] {
      finalize_simulate(sim, sim_annulus, sim_no_dealias);
      return with_manifest("simulate", sim.to_json(), sim_out, [&](RunManifest& m) {
        auto on_check = [&](const spectral::CheckSample& c) {
          if (sim_verbose) {
            char buf[128];
            std::snprintf(buf, sizeof buf, "t=%.2f residual=%.3e omega=%.8f", c.t, c.residual, c.omega);
            log_line(buf);
          }
        };
        const auto run = spectral::run_to_steady(sim.run_config(), on_check);
        write_simulation(sim_out, sim, run);
        std::cout << report_to_json(run.report).dump(2) << '\n';
        if (!run.report.steady) {
          m.add_note("not steady at t_max");
          return int(kPartialResults);
        }
        return int(kOk);
      });
    };
  }

  // sweep
  SimulateParams sweep_base;
  std::vector<double> sweep_annulus;
  bool sweep_no_dealias = false;
  std::vector<double> sweep_p, sweep_a, sweep_eps;
  int sweep_jobs = 1;
  bool sweep_dry = false, sweep_aggregate_only = false;
  std::string sweep_out = "targetlab_sweep";
  {
    CLI::App* sub = add("sweep", "run a grid of simulations and aggregate them into sweep.csv");
    add_simulate_options(sub, sweep_base, sweep_annulus, sweep_no_dealias);
    sub->add_option("--p-grid", sweep_p, "decay exponents (default: --p)")->delimiter(',');
    sub->add_option("--a-grid", sweep_a, "target truncated core masses, realized through eps")->delimiter(',');
    sub->add_option("--eps-grid", sweep_eps, "strengths (ignored when --a-grid is set)")->delimiter(',');
    sub->add_option("--jobs", sweep_jobs, "concurrent members")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_flag("--dry-run", sweep_dry, "write the manifest and member list only");
    sub->add_flag("--aggregate-only", sweep_aggregate_only, "re-aggregate existing member directories");
    sub->add_option("--out", sweep_out, "output directory")->capture_default_str();
    handlers["sweep"] = [&] {
      finalize_simulate(sweep_base, sweep_annulus, sweep_no_dealias);
      std::vector<SimulateParams> members;
      const std::vector<double> ps = sweep_p.empty() ? std::vector<double>{sweep_base.p} : sweep_p;
      for (double p : ps) {
        const std::vector<double>& second = !sweep_a.empty() ? sweep_a : sweep_eps;
        const std::size_t n2 = second.empty() ? 1 : second.size();
        for (std::size_t j = 0; j < n2; ++j) {
          SimulateParams s = sweep_base;
          s.p = p;
          if (!sweep_a.empty()) {
            s.eps = sweep_a[j] / truncated_a(s.A, p, 1.0);
          } else if (!sweep_eps.empty()) {
            s.eps = sweep_eps[j];
          }
          members.push_back(s);
        }
      }
      json cfg = json::array();
      for (const auto& s : members) cfg.push_back(s.to_json());
      const fs::path out = sweep_out;
      return with_manifest("sweep", {{"members", cfg}, {"jobs", sweep_jobs}}, out, [&](RunManifest& m) {
        if (sweep_dry) {
          m.set_status("dry-run");
          return int(kOk);
        }
        bool failures = false;
        if (!sweep_aggregate_only) {
          std::vector<fs::path> dirs;
          for (std::size_t i = 0; i < members.size(); ++i) {
            char name[32];
            std::snprintf(name, sizeof name, "run_%03zu", i);
            dirs.push_back(out / name);
          }
          for (const auto& r : run_members(members, sweep_jobs, dirs, log_line)) {
            if (!r.error.empty()) {
              failures = true;
              m.add_note(r.error);
            }
          }
        }
        CsvWriter w(out / "sweep.csv", {"a", "p", "k", "omega", "y_transform", "eps", "A", "steady"});
        for (const auto& [dir, rep] : read_reports(out)) {
          const json& prm = rep.at("params");
          const double k = rep.at("k_measured").get<double>();
          w.row({rep.at("a_sim_truncated").get<double>(), prm.at("p").get<double>(), k,
                 rep.at("omega_drift").get<double>(), nan_or_transform(k), prm.at("eps").get<double>(),
                 prm.at("A").get<double>(), rep.at("steady").get<bool>() ? 1.0 : 0.0});
          if (!rep.at("steady").get<bool>()) failures = true;
        }
        return failures ? int(kPartialResults) : int(kOk);
      });
    };
  }

  // measure
  std::string meas_field, meas_out;
  std::vector<double> meas_annulus;
  std::size_t meas_bins = 0;
  {
    CLI::App* sub = add("measure", "measure the wavenumber of a stored field snapshot");
    sub->add_option("--field", meas_field, "field .bin or .json sidecar");
    sub->add_option("--annulus", meas_annulus, "r_in,r_out (default 0.35L,0.45L)")->delimiter(',')->expected(2);
    sub->add_option("--bins", meas_bins, "radial bins (default N/2 + 1)");
    sub->add_option("--out", meas_out, "output JSON");
    handlers["measure"] = [&] {
      if (meas_field.empty() || meas_out.empty()) throw Error(ErrorCode::config, "measure needs --field and --out");
      const spectral::Field2D phi = read_field(meas_field);
      const measure::Annulus annulus = meas_annulus.size() == 2 ? measure::Annulus{meas_annulus[0], meas_annulus[1]}
                                                                : measure::default_annulus(phi.grid.L);
      const double k = measure::measure_wavenumber(phi, annulus);
      const std::size_t bins = meas_bins > 0 ? meas_bins : phi.grid.N / 2 + 1;
      const auto prof = measure::azimuthal_average(measure::radial_gradient(phi), bins);
      json r = json::array(), v = json::array();
      for (std::size_t i = 0; i < prof.profile.size(); ++i) {
        r.push_back(prof.profile.grid[i]);
        v.push_back(prof.profile.values[i]);
      }
      const json out = {{"k_measured", k},
                        {"annulus", {annulus.r_in, annulus.r_out}},
                        {"N", phi.grid.N},
                        {"L", phi.grid.L},
                        {"radial_profile", {{"r", r}, {"dphi_dr", v}}}};
      write_json(meas_out, out);
      std::cout << format_number(k) << '\n';
      return int(kOk);
    };
  }

  // predict
  double pr_A = 1.0, pr_p = 0.8, pr_b = 1.0, pr_eps = 1.0, pr_R = 3.0;
  std::string pr_branch = "auto", pr_out;
  std::optional<double> pr_C;
  {
    CLI::App* sub = add("predict", "asymptotic wavenumber and frequency for A/(1+r^2)^p");
    sub->add_option("--A", pr_A)->capture_default_str();
    sub->add_option("--p", pr_p)->capture_default_str();
    sub->add_option("--b", pr_b)->capture_default_str();
    sub->add_option("--eps", pr_eps, "strength, folded into A")->capture_default_str();
    sub->add_option("--R", pr_R, "truncation radius of the core mass")->capture_default_str();
    sub->add_option("--branch", pr_branch, "auto | closed_form | truncated")
        ->check(CLI::IsMember({"auto", "closed_form", "truncated"}))
        ->capture_default_str();
    sub->add_option("--C", pr_C, "fitted prefactor replacing 2 exp(-gamma)");
    sub->add_option("--out", pr_out, "also write the JSON here");
    handlers["predict"] = [&] {
      const double A = pr_A * pr_eps;
      const auto fam = pr_branch == "auto" ? asymptotics::predict_k_for_family(A, pr_p, pr_R)
                                           : asymptotics::predict_k_for_family(
                                                 A, pr_p,
                                                 pr_branch == "closed_form" ? asymptotics::Branch::closed_form
                                                                            : asymptotics::Branch::truncated,
                                                 pr_R);
      const double a_sim = pr_b * fam.a_sim;
      const auto pred = asymptotics::make_prediction(-a_sim, pr_b, pr_C);
      json out = {{"a_signed", pred.a_signed}, {"a_sim", a_sim},       {"lambda", pred.lambda},
                  {"omega", pred.omega},       {"k", pred.k},          {"k_shape", std::exp(-1.0 / a_sim)},
                  {"branch", asymptotics::to_string(fam.branch)},      {"omega_exponent", pred.omega_exponent}};
      if (pr_C) out["C"] = *pr_C;
      if (!pr_out.empty()) write_json(pr_out, out);
      std::cout << out.dump(2) << '\n';
      return int(kOk);
    };
  }

  // compare
  std::string cmp_runs, cmp_out = "targetlab_compare";
  double cmp_R = 3.0;
  {
    CLI::App* sub = add("compare", "fit the prefactor C against a directory of runs");
    sub->add_option("--runs", cmp_runs, "directory whose subdirectories hold report.json");
    sub->add_option("--R", cmp_R, "truncation radius for p <= 1")->capture_default_str();
    sub->add_option("--out", cmp_out, "output directory")->capture_default_str();
    handlers["compare"] = [&] {
      if (cmp_runs.empty()) throw Error(ErrorCode::config, "compare needs --runs");
      const auto reports = read_reports(cmp_runs);
      return with_manifest("compare", {{"runs", cmp_runs}, {"R", cmp_R}}, cmp_out, [&](RunManifest& m) {
        std::vector<asymptotics::RunRecord> records;
        for (const auto& [dir, rep] : reports) {
          const json& prm = rep.at("params");
          const double p = prm.at("p").get<double>();
          if (!(p > 0.5)) {
            m.add_note("skipped " + dir.filename().string() + ": p <= 1/2 is outside the target regime");
            continue;
          }
          const auto fam =
              asymptotics::predict_k_for_family(prm.at("A").get<double>() * prm.at("eps").get<double>(), p, cmp_R);
          records.push_back({p, prm.at("b").get<double>() * fam.a_sim, rep.at("k_measured").get<double>(),
                             rep.at("steady").get<bool>()});
        }
        const auto c = asymptotics::compare_prediction_to_runs(records);
        CsvWriter w(fs::path(cmp_out) / "compare.csv",
                    {"p", "a_sim", "k_measured", "k_shape", "k_predicted", "log_residual", "excluded"});
        json rows = json::array();
        for (const auto& r : c.rows) {
          w.row({r.p, r.a_sim, r.k_measured, r.k_shape, r.k_predicted, r.log_residual, r.excluded ? 1.0 : 0.0});
          if (r.excluded) rows.push_back({{"p", r.p}, {"reason", r.reason}});
        }
        const json summary = {{"C", c.C}, {"rms_log_residual", c.rms_log_residual},
                              {"pearson_log_k_vs_minus_inv_a", c.pearson_log_k}, {"used", c.used},
                              {"excluded", rows}};
        write_json(fs::path(cmp_out) / "compare.json", summary);
        std::cout << summary.dump(2) << '\n';
        return int(kOk);
      });
    };
  }

  // shoot
  double sh_rmax = 20.0, sh_tol = 1e-6;
  std::string sh_out;
  {
    CLI::App* sub = add("shoot", "vortex amplitude profile by shooting");
    sub->add_option("--rmax", sh_rmax)->capture_default_str();
    sub->add_option("--tol", sh_tol)->capture_default_str();
    sub->add_option("--out", sh_out, "CSV with r, rho, one_minus_rho_sq_times_r2");
    handlers["shoot"] = [&] {
      const auto sol = radial::shoot_spiral_amplitude(sh_rmax, sh_tol);
      if (!sh_out.empty()) {
        CsvWriter w(sh_out, {"r", "rho", "one_minus_rho_sq_times_r2"});
        for (std::size_t i = 0; i < sol.profile.size(); ++i) {
          const double r = sol.profile.grid[i], rho = sol.profile.values[i];
          w.row({r, rho, r * r * (1.0 - rho * rho)});
        }
      }
      std::cout << json{{"slope_origin", sol.slope_origin},
                        {"tail_residual", sol.tail_residual},
                        {"splice_radius", sol.splice_radius},
                        {"bisection_steps", sol.bisection_steps}}
                       .dump(2)
                << '\n';
      return int(kOk);
    };
  }

  // corrector
  std::string cor_profile, cor_out;
  double cor_b = 1.0;
  {
    CLI::App* sub = add("corrector", "corrector K for a tabulated far-field defect");
    sub->add_option("--profile", cor_profile, "CSV with columns r and g_far (or r and a second column)");
    sub->add_option("--b", cor_b)->capture_default_str();
    sub->add_option("--out", cor_out, "CSV with r, K");
    handlers["corrector"] = [&] {
      if (cor_profile.empty() || cor_out.empty()) throw Error(ErrorCode::config, "corrector needs --profile and --out");
      const CsvTable t = read_csv(cor_profile);
      if (t.header.size() < 2) throw Error(ErrorCode::io, "profile CSV needs at least two columns");
      const std::size_t ir = t.column("r");
      std::size_t ig = 1;
      for (std::size_t i = 0; i < t.header.size(); ++i) {
        if (t.header[i] == "g_far") ig = i;
      }
      std::vector<double> r, g;
      for (const auto& row : t.rows) {
        r.push_back(row[ir]);
        g.push_back(row[ig]);
      }
      const radial::RadialProfile gf(radial::RadialGrid(r), g);
      write_profile_csv(cor_out, radial::solve_corrector_K(gf, cor_b), "K");
      return int(kOk);
    };
  }

  // profile
  double pf_A = 1.0, pf_p = 0.8, pf_eps = 1.0, pf_rmax = 20.0;
  std::size_t pf_n = 2000;
  std::string pf_out;
  {
    CLI::App* sub = add("profile", "tabulate g and its core / far split");
    sub->add_option("--A", pf_A)->capture_default_str();
    sub->add_option("--p", pf_p)->capture_default_str();
    sub->add_option("--eps", pf_eps)->capture_default_str();
    sub->add_option("--rmax", pf_rmax)->capture_default_str();
    sub->add_option("--intervals", pf_n, "uniform intervals on [0, rmax]")->capture_default_str();
    sub->add_option("--out", pf_out, "CSV with r, g, g_core, g_far");
    handlers["profile"] = [&] {
      if (pf_out.empty()) throw Error(ErrorCode::config, "profile needs --out");
      if (!(pf_rmax > 0.0) || pf_n < 2) throw Error(ErrorCode::config, "profile needs rmax > 0 and intervals >= 2");
      const profiles::InhomogeneitySpec spec{pf_A, pf_p, pf_eps};
      const auto grid = radial::RadialGrid::uniform(pf_rmax, pf_n);
      const auto split = profiles::split_defect(spec, grid);
      CsvWriter w(pf_out, {"r", "g", "g_core", "g_far"});
      for (std::size_t i = 0; i < grid.size(); ++i) {
        w.row({grid[i], profiles::evaluate_g(spec, grid[i]), split.g_core.values[i], split.g_far.values[i]});
      }
      return int(kOk);
    };
  }

  // special
  std::string sp_fn = "k0";
  double sp_z = 1.0;
  {
    CLI::App* sub = add("special", "modified Bessel functions K0, K1");
    sub->add_option("--fn", sp_fn, "k0 | k1 | ratio (K1/K0) | log_k0 | log_k0_ratio (-K1/K0)")
        ->check(CLI::IsMember({"k0", "k1", "ratio", "log_k0", "log_k0_ratio"}))
        ->capture_default_str();
    sub->add_option("--z", sp_z)->capture_default_str()->check(CLI::PositiveNumber);
    handlers["special"] = [&] {
      double v = 0.0;
      if (sp_fn == "k0") v = specfun::bessel_k0(sp_z);
      else if (sp_fn == "k1") v = specfun::bessel_k1(sp_z);
      else if (sp_fn == "ratio") v = -specfun::log_k0_ratio(sp_z);
      else if (sp_fn == "log_k0") v = specfun::log_bessel_k0(sp_z);
      else v = specfun::log_k0_ratio(sp_z);
      std::cout << format_number(v) << '\n';
      return int(kOk);
    };
  }

  // figure1
  Figure1Params f1;
  std::string f1_out = "targetlab_figure1";
  {
    CLI::App* sub = add("figure1", "a-sweep at p = 0.8: gradient profiles and the k-law fit");
    sub->add_option("--N", f1.N)->capture_default_str();
    sub->add_option("--L", f1.L)->capture_default_str();
    sub->add_option("--dt", f1.dt)->capture_default_str();
    sub->add_option("--p", f1.p)->capture_default_str();
    sub->add_option("--A", f1.A)->capture_default_str();
    sub->add_option("--b", f1.b)->capture_default_str();
    sub->add_option("--R", f1.R)->capture_default_str();
    sub->add_option("--a-values", f1.a_values, "target truncated core masses")->delimiter(',');
    sub->add_option("--tmax", f1.t_max)->capture_default_str();
    sub->add_option("--steady-tol", f1.steady_tol)->capture_default_str();
    sub->add_option("--jobs", f1.jobs)->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_flag("--dry-run", f1.dry_run, "manifest only, no simulation");
    sub->add_option("--out", f1_out)->capture_default_str();
    handlers["figure1"] = [&] {
      const auto members = f1.members();  // validates
      return with_manifest("figure1", f1.to_json(), f1_out, [&](RunManifest& m) {
        if (f1.dry_run) {
          m.set_status("dry-run");
          return int(kOk);
        }
        const auto res = run_figure1(f1, log_line);
        write_figure1(f1_out, f1, res);
        if (res.fit) {
          std::cout << "pearson_r(transform) = " << format_number(res.fit->transform.pearson_r) << '\n';
        }
        for (const auto& r : res.runs) {
          if (!r.error.empty()) m.add_note(r.error);
        }
        return res.all_steady ? int(kOk) : int(kPartialResults);
      });
    };
  }

  // figure2
  Figure2Params f2;
  std::string f2_out = "targetlab_figure2";
  {
    CLI::App* sub = add("figure2", "p-sweep at A = 1.5: k(p) against both core-mass branches");
    sub->add_option("--N", f2.N)->capture_default_str();
    sub->add_option("--L", f2.L)->capture_default_str();
    sub->add_option("--dt", f2.dt)->capture_default_str();
    sub->add_option("--A", f2.A)->capture_default_str();
    sub->add_option("--eps", f2.eps)->capture_default_str();
    sub->add_option("--b", f2.b)->capture_default_str();
    sub->add_option("--R", f2.R)->capture_default_str();
    sub->add_option("--p-grid", f2.p_grid)->delimiter(',');
    sub->add_option("--profile-ps", f2.profile_ps, "p values whose gradient profiles are exported")->delimiter(',');
    sub->add_option("--tmax", f2.t_max)->capture_default_str();
    sub->add_option("--steady-tol", f2.steady_tol)->capture_default_str();
    sub->add_option("--jobs", f2.jobs)->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_flag("--dry-run", f2.dry_run, "manifest only, no simulation");
    sub->add_option("--out", f2_out)->capture_default_str();
    handlers["figure2"] = [&] {
      const auto members = f2.members();
      return with_manifest("figure2", f2.to_json(), f2_out, [&](RunManifest& m) {
        if (f2.dry_run) {
          m.set_status("dry-run");
          return int(kOk);
        }
        const auto res = run_figure2(f2, log_line);
        write_figure2(f2_out, f2, res);
        for (const auto& r : res.rows) {
          if (!r.run.error.empty()) m.add_note(r.run.error);
          if (!r.in_regime) m.add_note("p <= 1/2 row: absence of a gradient plateau is the expected outcome");
        }
        return res.all_steady ? int(kOk) : int(kPartialResults);
      });
    };
  }

  // figure3
  Figure3Params f3;
  std::string f3_out = "targetlab_figure3";
  {
    CLI::App* sub = add("figure3", "vortex amplitude profile and its tail diagnostic");
    sub->add_option("--rmax", f3.r_max)->capture_default_str();
    sub->add_option("--tol", f3.tol)->capture_default_str();
    sub->add_option("--out", f3_out)->capture_default_str();
    handlers["figure3"] = [&] {
      return with_manifest("figure3", f3.to_json(), f3_out, [&](RunManifest&) {
        write_figure3(f3_out, radial::shoot_spiral_amplitude(f3.r_max, f3.tol));
        return int(kOk);
      });
    };
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  try {
    for (CLI::App* sub : app.get_subcommands()) {
      apply_config(*sub, config_path);
      return handlers.at(sub->get_name())();
    }
  } catch (const CLI::ParseError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return exit_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumericalFailure;
  }
  return kConfigError;
}
