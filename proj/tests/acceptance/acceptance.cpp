// Acceptance suite: one PASS/FAIL line per criterion. Arguments select a
// subset by number (default: all eight).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "support/bessel_oracle.hpp"
#include "support/bump.hpp"
#include "support/hopf_cole_solution.hpp"
#include "support/shooting_oracle.hpp"
#include "targetlab/app/pipelines.hpp"
#include "targetlab/profiles.hpp"
#include "targetlab/radial_solvers.hpp"
#include "targetlab/shooting.hpp"
#include "targetlab/specfun.hpp"
#include "targetlab/spectral2d.hpp"

using namespace targetlab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Shared between criteria 4 and 6.
std::optional<app::Figure1Result> g_fig1;

const app::Figure1Result& figure1() {
  if (!g_fig1) {
    app::Figure1Params p;
    p.N = 256;
    p.jobs = 1;
    g_fig1 = app::run_figure1(p);
  }
  return *g_fig1;
}

Outcome bessel_accuracy() {
  double worst = 0.0, worst_z = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double z = 1e-3 * std::pow(5e4, i / 199.0);
    const double k0 = static_cast<double>(testing::bessel_k_oracle(0, z));
    const double k1 = static_cast<double>(testing::bessel_k_oracle(1, z));
    const double e = std::max(std::abs(specfun::bessel_k0(z) / k0 - 1.0), std::abs(specfun::bessel_k1(z) / k1 - 1.0));
    if (e > worst) {
      worst = e;
      worst_z = z;
    }
  }
  return {worst <= 1e-9, fmt("max rel err %.2e at z=%.4g over 200 log-spaced z in [1e-3,50] (tol 1e-9)", worst, worst_z)};
}

Outcome etdrk4_order() {
  // Exact nonlinear solution through Hopf-Cole.
  const spectral::GridSpec2D grid{128, 10.0, spectral::Dealias::two_thirds};
  const double T = 4.0;
  const spectral::Field2D zero(grid);
  const spectral::Field2D exact = testing::hopf_cole_solution(grid, T);
  std::vector<double> errs;
  for (double dt : {0.5, 0.25, 0.125}) {
    spectral::EikonalSimulator sim(grid, dt, 1.0, 0.0, zero);
    sim.set_state(testing::hopf_cole_solution(grid, 0.0));
    sim.advance(std::lround(T / dt));
    const auto f = sim.field();
    double e = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i) e = std::max(e, std::abs(f.values[i] - exact.values[i]));
    errs.push_back(e);
  }
  const double o1 = std::log2(errs[0] / errs[1]), o2 = std::log2(errs[1] / errs[2]);

  // Single Fourier mode, linear problem.
  spectral::SpectralOps ops(grid);
  const double dt = 0.5;
  const auto plan = spectral::ETDRK4Plan::build(ops, dt);
  spectral::Field2D mode(grid);
  const double k = 2.0 * M_PI * 3.0 / grid.L, ky = 2.0 * M_PI * 2.0 / grid.L;
  for (std::size_t iy = 0; iy < grid.N; ++iy) {
    for (std::size_t ix = 0; ix < grid.N; ++ix) mode(ix, iy) = std::cos(k * grid.coord(ix) + ky * grid.coord(iy));
  }
  const auto stepped = spectral::step_etdrk4(mode, plan, 0.0, 0.0, zero);
  const double decay = std::exp(-(k * k + ky * ky) * dt);
  double lin = 0.0;
  for (std::size_t i = 0; i < mode.values.size(); ++i) {
    lin = std::max(lin, std::abs(stepped.values[i] - decay * mode.values[i]));
  }
  lin /= decay;
  const bool pass = std::min(o1, o2) >= 3.8 && lin <= 1e-12;
  return {pass, fmt("orders %.3f, %.3f over dt 0.5/0.25/0.125 at N=128 (need >= 3.8); linear-mode rel err %.2e (tol 1e-12)",
                    o1, o2, lin)};
}

Outcome shooting() {
  const auto sol = radial::shoot_spiral_amplitude(20.0, 1e-6);
  const double oracle = testing::vortex_slope_oracle();
  const double slope_err = std::abs(sol.slope_origin - oracle);
  const double rho20 = sol.profile.values.back();
  double tail_lo = 1e9, tail_hi = -1e9;
  for (std::size_t i = 0; i < sol.profile.size(); ++i) {
    const double r = sol.profile.grid[i];
    if (r < 10.0 || r > 20.0) continue;
    const double rho = sol.profile.values[i];
    const double t = r * r * (1.0 - rho * rho);
    tail_lo = std::min(tail_lo, t);
    tail_hi = std::max(tail_hi, t);
  }
  const bool ok_slope = slope_err <= 1e-3 && std::abs(sol.slope_origin - 0.58319) <= 1e-3;
  const bool ok_end = std::abs(rho20 - 1.0) <= 1e-3;
  const bool ok_tail = tail_lo >= 0.8 && tail_hi <= 1.2;
  return {ok_slope && ok_end && ok_tail,
          fmt("slope %.8f vs oracle %.8f [%s]; |rho(20)-1| = %.3e (tol 1e-3) [%s]; r^2(1-rho^2) in [%.4f, %.4f] on [10,20] [%s]",
              sol.slope_origin, oracle, ok_slope ? "ok" : "fail", std::abs(rho20 - 1.0), ok_end ? "ok" : "fail",
              tail_lo, tail_hi, ok_tail ? "ok" : "fail")};
}

Outcome figure1b() {
  const auto& res = figure1();
  if (!res.fit) return {false, "fit unavailable (fewer than 4 steady runs)"};
  const double r = std::abs(res.fit->transform.pearson_r);
  return {r > 0.99 && res.all_steady,
          fmt("|pearson_r| = %.5f (need > 0.99), %zu runs, all steady: %s", r, res.runs.size(),
              res.all_steady ? "yes" : "no")};
}

Outcome figure2() {
  app::Figure2Params p;
  p.N = 256;
  p.p_grid = {0.3, 0.8, 1.2, 1.5, 2.0, 2.5, 3.0};
  p.profile_ps = {};
  const auto res = app::run_figure2(p);
  const double corr = res.comparison ? res.comparison->pearson_log_k : 0.0;
  double growth = 0.0;
  bool plateau03 = true;
  std::string ks;
  for (const auto& row : res.rows) {
    if (row.p == 0.3) {
      growth = row.run.report.gradient_growth;
      plateau03 = row.run.report.plateau;
    }
    ks += fmt(" %.3g:%.4f", row.p, row.run.report.k_measured);
  }
  const bool ok_dec = res.k_decreasing;
  const bool ok_corr = corr > 0.95;
  const bool ok_03 = growth > 0.2 && !plateau03;
  return {ok_dec && ok_corr && ok_03,
          fmt("k strictly decreasing on p>=0.8 [%s]; corr(log k, -1/a) = %.4f (need > 0.95) [%s]; p=0.3 gradient growth "
              "%.1f%% (need > 20%%) [%s]; k(p):%s",
              ok_dec ? "ok" : "fail", corr, ok_corr ? "ok" : "fail", 100.0 * growth, ok_03 ? "ok" : "fail", ks.c_str())};
}

Outcome lambda_omega() {
  const auto& res = figure1();
  double worst = 0.0;
  int used = 0;
  for (const auto& m : res.runs) {
    if (!m.report.steady) continue;
    const double w = m.report.omega_drift, k = m.report.k_measured;
    worst = std::max(worst, std::abs(w - k * k) / w);
    ++used;
  }
  return {used == static_cast<int>(res.runs.size()) && worst <= 0.15,
          fmt("max |Omega - k^2| / Omega = %.4f over %d steady runs (tol 0.15)", worst, used)};
}

Outcome corrector_and_inverse() {
  // (log r)^2 / 2 law for g_f = 1/r^2 (sharp cut at r = 1).
  const double b = 1.0;
  const auto grid = radial::RadialGrid::geometric(200.0, 0.05, 1.02);
  const auto K = radial::solve_corrector_K(grid, [](double r) { return r > 1.0 ? 1.0 / (r * r) : 0.0; }, b);
  double worst_k = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid[i];
    if (r < 50.0) continue;
    const double law = -b * 0.5 * std::log(r) * std::log(r);
    worst_k = std::max(worst_k, std::abs(K.values[i] / law - 1.0));
  }

  // Round trip on 20 random compactly supported smooth sources.
  std::mt19937 rng(20240611);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const auto g2 = radial::RadialGrid::uniform(20.0, 4000);
  double worst_rt = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const double lambda = 0.2 + 2.0 * U(rng);
    const double c = 2.0 + 12.0 * U(rng), w = 1.0 + 4.0 * U(rng), amp = 2.0 * U(rng) - 1.0;
    const double freq = 3.0 * U(rng);
    const auto f = [=](double r) { return amp * testing::bump(r, c - w, c + w) * std::cos(freq * r); };
    const auto u = radial::apply_inverse_L_lambda(g2, f, lambda);
    const auto Lu = radial::apply_L_lambda(u, lambda);
    for (std::size_t i = 0; i < g2.size(); ++i) {
      if (g2[i] < 0.1) continue;
      worst_rt = std::max(worst_rt, std::abs(Lu[i] - f(g2[i])));
    }
  }
  return {worst_k <= 0.05 && worst_rt <= 1e-5,
          fmt("K vs -(log r)^2/2 on [50,200]: max rel dev %.2e (tol 5e-2); L_lambda round trip (20 sources): %.2e (tol 1e-5)",
              worst_k, worst_rt)};
}

Outcome hopf_cole() {
  const double lambda = 0.5, b = 1.0;
  const double lo = 2.0 / lambda, hi = 20.0 / lambda;
  std::vector<double> nodes;
  const std::size_t n = 4000;
  for (std::size_t i = 0; i <= n; ++i) nodes.push_back(hi * static_cast<double>(i) / n);
  const radial::RadialGrid grid(nodes);
  // phi = -(1/b) log K0(Lambda r), shifted by a constant so Psi stays O(1).
  const double shift = specfun::log_bessel_k0(lambda * lo);
  const auto phi = radial::RadialProfile::sample(grid, [&](double r) {
    return r <= 0.0 ? 0.0 : -(specfun::log_bessel_k0(lambda * std::max(r, 1e-3)) - shift) / b;
  });
  const auto g = radial::RadialProfile::sample(grid, [](double) { return 0.0; });
  const double res = radial::hopf_cole_residual(phi, g, 0.0, lambda * lambda / b, b, {lo, hi});
  return {res <= 1e-6, fmt("residual %.2e for Psi = K0(Lambda r) on [2/Lambda, 20/Lambda], Lambda = %.2f (tol 1e-6)", res, lambda)};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
  const std::vector<Criterion> criteria = {
      {1, "bessel-accuracy", 1.0, bessel_accuracy},
      {2, "etdrk4-order", 30.0, etdrk4_order},
      {3, "shooting-bvp", 5.0, shooting},
      {4, "figure1b-reproduction", 1200.0, figure1b},
      {5, "figure2-reproduction", 1800.0, figure2},
      {6, "lambda2-equals-b-omega", 0.0, lambda_omega},
      {7, "corrector-and-inverse", 5.0, corrector_and_inverse},
      {8, "hopf-cole-eigenfunction", 1.0, hopf_cole},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    // Criterion 6 reuses the Figure 1 runs and has no budget of its own.
    const bool in_time = c.budget_s <= 0.0 || secs <= c.budget_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::printf("[%s] %d %s: %s; %.2f s%s\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs,
                in_time ? "" : fmt(" (over the %.0f s budget)", c.budget_s).c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
