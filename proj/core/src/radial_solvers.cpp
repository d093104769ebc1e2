#include "targetlab/radial_solvers.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>

#include <boost/math/quadrature/gauss.hpp>

#include "targetlab/measurement.hpp"
#include "targetlab/quadrature.hpp"
#include "targetlab/specfun.hpp"

namespace targetlab::radial {
namespace {

constexpr double kPanelTol = 1e-13;

// Cumulative integral of f over the grid: out[i] = int_0^{r_i} f.
template <class F>
std::vector<double> cumulative(const RadialGrid& grid, F&& f) {
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    out[i] = out[i - 1] + integrate(f, grid[i - 1], grid[i], kPanelTol);
  }
  return out;
}

void require_vanishing_core(const RadialGrid& grid, const RadialFunction& g_far) {
  for (std::size_t i = 0; i < grid.size() && grid[i] < 1.0; ++i) {
    if (g_far(grid[i]) != 0.0) {
      throw Error(ErrorCode::precondition,
                  "g_far must vanish on [0, 1); g_far(" + std::to_string(grid[i]) +
                      ") = " + std::to_string(g_far(grid[i])));
    }
  }
}

// Attaches a power-law fit on the last decade of r when it reproduces the
// tail within 20%.
void attach_decay_estimate(RadialProfile& p) {
  const double r_hi = p.grid.r_max();
  const double r_lo = r_hi / 10.0;
  if (r_lo <= 0.0 || p.grid.count_in(r_lo, r_hi) < 4) return;
  const double sign = p.values.back() < 0.0 ? -1.0 : 1.0;
  RadialProfile mag(p.grid, p.values);
  for (double& v : mag.values) v *= sign;
  for (std::size_t i = p.grid.lower_index(r_lo); i < p.size(); ++i) {
    if (!(mag.values[i] > 0.0)) return;
  }
  const DecayEstimate est = measure::estimate_decay_exponent(mag, {r_lo, r_hi});
  for (std::size_t i = p.grid.lower_index(r_lo); i < p.size(); ++i) {
    const double model = est.prefactor * std::pow(p.grid[i], est.exponent);
    if (std::abs(model - mag.values[i]) > 0.2 * mag.values[i]) return;
  }
  p.decay_estimate = est;
}

// 8-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::array<double, 8> x{};
  std::array<double, 8> w{};
  GaussRule() {
    using G = boost::math::quadrature::gauss<double, 8>;
    const auto& a = G::abscissa();
    const auto& wt = G::weights();
    for (std::size_t k = 0; k < 4; ++k) {
      x[k] = -a[3 - k];
      w[k] = wt[3 - k];
      x[7 - k] = a[3 - k];
      w[7 - k] = wt[3 - k];
    }
  }
};

const GaussRule& gauss_rule() {
  static const GaussRule rule;
  return rule;
}

// Precomputed quadrature data for one panel of the explicit inverse of
// P = d/dr + 1/r + c(r).
struct PanelPoint {
  double weight;        // w_q * s_q * exp(C(s_q) - C(anchor))
  double linear_coef;   // (-2 b phi_base' - c)(s_q)
  double source;        // G(s_q)
  std::array<std::size_t, 4> idx;
  std::array<double, 4> interp;
};

struct Panel {
  double carry;  // exp(C(r_from) - C(r_to)) for the recursion
  std::vector<PanelPoint> points;
};

void lagrange_weights(std::span<const double> nodes, std::size_t n_active_start, std::size_t n,
                      double s, PanelPoint& pt) {
  std::size_t hi = static_cast<std::size_t>(std::lower_bound(nodes.begin(), nodes.end(), s) - nodes.begin());
  std::size_t start = hi >= 2 ? hi - 2 : 0;
  start = std::max(start, n_active_start);
  start = std::min(start, n - 4);
  for (std::size_t a = 0; a < 4; ++a) {
    double w = 1.0;
    for (std::size_t c = 0; c < 4; ++c) {
      if (c != a) w *= (s - nodes[start + c]) / (nodes[start + a] - nodes[start + c]);
    }
    pt.idx[a] = start + a;
    pt.interp[a] = w;
  }
}

class ExplicitInverse {
 public:
  ExplicitInverse(const GradientCorrectionProblem& prob, const Preconditioner& pre)
      : prob_(prob), pre_(pre) {
    const auto nodes = prob.grid.nodes();
    n_ = nodes.size();
    first_ = prob.grid.lower_index(prob.r_inner);
    if (n_ - first_ < 6) {
      throw Error(ErrorCode::resolution, "fewer than 6 nodes on [r_inner, r_max]");
    }
    auto C = [&](double s) {
      double v = pre.rate * s;
      if (pre.linearize_base) v -= 2.0 * prob.b * prob.base_potential(s);
      return v;
    };
    auto coef = [&](double s) {
      double c = pre.rate;
      if (pre.linearize_base) c -= 2.0 * prob.b * prob.base_gradient(s);
      return -2.0 * prob.b * prob.base_gradient(s) - c;
    };
    std::vector<double> c_nodes(n_);
    for (std::size_t i = first_; i < n_; ++i) c_nodes[i] = C(nodes[i]);

    const GaussRule& rule = gauss_rule();
    panels_.resize(n_);
    for (std::size_t i = first_; i + 1 < n_; ++i) {
      const double lo = nodes[i];
      const double hi = nodes[i + 1];
      // Outward panels are anchored at their right end, inward at their left.
      const double anchor = pre.sweep == Sweep::outward ? c_nodes[i + 1] : c_nodes[i];
      Panel& p = panels_[i];
      p.carry = pre.sweep == Sweep::outward ? std::exp(c_nodes[i] - c_nodes[i + 1])
                                            : std::exp(c_nodes[i + 1] - c_nodes[i]);
      p.points.resize(rule.x.size());
      for (std::size_t q = 0; q < rule.x.size(); ++q) {
        const double s = 0.5 * (hi - lo) * rule.x[q] + 0.5 * (hi + lo);
        PanelPoint& pt = p.points[q];
        pt.weight = 0.5 * (hi - lo) * rule.w[q] * s * std::exp(C(s) - anchor);
        pt.linear_coef = coef(s);
        pt.source = prob.base_source(s);
        lagrange_weights(nodes, first_, n_, s, pt);
      }
    }
  }

  std::size_t first() const { return first_; }

  // T(psi) = -P^{-1}[ coef psi - b psi^2 + G ].
  std::vector<double> apply(const std::vector<double>& psi) const {
    const auto nodes = prob_.grid.nodes();
    const double b = prob_.b;
    auto N_at = [&](const PanelPoint& pt) {
      double v = 0.0;
      for (std::size_t a = 0; a < 4; ++a) v += pt.interp[a] * psi[pt.idx[a]];
      return pt.linear_coef * v - b * v * v + pt.source;
    };
    auto panel_integral = [&](const Panel& p) {
      double s = 0.0;
      for (const PanelPoint& pt : p.points) s += pt.weight * N_at(pt);
      return s;
    };
    std::vector<double> out(n_, 0.0);
    if (pre_.sweep == Sweep::outward) {
      double W = 0.0;
      for (std::size_t i = first_; i + 1 < n_; ++i) {
        W = panels_[i].carry * W + panel_integral(panels_[i]);
        out[i + 1] = -W / nodes[i + 1];
      }
      out[first_] = 0.0;
    } else {
      double V = 0.0;
      out[n_ - 1] = 0.0;
      for (std::size_t i = n_ - 1; i-- > first_;) {
        V = panels_[i].carry * V + panel_integral(panels_[i]);
        out[i] = V / nodes[i];  // u = -(1/r) V, then T = -u
      }
      if (nodes[first_] == 0.0) out[first_] = 0.0;
    }
    return out;
  }

 private:
  const GradientCorrectionProblem& prob_;
  Preconditioner pre_;
  std::size_t n_ = 0;
  std::size_t first_ = 0;
  std::vector<Panel> panels_;
};

}  // namespace

// --- corrector K -----------------------------------------------------------

RadialProfile solve_corrector_K(const RadialGrid& grid, const RadialFunction& g_far, double b) {
  require_vanishing_core(grid, g_far);
  auto mass = [&](double t) { return g_far(t) * t; };
  auto log_moment = [&](double t) { return t > 0.0 ? g_far(t) * t * std::log(t) : 0.0; };
  const std::vector<double> I = cumulative(grid, mass);
  const std::vector<double> J0 = cumulative(grid, log_moment);
  // J(1) from the cumulative table plus the remainder of its panel.
  const std::size_t k = grid.lower_index(1.0);
  double J1 = 0.0;
  if (k < grid.size()) {
    J1 = J0[k] - integrate(log_moment, 1.0, grid[k], kPanelTol);
  } else {
    J1 = J0.back() + integrate(log_moment, grid.r_max(), 1.0, kPanelTol);
  }
  // int_1^r I(s)/s ds = I(r) log r - int_1^r g t log t dt   (by parts)
  std::vector<double> K(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid[i];
    const double boundary = r > 0.0 ? I[i] * std::log(r) : 0.0;
    K[i] = -b * (boundary - (J0[i] - J1));
  }
  RadialProfile out(grid, std::move(K));
  attach_decay_estimate(out);
  return out;
}

RadialProfile solve_corrector_K(const RadialProfile& g_far, double b) {
  return solve_corrector_K(g_far.grid, [&](double r) { return r < 1.0 ? 0.0 : g_far.at(r); }, b);
}

double corrector_residual(const RadialProfile& K, const RadialFunction& g_far, double b,
                          double r_lo, double r_hi) {
  const auto lap = radial_laplacian(K.grid, K.values);
  double m = 0.0;
  for (std::size_t i = 0; i < K.size(); ++i) {
    const double r = K.grid[i];
    if (r < r_lo || r > r_hi) continue;
    m = std::max(m, std::abs(lap[i] + b * g_far(r)));
  }
  return m;
}

// --- L_lambda ----------------------------------------------------------------

RadialProfile apply_inverse_L_lambda(const RadialGrid& grid, const RadialFunction& f, double lambda) {
  if (!(lambda > 0.0)) {
    throw Error(ErrorCode::domain, "L_lambda is inverted only for lambda > 0");
  }
  std::vector<double> u(grid.size(), 0.0);
  double W = 0.0;  // int_0^{r_i} exp(lambda (s - r_i)) f(s) s ds
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double lo = grid[i - 1];
    const double hi = grid[i];
    const double panel =
        integrate([&](double s) { return std::exp(lambda * (s - hi)) * f(s) * s; }, lo, hi, kPanelTol);
    W = std::exp(-lambda * (hi - lo)) * W + panel;
    u[i] = W / hi;
  }
  return RadialProfile(grid, std::move(u));
}

RadialProfile apply_inverse_L_lambda(const RadialProfile& f, double lambda) {
  return apply_inverse_L_lambda(f.grid, [&](double r) { return f.at(r); }, lambda);
}

std::vector<double> apply_L_lambda(const RadialProfile& u, double lambda) {
  const auto d1 = derivative(u.grid, u.values, 1);
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double r = u.grid[i];
    // u/r -> u'(0) at the origin for regular u.
    out[i] = d1[i] + (r > 0.0 ? u.values[i] / r : d1[i]) + lambda * u.values[i];
  }
  return out;
}

// --- far-field ansatz ---------------------------------------------------------

void FarFieldAnsatz::validate() const {
  if (!(lambda > 0.0)) throw Error(ErrorCode::parameter, "far-field ansatz needs Lambda > 0");
  if (!(b > 0.0)) throw Error(ErrorCode::parameter, "far-field ansatz needs b > 0 (b Omega > 0)");
}

profiles::Jet far_field_phi0_jet(const FarFieldAnsatz& ansatz, double r) {
  const double z = ansatz.lambda * r;
  const profiles::Jet chi = profiles::smooth_cutoff_jet(ansatz.cutoff, z);
  if (chi.value == 0.0 && chi.d1 == 0.0) return {0.0, 0.0, 0.0};
  const double logk0 = specfun::log_bessel_k0(z);
  const double R = -specfun::log_k0_ratio(z);  // K1/K0
  const double dR = R * R - R / z - 1.0;
  const double L = ansatz.lambda;
  profiles::Jet out;
  out.value = -chi.value * logk0 / ansatz.b;
  out.d1 = -(L / ansatz.b) * (chi.d1 * logk0 - chi.value * R);
  out.d2 = -(L * L / ansatz.b) * (chi.d2 * logk0 - 2.0 * chi.d1 * R - chi.value * dR);
  return out;
}

double far_field_phi0(const FarFieldAnsatz& ansatz, double r) {
  return far_field_phi0_jet(ansatz, r).value;
}

// --- gradient corrections --------------------------------------------------------

std::vector<double> correction_residual(const GradientCorrectionProblem& problem,
                                        const RadialProfile& psi) {
  const auto nodes = problem.grid.nodes();
  const std::size_t first = problem.grid.lower_index(problem.r_inner);
  const std::size_t n = nodes.size();
  std::vector<double> out(n, std::numeric_limits<double>::quiet_NaN());
  const auto sub_nodes = nodes.subspan(first);
  const auto sub_vals = std::span<const double>(psi.values).subspan(first);
  const auto d1 = derivative(sub_nodes, sub_vals, 1);
  for (std::size_t j = 0; j < sub_nodes.size(); ++j) {
    const double r = sub_nodes[j];
    const double p = sub_vals[j];
    const double over_r = r > 0.0 ? p / r : d1[j];
    out[first + j] = d1[j] + over_r - 2.0 * problem.b * problem.base_gradient(r) * p -
                     problem.b * p * p + problem.base_source(r);
  }
  return out;
}

CorrectionResult solve_gradient_correction(const GradientCorrectionProblem& problem,
                                           const Preconditioner& pre, const FixedPointOptions& opts) {
  const ExplicitInverse inverse(problem, pre);
  const std::size_t first = inverse.first();
  const std::size_t n = problem.grid.size();

  CorrectionResult result;
  std::vector<double> psi(n, 0.0);
  std::vector<double> prev_step;
  double omega = 1.0;
  int growing = 0;

  auto finish = [&](bool converged) {
    result.psi = RadialProfile(problem.grid, psi);
    if (result.increments.size() >= 2) {
      double log_sum = 0.0;
      int count = 0;
      for (std::size_t k = 1; k < result.increments.size(); ++k) {
        if (result.increments[k - 1] > 0.0 && result.increments[k] > 0.0) {
          log_sum += std::log(result.increments[k] / result.increments[k - 1]);
          ++count;
        }
      }
      result.contraction_rate = count > 0 ? std::exp(log_sum / count) : 0.0;
    }
    if (converged) {
      const auto res = correction_residual(problem, result.psi);
      double m = 0.0;
      for (std::size_t i = first; i < n; ++i) m = std::max(m, std::abs(res[i]));
      result.residual = m / problem.residual_scale;
    }
  };

  for (int it = 0; it < opts.max_iterations; ++it) {
    std::vector<double> next = inverse.apply(psi);
    std::vector<double> step(n, 0.0);
    for (std::size_t i = first; i < n; ++i) step[i] = next[i] - psi[i];
    if (!prev_step.empty() && omega == 1.0) {
      const double dot = std::inner_product(step.begin(), step.end(), prev_step.begin(), 0.0);
      if (dot < 0.0) {
        omega = opts.damping;
        result.damped = true;
      }
    }
    for (std::size_t i = first; i < n; ++i) psi[i] += omega * step[i];
    double actual = 0.0;
    for (std::size_t i = first; i < n; ++i) actual = std::max(actual, std::abs(omega * step[i]));
    result.increments.push_back(actual);
    result.iterations = it + 1;
    prev_step = std::move(step);

    if (!std::isfinite(actual)) {
      finish(false);
      throw NonContractionError("fixed-point iterate became non-finite; try a smaller eps",
                                std::move(result));
    }
    if (actual < opts.tol) {
      finish(true);
      return result;
    }
    const std::size_t m = result.increments.size();
    growing = (m >= 2 && result.increments[m - 1] > result.increments[m - 2]) ? growing + 1 : 0;
    if (growing >= opts.divergence_window) {
      finish(false);
      throw NonContractionError(
          "fixed-point increments grew for " + std::to_string(growing) +
              " consecutive steps; the map does not contract (try a smaller eps)",
          std::move(result));
    }
  }
  finish(false);
  throw NonContractionError("fixed-point iteration did not converge in " +
                                std::to_string(opts.max_iterations) + " iterations",
                            std::move(result));
}

CorrectionResult solve_far_field_correction(const FarFieldAnsatz& ansatz, const RadialGrid& grid,
                                            const RadialFunction& g, double eps, double lambda_pre,
                                            const FarFieldOptions& opts) {
  ansatz.validate();
  if (!(lambda_pre > 0.0)) {
    throw Error(ErrorCode::domain, "preconditioner rate must be positive");
  }
  const double omega = ansatz.omega();
  GradientCorrectionProblem prob;
  prob.grid = grid;
  prob.b = ansatz.b;
  prob.r_inner = opts.r_inner > 0.0 ? opts.r_inner : 1.0 / ansatz.lambda;
  prob.residual_scale = omega;
  prob.base_potential = [ansatz](double r) { return far_field_phi0(ansatz, r); };
  prob.base_gradient = [ansatz](double r) { return far_field_phi0_jet(ansatz, r).d1; };
  prob.base_source = [ansatz, omega, eps, g](double r) {
    const profiles::Jet j = far_field_phi0_jet(ansatz, r);
    const double lap = j.d2 + (r > 0.0 ? j.d1 / r : j.d2);
    return lap - ansatz.b * j.d1 * j.d1 + omega - eps * g(r);
  };
  Preconditioner pre;
  if (opts.preconditioner == FarFieldPreconditioner::linearized_inward) {
    pre = {0.0, true, Sweep::inward};
  } else {
    pre = {lambda_pre, false, Sweep::outward};
  }
  return solve_gradient_correction(prob, pre, opts.fixed_point);
}

CorrectionResult solve_far_field_correction(const FarFieldAnsatz& ansatz, const RadialProfile& g,
                                            double eps, double lambda_pre,
                                            const FarFieldOptions& opts) {
  return solve_far_field_correction(
      ansatz, g.grid, [&g](double r) { return g.at(r); }, eps, lambda_pre, opts);
}

// --- intermediate ansatz ------------------------------------------------------------

double IntermediateAnsatz::phi0(double r) const {
  if (r <= 1.0) return 0.0;
  const double eps = defect.strength;
  const profiles::CutoffSpec chi_m = profiles::CutoffSpec::chi_m(M);
  const double q = 1.0 + a_signed * std::log(r) + eps * K.at(r);
  return -profiles::smooth_cutoff(chi_m, r) * std::log(q) / b;
}

double IntermediateAnsatz::phi0_gradient(double r) const {
  if (r <= 1.0) return 0.0;
  const double eps = defect.strength;
  const profiles::Jet cm = profiles::smooth_cutoff_jet(profiles::CutoffSpec::chi_m(M), r);
  if (cm.value == 0.0 && cm.d1 == 0.0) return 0.0;
  const double q = 1.0 + a_signed * std::log(r) + eps * K.at(r);
  profiles::InhomogeneitySpec unit = defect;
  unit.strength = 1.0;
  // K' = -b (1/r) int_0^r g_f t dt
  const double inner = integrate(
      [&](double t) { return profiles::smooth_cutoff(profiles::CutoffSpec::chi(), t) *
                             profiles::evaluate_g(unit, t) * t; },
      0.0, r, 1e-12);
  const double dq = a_signed / r + eps * (-b * inner / r);
  return -(cm.d1 * std::log(q) + cm.value * dq / q) / b;
}

double IntermediateAnsatz::phi1_gradient(double r) const {
  if (r <= 0.0) return 0.0;
  const double eps = defect.strength;
  profiles::InhomogeneitySpec unit = defect;
  unit.strength = 1.0;
  const profiles::Jet chi = profiles::smooth_cutoff_jet(profiles::CutoffSpec::chi(), r);
  const double chi_log_d = chi.d1 * std::log(r) + chi.value / r;
  const double upper = std::min(r, 2.0);
  const double inner = integrate(
      [&](double t) {
        return (1.0 - profiles::smooth_cutoff(profiles::CutoffSpec::chi(), t)) *
               profiles::evaluate_g(unit, t) * t;
      },
      0.0, upper, 1e-12);
  return (a_signed / b) * chi_log_d + eps * inner / r;
}

IntermediateAnsatz build_intermediate_ansatz(const profiles::InhomogeneitySpec& defect,
                                             const RadialGrid& grid, double b, double M) {
  if (!(grid.r_max() >= 2.0 * M)) {
    throw Error(ErrorCode::parameter, "intermediate grid must reach 2M");
  }
  IntermediateAnsatz out;
  out.defect = defect;
  out.b = b;
  out.M = M;
  out.grid = grid;
  profiles::InhomogeneitySpec unit = defect;
  unit.strength = 1.0;
  const profiles::CutoffSpec chi = profiles::CutoffSpec::chi();
  out.K = solve_corrector_K(
      grid, [&](double r) { return profiles::smooth_cutoff(chi, r) * profiles::evaluate_g(unit, r); }, b);
  out.core_mass = profiles::split_defect(unit, grid, b).core_mass_integral;
  out.a_signed = -defect.strength * b * out.core_mass;
  // log(1 + a log r + eps K) must stay defined on the support of chi_M.
  for (std::size_t i = 0; i < grid.size() && grid[i] <= 2.0 * M; ++i) {
    const double r = grid[i];
    if (r < 1.0) continue;
    const double q = 1.0 + out.a_signed * std::log(r) + defect.strength * out.K.values[i];
    if (!(q > 0.05)) {
      throw Error(ErrorCode::parameter, "1 + a log r + eps K vanishes before r = 2M; reduce M");
    }
  }
  return out;
}

CorrectionResult solve_intermediate_correction(const IntermediateAnsatz& ansatz, double lambda,
                                               const FixedPointOptions& opts) {
  if (lambda < 0.0) throw Error(ErrorCode::domain, "intermediate preconditioner needs lambda >= 0");
  const RadialGrid& grid = ansatz.grid;
  const double b = ansatz.b;

  std::vector<double> grad(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grad[i] = ansatz.phi0_gradient(grid[i]) + ansatz.phi1_gradient(grid[i]);
  }
  const auto dgrad = derivative(grid, grad, 1);
  std::vector<double> source(grid.size());
  std::vector<double> potential(grid.size(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid[i];
    const double lap = dgrad[i] + (r > 0.0 ? grad[i] / r : dgrad[i]);
    source[i] = lap - b * grad[i] * grad[i] - profiles::evaluate_g(ansatz.defect, r);
    if (i > 0) potential[i] = potential[i - 1] + 0.5 * (grad[i] + grad[i - 1]) * (r - grid[i - 1]);
  }
  auto grad_p = std::make_shared<RadialProfile>(grid, grad);
  auto source_p = std::make_shared<RadialProfile>(grid, source);
  auto potential_p = std::make_shared<RadialProfile>(grid, potential);

  GradientCorrectionProblem prob;
  prob.grid = grid;
  prob.b = b;
  prob.r_inner = 0.0;
  prob.residual_scale = std::max(source_p->max_abs(), 1e-300);
  prob.base_potential = [potential_p](double r) { return potential_p->at(r); };
  prob.base_gradient = [grad_p](double r) { return grad_p->at(r); };
  prob.base_source = [source_p](double r) { return source_p->at(r); };
  return solve_gradient_correction(prob, {lambda, true, Sweep::outward}, opts);
}

// --- Hopf-Cole --------------------------------------------------------------------

double hopf_cole_residual(const RadialProfile& phi, const RadialProfile& g, double eps, double omega,
                          double b, Window window) {
  if (g.size() != phi.size()) throw Error(ErrorCode::shape, "phi and g must share a grid");
  std::vector<double> psi(phi.size());
  std::size_t underflow = 0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    psi[i] = std::exp(-b * phi.values[i]);
    if (psi[i] == 0.0) ++underflow;
  }
  if (2 * underflow > phi.size()) {
    throw Error(ErrorCode::range,
                "exp(-b phi) underflows on more than half the grid; shift phi by a constant");
  }
  const auto lap = radial_laplacian(phi.grid, psi);
  double res = 0.0;
  double scale = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const double r = phi.grid[i];
    if (r < window.lo || r > window.hi) continue;
    res = std::max(res, std::abs(lap[i] + eps * g.values[i] * psi[i] - omega * psi[i]));
    scale = std::max(scale, std::abs(psi[i]));
  }
  return scale > 0.0 ? res / scale : res;
}

// --- spiral reduction ----------------------------------------------------------------

EikonalCoefficients eikonal_coefficients(const SpiralCoefficients& s) {
  const double denom = s.alpha_tilde_i * s.beta_i + s.lambda_r * s.beta_r;
  if (denom == 0.0) {
    throw Error(ErrorCode::singular_parameters, "alpha~_I beta_I + lambda_R beta_R vanishes");
  }
  if (s.beta_r == 0.0) throw Error(ErrorCode::singular_parameters, "beta_R vanishes");
  EikonalCoefficients out;
  out.b = (s.beta_i * s.lambda_r - s.beta_r * s.alpha_tilde_i) / denom;
  out.omega = s.lambda_tilde_i * s.lambda_r / denom;
  out.c = -(s.beta_i * s.lambda_r + s.alpha_tilde_i * s.beta_r) / (s.beta_r * denom);
  return out;
}

}  // namespace targetlab::radial
