#include "targetlab/spectral2d.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include <fftw3.h>

#include "targetlab/specfun.hpp"

namespace targetlab::spectral {
namespace {

// The FFTW planner is not thread safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void require_same_grid(const GridSpec2D& a, const GridSpec2D& b, const char* what) {
  if (!(a == b)) throw Error(ErrorCode::shape, std::string(what) + ": fields live on different grids");
}

bool spectrum_finite(std::span<const Complex> v) {
  for (const Complex& c : v) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  }
  return true;
}

template <class T>
std::array<T, 3> phi_taylor(T z, int terms) {
  // phi_k(z) = sum_j z^j / (j + k)!
  std::array<T, 3> out{};
  for (int k = 1; k <= 3; ++k) {
    double fact = 1.0;
    for (int i = 2; i <= k; ++i) fact *= i;
    T term = T(1.0 / fact);
    T sum = term;
    for (int j = 1; j < terms; ++j) {
      term *= z / static_cast<double>(j + k);
      sum += term;
    }
    out[static_cast<std::size_t>(k - 1)] = sum;
  }
  return out;
}

std::array<Complex, 3> phi_complex(Complex w) {
  if (std::abs(w) < 0.5) return phi_taylor(w, 20);
  const Complex ew = std::exp(w);
  const Complex p1 = (ew - 1.0) / w;
  const Complex p2 = (ew - 1.0 - w) / (w * w);
  const Complex p3 = (ew - 1.0 - w - 0.5 * w * w) / (w * w * w);
  return {p1, p2, p3};
}

// N(v) = -b |grad phi|^2 - eps g, spectral.
void nonlinear_term(const SpectralOps& ops, std::span<const Complex> v, double b, double eps,
                    std::span<const Complex> g_hat, std::span<Complex> out) {
  ops.nonlinear_hat(v, b, out);
  if (eps != 0.0) {
    for (std::size_t m = 0; m < out.size(); ++m) out[m] -= eps * g_hat[m];
  }
}

void etdrk4_update(const SpectralOps& ops, const ETDRK4Plan& p, double b, double eps,
                   std::span<const Complex> g_hat, std::vector<Complex>& v, ETDRK4Workspace& w) {
  const std::size_t n = v.size();
  nonlinear_term(ops, v, b, eps, g_hat, w.nv);
  for (std::size_t m = 0; m < n; ++m) w.a[m] = p.e2[m] * v[m] + p.q[m] * w.nv[m];
  nonlinear_term(ops, w.a, b, eps, g_hat, w.na);
  for (std::size_t m = 0; m < n; ++m) w.bb[m] = p.e2[m] * v[m] + p.q[m] * w.na[m];
  nonlinear_term(ops, w.bb, b, eps, g_hat, w.nb);
  for (std::size_t m = 0; m < n; ++m) w.c[m] = p.e2[m] * w.a[m] + p.q[m] * (2.0 * w.nb[m] - w.nv[m]);
  nonlinear_term(ops, w.c, b, eps, g_hat, w.nc);
  for (std::size_t m = 0; m < n; ++m) {
    v[m] = p.e[m] * v[m] + p.f1[m] * w.nv[m] + p.f2[m] * (w.na[m] + w.nb[m]) + p.f3[m] * w.nc[m];
  }
}

}  // namespace

void GridSpec2D::validate() const {
  if (N < 64 || (N & (N - 1)) != 0) {
    throw Error(ErrorCode::parameter, "grid size N must be a power of two >= 64, got " + std::to_string(N));
  }
  if (!(L > 0.0)) throw Error(ErrorCode::parameter, "domain length L must be positive");
}

Field2D::Field2D(const GridSpec2D& g, double fill) : grid(g), values(g.cells(), fill) {}

Field2D::Field2D(const GridSpec2D& g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.cells()) throw Error(ErrorCode::shape, "field size does not match N*N");
}

double Field2D::radius(std::size_t ix, std::size_t iy) const {
  return std::hypot(grid.coord(ix) - grid.center(), grid.coord(iy) - grid.center());
}

bool Field2D::all_finite() const {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

double Field2D::mean() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

// --- SpectralOps ------------------------------------------------------------

struct SpectralOps::Impl {
  double* rbuf = nullptr;
  fftw_complex* cbuf = nullptr;
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  std::size_t cells = 0;
  std::size_t modes = 0;

  explicit Impl(std::size_t N) : cells(N * N), modes(N * (N / 2 + 1)) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    rbuf = fftw_alloc_real(cells);
    cbuf = fftw_alloc_complex(modes);
    const int n = static_cast<int>(N);
    r2c = fftw_plan_dft_r2c_2d(n, n, rbuf, cbuf, FFTW_ESTIMATE);
    c2r = fftw_plan_dft_c2r_2d(n, n, cbuf, rbuf, FFTW_ESTIMATE);
  }
  ~Impl() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(r2c);
    fftw_destroy_plan(c2r);
    fftw_free(rbuf);
    fftw_free(cbuf);
  }
};

SpectralOps::SpectralOps(const GridSpec2D& grid) : grid_(grid) {
  grid_.validate();
  const std::size_t N = grid_.N;
  const std::size_t nx = N / 2 + 1;
  impl_ = std::make_unique<Impl>(N);
  const double k0 = 2.0 * specfun::kPi / grid_.L;
  const auto half = static_cast<long>(N / 2);
  kx_.resize(nx);
  dkx_.resize(nx);
  for (std::size_t ix = 0; ix < nx; ++ix) {
    kx_[ix] = k0 * static_cast<double>(ix);
    dkx_[ix] = static_cast<long>(ix) == half ? 0.0 : kx_[ix];
  }
  ky_.resize(N);
  dky_.resize(N);
  for (std::size_t iy = 0; iy < N; ++iy) {
    // Signed index in [-N/2, N/2 - 1]; the Nyquist row has no first derivative.
    const long s = static_cast<long>(iy) < half ? static_cast<long>(iy) : static_cast<long>(iy) - static_cast<long>(N);
    ky_[iy] = k0 * static_cast<double>(s);
    dky_[iy] = s == -half ? 0.0 : ky_[iy];
  }
  const long cut = static_cast<long>(N / 3);
  k2_.resize(grid_.modes());
  mask_.resize(grid_.modes());
  for (std::size_t iy = 0; iy < N; ++iy) {
    const long sy = std::lround(ky_[iy] / k0);
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const std::size_t m = iy * nx + ix;
      k2_[m] = kx_[ix] * kx_[ix] + ky_[iy] * ky_[iy];
      const bool keep = static_cast<long>(ix) <= cut && std::labs(sy) <= cut;
      mask_[m] = (grid_.dealias == Dealias::none || keep) ? 1.0 : 0.0;
    }
  }
  work_hat_.resize(grid_.modes());
  work_x_.resize(grid_.cells());
  work_y_.resize(grid_.cells());
}

SpectralOps::~SpectralOps() = default;
SpectralOps::SpectralOps(SpectralOps&&) noexcept = default;
SpectralOps& SpectralOps::operator=(SpectralOps&&) noexcept = default;

bool SpectralOps::in_top_third(std::size_t m) const noexcept {
  const std::size_t nx = grid_.N / 2 + 1;
  const double k0 = 2.0 * specfun::kPi / grid_.L;
  const long cut = static_cast<long>(grid_.N / 3);
  const long sx = static_cast<long>(m % nx);
  const long sy = std::lround(ky_[m / nx] / k0);
  return sx > cut || std::labs(sy) > cut;
}

void SpectralOps::forward(std::span<const double> in, std::span<Complex> out) const {
  std::copy(in.begin(), in.end(), impl_->rbuf);
  fftw_execute(impl_->r2c);
  const auto* c = reinterpret_cast<const Complex*>(impl_->cbuf);
  std::copy(c, c + impl_->modes, out.begin());
}

void SpectralOps::inverse(std::span<const Complex> in, std::span<double> out) const {
  auto* c = reinterpret_cast<Complex*>(impl_->cbuf);
  std::copy(in.begin(), in.end(), c);
  fftw_execute(impl_->c2r);
  const double scale = 1.0 / static_cast<double>(impl_->cells);
  for (std::size_t i = 0; i < impl_->cells; ++i) out[i] = impl_->rbuf[i] * scale;
}

std::array<std::vector<double>, 2> SpectralOps::gradient(std::span<const Complex> hat) const {
  const std::size_t nx = grid_.N / 2 + 1;
  std::array<std::vector<double>, 2> out{std::vector<double>(grid_.cells()), std::vector<double>(grid_.cells())};
  const Complex I(0.0, 1.0);
  for (std::size_t m = 0; m < hat.size(); ++m) work_hat_[m] = I * dkx_[m % nx] * hat[m];
  inverse(work_hat_, out[0]);
  for (std::size_t m = 0; m < hat.size(); ++m) work_hat_[m] = I * dky_[m / nx] * hat[m];
  inverse(work_hat_, out[1]);
  return out;
}

std::array<Field2D, 2> SpectralOps::gradient(const Field2D& f) const {
  require_same_grid(grid_, f.grid, "gradient");
  std::vector<Complex> hat(grid_.modes());
  forward(f.values, hat);
  auto g = gradient(std::span<const Complex>(hat));
  return {Field2D(grid_, std::move(g[0])), Field2D(grid_, std::move(g[1]))};
}

Field2D SpectralOps::laplacian(const Field2D& f) const {
  require_same_grid(grid_, f.grid, "laplacian");
  std::vector<Complex> hat(grid_.modes());
  forward(f.values, hat);
  for (std::size_t m = 0; m < hat.size(); ++m) hat[m] *= -k2_[m];
  Field2D out(grid_);
  inverse(hat, out.values);
  return out;
}

void SpectralOps::nonlinear_hat(std::span<const Complex> phi_hat, double b, std::span<Complex> out) const {
  if (b == 0.0) {
    std::fill(out.begin(), out.end(), Complex(0.0, 0.0));
    return;
  }
  const std::size_t nx = grid_.N / 2 + 1;
  const Complex I(0.0, 1.0);
  for (std::size_t m = 0; m < phi_hat.size(); ++m) work_hat_[m] = I * (mask_[m] * dkx_[m % nx]) * phi_hat[m];
  inverse(work_hat_, work_x_);
  for (std::size_t m = 0; m < phi_hat.size(); ++m) work_hat_[m] = I * (mask_[m] * dky_[m / nx]) * phi_hat[m];
  inverse(work_hat_, work_y_);
  for (std::size_t i = 0; i < work_x_.size(); ++i) {
    work_x_[i] = -b * (work_x_[i] * work_x_[i] + work_y_[i] * work_y_[i]);
  }
  forward(work_x_, out);
  for (std::size_t m = 0; m < out.size(); ++m) out[m] *= mask_[m];
}

// --- ETDRK4 -------------------------------------------------------------------

std::array<double, 3> phi_functions(double z) {
  if (std::abs(z) < 1e-2) return phi_taylor(z, 8);
  constexpr int kPoints = 32;
  std::array<double, 3> sum{};
  for (int j = 0; j < kPoints; ++j) {
    const double theta = 2.0 * specfun::kPi * (j + 0.5) / kPoints;
    const auto p = phi_complex(Complex(z + std::cos(theta), std::sin(theta)));
    for (std::size_t k = 0; k < 3; ++k) sum[k] += p[k].real();
  }
  for (double& s : sum) s /= kPoints;
  return sum;
}

ETDRK4Plan ETDRK4Plan::build(const SpectralOps& ops, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorCode::parameter, "time step must be positive");
  ETDRK4Plan p;
  p.grid = ops.grid();
  p.dt = dt;
  const std::size_t n = p.grid.modes();
  p.linear_symbol.resize(n);
  p.e.resize(n);
  p.e2.resize(n);
  p.q.resize(n);
  p.f1.resize(n);
  p.f2.resize(n);
  p.f3.resize(n);
  // Only |k|^2 matters; many modes share it.
  std::vector<std::pair<double, std::size_t>> order(n);
  for (std::size_t m = 0; m < n; ++m) order[m] = {ops.k_squared(m), m};
  std::sort(order.begin(), order.end());
  double last_k2 = -1.0;
  std::array<double, 3> full{};
  std::array<double, 3> half{};
  for (const auto& [k2, m] : order) {
    const double z = -k2 * dt;
    if (k2 != last_k2) {
      full = phi_functions(z);
      half = phi_functions(0.5 * z);
      last_k2 = k2;
    }
    p.linear_symbol[m] = -k2;
    p.e[m] = std::exp(z);
    p.e2[m] = std::exp(0.5 * z);
    p.q[m] = 0.5 * dt * half[0];
    p.f1[m] = dt * (full[0] - 3.0 * full[1] + 4.0 * full[2]);
    p.f2[m] = dt * 2.0 * (full[1] - 2.0 * full[2]);
    p.f3[m] = dt * (4.0 * full[2] - full[1]);
  }
  return p;
}

Field2D rhs_nonlinear(const Field2D& phi, double b, double eps, const Field2D& g_field) {
  require_same_grid(phi.grid, g_field.grid, "rhs_nonlinear");
  const SpectralOps ops(phi.grid);
  std::vector<Complex> hat(phi.grid.modes());
  std::vector<Complex> nl(phi.grid.modes());
  ops.forward(phi.values, hat);
  ops.nonlinear_hat(hat, b, nl);
  Field2D out(phi.grid);
  ops.inverse(nl, out.values);
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] -= eps * g_field.values[i];
  return out;
}

Field2D step_etdrk4(const Field2D& phi, const ETDRK4Plan& plan, double b, double eps,
                    const Field2D& g_field, long step_index) {
  require_same_grid(phi.grid, g_field.grid, "step_etdrk4");
  require_same_grid(phi.grid, plan.grid, "step_etdrk4 (plan)");
  const SpectralOps ops(phi.grid);
  std::vector<Complex> v(phi.grid.modes());
  std::vector<Complex> g_hat(phi.grid.modes());
  ops.forward(phi.values, v);
  ops.forward(g_field.values, g_hat);
  ETDRK4Workspace w(v.size());
  etdrk4_update(ops, plan, b, eps, g_hat, v, w);
  if (!spectrum_finite(v)) {
    throw BlowUpError("non-finite field after step " + std::to_string(step_index), step_index);
  }
  Field2D out(phi.grid);
  ops.inverse(v, out.values);
  return out;
}

// --- simulator ----------------------------------------------------------------------

EikonalSimulator::EikonalSimulator(const GridSpec2D& grid, double dt, double b, double eps,
                                   const Field2D& g_field)
    : ops_(grid), plan_(ETDRK4Plan::build(ops_, dt)), b_(b), eps_(eps), work_(grid.modes()) {
  require_same_grid(grid, g_field.grid, "EikonalSimulator");
  g_hat_.resize(grid.modes());
  ops_.forward(g_field.values, g_hat_);
  v_.assign(grid.modes(), Complex(0.0, 0.0));
}

void EikonalSimulator::set_state(const Field2D& phi) {
  require_same_grid(ops_.grid(), phi.grid, "set_state");
  ops_.forward(phi.values, v_);
}

void EikonalSimulator::step() {
  etdrk4_update(ops_, plan_, b_, eps_, g_hat_, v_, work_);
  ++steps_;
  if (!spectrum_finite(v_)) {
    throw BlowUpError("non-finite field after step " + std::to_string(steps_) + " (t = " +
                          std::to_string(time()) + "); reduce dt or eps",
                      steps_);
  }
}

void EikonalSimulator::advance(long steps) {
  for (long s = 0; s < steps; ++s) step();
}

Field2D EikonalSimulator::field() const {
  Field2D out(ops_.grid());
  ops_.inverse(v_, out.values);
  return out;
}

Field2D EikonalSimulator::time_derivative() const {
  std::vector<Complex> rhs(v_.size());
  nonlinear_term(ops_, v_, b_, eps_, g_hat_, rhs);
  for (std::size_t m = 0; m < rhs.size(); ++m) rhs[m] += plan_.linear_symbol[m] * v_[m];
  Field2D out(ops_.grid());
  ops_.inverse(rhs, out.values);
  return out;
}

double EikonalSimulator::top_third_energy_fraction() const {
  const std::size_t nx = ops_.grid().N / 2 + 1;
  double total = 0.0;
  double top = 0.0;
  for (std::size_t m = 1; m < v_.size(); ++m) {
    const std::size_t ix = m % nx;
    const double weight = (ix == 0 || ix == nx - 1) ? 1.0 : 2.0;
    const double e = weight * std::norm(v_[m]);
    total += e;
    if (ops_.in_top_third(m)) top += e;
  }
  return total > 0.0 ? top / total : 0.0;
}

}  // namespace targetlab::spectral
