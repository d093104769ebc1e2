#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "targetlab/error.hpp"

namespace targetlab::spectral {

using Complex = std::complex<double>;

enum class Dealias { two_thirds, none };

// Periodic square [0, L)^2 sampled at cell centres x_j = (j + 1/2) L / N.
struct GridSpec2D {
  std::size_t N = 256;
  double L = 100.0;
  Dealias dealias = Dealias::two_thirds;

  void validate() const;  // N >= 64 and a power of two, L > 0
  double h() const noexcept { return L / static_cast<double>(N); }
  double coord(std::size_t j) const noexcept { return (static_cast<double>(j) + 0.5) * h(); }
  double center() const noexcept { return 0.5 * L; }
  std::size_t cells() const noexcept { return N * N; }
  std::size_t modes() const noexcept { return N * (N / 2 + 1); }
  bool operator==(const GridSpec2D&) const = default;
};

// Row-major: values[iy * N + ix].
struct Field2D {
  GridSpec2D grid;
  std::vector<double> values;

  Field2D() = default;
  explicit Field2D(const GridSpec2D& g, double fill = 0.0);
  Field2D(const GridSpec2D& g, std::vector<double> v);

  double& operator()(std::size_t ix, std::size_t iy) { return values[iy * grid.N + ix]; }
  double operator()(std::size_t ix, std::size_t iy) const { return values[iy * grid.N + ix]; }
  double radius(std::size_t ix, std::size_t iy) const;
  bool all_finite() const;
  double mean() const;
};

// Samples f(|x - centre|) on the cell centres.
template <class F>
Field2D sample_radial(const GridSpec2D& grid, F&& f) {
  Field2D out(grid);
  for (std::size_t iy = 0; iy < grid.N; ++iy) {
    for (std::size_t ix = 0; ix < grid.N; ++ix) out(ix, iy) = f(out.radius(ix, iy));
  }
  return out;
}

// FFTW r2c/c2r transforms and spectral derivatives on one grid. Instances are
// not safe for concurrent use (they own scratch buffers); create one per thread.
class SpectralOps {
 public:
  explicit SpectralOps(const GridSpec2D& grid);
  ~SpectralOps();
  SpectralOps(const SpectralOps&) = delete;
  SpectralOps& operator=(const SpectralOps&) = delete;
  SpectralOps(SpectralOps&&) noexcept;
  SpectralOps& operator=(SpectralOps&&) noexcept;

  const GridSpec2D& grid() const noexcept { return grid_; }

  void forward(std::span<const double> in, std::span<Complex> out) const;
  // Normalised inverse: inverse(forward(u)) == u.
  void inverse(std::span<const Complex> in, std::span<double> out) const;

  // Angular wavenumbers of spectral index (kx index ix in [0, N/2], ky index iy in [0, N)).
  double kx(std::size_t ix) const noexcept { return kx_[ix]; }
  double ky(std::size_t iy) const noexcept { return ky_[iy]; }
  double k_squared(std::size_t m) const noexcept { return k2_[m]; }
  // Wavenumbers used for first derivatives (Nyquist entries zeroed).
  double dkx(std::size_t ix) const noexcept { return dkx_[ix]; }
  double dky(std::size_t iy) const noexcept { return dky_[iy]; }
  // 1 for modes kept by the dealiasing policy, 0 otherwise.
  double mask(std::size_t m) const noexcept { return mask_[m]; }
  // True when either index lies beyond N/3 (the top third of the spectrum).
  bool in_top_third(std::size_t m) const noexcept;

  std::array<std::vector<double>, 2> gradient(std::span<const Complex> hat) const;
  std::array<Field2D, 2> gradient(const Field2D& f) const;
  Field2D laplacian(const Field2D& f) const;

  // -b |grad phi|^2 in spectral space from phi_hat, truncating phi_hat to the
  // retained modes first and masking the product.
  void nonlinear_hat(std::span<const Complex> phi_hat, double b, std::span<Complex> out) const;

 private:
  struct Impl;
  GridSpec2D grid_;
  std::unique_ptr<Impl> impl_;
  std::vector<double> kx_, ky_, dkx_, dky_, k2_, mask_;
  mutable std::vector<Complex> work_hat_;
  mutable std::vector<double> work_x_, work_y_;
};

// phi_1, phi_2, phi_3 at real z: contour mean on a unit circle (32 points),
// Taylor series for |z| < 1e-2.
std::array<double, 3> phi_functions(double z);

struct ETDRK4Plan {
  GridSpec2D grid;
  double dt = 0.0;
  std::vector<double> linear_symbol;  // -|k|^2 per mode
  std::vector<double> e, e2;          // exp(dt L), exp(dt L / 2)
  std::vector<double> q;              // (dt/2) phi_1(dt L / 2)
  std::vector<double> f1, f2, f3;     // final-stage weights (times dt)

  static ETDRK4Plan build(const SpectralOps& ops, double dt);
};

// Stage buffers for one ETDRK4 step.
struct ETDRK4Workspace {
  std::vector<Complex> nv, a, na, bb, nb, c, nc;
  explicit ETDRK4Workspace(std::size_t n = 0) : nv(n), a(n), na(n), bb(n), nb(n), c(n), nc(n) {}
};

class BlowUpError : public Error {
 public:
  BlowUpError(const std::string& what, long step) : Error(ErrorCode::blow_up, what), step_(step) {}
  long step() const noexcept { return step_; }

 private:
  long step_;
};

/// -b |grad phi|^2 - eps g with spectral gradients; the product is
/// dealiased according to the grid policy.
Field2D rhs_nonlinear(const Field2D& phi, double b, double eps, const Field2D& g_field);

/// One ETDRK4 step. Throws BlowUpError if the result is not finite.
Field2D step_etdrk4(const Field2D& phi, const ETDRK4Plan& plan, double b, double eps,
                    const Field2D& g_field, long step_index = 0);

// phi_t = Lap phi - b |grad phi|^2 - eps g, advanced in spectral space.
class EikonalSimulator {
 public:
  EikonalSimulator(const GridSpec2D& grid, double dt, double b, double eps, const Field2D& g_field);

  void set_state(const Field2D& phi);
  void step();
  void advance(long steps);

  Field2D field() const;
  const std::vector<Complex>& spectrum() const noexcept { return v_; }
  // phi_t evaluated from the right-hand side at the current state.
  Field2D time_derivative() const;

  double time() const noexcept { return static_cast<double>(steps_) * plan_.dt; }
  long steps() const noexcept { return steps_; }
  const SpectralOps& ops() const noexcept { return ops_; }
  const ETDRK4Plan& plan() const noexcept { return plan_; }
  // Fraction of non-mean spectral energy in the top third of the modes.
  double top_third_energy_fraction() const;

 private:
  SpectralOps ops_;
  ETDRK4Plan plan_;
  double b_;
  double eps_;
  std::vector<Complex> g_hat_;
  std::vector<Complex> v_;
  long steps_ = 0;
  ETDRK4Workspace work_;
};

}  // namespace targetlab::spectral
