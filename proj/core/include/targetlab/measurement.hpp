#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "targetlab/radial_grid.hpp"
#include "targetlab/spectral2d.hpp"

namespace targetlab::measure {

struct Annulus {
  double r_in = 0.0;
  double r_out = 0.0;
};

inline Annulus default_annulus(double L) { return {0.35 * L, 0.45 * L}; }

// Bin i collects cells with |x - c| in [(i - 1/2) dr, (i + 1/2) dr); bin 0 is
// [0, dr/2). Empty bins are filled by linear interpolation and flagged.
struct AzimuthalProfile {
  radial::RadialProfile profile;
  std::vector<std::size_t> counts;
  std::vector<bool> interpolated;
  double bin_width = 0.0;
};

/// n_bins >= 16 bins spanning [0, r_max]; r_max defaults to L/2.
AzimuthalProfile azimuthal_average(const spectral::Field2D& field, std::size_t n_bins, double r_max = 0.0);

/// Radial component of the spectral gradient, (x - c)/|x - c| . grad phi.
spectral::Field2D radial_gradient(const spectral::Field2D& phi);

/// Mean radial gradient over the cells of the annulus. Needs 0 < r_in < r_out
/// <= 0.45 L and at least 100 cells, otherwise Error(statistics / parameter).
double measure_wavenumber(const spectral::Field2D& phi, Annulus annulus);

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double pearson_r = 0.0;
  std::vector<std::pair<double, double>> points;
};

/// Ordinary least squares y = slope * x + intercept. Pearson r is 0 when
/// either coordinate is constant.
FitResult fit_line(std::span<const double> x, std::span<const double> y);

struct KLawFit {
  FitResult transform;  // y = 1/(log k - 1) against a
  FitResult direct;     // log k against -1/a; slope 1 and intercept log C under k = C exp(-1/a)
};

double k_law_transform(double k);

/// Needs >= 4 points (a, k) with a > 0 and 0 < k < e. Throws Error(domain)
/// when the transform is undefined.
KLawFit fit_k_law(std::span<const std::pair<double, double>> points);

/// Least squares of log f against log r on nodes inside [r1, r2]. Throws
/// Error(domain) on nonpositive values and Error(statistics) with < 2 nodes.
radial::DecayEstimate estimate_decay_exponent(const radial::RadialProfile& profile,
                                              std::pair<double, double> window);

double pearson(std::span<const double> x, std::span<const double> y);

}  // namespace targetlab::measure
