#include "targetlab/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "targetlab/error.hpp"

namespace targetlab::measure {

AzimuthalProfile azimuthal_average(const spectral::Field2D& field, std::size_t n_bins, double r_max) {
  if (n_bins < 16) throw Error(ErrorCode::parameter, "azimuthal_average needs at least 16 bins");
  const auto& g = field.grid;
  if (r_max <= 0.0) r_max = 0.5 * g.L;
  const double dr = r_max / static_cast<double>(n_bins - 1);
  std::vector<double> sum(n_bins, 0.0);
  AzimuthalProfile out;
  out.counts.assign(n_bins, 0);
  out.interpolated.assign(n_bins, false);
  out.bin_width = dr;
  for (std::size_t iy = 0; iy < g.N; ++iy) {
    for (std::size_t ix = 0; ix < g.N; ++ix) {
      const double r = field.radius(ix, iy);
      const auto bin = static_cast<std::size_t>(std::floor(r / dr + 0.5));
      if (bin >= n_bins) continue;
      sum[bin] += field(ix, iy);
      ++out.counts[bin];
    }
  }
  std::vector<double> nodes(n_bins);
  std::vector<double> values(n_bins, 0.0);
  for (std::size_t i = 0; i < n_bins; ++i) {
    nodes[i] = dr * static_cast<double>(i);
    if (out.counts[i] > 0) values[i] = sum[i] / static_cast<double>(out.counts[i]);
  }
  // Fill empty bins from the nearest populated neighbours.
  for (std::size_t i = 0; i < n_bins; ++i) {
    if (out.counts[i] > 0) continue;
    out.interpolated[i] = true;
    std::size_t lo = i;
    while (lo > 0 && out.counts[lo] == 0) --lo;
    std::size_t hi = i;
    while (hi + 1 < n_bins && out.counts[hi] == 0) ++hi;
    const bool has_lo = out.counts[lo] > 0;
    const bool has_hi = out.counts[hi] > 0;
    if (has_lo && has_hi) {
      const double t = (nodes[i] - nodes[lo]) / (nodes[hi] - nodes[lo]);
      values[i] = (1.0 - t) * values[lo] + t * values[hi];
    } else if (has_lo) {
      values[i] = values[lo];
    } else if (has_hi) {
      values[i] = values[hi];
    }
  }
  out.profile = radial::RadialProfile(radial::RadialGrid(std::move(nodes), radial::Grading::uniform),
                                      std::move(values));
  return out;
}

spectral::Field2D radial_gradient(const spectral::Field2D& phi) {
  const spectral::SpectralOps ops(phi.grid);
  const auto grad = ops.gradient(phi);
  spectral::Field2D out(phi.grid);
  const auto& g = phi.grid;
  for (std::size_t iy = 0; iy < g.N; ++iy) {
    for (std::size_t ix = 0; ix < g.N; ++ix) {
      const double dx = g.coord(ix) - g.center();
      const double dy = g.coord(iy) - g.center();
      const double r = std::hypot(dx, dy);
      out(ix, iy) = r > 0.0 ? (dx * grad[0](ix, iy) + dy * grad[1](ix, iy)) / r : 0.0;
    }
  }
  return out;
}

double measure_wavenumber(const spectral::Field2D& phi, Annulus annulus) {
  const double L = phi.grid.L;
  if (!(annulus.r_in > 0.0 && annulus.r_in < annulus.r_out && annulus.r_out <= 0.45 * L + 1e-12)) {
    throw Error(ErrorCode::parameter, "annulus must satisfy 0 < r_in < r_out <= 0.45 L");
  }
  const spectral::Field2D dr = radial_gradient(phi);
  double sum = 0.0;
  std::size_t count = 0;
  const auto& g = phi.grid;
  for (std::size_t iy = 0; iy < g.N; ++iy) {
    for (std::size_t ix = 0; ix < g.N; ++ix) {
      const double r = phi.radius(ix, iy);
      if (r < annulus.r_in || r > annulus.r_out) continue;
      sum += dr(ix, iy);
      ++count;
    }
  }
  if (count < 100) {
    throw Error(ErrorCode::statistics,
                "annulus holds only " + std::to_string(count) + " cells; need at least 100");
  }
  return sum / static_cast<double>(count);
}

double pearson(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

FitResult fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorCode::shape, "fit_line: size mismatch");
  if (x.size() < 2) throw Error(ErrorCode::statistics, "fit_line needs at least 2 points");
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw Error(ErrorCode::statistics, "fit_line: abscissae are all equal");
  FitResult out;
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  out.pearson_r = pearson(x, y);
  out.points.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out.points.emplace_back(x[i], y[i]);
  return out;
}

double k_law_transform(double k) {
  if (!(k > 0.0) || !(std::log(k) < 1.0)) {
    throw Error(ErrorCode::domain,
                "1/(log k - 1) needs 0 < k < e, got k = " + std::to_string(k));
  }
  return 1.0 / (std::log(k) - 1.0);
}

KLawFit fit_k_law(std::span<const std::pair<double, double>> points) {
  if (points.size() < 4) throw Error(ErrorCode::statistics, "fit_k_law needs at least 4 points");
  std::vector<double> a;
  std::vector<double> y;
  std::vector<double> inv_a;
  std::vector<double> log_k;
  for (const auto& [ai, ki] : points) {
    if (!(ai > 0.0)) throw Error(ErrorCode::domain, "fit_k_law needs a > 0");
    y.push_back(k_law_transform(ki));
    a.push_back(ai);
    inv_a.push_back(-1.0 / ai);
    log_k.push_back(std::log(ki));
  }
  return {fit_line(a, y), fit_line(inv_a, log_k)};
}

radial::DecayEstimate estimate_decay_exponent(const radial::RadialProfile& profile,
                                              std::pair<double, double> window) {
  std::vector<double> lr;
  std::vector<double> lf;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const double r = profile.grid[i];
    if (r < window.first || r > window.second) continue;
    const double v = profile.values[i];
    if (!(v > 0.0) || !(r > 0.0)) {
      throw Error(ErrorCode::domain, "decay exponent needs positive values and radii in the window (r = " +
                                         std::to_string(r) + ")");
    }
    lr.push_back(std::log(r));
    lf.push_back(std::log(v));
  }
  if (lr.size() < 2) throw Error(ErrorCode::statistics, "decay window contains fewer than 2 nodes");
  const FitResult fit = fit_line(lr, lf);
  return {fit.slope, std::exp(fit.intercept), window.first, window.second};
}

}  // namespace targetlab::measure
