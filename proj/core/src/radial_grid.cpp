#include "targetlab/radial_grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "targetlab/error.hpp"

namespace targetlab::radial {

RadialGrid::RadialGrid(std::vector<double> nodes, Grading grading)
    : nodes_(std::move(nodes)), grading_(grading) {
  if (nodes_.size() < 2) throw Error(ErrorCode::parameter, "radial grid needs at least 2 nodes");
  if (nodes_.front() != 0.0) throw Error(ErrorCode::parameter, "radial grid must start at r = 0");
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    if (!(nodes_[i] > nodes_[i - 1]) || !std::isfinite(nodes_[i])) {
      throw Error(ErrorCode::parameter, "radial grid nodes must be finite and strictly increasing");
    }
  }
}

RadialGrid RadialGrid::uniform(double r_max, std::size_t intervals) {
  if (!(r_max > 0.0) || intervals < 1) {
    throw Error(ErrorCode::parameter, "uniform grid needs r_max > 0 and at least one interval");
  }
  std::vector<double> nodes(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) {
    nodes[i] = r_max * static_cast<double>(i) / static_cast<double>(intervals);
  }
  nodes.back() = r_max;
  return RadialGrid(std::move(nodes), Grading::uniform);
}

RadialGrid RadialGrid::geometric(double r_max, double h0, double ratio, double r_uniform) {
  if (!(r_max > 0.0) || !(h0 > 0.0) || !(ratio >= 1.0) || !(r_uniform >= 0.0)) {
    throw Error(ErrorCode::parameter, "geometric grid needs r_max, h0 > 0 and ratio >= 1");
  }
  std::vector<double> nodes{0.0};
  const double plateau = std::min(r_uniform, r_max);
  const auto n_uniform = static_cast<std::size_t>(std::ceil(plateau / h0 - 1e-12));
  const double h_plateau = n_uniform > 0 ? plateau / static_cast<double>(n_uniform) : h0;
  for (std::size_t i = 1; i <= n_uniform; ++i) nodes.push_back(h_plateau * static_cast<double>(i));
  double h = h_plateau;
  while (nodes.back() < r_max) {
    h *= ratio;
    const double next = nodes.back() + h;
    // Merge a short final cell into its neighbour rather than leave a sliver.
    if (next >= r_max || r_max - next < 0.5 * h * ratio) {
      nodes.push_back(r_max);
      break;
    }
    nodes.push_back(next);
  }
  return RadialGrid(std::move(nodes), Grading::geometric);
}

std::size_t RadialGrid::count_in(double lo, double hi) const {
  const auto first = std::lower_bound(nodes_.begin(), nodes_.end(), lo);
  const auto last = std::upper_bound(nodes_.begin(), nodes_.end(), hi);
  return last > first ? static_cast<std::size_t>(last - first) : 0;
}

std::size_t RadialGrid::lower_index(double r) const {
  return static_cast<std::size_t>(std::lower_bound(nodes_.begin(), nodes_.end(), r) -
                                  nodes_.begin());
}

void RadialGrid::require_resolution(double per_unit) const {
  const double span = std::min(4.0, r_max());
  for (double lo = 0.0; lo + 1.0 <= span + 1e-12; lo += 1.0) {
    // Nodes per unit length: count intervals fully inside [lo, lo+1].
    const std::size_t n = count_in(lo, lo + 1.0);
    if (static_cast<double>(n) < per_unit) {
      throw Error(ErrorCode::resolution,
                  "grid has " + std::to_string(n) + " nodes on [" + std::to_string(lo) + ", " +
                      std::to_string(lo + 1.0) + "], need " + std::to_string(per_unit));
    }
  }
}

RadialProfile::RadialProfile(RadialGrid g, std::vector<double> v)
    : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid.size()) {
    throw Error(ErrorCode::shape, "profile has " + std::to_string(values.size()) +
                                      " values for " + std::to_string(grid.size()) + " nodes");
  }
}

RadialProfile RadialProfile::sample(const RadialGrid& g, const std::function<double(double)>& f) {
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) v[i] = f(g[i]);
  return RadialProfile(g, std::move(v));
}

double RadialProfile::at(double r) const {
  const auto nodes = grid.nodes();
  const std::size_t n = nodes.size();
  if (r <= nodes.front()) return values.front();
  if (r >= nodes.back()) return values.back();
  std::size_t hi = grid.lower_index(r);  // nodes[hi-1] < r <= nodes[hi]
  if (nodes[hi] == r) return values[hi];
  const std::size_t width = std::min<std::size_t>(4, n);
  std::size_t start = hi >= 2 ? hi - 2 : 0;
  start = std::min(start, n - width);
  double sum = 0.0;
  for (std::size_t a = start; a < start + width; ++a) {
    double w = 1.0;
    for (std::size_t b = start; b < start + width; ++b) {
      if (b != a) w *= (r - nodes[b]) / (nodes[a] - nodes[b]);
    }
    sum += w * values[a];
  }
  return sum;
}

bool RadialProfile::all_finite() const {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

double RadialProfile::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

std::vector<std::vector<double>> fd_weights(double x0, std::span<const double> x, int max_order) {
  // Fornberg (1988), "Generation of finite difference formulas on arbitrarily
  // spaced grids".
  const std::size_t n = x.size();
  const auto m_count = static_cast<std::size_t>(max_order) + 1;
  std::vector<std::vector<double>> c(m_count, std::vector<double>(n, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - x0;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t mn = std::min(i, m_count - 1);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (std::size_t k = mn; k >= 1; --k) {
          c[k][i] = c1 * (static_cast<double>(k) * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        }
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (std::size_t k = mn; k >= 1; --k) {
        c[k][j] = (c4 * c[k][j] - static_cast<double>(k) * c[k - 1][j]) / c3;
      }
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

std::vector<double> derivative(const RadialGrid& grid, std::span<const double> values, int order) {
  return derivative(grid.nodes(), values, order);
}

std::vector<double> derivative(std::span<const double> nodes, std::span<const double> values, int order) {
  const std::size_t n = nodes.size();
  if (values.size() != n) throw Error(ErrorCode::shape, "derivative: size mismatch");
  if (n < 6) throw Error(ErrorCode::resolution, "derivative needs at least 6 nodes");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t start = 0;
    std::size_t width = 5;
    if (i < 2) {
      width = 6;
      start = 0;
    } else if (i + 2 >= n) {
      width = 6;
      start = n - 6;
    } else {
      start = i - 2;
    }
    const auto w = fd_weights(nodes[i], nodes.subspan(start, width), order);
    double s = 0.0;
    for (std::size_t k = 0; k < width; ++k) s += w[static_cast<std::size_t>(order)][k] * values[start + k];
    out[i] = s;
  }
  return out;
}

std::vector<double> radial_laplacian(const RadialGrid& grid, std::span<const double> values) {
  const auto d1 = derivative(grid, values, 1);
  const auto d2 = derivative(grid, values, 2);
  std::vector<double> out(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double r = grid[i];
    out[i] = r > 0.0 ? d2[i] + d1[i] / r : 2.0 * d2[i];
  }
  return out;
}

}  // namespace targetlab::radial
