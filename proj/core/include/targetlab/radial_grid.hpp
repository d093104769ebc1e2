#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace targetlab::radial {

enum class Grading { uniform, geometric, custom };

// Strictly increasing nodes on [0, r_max] with nodes.front() == 0.
class RadialGrid {
 public:
  RadialGrid() = default;
  explicit RadialGrid(std::vector<double> nodes, Grading grading = Grading::custom);

  static RadialGrid uniform(double r_max, std::size_t intervals);

  // Spacing `h0` out to r = `r_uniform`, then spacing growing by `ratio`
  // per cell until r_max. The last node is placed exactly at r_max.
  static RadialGrid geometric(double r_max, double h0, double ratio, double r_uniform = 4.0);

  std::span<const double> nodes() const noexcept { return nodes_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  double operator[](std::size_t i) const { return nodes_[i]; }
  double r_max() const { return nodes_.back(); }
  Grading grading() const noexcept { return grading_; }

  // Number of nodes in the closed interval [lo, hi].
  std::size_t count_in(double lo, double hi) const;

  // First index with nodes[i] >= r (size() if none).
  std::size_t lower_index(double r) const;

  // Throws Error(resolution) unless there are at least `per_unit` nodes per
  // unit length on [0, min(4, r_max)].
  void require_resolution(double per_unit = 8.0) const;

 private:
  std::vector<double> nodes_;
  Grading grading_ = Grading::custom;
};

// |f(r)| ~ prefactor * r^exponent on the fitted window.
struct DecayEstimate {
  double exponent = 0.0;
  double prefactor = 0.0;
  double r_lo = 0.0;
  double r_hi = 0.0;
};

struct RadialProfile {
  RadialGrid grid;
  std::vector<double> values;
  std::optional<DecayEstimate> decay_estimate;

  RadialProfile() = default;
  RadialProfile(RadialGrid g, std::vector<double> v);

  static RadialProfile sample(const RadialGrid& g, const std::function<double(double)>& f);

  std::size_t size() const noexcept { return values.size(); }
  double r(std::size_t i) const { return grid[i]; }

  // Piecewise-cubic Lagrange interpolation using the four nodes around r;
  // linear extrapolation is never performed (clamped to the end values).
  double at(double r) const;

  bool all_finite() const;
  double max_abs() const;
};

// Fornberg finite-difference weights for derivatives 0..max_order at x0
// using the given stencil nodes. Row m holds the weights for derivative m.
std::vector<std::vector<double>> fd_weights(double x0, std::span<const double> stencil,
                                            int max_order);

// Derivative of sampled values at every node: five-point stencils centred
// on interior nodes, one-sided near the ends (fourth order on smooth data).
std::vector<double> derivative(const RadialGrid& grid, std::span<const double> values, int order);
std::vector<double> derivative(std::span<const double> nodes, std::span<const double> values, int order);

// Radial Laplacian u'' + u'/r at every node; at r = 0 uses 2 u''(0).
std::vector<double> radial_laplacian(const RadialGrid& grid, std::span<const double> values);

}  // namespace targetlab::radial
