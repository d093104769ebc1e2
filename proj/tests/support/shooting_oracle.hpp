#pragma once

#include <cmath>
#include <vector>

namespace targetlab::testing {

// Finite-difference Newton relaxation of
//   rho'' + rho'/r - rho/r^2 + rho - rho^3 = 0,  rho(0) = 0,
//   rho(R) = 1 - 1/(2R^2) - 9/(8R^4)
// on a uniform grid with n intervals. Second-order central differences.
inline std::vector<double> vortex_relaxation(double R, int n) {
  const double h = R / n;
  std::vector<double> rho(n + 1);
  for (int i = 0; i <= n; ++i) rho[i] = std::tanh(0.6 * i * h);
  rho[n] = 1.0 - 1.0 / (2 * R * R) - 9.0 / (8 * R * R * R * R);
  std::vector<double> lo(n + 1), di(n + 1), up(n + 1), rhs(n + 1);
  for (int it = 0; it < 50; ++it) {
    double norm = 0.0;
    for (int i = 1; i < n; ++i) {
      const double r = i * h;
      const double a = 1.0 / (h * h) - 1.0 / (2 * h * r);
      const double c = 1.0 / (h * h) + 1.0 / (2 * h * r);
      const double u = rho[i];
      const double F = a * rho[i - 1] + c * rho[i + 1] - 2.0 * u / (h * h) - u / (r * r) + u - u * u * u;
      lo[i] = a;
      up[i] = c;
      di[i] = -2.0 / (h * h) - 1.0 / (r * r) + 1.0 - 3.0 * u * u;
      rhs[i] = -F;
      norm = std::max(norm, std::abs(F));
    }
    // Thomas algorithm on the interior with zero Dirichlet updates.
    std::vector<double> cp(n + 1), dp(n + 1);
    for (int i = 1; i < n; ++i) {
      const double m = di[i] - (i > 1 ? lo[i] * cp[i - 1] : 0.0);
      cp[i] = up[i] / m;
      dp[i] = (rhs[i] - (i > 1 ? lo[i] * dp[i - 1] : 0.0)) / m;
    }
    std::vector<double> du(n + 1, 0.0);
    for (int i = n - 1; i >= 1; --i) du[i] = dp[i] - cp[i] * du[i + 1];
    for (int i = 1; i < n; ++i) rho[i] += du[i];
    if (norm < 1e-13) break;
  }
  return rho;
}

// Launch slope rho'(0): rho = s r + c r^3 + O(r^5) fitted through the first
// two nodes, then Richardson-extrapolated in h^2 over n and 2n.
inline double vortex_slope_oracle(double R = 40.0, int n = 8000) {
  auto slope = [&](int m) {
    const auto rho = vortex_relaxation(R, m);
    const double h = R / m;
    const double q1 = rho[1] / h, q2 = rho[2] / (2 * h);
    return (4.0 * q1 - q2) / 3.0;  // eliminate the r^2 term
  };
  const double s1 = slope(n), s2 = slope(2 * n);
  return (4.0 * s2 - s1) / 3.0;
}

}  // namespace targetlab::testing
