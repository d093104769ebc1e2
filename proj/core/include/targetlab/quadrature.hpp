#pragma once

#include <algorithm>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace targetlab {

namespace detail {

template <class F>
double gk_adaptive(F& f, double a, double b, double abs_tol, unsigned depth) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  double err = 0.0, l1 = 0.0;
  const double est = GK::integrate(f, a, b, 0, 0.0, &err, &l1);
  err *= 0.5 * std::abs(b - a);  // boost reports the error on [-1, 1] unscaled
  // Stop at the roundoff floor of the panel and once the tolerance is no
  // longer a normal number (integrands that underflow near their support).
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * l1;
  if (depth == 0 || err <= std::max(abs_tol, floor) || abs_tol < std::numeric_limits<double>::min()) return est;
  const double mid = 0.5 * (a + b);
  return gk_adaptive(f, a, mid, 0.5 * abs_tol, depth - 1) + gk_adaptive(f, mid, b, 0.5 * abs_tol, depth - 1);
}

}  // namespace detail

// Adaptive 15-point Gauss-Kronrod on [a, b]. `rel_tol` is relative to the
// L1 norm of the integrand on the interval, so integrands that cancel to
// ~0 do not drive the bisection to max_depth.
template <class F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-13, unsigned max_depth = 15) {
  if (a == b) return 0.0;
  using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
  double err = 0.0, l1 = 0.0;
  const double est = GK::integrate(f, a, b, 0, 0.0, &err, &l1);
  err *= 0.5 * std::abs(b - a);
  const double abs_tol = rel_tol * l1;
  if (err <= abs_tol) return est;
  const double mid = 0.5 * (a + b);
  return detail::gk_adaptive(f, a, mid, 0.5 * abs_tol, max_depth - 1) +
         detail::gk_adaptive(f, mid, b, 0.5 * abs_tol, max_depth - 1);
}

}  // namespace targetlab
