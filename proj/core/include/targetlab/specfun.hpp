#pragma once

// Modified Bessel functions of the second kind, orders 0 and 1, for real
// positive arguments.

namespace targetlab::specfun {

inline constexpr double kEulerGamma = 0.57721566490153286061;
inline constexpr double kPi = 3.14159265358979323846;

enum class BesselRegime { series, uniform, asymptotic };

struct BesselEval {
  double z = 0.0;
  double k0 = 0.0;
  double k1 = 0.0;
  BesselRegime regime = BesselRegime::series;
  // Set when exp(-z) underflows; k0 and k1 are then reported as 0.
  bool underflow = false;
};

// Regime boundaries. Below kSeriesLimit the ascending series is summed,
// above kAsymptoticLimit the Hankel expansion, Chebyshev fits in between.
inline constexpr double kSeriesLimit = 2.0;
inline constexpr double kAsymptoticLimit = 16.0;

/// Evaluates K0(z) and K1(z) together. Throws Error(domain) for z <= 0.
BesselEval evaluate_bessel_k(double z);

double bessel_k0(double z);
double bessel_k1(double z);

/// exp(z) K0(z) and exp(z) K1(z); finite for every z > 0.
double bessel_k0_scaled(double z);
double bessel_k1_scaled(double z);

/// log K0(z) without forming K0 (no underflow at large z).
double log_bessel_k0(double z);

/// K0'(z) / K0(z) = -K1(z) / K0(z).
double log_k0_ratio(double z);

}  // namespace targetlab::specfun
