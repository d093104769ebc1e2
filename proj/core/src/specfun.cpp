#include "targetlab/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <string>

#include "targetlab/error.hpp"

namespace targetlab::specfun {
namespace {

#include "bessel_chebyshev.inc"

struct ScaledPair {
  double k0;  // exp(z) K0(z)
  double k1;  // exp(z) K1(z)
};

void require_positive(double z, const char* fn) {
  if (!(z > 0.0) || std::isnan(z)) {
    throw Error(ErrorCode::domain,
                std::string(fn) + " requires z > 0, got " + std::to_string(z));
  }
}

// Unscaled K0, K1 from the ascending series; accurate to a few ulp for z <= 2.
void ascending_series(double z, double& k0, double& k1) {
  const double q = 0.25 * z * z;
  const double log_term = std::log(0.5 * z) + kEulerGamma;

  double t0 = 1.0;  // (z^2/4)^k / (k!)^2
  double t1 = 1.0;  // (z^2/4)^k / (k! (k+1)!)
  double harmonic = 0.0;
  double i0 = 1.0;
  double i1_sum = 1.0;
  double k0_sum = 0.0;
  double k1_sum = 1.0;  // k = 0 term: H_0 + H_1 = 1
  for (int k = 1; k < 60; ++k) {
    t0 *= q / (static_cast<double>(k) * k);
    t1 *= q / (static_cast<double>(k) * (k + 1));
    const double h_next = harmonic + 1.0 / k;
    i0 += t0;
    i1_sum += t1;
    k0_sum += t0 * h_next;
    k1_sum += t1 * (h_next + h_next + 1.0 / (k + 1));
    harmonic = h_next;
    if (t0 * h_next < 1e-18 * std::abs(k0_sum) && t1 < 1e-18 * i1_sum) break;
  }
  const double i1 = 0.5 * z * i1_sum;
  k0 = -log_term * i0 + k0_sum;
  k1 = 1.0 / z + log_term * i1 - 0.25 * z * k1_sum;
}

double clenshaw(std::span<const double> c, double lo, double hi, double z) {
  const double t = (2.0 * z - (lo + hi)) / (hi - lo);
  double b1 = 0.0;
  double b2 = 0.0;
  for (std::size_t j = c.size(); j-- > 1;) {
    const double b0 = 2.0 * t * b1 - b2 + c[j];
    b2 = b1;
    b1 = b0;
  }
  return t * b1 - b2 + c[0];
}

ScaledPair chebyshev_scaled(double z) {
  if (z < 4.0) {
    return {clenshaw(kScaledK0_2_4, 2.0, 4.0, z), clenshaw(kScaledK1_2_4, 2.0, 4.0, z)};
  }
  if (z < 8.0) {
    return {clenshaw(kScaledK0_4_8, 4.0, 8.0, z), clenshaw(kScaledK1_4_8, 4.0, 8.0, z)};
  }
  return {clenshaw(kScaledK0_8_16, 8.0, 16.0, z), clenshaw(kScaledK1_8_16, 8.0, 16.0, z)};
}

// Hankel expansion of exp(z) K_nu(z), truncated at the smallest term.
double hankel_scaled(double nu, double z) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0;
  double sum = 1.0;
  double last = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 40; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = term * (mu - odd * odd) / (8.0 * k * z);
    if (std::abs(next) >= last) break;
    term = next;
    last = std::abs(term);
    sum += term;
    if (last < 1e-17 * std::abs(sum)) break;
  }
  return std::sqrt(kPi / (2.0 * z)) * sum;
}

ScaledPair scaled_pair(double z, BesselRegime& regime) {
  if (z <= kSeriesLimit) {
    regime = BesselRegime::series;
    double k0 = 0.0;
    double k1 = 0.0;
    ascending_series(z, k0, k1);
    const double ez = std::exp(z);
    return {k0 * ez, k1 * ez};
  }
  if (z < kAsymptoticLimit) {
    regime = BesselRegime::uniform;
    return chebyshev_scaled(z);
  }
  regime = BesselRegime::asymptotic;
  return {hankel_scaled(0.0, z), hankel_scaled(1.0, z)};
}

}  // namespace

BesselEval evaluate_bessel_k(double z) {
  require_positive(z, "evaluate_bessel_k");
  BesselEval out;
  out.z = z;
  if (z <= kSeriesLimit) {
    out.regime = BesselRegime::series;
    ascending_series(z, out.k0, out.k1);
    return out;
  }
  const ScaledPair s = scaled_pair(z, out.regime);
  const double decay = std::exp(-z);
  if (decay < std::numeric_limits<double>::min()) {
    out.underflow = true;
    return out;
  }
  out.k0 = s.k0 * decay;
  out.k1 = s.k1 * decay;
  return out;
}

double bessel_k0(double z) { return evaluate_bessel_k(z).k0; }

double bessel_k1(double z) { return evaluate_bessel_k(z).k1; }

double bessel_k0_scaled(double z) {
  require_positive(z, "bessel_k0_scaled");
  BesselRegime regime{};
  return scaled_pair(z, regime).k0;
}

double bessel_k1_scaled(double z) {
  require_positive(z, "bessel_k1_scaled");
  BesselRegime regime{};
  return scaled_pair(z, regime).k1;
}

double log_bessel_k0(double z) {
  require_positive(z, "log_bessel_k0");
  if (z <= kSeriesLimit) return std::log(evaluate_bessel_k(z).k0);
  return std::log(bessel_k0_scaled(z)) - z;
}

double log_k0_ratio(double z) {
  require_positive(z, "log_k0_ratio");
  BesselRegime regime{};
  const ScaledPair s = scaled_pair(z, regime);
  return -s.k1 / s.k0;
}

}  // namespace targetlab::specfun
