#pragma once

#include <cmath>
#include <utility>

#include "modalrisk/algebra.hpp"

namespace modalrisk {

inline double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

// Acklam's rational approximation with one Halley refinement; absolute
// error below 1e-8 across (0,1).
inline double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw ValueError("quantile level must lie in (0,1)");

  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double plow = 0.02425;

  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  const double e = normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
  return x - u / (1.0 + x * u / 2.0);
}

struct LognormalModelState {
  double mu = 0.0;
  double sigma = 1.0;

  LognormalModelState() = default;
  LognormalModelState(double mu_, double sigma_) : mu(mu_), sigma(sigma_) {
    if (!(sigma > 0.0)) throw ValueError("lognormal sigma must be positive");
  }
};

inline double lognormal_var(double mu, double sigma, double alpha) {
  if (!(sigma > 0.0)) throw ValueError("lognormal sigma must be positive");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw ValueError("confidence level must lie in (0,1)");
  return std::exp(mu + sigma * normal_quantile(alpha));
}

inline double lognormal_es(double mu, double sigma, double alpha) {
  if (!(sigma > 0.0)) throw ValueError("lognormal sigma must be positive");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw ValueError("confidence level must lie in (0,1)");
  return std::exp(mu + sigma * sigma / 2.0) *
         normal_cdf(sigma - normal_quantile(alpha)) / (1.0 - alpha);
}

inline std::pair<double, double> lognormal_var_es(
    const LognormalModelState& state, double alpha) {
  return {lognormal_var(state.mu, state.sigma, alpha),
          lognormal_es(state.mu, state.sigma, alpha)};
}

}  // namespace modalrisk
