#pragma once

#include <cmath>
#include <cstddef>

namespace concentra {

inline double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

/// Inverse standard normal CDF by bisection on erfc; deterministic and
/// accurate to ~1e-14, which is all the harness needs.
double normal_quantile(double p);

inline double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

/// Regularized incomplete beta I_x(a, b).
double regularized_ibeta(double a, double b, double x);

/// Inverse of x -> I_x(a, b).
double regularized_ibeta_inv(double a, double b, double p);

/// E ||Z||_2^q for Z standard Gaussian in R^n; valid for q > -n.
inline double gaussian_l2_moment(int n, double q) {
  return std::exp(0.5 * q * std::log(2.0) + std::lgamma(0.5 * (n + q)) - std::lgamma(0.5 * n));
}

/// c_n = E ||Z||_2 = sqrt(2) Gamma((n+1)/2) / Gamma(n/2).
inline double gaussian_l2_mean(int n) { return gaussian_l2_moment(n, 1.0); }

}  // namespace concentra
