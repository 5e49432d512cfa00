#pragma once

// Scalar Gaussian special functions. All functions are pure and reject
// non-finite input with DomainError.

namespace onebit::special {

/// Gaussian tail probability Q(x) = P(Z > x), Z ~ N(0, 1).
double q_function(double x);

/// Inverse of q_function on (0, 1). Safeguarded Newton with bisection fallback.
double q_inverse(double p);

double erf(double x);

/// Upper incomplete gamma Gamma(s, x). Only s = 1/2 and s = 1 are supported.
double upper_incomplete_gamma(double s, double x);

/// Two-exponential approximation of Q for x > 0:
/// (1/12) exp(-x^2/2) + (1/4) exp(-2x^2/3).
double q_bar(double x);

/// CDF of a zero-mean Gaussian with standard deviation `zeta`.
double gaussian_cdf(double z, double zeta);

/// Standard normal density.
double normal_pdf(double x) noexcept;

}  // namespace onebit::special
