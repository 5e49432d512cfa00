#include "onebit/special.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "onebit/error.hpp"

namespace onebit::special {

namespace {

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw DomainError(std::string(what) + ": non-finite argument");
}

// Abramowitz & Stegun 26.2.23, |error| < 4.5e-4; only a starting point.
double tail_guess(double p) {
  const double t = std::sqrt(-2.0 * std::log(p));
  return t - (2.515517 + 0.802853 * t + 0.010328 * t * t) /
                 (1.0 + 1.432788 * t + 0.189269 * t * t + 0.001308 * t * t * t);
}

}  // namespace

double q_function(double x) {
  require_finite(x, "q_function");
  return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double q_inverse(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("q_inverse: p must lie in (0, 1)");
  if (p == 0.5) return 0.0;
  if (p > 0.5) return -q_inverse(1.0 - p);

  double lo = 0.0;
  double hi = 40.0;
  double x = tail_guess(p);
  if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);

  for (int it = 0; it < 200; ++it) {
    const double f = q_function(x) - p;
    if (f == 0.0) return x;
    if (f > 0.0) lo = x; else hi = x;
    const double pdf = normal_pdf(x);
    double next = pdf > 0.0 ? x + f / pdf : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-15 * (1.0 + std::abs(x)) || hi - lo <= 1e-15 * (1.0 + hi)) {
      return next;
    }
    x = next;
  }
  return x;
}

double erf(double x) {
  require_finite(x, "erf");
  return std::erf(x);
}

double upper_incomplete_gamma(double s, double x) {
  require_finite(x, "upper_incomplete_gamma");
  if (x < 0.0) throw DomainError("upper_incomplete_gamma: x must be >= 0");
  if (s == 1.0) return std::exp(-x);
  if (s == 0.5) return std::sqrt(std::numbers::pi) * std::erfc(std::sqrt(x));
  throw DomainError("upper_incomplete_gamma: only s = 1/2 and s = 1 are supported");
}

double q_bar(double x) {
  require_finite(x, "q_bar");
  if (!(x > 0.0)) throw DomainError("q_bar: x must be > 0");
  return std::exp(-0.5 * x * x) / 12.0 + 0.25 * std::exp(-2.0 * x * x / 3.0);
}

double gaussian_cdf(double z, double zeta) {
  require_finite(z, "gaussian_cdf");
  if (!(zeta > 0.0) || !std::isfinite(zeta)) throw DomainError("gaussian_cdf: zeta must be > 0");
  return q_function(-z / zeta);
}

double normal_pdf(double x) noexcept {
  return std::exp(-0.5 * x * x) * (0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2);
}

}  // namespace onebit::special
