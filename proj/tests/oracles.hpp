#pragma once

// Reference computations for the tests. Nothing here calls into the library:
// every value is derived from the standard library alone, so agreement with
// the library is evidence rather than tautology.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

inline double normal_tail(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

namespace detail {
inline double simpson_step(const std::function<double(double)>& f, double a, double b,
                           double fa, double fm, double fb, double whole, double tol,
                           int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double diff = left + right - whole;
  if (depth <= 0 || std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

/// Recursive adaptive Simpson with Richardson correction.
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      double tol = 1e-13, int depth = 50) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_step(f, a, b, fa, fm, fb, whole, tol, depth);
}

/// Simpson over [-d - 40 sqrt(p0), -d + 40 sqrt(p0)], broken at 0 and at
/// multiples of sqrt(p0) around the mean -d so every panel sees the peak.
inline double gaussian_window(const std::function<double(double)>& f, double p0, double d) {
  const double s = std::sqrt(p0);
  std::vector<double> cuts{0.0};
  for (int k = -40; k <= 40; ++k) cuts.push_back(-d + k * s);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] > cuts[i]) total += simpson(f, cuts[i], cuts[i + 1], 1e-17);
  }
  return total;
}

/// Root of a monotone function on [lo, hi] by plain bisection.
inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     int iterations = 200) {
  double flo = f(lo);
  for (int it = 0; it < iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// P(X > a, Y > b) for standard normals with correlation rho, by integrating
/// phi(x) Q((b - rho x) / sqrt(1 - rho^2)) over x > a.
inline double orthant(double a, double b, double rho) {
  const double s = std::sqrt(1.0 - rho * rho);
  auto f = [&](double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi) *
           normal_tail((b - rho * x) / s);
  };
  return simpson(f, a, std::max(a, 0.0) + 40.0, 1e-14);
}

/// E{sign(w_i) sign(w_j)} for w ~ N(-d 1, [[p0i, pij], [pij, p0j]]).
inline double sign_correlation(double p0i, double p0j, double pij, double d) {
  const double a = d / std::sqrt(p0i);
  const double b = d / std::sqrt(p0j);
  const double rho = pij / std::sqrt(p0i * p0j);
  const double both = orthant(a, b, rho);
  return 4.0 * both - 2.0 * normal_tail(a) - 2.0 * normal_tail(b) + 1.0;
}

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Brute-force E{sign(w_i) sign(w_j)} from `draws` bivariate Gaussian samples.
inline MonteCarloEstimate sign_correlation_mc(double p0i, double p0j, double pij, double d,
                                              std::uint64_t draws, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  const double l11 = std::sqrt(p0i);
  const double l21 = pij / l11;
  const double l22 = std::sqrt(p0j - l21 * l21);
  double sum = 0.0;
  for (std::uint64_t k = 0; k < draws; ++k) {
    const double z1 = z(rng);
    const double z2 = z(rng);
    const double wi = -d + l11 * z1;
    const double wj = -d + l21 * z1 + l22 * z2;
    sum += ((wi >= 0) == (wj >= 0)) ? 1.0 : -1.0;
  }
  const double mean = sum / static_cast<double>(draws);
  return {mean, std::sqrt((1.0 - mean * mean) / static_cast<double>(draws))};
}

/// (1 / sqrt(2 pi p0^3)) int g(w) w^power exp(-(w + d)^2 / (2 p0)) dw with g = sign,
/// split at the discontinuity.
inline double sign_gain_integral(double p0, double d, int power) {
  const double c = 1.0 / std::sqrt(2.0 * std::numbers::pi * p0 * p0 * p0);
  auto f = [&](double w) {
    const double g = w >= 0 ? 1.0 : -1.0;
    return g * std::pow(w, power) * std::exp(-(w + d) * (w + d) / (2.0 * p0));
  };
  return c * gaussian_window(f, p0, d);
}

/// E{w_i sign(w_j)} for the same pair law, by integrating the conditional mean
/// of w_i given w_j against the density of w_j.
inline double input_sign_correlation(double p0j, double pij, double d) {
  auto f = [&](double w) {
    const double density = std::exp(-(w + d) * (w + d) / (2.0 * p0j)) /
                           std::sqrt(2.0 * std::numbers::pi * p0j);
    const double conditional = -d + pij / p0j * (w + d);
    return (w >= 0 ? 1.0 : -1.0) * conditional * density;
  };
  return gaussian_window(f, p0j, d);
}

/// E{|w|} for w ~ N(-d, p0) by Monte-Carlo.
inline MonteCarloEstimate abs_mean_mc(double p0, double d, std::uint64_t draws,
                                      std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  double sum = 0.0;
  double sum2 = 0.0;
  for (std::uint64_t k = 0; k < draws; ++k) {
    const double a = std::abs(-d + std::sqrt(p0) * z(rng));
    sum += a;
    sum2 += a * a;
  }
  const double n = static_cast<double>(draws);
  const double mean = sum / n;
  return {mean, std::sqrt((sum2 / n - mean * mean) / n)};
}

}  // namespace oracle
