#include "onebit/pade.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "onebit/error.hpp"

namespace onebit::pade {

namespace {

using arcsine::PairParams;
using arcsine::QVariant;

constexpr double kPi = std::numbers::pi;

struct PieceLayout {
  double lo;
  double hi;
  double theta0;
};

constexpr std::array<PieceLayout, 3> kLayout = {{
    {0.0, kPi / 8.0, 0.0},
    {kPi / 8.0, 3.0 * kPi / 8.0, kPi / 4.0},
    {3.0 * kPi / 8.0, kPi / 2.0, kPi / 2.0},
}};

std::array<double, 4> raw_derivatives(const std::function<double(double)>& f, double t0, double h) {
  const double f0 = f(t0);
  const double fp = f(t0 + h);
  const double fm = f(t0 - h);
  const double f2p = f(t0 + 2.0 * h);
  const double f2m = f(t0 - 2.0 * h);
  return {f0, (fp - fm) / (2.0 * h), (fp - 2.0 * f0 + fm) / (h * h),
          (f2p - 2.0 * fp + 2.0 * fm - f2m) / (2.0 * h * h * h)};
}

std::function<double(double)> target(const PairParams& p, Integrand which, QVariant q) {
  if (which == Integrand::D2) return [p](double t) { return arcsine::detail::d2(t, p); };
  return [p, q](double t) { return arcsine::detail::d1(t, p, q); };
}

bool on_interval(double x, double a, double b) { return x >= a && x <= b; }

}  // namespace

double PadePiece::operator()(double theta) const noexcept {
  return (e + s * theta) / denominator(theta);
}

double PadePiece::integral() const { return integrate_rational(e, s, k, g, h, lo, hi); }

std::array<double, 4> taylor_coefficients(const std::function<double(double)>& f, double theta0,
                                          double step) {
  if (!(step > 0.0)) throw DomainError("taylor_coefficients: step must be > 0");
  const auto coarse = raw_derivatives(f, theta0, step);
  const auto fine = raw_derivatives(f, theta0, 0.5 * step);
  constexpr std::array<double, 4> factorial = {1.0, 1.0, 2.0, 6.0};
  std::array<double, 4> c{};
  c[0] = coarse[0];
  for (std::size_t i = 1; i < 4; ++i) c[i] = (4.0 * fine[i] - coarse[i]) / 3.0 / factorial[i];
  return c;
}

PadePiece pade_from_taylor(const std::array<double, 4>& c, double lo, double hi, double theta0,
                           std::size_t piece_index) {
  PadePiece piece;
  piece.lo = lo;
  piece.hi = hi;
  piece.theta0 = theta0;
  const double scale = std::max({std::abs(c[0]), std::abs(c[1]), std::abs(c[2]), std::abs(c[3])});
  if (scale == 0.0) return piece;  // vanishing integrand: zero numerator over unit denominator

  const double det = c[1] * c[1] - c[0] * c[2];
  if (!std::isfinite(det) || std::abs(det) <= 1e-14 * scale * scale) {
    throw FitError("singular Pade system on piece " + std::to_string(piece_index), piece_index);
  }
  const double b1 = (-c[2] * c[1] + c[3] * c[0]) / det;
  const double b2 = (-c[1] * c[3] + c[2] * c[2]) / det;
  const double a0 = c[0];
  const double a1 = c[1] + b1 * c[0];

  piece.e = a0 - a1 * theta0;
  piece.s = a1;
  piece.k = 1.0 - b1 * theta0 + b2 * theta0 * theta0;
  piece.g = b1 - 2.0 * b2 * theta0;
  piece.h = b2;

  const double d0 = piece.denominator(lo);
  for (int i = 0; i <= 100; ++i) {
    const double t = lo + (hi - lo) * i / 100.0;
    const double dv = piece.denominator(t);
    if (dv == 0.0 || (dv > 0.0) != (d0 > 0.0)) {
      throw FitError("Pade denominator vanishes on piece " + std::to_string(piece_index),
                     piece_index);
    }
  }
  return piece;
}

PadeFit pade_fit(const PairParams& p, Integrand which, QVariant q) {
  p.validate();
  const auto f = target(p, which, q);
  PadeFit fit;
  for (std::size_t i = 0; i < kLayout.size(); ++i) {
    const auto& l = kLayout[i];
    fit[i] = pade_from_taylor(taylor_coefficients(f, l.theta0), l.lo, l.hi, l.theta0, i);
  }
  return fit;
}

double integrate_rational(double e, double s, double k, double g, double h, double a, double b) {
  if (a == b) return 0.0;
  if (a > b) return -integrate_rational(e, s, k, g, h, b, a);
  const double span = std::max(std::abs(a), std::abs(b));

  if (std::abs(h) * span * span <= 1e-13 * (std::abs(k) + std::abs(g) * span)) {
    if (std::abs(g) * span <= 1e-13 * std::abs(k)) {
      if (k == 0.0) throw DomainError("integrate_rational: zero denominator");
      return (e * (b - a) + 0.5 * s * (b * b - a * a)) / k;
    }
    const double root = -k / g;
    if (on_interval(root, a, b)) throw DomainError("integrate_rational: pole inside the interval");
    return s / g * (b - a) + (e - s * k / g) / g * std::log(std::abs((k + g * b) / (k + g * a)));
  }

  const auto den = [&](double t) { return k + g * t + h * t * t; };
  const double lin = s / (2.0 * h);
  const double rest = e - s * g / (2.0 * h);
  const double disc = 4.0 * h * k - g * g;

  double inverse_part = 0.0;
  if (disc > 0.0) {
    const double r = std::sqrt(disc);
    inverse_part = 2.0 / r * (std::atan((2.0 * h * b + g) / r) - std::atan((2.0 * h * a + g) / r));
  } else if (disc < 0.0) {
    const double r = std::sqrt(-disc);
    const double qq = -0.5 * (g + std::copysign(r, g));
    const double r1 = qq / h;
    const double r2 = k / qq;
    if (on_interval(r1, a, b) || on_interval(r2, a, b)) {
      throw DomainError("integrate_rational: pole inside the interval");
    }
    const auto prim = [&](double t) { return std::log(std::abs((t - r1) / (t - r2))); };
    inverse_part = (prim(b) - prim(a)) / (h * (r1 - r2));
  } else {
    const double root = -g / (2.0 * h);
    if (on_interval(root, a, b)) throw DomainError("integrate_rational: pole inside the interval");
    inverse_part = -1.0 / (h * (b - root)) + 1.0 / (h * (a - root));
  }
  return lin * std::log(std::abs(den(b) / den(a))) + rest * inverse_part;
}

double pade_integral(const PairParams& p, QVariant q) {
  p.validate();
  const double first = arcsine::closed_form_first_part(p);
  const double x = arcsine::chi(p);
  if (p.d == 0.0) return x * first - 1.0;
  const PadeFit f2 = pade_fit(p, Integrand::D2, q);
  const PadeFit f1 = pade_fit(p, Integrand::D1, q);
  double sum = 0.0;
  for (std::size_t i = 0; i < 3; ++i) sum += f2[i].integral() - f1[i].integral();
  return x * (first + sum) - 1.0;
}

double pade_fitness_mse(const PairParams& p, std::size_t grid_points) {
  if (grid_points < 2) throw DomainError("pade_fitness_mse: need at least two grid points");
  const PadeFit f2 = pade_fit(p, Integrand::D2, QVariant::Approximate);
  const PadeFit f1 = pade_fit(p, Integrand::D1, QVariant::Approximate);
  double acc = 0.0;
  for (std::size_t i = 0; i < grid_points; ++i) {
    const double t = arcsine::kHalfPi * static_cast<double>(i) / static_cast<double>(grid_points - 1);
    std::size_t piece = 0;
    for (std::size_t j = 0; j < 3; ++j) {
      if (t >= kLayout[j].lo) piece = j;
    }
    const double approx = f2[piece](t) - f1[piece](t);
    const double diff = arcsine::integrand_delta(t, p) - approx;
    acc += diff * diff;
  }
  return acc / static_cast<double>(grid_points);
}

}  // namespace onebit::pade
