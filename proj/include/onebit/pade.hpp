#pragma once

#include <array>
#include <cstddef>
#include <functional>

#include "onebit/arcsine.hpp"

namespace onebit::pade {

enum class Integrand { D1, D2 };

/// (e + s theta) / (k + g theta + h theta^2) on [lo, hi], in absolute theta.
struct PadePiece {
  double lo = 0.0;
  double hi = 0.0;
  double theta0 = 0.0;
  double e = 0.0;
  double s = 0.0;
  double k = 1.0;
  double g = 0.0;
  double h = 0.0;

  double operator()(double theta) const noexcept;
  double denominator(double theta) const noexcept { return k + g * theta + h * theta * theta; }
  double integral() const;
};

using PadeFit = std::array<PadePiece, 3>;

/// Taylor coefficients c0..c3 at theta0 from central differences with one
/// Richardson level (steps h and h/2).
std::array<double, 4> taylor_coefficients(const std::function<double(double)>& f,
                                          double theta0,
                                          double step = std::numbers::pi / 512.0);

/// One-point [1/2] Pade approximant (local variable t = theta - theta0) from
/// Taylor coefficients, returned in absolute-theta form on [lo, hi].
PadePiece pade_from_taylor(const std::array<double, 4>& c, double lo, double hi,
                           double theta0, std::size_t piece_index);

/// Piecewise Pade fit of D1 or D2 over [0, pi/8], [pi/8, 3pi/8], [3pi/8, pi/2]
/// with expansion points 0, pi/4, pi/2.
PadeFit pade_fit(const arcsine::PairParams& p, Integrand which,
                 arcsine::QVariant q = arcsine::QVariant::Exact);

/// Integral of (e + s theta) / (k + g theta + h theta^2) over [a, b] in closed
/// form: log + arctan when 4hk - g^2 > 0, partial fractions over real roots
/// otherwise. Throws DomainError if the denominator vanishes inside [a, b].
double integrate_rational(double e, double s, double k, double g, double h, double a,
                          double b);

/// H_n: the Pade approximation of R_y(i, j).
double pade_integral(const arcsine::PairParams& p,
                     arcsine::QVariant q = arcsine::QVariant::Exact);

/// Grid MSE between Delta (with Q approximated) and the difference of the
/// piecewise Pade fits of D2 and D1.
double pade_fitness_mse(const arcsine::PairParams& p, std::size_t grid_points = 1000);

}  // namespace onebit::pade
