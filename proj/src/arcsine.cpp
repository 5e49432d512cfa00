#include "onebit/arcsine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "onebit/error.hpp"
#include "onebit/numerics.hpp"
#include "onebit/special.hpp"

namespace onebit::arcsine {

namespace {

const double kLogCeiling = std::log(kGrowthCeiling);

void check_theta(double theta) {
  if (!(theta >= -1e-12 && theta <= kHalfPi + 1e-12)) {
    throw DomainError("theta must lie in [0, pi/2], got " + std::to_string(theta));
  }
}

double q_of(double x, QVariant q) {
  if (q == QVariant::Exact) return special::q_function(x);
  if (x > 0.0) return special::q_bar(x);
  if (x < 0.0) return 1.0 - special::q_bar(-x);
  return 0.5;
}

// Common factor sqrt(pi / beta) / beta * exp(alpha^2 / 4 beta), guarded.
double growth_factor(double theta, const AlphaBeta& ab) {
  const double exponent = ab.alpha * ab.alpha / (4.0 * ab.beta);
  if (exponent > kLogCeiling) {
    throw BoundedGrowthError("exp(alpha^2/4beta) exceeds the growth ceiling at theta=" +
                                 std::to_string(theta),
                             theta, exponent);
  }
  return std::sqrt(std::numbers::pi / ab.beta) / ab.beta * std::exp(exponent);
}

// Minimizer of beta_n over [0, pi/2] and a width scale for the peak of the
// integrand around it. beta_n's numerator is A + B cos 2t + C sin 2t.
struct Peak {
  double theta = 0.0;
  double width = 0.0;
  bool interior = false;
};

Peak integrand_peak(const PairParams& p) {
  const double b = 0.5 * (p.p0j - p.p0i);
  const double c = -p.pij;
  Peak out;
  out.theta = 0.5 * std::atan2(-c, -b);
  out.interior = out.theta > 0.0 && out.theta < kHalfPi;
  out.width = std::sqrt(p.determinant()) / (p.p0i + p.p0j);
  return out;
}

// Break points for the oracle: the peak and geometric offsets around it.
std::vector<double> oracle_breaks(const PairParams& p) {
  std::vector<double> cuts{0.0, kHalfPi};
  const Peak peak = integrand_peak(p);
  if (peak.interior) {
    cuts.push_back(peak.theta);
    for (double w = peak.width; w < kHalfPi; w *= 4.0) {
      if (peak.theta - w > 0.0) cuts.push_back(peak.theta - w);
      if (peak.theta + w < kHalfPi) cuts.push_back(peak.theta + w);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  return cuts;
}

}  // namespace

void PairParams::validate() const {
  if (!std::isfinite(p0i) || !std::isfinite(p0j) || !std::isfinite(pij) || !std::isfinite(d)) {
    throw DomainError("pair parameters must be finite");
  }
  if (!(p0i > 0.0) || !(p0j > 0.0)) throw DomainError("p0i and p0j must be > 0");
  if (!(determinant() > 0.0)) {
    throw DomainError("p0i p0j - pij^2 must be > 0 (pij=" + std::to_string(pij) + ")");
  }
}

namespace detail {

AlphaBeta alpha_beta(double theta, const PairParams& p) noexcept {
  const double det = p.determinant();
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  AlphaBeta ab;
  ab.alpha = p.d * (p.p0i * s + p.p0j * c - p.pij * (c + s)) / det;
  ab.beta = (p.p0j * c * c + p.p0i * s * s - p.pij * std::sin(2.0 * theta)) / (2.0 * det);
  return ab;
}

double d1(double theta, const PairParams& p, QVariant q) {
  const AlphaBeta ab = detail::alpha_beta(theta, p);
  if (ab.alpha == 0.0) return 0.0;
  return growth_factor(theta, ab) * ab.alpha * q_of(ab.alpha / std::sqrt(2.0 * ab.beta), q);
}

double d2(double theta, const PairParams& p) {
  const AlphaBeta ab = detail::alpha_beta(theta, p);
  if (ab.alpha == 0.0) return 0.0;
  return growth_factor(theta, ab) * ab.alpha * 0.5;
}

double weighted_difference(double theta, const PairParams& p) noexcept {
  const AlphaBeta ab = detail::alpha_beta(theta, p);
  if (ab.alpha == 0.0) return 0.0;
  const double det = p.determinant();
  const double e = ab.alpha * ab.alpha / (4.0 * ab.beta) -
                   p.d * p.d * (p.p0i + p.p0j - 2.0 * p.pij) / (2.0 * det);
  // 1 - 2 Q(alpha / sqrt(2 beta)) = erf(alpha / (2 sqrt(beta))).
  return std::sqrt(std::numbers::pi / ab.beta) * ab.alpha / (2.0 * ab.beta) *
         std::erf(ab.alpha / (2.0 * std::sqrt(ab.beta))) * std::exp(e) /
         (std::numbers::pi * std::sqrt(det));
}

}  // namespace detail

AlphaBeta alpha_beta(double theta, const PairParams& p) {
  p.validate();
  check_theta(theta);
  return detail::alpha_beta(theta, p);
}

double chi(const PairParams& p) {
  p.validate();
  const double det = p.determinant();
  return std::exp(-p.d * p.d * (p.p0i + p.p0j - 2.0 * p.pij) / (2.0 * det)) /
         (std::numbers::pi * std::sqrt(det));
}

double integrand_d1(double theta, const PairParams& p, QVariant q) {
  p.validate();
  check_theta(theta);
  return detail::d1(theta, p, q);
}

double integrand_d2(double theta, const PairParams& p) {
  p.validate();
  check_theta(theta);
  return detail::d2(theta, p);
}

IntegrandValue evaluate_integrands(double theta, const PairParams& p, QVariant q) {
  const AlphaBeta ab = alpha_beta(theta, p);
  return {theta, ab.alpha, ab.beta, detail::d1(theta, p, q), detail::d2(theta, p)};
}

double integrand_delta(double theta, const PairParams& p) {
  p.validate();
  check_theta(theta);
  return detail::d2(theta, p) - detail::d1(theta, p, QVariant::Approximate);
}

double weighted_difference(double theta, const PairParams& p) {
  p.validate();
  check_theta(theta);
  return detail::weighted_difference(theta, p);
}

double closed_form_first_part(const PairParams& p) {
  p.validate();
  const double ratio = p.pij / std::sqrt(p.p0i * p.p0j);
  if (!(ratio >= -1.0 && ratio <= 1.0)) throw DomainError("asin argument outside [-1, 1]");
  return std::sqrt(p.determinant()) * (std::numbers::pi + 2.0 * std::asin(ratio));
}

double arcsine_law(const PairParams& p) {
  p.validate();
  return 2.0 / std::numbers::pi * std::asin(p.pij / std::sqrt(p.p0i * p.p0j));
}

double output_autocorrelation_oracle(const PairParams& p, double tol) {
  p.validate();
  if (!(tol >= 1e-12)) throw DomainError("oracle tolerance must be >= 1e-12");
  const double x = chi(p);
  const double first = closed_form_first_part(p);
  if (p.d == 0.0) return x * first - 1.0;
  const auto f = [&p](double t) { return detail::weighted_difference(t, p); };
  const std::vector<double> cuts = oracle_breaks(p);
  const double piece_tol = 0.5 * tol / static_cast<double>(cuts.size() - 1);
  double integral = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const auto r = numerics::integrate_adaptive(f, cuts[k], cuts[k + 1], piece_tol);
    if (!r.converged) {
      throw NumericError("oracle quadrature did not converge on [" + std::to_string(cuts[k]) +
                         ", " + std::to_string(cuts[k + 1]) + "] (error estimate " +
                         std::to_string(r.error) + " over " + std::to_string(r.intervals) +
                         " intervals)");
    }
    integral += r.value;
  }
  return x * first + integral - 1.0;
}

ExponentBound exponent_bound_check(const PairParams& p, double gamma1) {
  p.validate();
  if (!(gamma1 > 1.0)) throw DomainError("gamma1 must be > 1");
  PairParams unit = p;
  unit.d = 1.0;
  const auto value = [&unit](double t) {
    const AlphaBeta ab = detail::alpha_beta(t, unit);
    return ab.alpha * ab.alpha / (4.0 * ab.beta);
  };
  constexpr int kGrid = 64;
  double best_t = 0.0;
  double best_v = value(0.0);
  for (int k = 1; k <= kGrid; ++k) {
    const double t = kHalfPi * k / kGrid;
    const double v = value(t);
    if (v > best_v) {
      best_v = v;
      best_t = t;
    }
  }
  const double step = kHalfPi / kGrid;
  const double lo = std::max(0.0, best_t - step);
  const double hi = std::min(kHalfPi, best_t + step);
  const auto refined =
      numerics::minimize_golden_parabolic([&](double t) { return -value(t); }, lo, hi, 1e-12);
  if (-refined.fx > best_v) {
    best_v = -refined.fx;
    best_t = refined.x;
  }
  ExponentBound out;
  out.max_theta = best_t;
  out.max_value = best_v;
  out.holds = p.d * p.d * best_v < std::log(gamma1);
  return out;
}

}  // namespace onebit::arcsine
