#pragma once

#include <numbers>

namespace onebit::arcsine {

/// Second-order statistics of the pair (w_i, w_j), w = x - tau, together with
/// the common threshold mean d.
struct PairParams {
  double p0i = 0.0;
  double p0j = 0.0;
  double pij = 0.0;
  double d = 0.0;

  double determinant() const noexcept { return p0i * p0j - pij * pij; }
  /// Throws DomainError unless p0i > 0, p0j > 0 and the determinant is positive.
  void validate() const;
};

struct AlphaBeta {
  double alpha = 0.0;
  double beta = 0.0;
};

struct IntegrandValue {
  double theta = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

enum class QVariant { Exact, Approximate };

inline constexpr double kHalfPi = std::numbers::pi / 2.0;
/// Hard ceiling on exp(alpha^2 / 4 beta) before evaluation is refused.
inline constexpr double kGrowthCeiling = 1e6;

AlphaBeta alpha_beta(double theta, const PairParams& p);
double chi(const PairParams& p);

double integrand_d1(double theta, const PairParams& p, QVariant q = QVariant::Exact);
double integrand_d2(double theta, const PairParams& p);
IntegrandValue evaluate_integrands(double theta, const PairParams& p,
                                   QVariant q = QVariant::Exact);
/// D2 - D1 with Q replaced by the two-exponential approximation.
double integrand_delta(double theta, const PairParams& p);

/// chi (D2 - D1) at theta with the exact Q. The Gaussian factor of chi and
/// e^{alpha^2/4beta} share one exponent, so no growth guard is needed.
double weighted_difference(double theta, const PairParams& p);

/// Integral of 1 / beta_n over [0, pi/2].
double closed_form_first_part(const PairParams& p);

/// (2/pi) asin(p_ij / sqrt(p_0i p_0j)), the zero-threshold-mean limit.
double arcsine_law(const PairParams& p);

/// R_y(i, j) from adaptive quadrature of the full integrand to absolute tolerance `tol`.
double output_autocorrelation_oracle(const PairParams& p, double tol = 1e-10);

struct ExponentBound {
  bool holds = false;
  double max_theta = 0.0;
  double max_value = 0.0;  // max over theta of alpha_e^2 / (4 beta_n), alpha_e = alpha_n / d
};

/// Checks d^2 max_theta alpha_e^2 / (4 beta_n) < ln(gamma1).
ExponentBound exponent_bound_check(const PairParams& p, double gamma1);

namespace detail {
// Unchecked evaluations. Valid for any real theta since beta_n is a positive
// definite quadratic form; used by finite-difference stencils at the ends of
// [0, pi/2].
AlphaBeta alpha_beta(double theta, const PairParams& p) noexcept;
double d1(double theta, const PairParams& p, QVariant q);
double d2(double theta, const PairParams& p);
double weighted_difference(double theta, const PairParams& p) noexcept;
}  // namespace detail

}  // namespace onebit::arcsine
