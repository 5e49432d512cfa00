#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "onebit/arcsine.hpp"
#include "onebit/sampling.hpp"

namespace onebit::bussgang {

struct BussgangCoefficients {
  double eps1 = 0.0;
  double eps2 = 0.0;
};

/// Closed-form gains for the sign nonlinearity at power p0 (> 0).
BussgangCoefficients bussgang_coefficients(double p0, double d);

/// Cross term for the pair: r_ytau + eps1 p_ij - eps2 d (p0j - p_ij), with the
/// coefficients evaluated at p0j. This is the correlation between the sign at
/// index j and the input at index i, and `r_ytau` must be the matching
/// sign/threshold correlation.
double cross_correlation_entry(const arcsine::PairParams& p, double r_ytau);

/// Same quantity written with the input covariance and threshold covariance
/// split: r_ytau + (eps1 + d eps2)(r_x + sigma_ij) - d eps2 p0j.
double cross_correlation_entry_split(double p0j, double d, double r_x, double sigma_ij,
                                     double r_ytau);

/// Diagonal form using the incomplete gamma function.
double cross_correlation_diagonal(double p0i, double d, double r_ytau_ii);
/// Diagonal form using erf: d erf(d / sqrt(2 p0i)) + sqrt(2 p0i / pi) exp(-d^2 / 2 p0i) + r_ytau.
double cross_correlation_diagonal_erf(double p0i, double d, double r_ytau_ii);

/// R_yx(i, j) = E{y_i x_j} for all pairs, from recovered powers P (NaN marks
/// unrecovered entries) and the sample sign/threshold correlation.
Eigen::MatrixXd recover_cross_matrix(const sampling::OneBitDataset& data,
                                     const Eigen::MatrixXd& p_hat);

/// Exact E{y_i x_j} = R_x(i, j) sqrt(2 / (pi p_ii)) exp(-d^2 / (2 p_ii)).
Eigen::MatrixXd expected_sign_input_correlation(const Eigen::MatrixXd& r_x,
                                                const sampling::ThresholdSpec& spec);

}  // namespace onebit::bussgang
