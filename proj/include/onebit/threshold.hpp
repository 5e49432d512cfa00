#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>

#include <Eigen/Dense>

#include "onebit/sampling.hpp"

namespace onebit::threshold {

struct LogLikelihood {
  double value = 0.0;
  std::int64_t clamped_terms = 0;  // probabilities floored at 1e-300
  bool feasible = true;            // false when some constrained r_0i <= 0
};

/// r_0i = (d / Q^-1((mu_i + 1) / 2))^2 - sigma_tau2 for every index; NaN where
/// mu_i has the wrong sign for d.
Eigen::VectorXd constrained_variances(const Eigen::VectorXd& mu, double d, double sigma_tau2);

/// Sum over indices i and realizations k of log P(y_i(k) | tau_i(k)) with
/// P(+1 | tau) = 1 - Psi(tau), Psi the CDF of x_i ~ N(0, r_0i).
LogLikelihood log_likelihood_given_variances(const sampling::SignMatrix& signs,
                                             const sampling::RowMatrix& thresholds,
                                             const Eigen::VectorXd& r0);

/// Log-likelihood with the variances tied to (d, sigma_tau2) by the sign-mean constraint.
LogLikelihood log_likelihood(const sampling::OneBitDataset& data, double d, double sigma_tau2);

struct MleOptions {
  double d_min = 0.05;
  double d_max = 1.0;
  double s2_min = 0.01;
  double s2_max = 0.5;
  std::size_t grid = 20;
  double f_tol = 1e-9;
  double x_tol = 1e-7;
};

struct ThresholdEstimate {
  double d = 0.0;
  double sigma_tau2 = 0.0;
  double log_likelihood = 0.0;
  std::array<double, 2> grid_seed{};
  std::size_t iterations = 0;
};

/// Maximizes `loglik(r0)` over (d, sigma_tau2) with r0 = constrained_variances(mu, d, s2):
/// coarse grid seed, then simplex refinement. Infeasible points count as -inf.
ThresholdEstimate maximize_constrained_likelihood(
    const std::function<double(const Eigen::VectorXd&)>& loglik, const Eigen::VectorXd& mu,
    const MleOptions& options = {});

ThresholdEstimate estimate_threshold(const sampling::OneBitDataset& data,
                                     const MleOptions& options = {});

/// |truth - estimate|^2 / |truth|^2.
double scalar_nmse(double truth, double estimate);

}  // namespace onebit::threshold
