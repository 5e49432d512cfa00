#include "onebit/bussgang.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "onebit/error.hpp"
#include "onebit/special.hpp"

namespace onebit::bussgang {

namespace {
constexpr double kSqrtPi = 1.7724538509055160273;
}

BussgangCoefficients bussgang_coefficients(double p0, double d) {
  if (!(p0 > 0.0) || !std::isfinite(p0)) throw DomainError("bussgang_coefficients: p0 must be > 0");
  if (!std::isfinite(d)) throw DomainError("bussgang_coefficients: d must be finite");
  const double x = d * d / (2.0 * p0);
  BussgangCoefficients c;
  c.eps1 = std::sqrt(2.0 / (std::numbers::pi * p0)) * special::upper_incomplete_gamma(1.0, x) -
           d / std::sqrt(std::numbers::pi * p0 * p0) *
               (special::upper_incomplete_gamma(0.5, x) - kSqrtPi);
  c.eps2 = -special::erf(d / std::sqrt(2.0 * p0)) / p0;
  return c;
}

double cross_correlation_entry(const arcsine::PairParams& p, double r_ytau) {
  const auto c = bussgang_coefficients(p.p0j, p.d);
  return r_ytau + c.eps1 * p.pij - c.eps2 * p.d * (p.p0j - p.pij);
}

double cross_correlation_entry_split(double p0j, double d, double r_x, double sigma_ij,
                                     double r_ytau) {
  const auto c = bussgang_coefficients(p0j, d);
  return r_ytau + (c.eps1 + d * c.eps2) * (r_x + sigma_ij) - d * c.eps2 * p0j;
}

double cross_correlation_diagonal(double p0i, double d, double r_ytau_ii) {
  if (!(p0i > 0.0)) throw DomainError("cross_correlation_diagonal: p0i must be > 0");
  const double x = d * d / (2.0 * p0i);
  return r_ytau_ii + std::sqrt(2.0 * p0i / std::numbers::pi) * special::upper_incomplete_gamma(1.0, x) -
         d / kSqrtPi * special::upper_incomplete_gamma(0.5, x) + d;
}

double cross_correlation_diagonal_erf(double p0i, double d, double r_ytau_ii) {
  if (!(p0i > 0.0)) throw DomainError("cross_correlation_diagonal_erf: p0i must be > 0");
  return d * special::erf(d / std::sqrt(2.0 * p0i)) +
         std::sqrt(2.0 * p0i / std::numbers::pi) * std::exp(-d * d / (2.0 * p0i)) + r_ytau_ii;
}

Eigen::MatrixXd recover_cross_matrix(const sampling::OneBitDataset& data,
                                     const Eigen::MatrixXd& p_hat) {
  const auto n = static_cast<Eigen::Index>(data.n());
  if (p_hat.rows() != n || p_hat.cols() != n) {
    throw ValidationError("recover_cross_matrix: power matrix dimension mismatch");
  }
  const Eigen::MatrixXd r_ytau = sampling::sample_cross_correlation(data);
  const double d = data.spec.d;
  Eigen::MatrixXd out = Eigen::MatrixXd::Constant(n, n, std::numeric_limits<double>::quiet_NaN());
  for (Eigen::Index i = 0; i < n; ++i) {
    const double pii = p_hat(i, i);
    if (!(pii > 0.0)) continue;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) {
        out(i, i) = cross_correlation_diagonal(pii, d, r_ytau(i, i));
        continue;
      }
      // The sign sits at index i, so the gains are taken at p_ii.
      const double pij = p_hat(i, j);
      if (std::isnan(pij) || !(p_hat(j, j) > 0.0)) continue;
      out(i, j) = cross_correlation_entry({p_hat(j, j), pii, pij, d}, r_ytau(i, j));
    }
  }
  return out;
}

Eigen::MatrixXd expected_sign_input_correlation(const Eigen::MatrixXd& r_x,
                                                const sampling::ThresholdSpec& spec) {
  if (r_x.rows() != r_x.cols() || static_cast<std::size_t>(r_x.rows()) != spec.dimension()) {
    throw ValidationError("expected_sign_input_correlation: dimension mismatch");
  }
  Eigen::MatrixXd out(r_x.rows(), r_x.cols());
  for (Eigen::Index i = 0; i < r_x.rows(); ++i) {
    const double p = r_x(i, i) + spec.sigma(i, i);
    const double gain =
        std::sqrt(2.0 / (std::numbers::pi * p)) * std::exp(-spec.d * spec.d / (2.0 * p));
    out.row(i) = gain * r_x.row(i);
  }
  return out;
}

}  // namespace onebit::bussgang
