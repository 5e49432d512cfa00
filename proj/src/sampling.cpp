#include "onebit/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "onebit/error.hpp"

namespace onebit::sampling {

ThresholdSpec ThresholdSpec::scalar(double d, double sigma_tau2, std::size_t n) {
  ThresholdSpec s;
  s.d = d;
  s.sigma = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) *
            sigma_tau2;
  return s;
}

bool ThresholdSpec::is_scalar_diagonal() const {
  if (sigma.rows() == 0) return false;
  const double v = sigma(0, 0);
  for (Eigen::Index i = 0; i < sigma.rows(); ++i) {
    for (Eigen::Index j = 0; j < sigma.cols(); ++j) {
      if (sigma(i, j) != (i == j ? v : 0.0)) return false;
    }
  }
  return true;
}

double ThresholdSpec::sigma_tau2() const {
  if (!is_scalar_diagonal()) throw ValidationError("threshold covariance is not scalar-diagonal");
  return sigma(0, 0);
}

void ThresholdSpec::validate() const {
  if (!std::isfinite(d)) throw ValidationError("threshold mean must be finite");
  if (sigma.rows() == 0 || sigma.rows() != sigma.cols()) {
    throw ValidationError("threshold covariance must be square and non-empty");
  }
  if (!sigma.allFinite()) throw ValidationError("threshold covariance has non-finite entries");
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, sigma.cwiseAbs().maxCoeff())) {
    throw ValidationError("threshold covariance is not symmetric");
  }
  if (sigma.diagonal().minCoeff() < 0.0) throw ValidationError("threshold variances must be >= 0");
  if (!process::is_psd(sigma)) throw ValidationError("threshold covariance is not PSD");
}

OneBitDataset quantize(const process::Ensemble& ensemble, const ThresholdSpec& spec,
                       std::uint64_t seed) {
  spec.validate();
  if (spec.dimension() != ensemble.n()) throw ValidationError("quantize: threshold dimension mismatch");
  const auto n = static_cast<Eigen::Index>(ensemble.n());
  const auto nx = static_cast<Eigen::Index>(ensemble.n_x());

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  RowMatrix tau(n, nx);
  if (spec.is_scalar_diagonal()) {
    const double s = std::sqrt(spec.sigma(0, 0));
    for (Eigen::Index k = 0; k < nx; ++k) {
      for (Eigen::Index i = 0; i < n; ++i) tau(i, k) = spec.d + s * normal(rng);
    }
  } else {
    const Eigen::MatrixXd f = process::symmetric_factor(spec.sigma);
    Eigen::VectorXd z(n);
    for (Eigen::Index k = 0; k < nx; ++k) {
      for (Eigen::Index i = 0; i < n; ++i) z(i) = normal(rng);
      tau.col(k) = (f * z).array() + spec.d;
    }
  }

  OneBitDataset out;
  out.signs = kernels::parallel::quantize(ensemble.samples, tau);
  out.thresholds = std::move(tau);
  out.spec = spec;
  out.seed = seed;
  return out;
}

OneBitDataset select(const OneBitDataset& data, std::size_t first_row, std::size_t rows,
                     std::size_t n_x) {
  if (rows == 0 || first_row + rows > data.n() || n_x == 0 || n_x > data.n_x()) {
    throw ValidationError("select: range out of bounds");
  }
  const auto r0 = static_cast<Eigen::Index>(first_row);
  const auto nr = static_cast<Eigen::Index>(rows);
  const auto nc = static_cast<Eigen::Index>(n_x);
  OneBitDataset out;
  out.signs = data.signs.block(r0, 0, nr, nc);
  out.thresholds = data.thresholds.block(r0, 0, nr, nc);
  out.spec.d = data.spec.d;
  out.spec.sigma = data.spec.sigma.block(r0, r0, nr, nr);
  out.seed = data.seed;
  return out;
}

Eigen::VectorXd sample_mean(const OneBitDataset& data) {
  if (data.n_x() == 0) throw ValidationError("sample_mean: empty dataset");
  return kernels::parallel::sign_mean(data.signs);
}

Eigen::MatrixXd sample_autocorrelation(const OneBitDataset& data) {
  if (data.n_x() == 0) throw ValidationError("sample_autocorrelation: empty dataset");
  return kernels::parallel::sign_autocorrelation(data.signs);
}

Eigen::MatrixXd sample_cross_correlation(const OneBitDataset& data) {
  if (data.n_x() == 0) throw ValidationError("sample_cross_correlation: empty dataset");
  return kernels::parallel::sign_cross_correlation(data.signs, data.thresholds);
}

Eigen::MatrixXd sample_sign_input_correlation(const OneBitDataset& data,
                                              const Eigen::MatrixXd& samples) {
  if (static_cast<std::size_t>(samples.rows()) != data.n() ||
      static_cast<std::size_t>(samples.cols()) < data.n_x()) {
    throw ValidationError("sample_sign_input_correlation: dimension mismatch");
  }
  const RowMatrix x = kernels::to_row_major(samples.leftCols(static_cast<Eigen::Index>(data.n_x())));
  return kernels::parallel::sign_cross_correlation(data.signs, x);
}

}  // namespace onebit::sampling
