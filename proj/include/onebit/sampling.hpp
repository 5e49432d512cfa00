#pragma once

#include <cstddef>
#include <cstdint>

#include <Eigen/Dense>

#include "onebit/kernels.hpp"
#include "onebit/process.hpp"

namespace onebit::sampling {

using kernels::RowMatrix;
using kernels::SignMatrix;

/// Threshold distribution tau ~ N(1 d, sigma).
struct ThresholdSpec {
  double d = 0.0;
  Eigen::MatrixXd sigma;

  static ThresholdSpec scalar(double d, double sigma_tau2, std::size_t n);

  std::size_t dimension() const noexcept { return static_cast<std::size_t>(sigma.rows()); }
  bool is_scalar_diagonal() const;
  /// Common diagonal value; throws ValidationError unless is_scalar_diagonal().
  double sigma_tau2() const;
  void validate() const;
};

struct OneBitDataset {
  SignMatrix signs;       // N x N_x, entries exactly +-1
  RowMatrix thresholds;   // N x N_x threshold realizations
  ThresholdSpec spec;
  std::uint64_t seed = 0;

  std::size_t n() const noexcept { return static_cast<std::size_t>(signs.rows()); }
  std::size_t n_x() const noexcept { return static_cast<std::size_t>(signs.cols()); }
};

/// Fresh thresholds tau(k) are drawn for every realization k; ties x == tau map to +1.
OneBitDataset quantize(const process::Ensemble& ensemble, const ThresholdSpec& spec,
                       std::uint64_t seed);

/// Restricts a dataset to a subset of state indices (rows) and the first n_x realizations.
OneBitDataset select(const OneBitDataset& data, std::size_t first_row, std::size_t rows,
                     std::size_t n_x);

Eigen::VectorXd sample_mean(const OneBitDataset& data);
Eigen::MatrixXd sample_autocorrelation(const OneBitDataset& data);
/// R_{y tau}(i, j) = (1/N_x) sum_k y_i(k) tau_j(k).
Eigen::MatrixXd sample_cross_correlation(const OneBitDataset& data);
/// (1/N_x) sum_k y_i(k) x_j(k); needs the analog input, so it is a test and
/// experiment reference only.
Eigen::MatrixXd sample_sign_input_correlation(const OneBitDataset& data,
                                              const Eigen::MatrixXd& samples);

}  // namespace onebit::sampling
