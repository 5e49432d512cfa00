#pragma once

// Data-parallel kernels over the realization axis. Every kernel exists twice:
// `serial` is the reference implementation kept for testing, `parallel` is the
// OpenMP version used by the library. Each output entry is accumulated by a
// single thread in a fixed order, so both produce bit-identical results.

#include <cstdint>

#include <Eigen/Dense>

namespace onebit::kernels {

using SignMatrix = Eigen::Matrix<std::int8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

namespace serial {

/// signs(i, k) = +1 if x(i, k) >= tau(i, k), else -1.
SignMatrix quantize(const Eigen::MatrixXd& x, const RowMatrix& tau);
Eigen::VectorXd sign_mean(const SignMatrix& y);
Eigen::MatrixXd sign_autocorrelation(const SignMatrix& y);
/// (1/N_x) sum_k y(k) v(k)^T for a real-valued companion matrix v.
Eigen::MatrixXd sign_cross_correlation(const SignMatrix& y, const RowMatrix& v);
/// Per-row sums of `term(i, y(i,k), v(i,k))` over k, then summed over rows.
double row_sum_log_probability(const SignMatrix& y, const RowMatrix& v,
                               const Eigen::VectorXd& scale, double floor,
                               std::int64_t* clamped);

}  // namespace serial

namespace parallel {

SignMatrix quantize(const Eigen::MatrixXd& x, const RowMatrix& tau);
Eigen::VectorXd sign_mean(const SignMatrix& y);
Eigen::MatrixXd sign_autocorrelation(const SignMatrix& y);
Eigen::MatrixXd sign_cross_correlation(const SignMatrix& y, const RowMatrix& v);
double row_sum_log_probability(const SignMatrix& y, const RowMatrix& v,
                               const Eigen::VectorXd& scale, double floor,
                               std::int64_t* clamped);

}  // namespace parallel

/// Converts a column-major realization matrix to row-major storage.
RowMatrix to_row_major(const Eigen::MatrixXd& m);

int max_threads() noexcept;

}  // namespace onebit::kernels
