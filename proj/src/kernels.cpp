#include "onebit/kernels.hpp"

#include <algorithm>
#include <numbers>
#include <string>
#include <cmath>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "onebit/error.hpp"

namespace onebit::kernels {

namespace {

void check_same_shape(Eigen::Index r1, Eigen::Index c1, Eigen::Index r2, Eigen::Index c2,
                      const char* what) {
  if (r1 != r2 || c1 != c2) throw ValidationError(std::string(what) + ": dimension mismatch");
}

// All kernels below funnel through these row-level routines so the serial and
// parallel variants share the exact same floating-point evaluation order.

void quantize_row(const Eigen::MatrixXd& x, const RowMatrix& tau, Eigen::Index i, SignMatrix& y) {
  for (Eigen::Index k = 0; k < x.cols(); ++k) y(i, k) = x(i, k) >= tau(i, k) ? 1 : -1;
}

double row_mean(const SignMatrix& y, Eigen::Index i) {
  std::int64_t s = 0;
  for (Eigen::Index k = 0; k < y.cols(); ++k) s += y(i, k);
  return static_cast<double>(s) / static_cast<double>(y.cols());
}

double pair_sign_correlation(const SignMatrix& y, Eigen::Index i, Eigen::Index j) {
  std::int64_t s = 0;
  const std::int8_t* a = y.row(i).data();
  const std::int8_t* b = y.row(j).data();
  for (Eigen::Index k = 0; k < y.cols(); ++k) s += a[k] * b[k];
  return static_cast<double>(s) / static_cast<double>(y.cols());
}

double pair_cross(const SignMatrix& y, const RowMatrix& v, Eigen::Index i, Eigen::Index j) {
  double s = 0.0;
  const std::int8_t* a = y.row(i).data();
  const double* b = v.row(j).data();
  for (Eigen::Index k = 0; k < y.cols(); ++k) s += a[k] > 0 ? b[k] : -b[k];
  return s / static_cast<double>(y.cols());
}

double row_log_probability(const SignMatrix& y, const RowMatrix& v, Eigen::Index i, double scale,
                           double floor, std::int64_t& clamped) {
  double s = 0.0;
  for (Eigen::Index k = 0; k < y.cols(); ++k) {
    const double arg = static_cast<double>(y(i, k)) * v(i, k) * scale;
    double q = 0.5 * std::erfc(arg / std::numbers::sqrt2);
    if (!(q > floor)) {
      q = floor;
      ++clamped;
    }
    s += std::log(q);
  }
  return s;
}

void check_log_probability(const SignMatrix& y, const RowMatrix& v, const Eigen::VectorXd& scale) {
  check_same_shape(y.rows(), y.cols(), v.rows(), v.cols(), "row_sum_log_probability");
  if (scale.size() != y.rows()) throw ValidationError("row_sum_log_probability: scale size mismatch");
}

}  // namespace

namespace serial {

SignMatrix quantize(const Eigen::MatrixXd& x, const RowMatrix& tau) {
  check_same_shape(x.rows(), x.cols(), tau.rows(), tau.cols(), "quantize");
  SignMatrix y(x.rows(), x.cols());
  for (Eigen::Index i = 0; i < x.rows(); ++i) quantize_row(x, tau, i, y);
  return y;
}

Eigen::VectorXd sign_mean(const SignMatrix& y) {
  Eigen::VectorXd mu(y.rows());
  for (Eigen::Index i = 0; i < y.rows(); ++i) mu(i) = row_mean(y, i);
  return mu;
}

Eigen::MatrixXd sign_autocorrelation(const SignMatrix& y) {
  const auto n = y.rows();
  Eigen::MatrixXd r(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    r(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) r(i, j) = r(j, i) = pair_sign_correlation(y, i, j);
  }
  return r;
}

Eigen::MatrixXd sign_cross_correlation(const SignMatrix& y, const RowMatrix& v) {
  check_same_shape(y.rows(), y.cols(), v.rows(), v.cols(), "sign_cross_correlation");
  Eigen::MatrixXd r(y.rows(), v.rows());
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    for (Eigen::Index j = 0; j < v.rows(); ++j) r(i, j) = pair_cross(y, v, i, j);
  }
  return r;
}

double row_sum_log_probability(const SignMatrix& y, const RowMatrix& v,
                               const Eigen::VectorXd& scale, double floor,
                               std::int64_t* clamped) {
  check_log_probability(y, v, scale);
  double total = 0.0;
  std::int64_t count = 0;
  for (Eigen::Index i = 0; i < y.rows(); ++i) {
    total += row_log_probability(y, v, i, scale(i), floor, count);
  }
  if (clamped) *clamped = count;
  return total;
}

}  // namespace serial

namespace parallel {

SignMatrix quantize(const Eigen::MatrixXd& x, const RowMatrix& tau) {
  check_same_shape(x.rows(), x.cols(), tau.rows(), tau.cols(), "quantize");
  SignMatrix y(x.rows(), x.cols());
  const Eigen::Index n = x.rows();
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) quantize_row(x, tau, i, y);
  return y;
}

Eigen::VectorXd sign_mean(const SignMatrix& y) {
  Eigen::VectorXd mu(y.rows());
  const Eigen::Index n = y.rows();
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) mu(i) = row_mean(y, i);
  return mu;
}

Eigen::MatrixXd sign_autocorrelation(const SignMatrix& y) {
  const Eigen::Index n = y.rows();
  Eigen::MatrixXd r(n, n);
#pragma omp parallel for schedule(dynamic)
  for (Eigen::Index i = 0; i < n; ++i) {
    r(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) r(i, j) = pair_sign_correlation(y, i, j);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) r(j, i) = r(i, j);
  }
  return r;
}

Eigen::MatrixXd sign_cross_correlation(const SignMatrix& y, const RowMatrix& v) {
  check_same_shape(y.rows(), y.cols(), v.rows(), v.cols(), "sign_cross_correlation");
  const Eigen::Index n = y.rows();
  const Eigen::Index m = v.rows();
  Eigen::MatrixXd r(n, m);
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) r(i, j) = pair_cross(y, v, i, j);
  }
  return r;
}

double row_sum_log_probability(const SignMatrix& y, const RowMatrix& v,
                               const Eigen::VectorXd& scale, double floor,
                               std::int64_t* clamped) {
  check_log_probability(y, v, scale);
  const Eigen::Index n = y.rows();
  std::vector<double> rows(static_cast<std::size_t>(n), 0.0);
  std::vector<std::int64_t> counts(static_cast<std::size_t>(n), 0);
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    rows[u] = row_log_probability(y, v, i, scale(i), floor, counts[u]);
  }
  double total = 0.0;
  std::int64_t count = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    total += rows[i];
    count += counts[i];
  }
  if (clamped) *clamped = count;
  return total;
}

}  // namespace parallel

RowMatrix to_row_major(const Eigen::MatrixXd& m) { return RowMatrix(m); }

int max_threads() noexcept {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace onebit::kernels
