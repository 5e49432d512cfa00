#include <cmath>
#include <random>

#include "doctest.h"

#include "onebit/kernels.hpp"

using namespace onebit::kernels;

namespace {

Eigen::MatrixXd gaussian(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = z(rng);
  return m;
}

bool same_bits(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && a.cwiseEqual(b).all();
}

}  // namespace

TEST_CASE("quantize follows the sign rule with ties to +1") {
  Eigen::MatrixXd x(1, 4);
  x << 1.0, -1.0, 0.25, 0.0;
  RowMatrix tau(1, 4);
  tau << 0.0, 0.0, 0.25, 0.1;
  const SignMatrix s = serial::quantize(x, tau);
  CHECK(s(0, 0) == 1);
  CHECK(s(0, 1) == -1);
  CHECK(s(0, 2) == 1);
  CHECK(s(0, 3) == -1);
}

TEST_CASE("serial and parallel kernels agree bit for bit") {
  const Eigen::MatrixXd x = gaussian(17, 5003, 1);
  const RowMatrix tau = to_row_major(gaussian(17, 5003, 2)).array() + 0.3;
  const SignMatrix ys = serial::quantize(x, tau);
  const SignMatrix yp = parallel::quantize(x, tau);
  CHECK(ys.cwiseEqual(yp).all());

  CHECK(same_bits(serial::sign_mean(ys), parallel::sign_mean(ys)));
  CHECK(same_bits(serial::sign_autocorrelation(ys), parallel::sign_autocorrelation(ys)));
  CHECK(same_bits(serial::sign_cross_correlation(ys, tau), parallel::sign_cross_correlation(ys, tau)));

  Eigen::VectorXd scale = Eigen::VectorXd::LinSpaced(17, 0.5, 3.0);
  std::int64_t cs = 0;
  std::int64_t cp = 0;
  const double ls = serial::row_sum_log_probability(ys, tau, scale, 1e-300, &cs);
  const double lp = parallel::row_sum_log_probability(ys, tau, scale, 1e-300, &cp);
  CHECK(ls == lp);
  CHECK(cs == cp);
}

TEST_CASE("autocorrelation has unit diagonal and is symmetric") {
  const Eigen::MatrixXd x = gaussian(6, 999, 3);
  const SignMatrix y = parallel::quantize(x, RowMatrix::Zero(6, 999));
  const Eigen::MatrixXd r = parallel::sign_autocorrelation(y);
  for (int i = 0; i < 6; ++i) CHECK(r(i, i) == 1.0);
  CHECK(r.cwiseEqual(r.transpose()).all());
}

TEST_CASE("sign statistics of simple patterns") {
  SignMatrix plus = SignMatrix::Constant(3, 10, 1);
  CHECK(parallel::sign_mean(plus).cwiseEqual(Eigen::VectorXd::Ones(3)).all());

  SignMatrix alt(2, 10);
  for (int k = 0; k < 10; ++k) {
    alt(0, k) = (k % 2 == 0) ? 1 : -1;
    alt(1, k) = alt(0, k);
  }
  CHECK(parallel::sign_mean(alt)(0) == 0.0);
  CHECK(parallel::sign_autocorrelation(alt)(0, 1) == 1.0);

  RowMatrix zero = RowMatrix::Zero(2, 10);
  CHECK(parallel::sign_cross_correlation(alt, zero).cwiseEqual(Eigen::MatrixXd::Zero(2, 2)).all());

  RowMatrix v = to_row_major(gaussian(3, 10, 4));
  const Eigen::MatrixXd c = parallel::sign_cross_correlation(plus, v);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(c(i, j) == doctest::Approx(v.row(j).mean()).epsilon(1e-15));
}

TEST_CASE("log probability of a single sign") {
  SignMatrix y = SignMatrix::Constant(1, 1, 1);
  RowMatrix v = RowMatrix::Zero(1, 1);
  Eigen::VectorXd scale = Eigen::VectorXd::Ones(1);
  std::int64_t clamped = 0;
  CHECK(serial::row_sum_log_probability(y, v, scale, 1e-300, &clamped) ==
        doctest::Approx(std::log(0.5)).epsilon(1e-15));
  CHECK(clamped == 0);

  // A deep tail is floored and counted.
  v(0, 0) = 60.0;
  CHECK(serial::row_sum_log_probability(y, v, scale, 1e-300, &clamped) ==
        doctest::Approx(std::log(1e-300)).epsilon(1e-12));
  CHECK(clamped == 1);
}

TEST_CASE("row-major conversion") {
  const Eigen::MatrixXd m = gaussian(3, 4, 5);
  const RowMatrix r = to_row_major(m);
  CHECK(r.cwiseEqual(RowMatrix(m)).all());
  CHECK(max_threads() >= 1);
}
