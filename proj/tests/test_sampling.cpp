#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "onebit/error.hpp"
#include "onebit/sampling.hpp"

using namespace onebit;
using namespace onebit::sampling;

namespace {

// Independent rows of +-1 with P(+1) = 1/2.
OneBitDataset coin_flips(Eigen::Index n, Eigen::Index n_x, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  OneBitDataset data;
  data.signs.resize(n, n_x);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < n_x; ++k) data.signs(i, k) = coin(rng) ? 1 : -1;
  data.thresholds = RowMatrix::Zero(n, n_x);
  data.spec = ThresholdSpec::scalar(0.0, 0.0, static_cast<std::size_t>(n));
  return data;
}

}  // namespace

TEST_CASE("threshold spec") {
  const ThresholdSpec s = ThresholdSpec::scalar(0.5, 0.2, 4);
  CHECK(s.dimension() == 4);
  CHECK(s.is_scalar_diagonal());
  CHECK(s.sigma_tau2() == 0.2);
  ThresholdSpec full = s;
  full.sigma(0, 1) = full.sigma(1, 0) = 0.05;
  CHECK(!full.is_scalar_diagonal());
  CHECK_THROWS_AS(full.sigma_tau2(), ValidationError);
  full.validate();
  ThresholdSpec bad = s;
  bad.sigma(2, 2) = -0.1;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("dataset shape and sign alphabet") {
  const auto e = process::sample_ensemble(process::WienerModel{8, 0.2, 0.8}, 300, 1);
  const OneBitDataset d = quantize(e, ThresholdSpec::scalar(0.5, 0.2, 8), 2);
  CHECK(d.n() == 8);
  CHECK(d.n_x() == 300);
  CHECK((d.signs.array() == 1 || d.signs.array() == -1).all());
  // The signs are the comparison of x with the stored thresholds.
  for (Eigen::Index i = 0; i < 8; ++i)
    for (Eigen::Index k = 0; k < 300; ++k)
      CHECK(d.signs(i, k) == (e.samples(i, k) >= d.thresholds(i, k) ? 1 : -1));
  CHECK_THROWS_AS(quantize(e, ThresholdSpec::scalar(0.5, 0.2, 7), 2), ValidationError);
}

TEST_CASE("quantize is deterministic") {
  const auto e = process::sample_ensemble(process::WienerModel{8, 0.2, 0.8}, 300, 1);
  const OneBitDataset a = quantize(e, ThresholdSpec::scalar(0.5, 0.2, 8), 9);
  const OneBitDataset b = quantize(e, ThresholdSpec::scalar(0.5, 0.2, 8), 9);
  CHECK(a.signs.cwiseEqual(b.signs).all());
  CHECK(a.thresholds.cwiseEqual(b.thresholds).all());
}

TEST_CASE("sign means match the mean-sign law") {
  const auto e = process::sample_ensemble(process::WienerModel{100, 0.2, 0.8}, 10000, 11);
  const ThresholdSpec spec = ThresholdSpec::scalar(0.5, 0.2, 100);
  const Eigen::VectorXd mu = sample_mean(quantize(e, spec, 12));
  for (Eigen::Index i = 0; i < 100; ++i) {
    const double p0 = e.truth(i, i) + 0.2;
    const double expected = 2.0 * oracle::normal_tail(0.5 / std::sqrt(p0)) - 1.0;
    const double sd = std::sqrt((1.0 - expected * expected) / 10000.0);
    CHECK(std::abs(mu(i) - expected) <= 3.5 * sd);
  }
}

TEST_CASE("sign means converge at one hundred thousand realizations") {
  const std::size_t n_x = 100000;
  const auto e = process::sample_ensemble(process::WienerModel{10, 0.2, 0.8}, n_x, 13);
  const Eigen::VectorXd mu = sample_mean(quantize(e, ThresholdSpec::scalar(0.5, 0.2, 10), 14));
  for (Eigen::Index i = 0; i < 10; ++i) {
    const double expected = 2.0 * oracle::normal_tail(0.5 / std::sqrt(e.truth(i, i) + 0.2)) - 1.0;
    CHECK(std::abs(mu(i) - expected) <= 5.0 / std::sqrt(static_cast<double>(n_x)));
  }
}

TEST_CASE("zero threshold mean gives near-zero sign means") {
  const auto e = process::sample_ensemble(process::WienerModel{10, 0.2, 0.8}, 100000, 15);
  ThresholdSpec spec = ThresholdSpec::scalar(0.0, 0.3, 10);
  spec.sigma(0, 1) = spec.sigma(1, 0) = 0.1;
  const Eigen::VectorXd mu = sample_mean(quantize(e, spec, 16));
  CHECK(mu.cwiseAbs().maxCoeff() <= 0.02);
}

TEST_CASE("simple sign patterns") {
  OneBitDataset plus = coin_flips(3, 10, 1);
  plus.signs.setConstant(1);
  CHECK(sample_mean(plus).cwiseEqual(Eigen::VectorXd::Ones(3)).all());

  OneBitDataset alt = coin_flips(2, 10, 1);
  for (int k = 0; k < 10; ++k) alt.signs(0, k) = alt.signs(1, k) = (k % 2 == 0) ? 1 : -1;
  CHECK(sample_mean(alt)(0) == 0.0);
  CHECK(sample_autocorrelation(alt)(0, 1) == 1.0);
  CHECK(sample_cross_correlation(alt).cwiseEqual(Eigen::MatrixXd::Zero(2, 2)).all());
}

TEST_CASE("independent rows are nearly uncorrelated") {
  const OneBitDataset d = coin_flips(5, 100000, 21);
  const Eigen::MatrixXd r = sample_autocorrelation(d);
  for (int i = 0; i < 5; ++i) {
    CHECK(r(i, i) == 1.0);
    for (int j = 0; j < 5; ++j)
      if (i != j) CHECK(std::abs(r(i, j)) <= 0.02);
  }
  CHECK(r.cwiseEqual(r.transpose()).all());
}

TEST_CASE("sign-threshold correlation against brute force") {
  // Diagonal entries: E{sign(x - tau) tau} for one scalar pair, estimated
  // with an independent one-million-draw simulation.
  const double d = 0.3;
  const double s2 = 0.1;
  const auto e = process::sample_ensemble(process::WienerModel{6, 0.2, 0.8}, 10000, 31);
  const OneBitDataset data = quantize(e, ThresholdSpec::scalar(d, s2, 6), 32);
  const Eigen::MatrixXd r = sample_cross_correlation(data);
  CHECK(r.allFinite());

  for (Eigen::Index i = 0; i < 6; ++i) {
    std::mt19937_64 rng(1000 + static_cast<std::uint64_t>(i));
    std::normal_distribution<double> z;
    const double sx = std::sqrt(e.truth(i, i));
    const double st = std::sqrt(s2);
    const int m = 1000000;
    double sum = 0.0;
    double sum2 = 0.0;
    for (int k = 0; k < m; ++k) {
      const double x = sx * z(rng);
      const double tau = d + st * z(rng);
      const double v = (x >= tau ? 1.0 : -1.0) * tau;
      sum += v;
      sum2 += v * v;
    }
    const double mean = sum / m;
    const double var = sum2 / m - mean * mean;
    const double tol = 4.0 * std::sqrt(var / 10000.0 + var / m);
    CHECK(std::abs(r(i, i) - mean) <= tol);
    // Off-diagonal entries factor because tau_j is independent of y_i.
    for (Eigen::Index j = 0; j < 6; ++j) {
      if (j == i) continue;
      const double p0 = e.truth(i, i) + s2;
      const double ey = 2.0 * oracle::normal_tail(d / std::sqrt(p0)) - 1.0;
      CHECK(std::abs(r(i, j) - ey * d) <= 4.0 * std::sqrt((d * d + s2) / 10000.0));
    }
  }
}

TEST_CASE("select slices rows, realizations and the threshold covariance") {
  const auto e = process::sample_ensemble(process::WienerModel{8, 0.2, 0.8}, 200, 1);
  ThresholdSpec spec = ThresholdSpec::scalar(0.5, 0.2, 8);
  spec.sigma(3, 4) = spec.sigma(4, 3) = 0.05;
  const OneBitDataset d = quantize(e, spec, 2);
  const OneBitDataset s = select(d, 2, 4, 50);
  CHECK(s.n() == 4);
  CHECK(s.n_x() == 50);
  CHECK(s.signs.cwiseEqual(d.signs.block(2, 0, 4, 50)).all());
  CHECK(s.spec.sigma(1, 2) == 0.05);
  CHECK_THROWS_AS(select(d, 6, 4, 50), ValidationError);
  CHECK_THROWS_AS(select(d, 0, 4, 201), ValidationError);
}
