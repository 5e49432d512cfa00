#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"

#include "onebit/arcsine.hpp"
#include "onebit/error.hpp"

using namespace onebit;
using namespace onebit::arcsine;

namespace {
constexpr double kPi = std::numbers::pi;
const PairParams kFitness{0.8, 0.7, 0.05, 0.7};
}  // namespace

TEST_CASE("alpha and beta") {
  const PairParams p{0.6, 0.4, 0.1, 0.5};
  const AlphaBeta at0 = alpha_beta(0.0, p);
  CHECK(at0.beta == doctest::Approx(0.5 * 0.4 / p.determinant()).epsilon(1e-15));
  CHECK(at0.beta > 0.0);

  for (double t = 0.0; t <= kHalfPi; t += 0.1) CHECK(alpha_beta(t, {0.6, 0.4, 0.1, 0.0}).alpha == 0.0);

  // Written out by hand at theta = pi/4 where sin = cos = 1/sqrt(2).
  const double h = std::numbers::sqrt2 / 2.0;
  const double det = 0.8 * 0.7 - 0.05 * 0.05;
  const AlphaBeta ab = alpha_beta(kPi / 4.0, kFitness);
  CHECK(ab.alpha == doctest::Approx(0.7 * (0.8 * h + 0.7 * h - 0.05 * 2.0 * h) / det).epsilon(1e-14));
  CHECK(ab.beta == doctest::Approx((0.7 * 0.5 + 0.8 * 0.5 - 0.05) / (2.0 * det)).epsilon(1e-14));
  CHECK(ab.alpha == doctest::Approx(1.2429859113234381).epsilon(1e-14));
  CHECK(ab.beta == doctest::Approx(0.62780269058295957).epsilon(1e-14));

  CHECK_THROWS_AS(alpha_beta(0.0, {0.5, 0.5, 0.5, 0.3}), DomainError);
  CHECK_THROWS_AS(alpha_beta(2.0, p), DomainError);
}

TEST_CASE("beta is positive on the whole interval") {
  for (double pij : {-0.69, -0.3, 0.0, 0.3, 0.69}) {
    const PairParams p{0.8, 0.6, pij, 0.4};
    for (int k = 0; k <= 200; ++k) CHECK(alpha_beta(kHalfPi * k / 200.0, p).beta > 0.0);
  }
}

TEST_CASE("chi") {
  CHECK(chi({1.0, 1.0, 0.0, 0.0}) == doctest::Approx(1.0 / kPi).epsilon(1e-15));
  CHECK(chi({0.4, 0.4, 0.0, 0.3}) ==
        doctest::Approx(1.0 / (0.4 * kPi) * std::exp(-0.09 * 0.8 / (2.0 * 0.16))).epsilon(1e-14));
  const double c = chi({0.5040 + 0.2, 0.2565 + 0.2, -0.0065, 0.5});
  CHECK(std::isfinite(c));
  CHECK(c > 0.0);
}

TEST_CASE("integrands") {
  for (double t = 0.0; t <= kHalfPi; t += 0.2) {
    CHECK(integrand_d1(t, {0.6, 0.4, 0.1, 0.0}) == 0.0);
    CHECK(integrand_d2(t, {0.6, 0.4, 0.1, 0.0}) == 0.0);
    CHECK(integrand_delta(t, {0.6, 0.4, 0.1, 0.0}) == 0.0);
  }
  const IntegrandValue v = evaluate_integrands(kPi / 4.0, kFitness);
  CHECK(std::isfinite(v.d1));
  CHECK(std::isfinite(v.d2));
  CHECK(std::exp(v.alpha * v.alpha / (4.0 * v.beta)) < 2.0);

  // alpha flips with d; D2 is odd in alpha, D1 keeps the sign of alpha.
  const PairParams neg{0.8, 0.7, 0.05, -0.7};
  CHECK(integrand_d2(0.3, neg) == doctest::Approx(-integrand_d2(0.3, kFitness)).epsilon(1e-14));
  CHECK(integrand_d1(0.3, neg) < 0.0);
  CHECK(integrand_d1(0.3, kFitness) > 0.0);

  CHECK(std::isfinite(integrand_delta(kHalfPi, kFitness)));
  CHECK(std::isfinite(integrand_delta(0.0, kFitness)));
}

TEST_CASE("growth guard reports theta") {
  const PairParams wild{0.8, 0.3, 0.48, 3.0};
  bool thrown = false;
  try {
    integrand_d2(kPi / 4.0, wild);
  } catch (const BoundedGrowthError& e) {
    thrown = true;
    CHECK(e.theta() == doctest::Approx(kPi / 4.0));
    CHECK(e.exponent() > std::log(kGrowthCeiling));
  }
  CHECK(thrown);
}

TEST_CASE("closed-form first part") {
  CHECK(closed_form_first_part({0.6, 0.4, 0.0, 0.2}) ==
        doctest::Approx(kPi * std::sqrt(0.24)).epsilon(1e-15));
  const double quad = oracle::simpson(
      [](double t) {
        const double c = std::cos(t);
        const double s = std::sin(t);
        return 2.0 * 0.75 / (c * c + s * s - 0.5 * std::sin(2.0 * t));
      },
      0.0, kHalfPi, 1e-15);
  CHECK(quad == doctest::Approx(std::sqrt(0.75) * 4.0 * kPi / 3.0).epsilon(1e-13));
  CHECK(closed_form_first_part({1.0, 1.0, 0.5, 0.0}) == doctest::Approx(quad).epsilon(1e-13));
  CHECK(closed_form_first_part({1.0, 1.0, 1.0 - 1e-12, 0.0}) < 1e-5);
}

TEST_CASE("oracle reduces to the arcsine law at zero threshold mean") {
  CHECK(output_autocorrelation_oracle({0.6, 0.4, 0.0, 0.0}) == doctest::Approx(0.0).epsilon(1e-15));
  for (double p0i : {0.2, 0.7, 1.3})
    for (double p0j : {0.3, 0.9})
      for (double f : {-0.95, -0.5, 0.0, 0.3, 0.9}) {
        const PairParams p{p0i, p0j, f * std::sqrt(p0i * p0j), 0.0};
        CHECK(std::abs(output_autocorrelation_oracle(p) - arcsine_law(p)) <= 1e-10);
      }
}

TEST_CASE("oracle against the bivariate orthant integral") {
  // Independent route: 4 P(++) - 2 P(w_i > 0) - 2 P(w_j > 0) + 1.
  const double reference = oracle::sign_correlation(0.7, 0.5, 0.1, 0.3);
  CHECK(reference == doctest::Approx(0.18579146850217654).epsilon(1e-12));
  CHECK(std::abs(output_autocorrelation_oracle({0.7, 0.5, 0.1, 0.3}) - reference) <= 1e-10);
  CHECK(std::abs(output_autocorrelation_oracle(kFitness) - 0.36066814690392091) <= 1e-10);

  for (double d : {0.1, 0.3, 0.5})
    for (double p0i : {0.3, 0.8})
      for (double p0j : {0.4, 1.0})
        for (double f : {-0.6, -0.1, 0.2, 0.7}) {
          const double pij = f * std::sqrt(p0i * p0j);
          CHECK(std::abs(output_autocorrelation_oracle({p0i, p0j, pij, d}) -
                         oracle::sign_correlation(p0i, p0j, pij, d)) <= 1e-9);
        }
}

TEST_CASE("oracle against ten million bivariate draws") {
  const auto mc = oracle::sign_correlation_mc(0.7, 0.5, 0.1, 0.3, 10000000, 2024);
  CHECK(std::abs(output_autocorrelation_oracle({0.7, 0.5, 0.1, 0.3}) - mc.mean) <=
        3.0 / std::sqrt(1e7));
}

TEST_CASE("oracle is monotone in p_ij and stays a correlation") {
  for (double d : {0.0, 0.3, 0.7}) {
    const double p0i = 0.8;
    const double p0j = 0.5;
    const double pm = std::sqrt(p0i * p0j);
    double prev = -2.0;
    for (int k = 0; k < 40; ++k) {
      const double pij = -pm * 0.95 + 1.9 * pm * k / 39.0;
      const double r = output_autocorrelation_oracle({p0i, p0j, pij, d});
      CHECK(r > prev);
      CHECK(r <= 1.0 + 1e-10);
      CHECK(r >= -1.0 - 1e-10);
      prev = r;
    }
  }
}

TEST_CASE("oracle approaches one in the perfect-correlation limit") {
  // 1 - R_y shrinks like sqrt(1 - rho); each value is checked against the
  // orthant integral to 10 tol on the way.
  for (double d : {0.0, 0.3, 0.5}) {
    double prev_gap = 1.0;
    for (double delta : {1e-2, 1e-4, 1e-6}) {
      const double p0 = 0.5;
      const double r = output_autocorrelation_oracle({p0, p0, p0 * (1.0 - delta), d});
      CHECK(std::abs(r - oracle::sign_correlation(p0, p0, p0 * (1.0 - delta), d)) <= 1e-9);
      const double gap = 1.0 - r;
      CHECK(gap > 0.0);
      CHECK(gap < prev_gap);
      CHECK(gap <= std::sqrt(delta));
      prev_gap = gap;
    }
  }
}

TEST_CASE("oracle refuses an ill-conditioned pair instead of guessing") {
  // The determinant carries ~8 fewer significant digits here than the inputs.
  CHECK_THROWS_AS(output_autocorrelation_oracle({0.5, 0.5, 0.5 * (1.0 - 1e-10), 0.3}),
                  NumericError);
}

TEST_CASE("exponent bound") {
  const ExponentBound b = exponent_bound_check(kFitness, 2.0);
  CHECK(b.holds);
  CHECK(b.max_value > 0.0);
  CHECK(b.max_theta >= 0.0);
  CHECK(b.max_theta <= kHalfPi);
  CHECK(exponent_bound_check({0.6, 0.4, 0.1, 0.0}, 1.0 + 1e-9).holds);
  CHECK(!exponent_bound_check(kFitness, 1.0 + 1e-12).holds);
  CHECK_THROWS_AS(exponent_bound_check(kFitness, 1.0), DomainError);

  // The refined maximum dominates a dense scan.
  double scan = 0.0;
  PairParams unit = kFitness;
  unit.d = 1.0;
  for (int k = 0; k <= 20000; ++k) {
    const AlphaBeta ab = alpha_beta(kHalfPi * k / 20000.0, unit);
    scan = std::max(scan, ab.alpha * ab.alpha / (4.0 * ab.beta));
  }
  CHECK(b.max_value >= scan - 1e-12);
}

TEST_CASE("weighted difference equals chi times D2 - D1") {
  for (double t = 0.0; t <= kHalfPi; t += 0.1) {
    for (const PairParams& p : {kFitness, PairParams{0.7, 0.5, 0.1, 0.3}, PairParams{0.6, 0.9, -0.4, -0.5}}) {
      const double direct = chi(p) * (integrand_d2(t, p) - integrand_d1(t, p));
      CHECK(weighted_difference(t, p) == doctest::Approx(direct).epsilon(1e-12));
    }
  }
  CHECK(weighted_difference(0.4, {0.6, 0.4, 0.1, 0.0}) == 0.0);
  // Near the edge of the feasible box the separate factors overflow the guard.
  const PairParams edge{0.3, 0.3, -0.3 * (1.0 - 1e-9), 0.3};
  CHECK_THROWS_AS(integrand_d2(0.00244, edge), BoundedGrowthError);
  CHECK(std::isfinite(weighted_difference(0.00244, edge)));
}
