#include "onebit/threshold.hpp"

#include <cmath>
#include <limits>

#include "onebit/error.hpp"
#include "onebit/kernels.hpp"
#include "onebit/numerics.hpp"
#include "onebit/recover.hpp"

namespace onebit::threshold {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kProbabilityFloor = 1e-300;
}  // namespace

Eigen::VectorXd constrained_variances(const Eigen::VectorXd& mu, double d, double sigma_tau2) {
  Eigen::VectorXd r(mu.size());
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    try {
      r(i) = recover::recover_variance(mu(i), d, sigma_tau2, static_cast<std::size_t>(i));
    } catch (const DivergenceError&) {
      r(i) = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return r;
}

LogLikelihood log_likelihood_given_variances(const sampling::SignMatrix& signs,
                                             const sampling::RowMatrix& thresholds,
                                             const Eigen::VectorXd& r0) {
  if (r0.size() != signs.rows()) throw ValidationError("log_likelihood: variance count mismatch");
  LogLikelihood out;
  if (!(r0.array() > 0.0).all()) {
    out.feasible = false;
    out.value = -kInf;
    return out;
  }
  const Eigen::VectorXd scale = r0.cwiseSqrt().cwiseInverse();
  out.value = kernels::parallel::row_sum_log_probability(signs, thresholds, scale,
                                                         kProbabilityFloor, &out.clamped_terms);
  return out;
}

LogLikelihood log_likelihood(const sampling::OneBitDataset& data, double d, double sigma_tau2) {
  if (!(sigma_tau2 >= 0.0)) throw DomainError("log_likelihood: sigma_tau2 must be >= 0");
  const Eigen::VectorXd mu = sampling::sample_mean(data);
  return log_likelihood_given_variances(data.signs, data.thresholds,
                                        constrained_variances(mu, d, sigma_tau2));
}

ThresholdEstimate maximize_constrained_likelihood(
    const std::function<double(const Eigen::VectorXd&)>& loglik, const Eigen::VectorXd& mu,
    const MleOptions& o) {
  if (o.grid < 2 || !(o.d_min < o.d_max) || !(o.s2_min < o.s2_max) || !(o.s2_min >= 0.0)) {
    throw DomainError("maximize_constrained_likelihood: malformed search box");
  }
  const auto objective = [&](const std::array<double, 2>& x) {
    if (x[0] < o.d_min || x[0] > o.d_max || x[1] < o.s2_min || x[1] > o.s2_max) return kInf;
    const Eigen::VectorXd r0 = constrained_variances(mu, x[0], x[1]);
    if (!(r0.array() > 0.0).all()) return kInf;
    const double v = loglik(r0);
    return std::isfinite(v) ? -v : kInf;
  };

  const double dd = (o.d_max - o.d_min) / static_cast<double>(o.grid - 1);
  const double ds = (o.s2_max - o.s2_min) / static_cast<double>(o.grid - 1);
  std::array<double, 2> seed{};
  double best = kInf;
  for (std::size_t a = 0; a < o.grid; ++a) {
    for (std::size_t b = 0; b < o.grid; ++b) {
      const std::array<double, 2> x{o.d_min + dd * static_cast<double>(a),
                                    o.s2_min + ds * static_cast<double>(b)};
      const double v = objective(x);
      if (v < best) {
        best = v;
        seed = x;
      }
    }
  }
  if (!std::isfinite(best)) {
    throw InfeasibleError("every grid point implies a non-positive variance");
  }

  // Step inward so the initial simplex stays inside the box.
  const std::array<double, 2> step{seed[0] + dd <= o.d_max ? dd : -dd,
                                   seed[1] + ds <= o.s2_max ? ds : -ds};
  const auto nm = numerics::minimize_nelder_mead(objective, seed, step, o.f_tol, o.x_tol, 2000);

  ThresholdEstimate out;
  out.grid_seed = seed;
  out.iterations = nm.iterations;
  if (nm.fx <= best) {
    out.d = nm.x[0];
    out.sigma_tau2 = nm.x[1];
    out.log_likelihood = -nm.fx;
  } else {
    out.d = seed[0];
    out.sigma_tau2 = seed[1];
    out.log_likelihood = -best;
  }
  return out;
}

ThresholdEstimate estimate_threshold(const sampling::OneBitDataset& data, const MleOptions& options) {
  const Eigen::VectorXd mu = sampling::sample_mean(data);
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    if (std::abs(mu(i)) >= 1.0) {
      throw SaturationError("sign mean is saturated; the likelihood constraint is undefined",
                            static_cast<std::size_t>(i));
    }
  }
  return maximize_constrained_likelihood(
      [&data](const Eigen::VectorXd& r0) {
        return log_likelihood_given_variances(data.signs, data.thresholds, r0).value;
      },
      mu, options);
}

double scalar_nmse(double truth, double estimate) {
  if (truth == 0.0) throw DomainError("scalar_nmse: truth must be nonzero");
  const double e = truth - estimate;
  return e * e / (truth * truth);
}

}  // namespace onebit::threshold
