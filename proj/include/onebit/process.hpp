#pragma once

#include <cstddef>
#include <cstdint>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace onebit::process {

/// Brownian-type source whose variance ramps linearly from v_min (first
/// state) to v_max (last state). Correlations follow the Wiener structure
/// min(t_i, t_j) / sqrt(t_i t_j) with t_i = i + 1.
struct WienerModel {
  std::size_t n = 0;
  double v_min = 0.2;
  double v_max = 0.8;
};

/// GARCH(1,1) variance path sigma2_t = zeta0 + zeta1 sigma2_{t-1} + zeta2 eps_{t-1}^2.
/// The path is one realization fixed by `path_seed`; the ensemble then draws
/// x ~ N(0, diag(sigma2_t)).
struct GarchModel {
  std::size_t n = 0;
  double zeta0 = 0.1;
  double zeta1 = 0.2;
  double zeta2 = 0.3;
  std::uint64_t path_seed = 1;
};

struct ExplicitCovariance {
  Eigen::MatrixXd matrix;
};

using ProcessModel = std::variant<WienerModel, GarchModel, ExplicitCovariance>;

/// Throws ValidationError on a malformed model.
void validate(const ProcessModel& model);

std::size_t dimension(const ProcessModel& model);

struct GarchPath {
  double initial_variance = 0.0;   // sigma2_0, the unconditional variance
  std::vector<double> variance;    // sigma2_1 .. sigma2_n
  std::vector<double> innovation;  // eps_0 .. eps_{n-1}, eps_t ~ N(0, sigma2_t)
};

GarchPath garch_variance_path(const GarchModel& model);

Eigen::MatrixXd truth_covariance(const ProcessModel& model);

/// The 5x5 non-Toeplitz covariance used for the method comparison table.
Eigen::MatrixXd reference_covariance_5x5();

struct Ensemble {
  Eigen::MatrixXd samples;  // N x N_x, one realization per column
  Eigen::MatrixXd truth;    // N x N
  std::uint64_t seed = 0;

  std::size_t n() const noexcept { return static_cast<std::size_t>(samples.rows()); }
  std::size_t n_x() const noexcept { return static_cast<std::size_t>(samples.cols()); }
};

/// Symmetric factor F with F F^T = m, from an eigendecomposition with
/// negative eigenvalues clipped to zero. Eigenvalues below -1e-10 trace(m)
/// raise NumericError.
Eigen::MatrixXd symmetric_factor(const Eigen::MatrixXd& m);

bool is_psd(const Eigen::MatrixXd& m, double relative_floor = 1e-10);

Ensemble sample_ensemble(const ProcessModel& model, std::size_t n_x, std::uint64_t seed);

/// The first `n_x` realizations of an ensemble (nested sample designs).
Ensemble leading_columns(const Ensemble& ensemble, std::size_t n_x);

}  // namespace onebit::process
