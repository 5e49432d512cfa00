#include "onebit/process.hpp"

#include <cmath>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>

#include "onebit/error.hpp"

namespace onebit::process {

namespace {

struct Validator {
  void operator()(const WienerModel& m) const {
    if (m.n == 0) throw ValidationError("wiener: n must be >= 1");
    if (!(m.v_min > 0.0) || !(m.v_min <= m.v_max) || !std::isfinite(m.v_max)) {
      throw ValidationError("wiener: need 0 < v_min <= v_max");
    }
  }
  void operator()(const GarchModel& m) const {
    if (m.n == 0) throw ValidationError("garch: n must be >= 1");
    if (!(m.zeta0 > 0.0)) throw ValidationError("garch: zeta0 must be > 0");
    if (!(m.zeta1 >= 0.0) || !(m.zeta2 >= 0.0)) throw ValidationError("garch: zeta1, zeta2 must be >= 0");
    if (!(m.zeta1 + m.zeta2 < 1.0)) throw ValidationError("garch: zeta1 + zeta2 must be < 1");
  }
  void operator()(const ExplicitCovariance& m) const {
    const auto& r = m.matrix;
    if (r.rows() == 0 || r.rows() != r.cols()) throw ValidationError("explicit: matrix must be square and non-empty");
    if (!r.allFinite()) throw ValidationError("explicit: matrix has non-finite entries");
    const double scale = std::max(1.0, r.cwiseAbs().maxCoeff());
    if ((r - r.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
      throw ValidationError("explicit: matrix is not symmetric");
    }
    if (!is_psd(r)) throw ValidationError("explicit: matrix is not positive semidefinite");
  }
};

Eigen::MatrixXd wiener_covariance(const WienerModel& m) {
  const auto n = static_cast<Eigen::Index>(m.n);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
    v(i) = m.v_min + t * (m.v_max - m.v_min);
  }
  Eigen::MatrixXd r(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double ti = static_cast<double>(i + 1);
      const double tj = static_cast<double>(j + 1);
      r(i, j) = std::sqrt(v(i) * v(j)) * std::sqrt(std::min(ti, tj) / std::max(ti, tj));
    }
  }
  return r;
}

}  // namespace

void validate(const ProcessModel& model) { std::visit(Validator{}, model); }

std::size_t dimension(const ProcessModel& model) {
  return std::visit(
      [](const auto& m) -> std::size_t {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ExplicitCovariance>) {
          return static_cast<std::size_t>(m.matrix.rows());
        } else {
          return m.n;
        }
      },
      model);
}

GarchPath garch_variance_path(const GarchModel& model) {
  validate(model);
  GarchPath path;
  path.initial_variance = model.zeta0 / (1.0 - model.zeta1 - model.zeta2);
  std::mt19937_64 rng(model.path_seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  double prev = path.initial_variance;
  path.variance.reserve(model.n);
  path.innovation.reserve(model.n);
  for (std::size_t t = 0; t < model.n; ++t) {
    const double eps = std::sqrt(prev) * normal(rng);
    path.innovation.push_back(eps);
    prev = model.zeta0 + model.zeta1 * prev + model.zeta2 * eps * eps;
    path.variance.push_back(prev);
  }
  return path;
}

Eigen::MatrixXd truth_covariance(const ProcessModel& model) {
  validate(model);
  if (const auto* w = std::get_if<WienerModel>(&model)) return wiener_covariance(*w);
  if (const auto* g = std::get_if<GarchModel>(&model)) {
    const GarchPath path = garch_variance_path(*g);
    const auto n = static_cast<Eigen::Index>(g->n);
    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) r(i, i) = path.variance[static_cast<std::size_t>(i)];
    return r;
  }
  return std::get<ExplicitCovariance>(model).matrix;
}

Eigen::MatrixXd reference_covariance_5x5() {
  Eigen::MatrixXd r(5, 5);
  r << +0.5040, -0.0065, +0.0015, -0.0036, +0.0044,
       -0.0065, +0.2565, -0.0034, +0.0086, +0.0031,
       +0.0015, -0.0034, +0.3298, +0.0063, +0.0031,
       -0.0036, +0.0086, +0.0063, +0.6376, -0.0062,
       +0.0044, +0.0031, +0.0031, -0.0062, +0.4552;
  return r;
}

bool is_psd(const Eigen::MatrixXd& m, double relative_floor) {
  if (m.rows() == 0) return true;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) return false;
  const double floor = -relative_floor * std::max(std::abs(m.trace()), 1e-300);
  return es.eigenvalues().minCoeff() >= floor;
}

Eigen::MatrixXd symmetric_factor(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success) throw NumericError("symmetric_factor: eigendecomposition failed");
  const double floor = -1e-10 * std::abs(m.trace());
  Eigen::VectorXd ev = es.eigenvalues();
  if (ev.minCoeff() < floor) {
    throw NumericError("symmetric_factor: matrix is not PSD (min eigenvalue " +
                       std::to_string(ev.minCoeff()) + ")");
  }
  ev = ev.cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

Ensemble sample_ensemble(const ProcessModel& model, std::size_t n_x, std::uint64_t seed) {
  if (n_x == 0) throw ValidationError("sample_ensemble: n_x must be >= 1");
  Ensemble e;
  e.truth = truth_covariance(model);
  e.seed = seed;
  const Eigen::MatrixXd f = symmetric_factor(e.truth);
  const auto n = e.truth.rows();
  Eigen::MatrixXd z(n, static_cast<Eigen::Index>(n_x));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Eigen::Index k = 0; k < z.cols(); ++k) {
    for (Eigen::Index i = 0; i < n; ++i) z(i, k) = normal(rng);
  }
  e.samples = f * z;
  return e;
}

Ensemble leading_columns(const Ensemble& ensemble, std::size_t n_x) {
  if (n_x == 0 || n_x > ensemble.n_x()) throw ValidationError("leading_columns: n_x out of range");
  Ensemble out;
  out.samples = ensemble.samples.leftCols(static_cast<Eigen::Index>(n_x));
  out.truth = ensemble.truth;
  out.seed = ensemble.seed;
  return out;
}

}  // namespace onebit::process
