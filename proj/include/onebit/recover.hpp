#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "onebit/arcsine.hpp"
#include "onebit/numerics.hpp"
#include "onebit/sampling.hpp"

namespace onebit::recover {

enum class Backend { Pade, GaussLegendre, MonteCarlo, Oracle };

std::string_view backend_name(Backend b) noexcept;
/// Accepts "pade", "gl", "mc", "oracle".
Backend parse_backend(std::string_view name);

struct BackendConfig {
  Backend kind = Backend::GaussLegendre;
  std::size_t n_q = 30;           // Gauss-Legendre nodes
  std::size_t n_m = 10000;        // Monte-Carlo points
  std::uint64_t mc_seed = 20220;  // Monte-Carlo node seed
  std::size_t n_starts = 8;       // Pade multi-start count
  std::uint64_t start_seed = 11;  // Pade start-point seed
  double oracle_tol = 1e-10;
  arcsine::QVariant pade_q = arcsine::QVariant::Exact;

  void validate() const;
};

/// Known quantities of one off-diagonal problem: recovered powers and d.
struct PairContext {
  double p0i = 0.0;
  double p0j = 0.0;
  double d = 0.0;

  arcsine::PairParams at(double pij) const noexcept { return {p0i, p0j, pij, d}; }
};

struct Box {
  double lo = 0.0;
  double hi = 0.0;
};

/// Mean-sign inversion for one index: (d / Q^-1((mu + 1) / 2))^2 - sigma_ii.
double recover_variance(double mu, double d, double sigma_ii, std::size_t index = 0);
Eigen::VectorXd recover_variances(const Eigen::VectorXd& mu, const sampling::ThresholdSpec& spec);

/// min(p0i, p0j).
double p_feasible_bound(double p0i, double p0j);
/// [-p_m + eps, p_m - eps] with eps = 1e-9 p_m.
Box feasible_box(double p0i, double p0j);

inline constexpr double kResidualFloor = 1e-300;
/// log(max(residual^2, 1e-300)).
double log_criterion(double residual) noexcept;

// Forward maps p_ij -> approximate R_y(i, j).
double gl_integral(const arcsine::PairParams& p, std::size_t n_q);
double gl_integral(const arcsine::PairParams& p, const numerics::GaussLegendreRule& rule);
std::vector<double> mc_nodes(std::size_t n_m, std::uint64_t seed);
double mc_integral(const arcsine::PairParams& p, std::size_t n_m, std::uint64_t seed);
double mc_integral(const arcsine::PairParams& p, std::span<const double> thetas);
/// Standard error of the Monte-Carlo estimate (sample std of the weighted
/// integrand over the nodes, divided by sqrt(n_m)).
double mc_standard_error(const arcsine::PairParams& p, std::span<const double> thetas);

double criterion_pade(double r_y, const PairContext& ctx, double pij,
                      arcsine::QVariant q = arcsine::QVariant::Exact);
double criterion_gl(double r_y, const PairContext& ctx, double pij, std::size_t n_q);
double criterion_mc(double r_y, const PairContext& ctx, double pij, std::size_t n_m,
                    std::uint64_t seed);

struct EntrySolution {
  double p_hat = 0.0;
  double criterion = 0.0;
  std::size_t iterations = 0;
  bool fallback = false;  // grid-seeded refinement replaced the bracketed search
};

EntrySolution solve_pade(double r_y, const PairContext& ctx, std::size_t n_starts,
                         std::uint64_t seed,
                         arcsine::QVariant q = arcsine::QVariant::Exact);
EntrySolution solve_gl(double r_y, const PairContext& ctx, std::size_t n_q);
EntrySolution solve_mc(double r_y, const PairContext& ctx, std::size_t n_m,
                       std::uint64_t seed);
EntrySolution solve_oracle(double r_y, const PairContext& ctx, double tol = 1e-10);
EntrySolution solve_entry(double r_y, const PairContext& ctx, const BackendConfig& cfg);

/// Minimizes a log criterion over the feasible box with golden-section search
/// and parabolic interpolation, checked against a coarse grid. When the grid
/// finds a deeper point than the bracketed search, the grid minimum is refined
/// instead and the solution is flagged.
EntrySolution minimize_on_box(const numerics::ScalarFunction& criterion, const Box& box,
                              double x_tol = 1e-10, std::size_t grid_points = 64);

enum class EntryStatus { Ok, Fallback, Saturated, Diverged, SolverFailed, Unrecovered };

std::string_view status_name(EntryStatus s) noexcept;

struct EntryDiagnostics {
  std::size_t i = 0;
  std::size_t j = 0;
  double p_hat = 0.0;
  double r_hat = 0.0;
  std::size_t iterations = 0;
  double criterion = 0.0;
  EntryStatus status = EntryStatus::Ok;
};

struct RecoveryReport {
  Backend backend = Backend::GaussLegendre;
  Eigen::MatrixXd p_hat;
  Eigen::MatrixXd r_hat;  // NaN where unrecovered
  std::vector<EntryDiagnostics> entries;  // upper triangle incl. diagonal, row-major
  std::optional<double> nmse;
  double wall_seconds = 0.0;

  std::size_t unrecovered() const;
};

/// ||truth - estimate||_F^2 / ||truth||_F^2.
double nmse(const Eigen::MatrixXd& truth, const Eigen::MatrixXd& estimate);

/// Full recovery from sign statistics: variances on the diagonal, one solve
/// per pair i < j (run concurrently), r_ij = p_ij - sigma(i, j).
RecoveryReport assemble_from_statistics(const Eigen::VectorXd& mu, const Eigen::MatrixXd& r_y,
                                        const sampling::ThresholdSpec& spec,
                                        const BackendConfig& cfg,
                                        const std::optional<Eigen::MatrixXd>& truth = {});

RecoveryReport assemble_covariance(const sampling::OneBitDataset& data,
                                   const sampling::ThresholdSpec& spec,
                                   const BackendConfig& cfg,
                                   const std::optional<Eigen::MatrixXd>& truth = {});

}  // namespace onebit::recover
