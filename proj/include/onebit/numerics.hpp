#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace onebit::numerics {

using ScalarFunction = std::function<double(double)>;

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
  std::size_t intervals = 0;
  bool converged = false;
};

/// Globally adaptive 7/15-point Gauss-Kronrod quadrature on [a, b]. The
/// interval with the largest error estimate is bisected until the summed
/// estimate drops below `abs_tol` or `max_intervals` is reached.
QuadratureResult integrate_adaptive(const ScalarFunction& f, double a, double b,
                                    double abs_tol, std::size_t max_intervals = 4000);

/// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration
/// on the Legendre three-term recurrence.
class GaussLegendreRule {
 public:
  explicit GaussLegendreRule(std::size_t n);

  std::size_t size() const noexcept { return nodes_.size(); }
  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }

  double integrate(const ScalarFunction& f, double a, double b) const;

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

struct MinimizeResult {
  double x = 0.0;
  double fx = 0.0;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  bool converged = false;
};

/// Golden-section search with parabolic interpolation (Brent) for a scalar
/// function on [lo, hi]. Stops when the bracket half-width is below
/// 2 * (x_tol + 1e-15 |x|).
MinimizeResult minimize_golden_parabolic(const ScalarFunction& f, double lo, double hi,
                                         double x_tol = 1e-10,
                                         std::size_t max_iterations = 500);

struct MinimizeResult2 {
  std::array<double, 2> x{};
  double fx = 0.0;
  std::size_t iterations = 0;
  std::size_t evaluations = 0;
  bool converged = false;
};

using PlanarFunction = std::function<double(const std::array<double, 2>&)>;

/// Nelder-Mead downhill simplex in two dimensions. Infinite values are
/// allowed and act as walls.
MinimizeResult2 minimize_nelder_mead(const PlanarFunction& f, std::array<double, 2> start,
                                     std::array<double, 2> step, double f_tol = 1e-10,
                                     double x_tol = 1e-9, std::size_t max_iterations = 1000);

/// splitmix64 finalizer applied to (seed, stream); used to derive disjoint
/// per-experiment seeds from one user seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

}  // namespace onebit::numerics
