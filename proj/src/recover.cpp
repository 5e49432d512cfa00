#include "onebit/recover.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <utility>

#include "onebit/error.hpp"
#include "onebit/pade.hpp"
#include "onebit/special.hpp"

namespace onebit::recover {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using arcsine::PairParams;

// Criterion values outside the domain of the forward map become +inf walls.
template <class F>
double guarded(F&& forward) {
  try {
    const double v = forward();
    return std::isnan(v) ? kInf : v;
  } catch (const Error&) {
    return kInf;
  }
}

double clamp_to(const Box& box, double x) { return std::min(box.hi, std::max(box.lo, x)); }

}  // namespace

std::string_view backend_name(Backend b) noexcept {
  switch (b) {
    case Backend::Pade: return "pade";
    case Backend::GaussLegendre: return "gl";
    case Backend::MonteCarlo: return "mc";
    case Backend::Oracle: return "oracle";
  }
  return "unknown";
}

Backend parse_backend(std::string_view name) {
  if (name == "pade") return Backend::Pade;
  if (name == "gl") return Backend::GaussLegendre;
  if (name == "mc") return Backend::MonteCarlo;
  if (name == "oracle") return Backend::Oracle;
  throw ValidationError("unknown backend '" + std::string(name) + "' (expected pade|gl|mc|oracle)");
}

void BackendConfig::validate() const {
  if (n_q < 2) throw ValidationError("n_q must be >= 2");
  if (n_m < 1) throw ValidationError("n_m must be >= 1");
  if (n_starts < 1) throw ValidationError("n_starts must be >= 1");
  if (!(oracle_tol >= 1e-12)) throw ValidationError("oracle_tol must be >= 1e-12");
}

double recover_variance(double mu, double d, double sigma_ii, std::size_t index) {
  if (!std::isfinite(mu) || !std::isfinite(d) || !std::isfinite(sigma_ii)) {
    throw DomainError("recover_variance: non-finite input at index " + std::to_string(index));
  }
  if (d == 0.0) throw DomainError("recover_variance: threshold mean d must be nonzero");
  if (mu <= -1.0 || mu >= 1.0) {
    throw SaturationError("sign mean is saturated at index " + std::to_string(index), index);
  }
  const double q = special::q_inverse(0.5 * (mu + 1.0));
  if (q == 0.0) {
    throw DivergenceError("zero sign mean with nonzero d at index " + std::to_string(index), index);
  }
  if ((q > 0.0) != (d > 0.0)) {
    // (mu + 1) / 2 on the far side of 1/2 from Q(0): no finite power reaches it.
    throw DivergenceError("sign mean has the wrong sign for d at index " + std::to_string(index), index);
  }
  const double ratio = d / q;
  return ratio * ratio - sigma_ii;
}

Eigen::VectorXd recover_variances(const Eigen::VectorXd& mu, const sampling::ThresholdSpec& spec) {
  if (static_cast<std::size_t>(mu.size()) != spec.dimension()) {
    throw ValidationError("recover_variances: dimension mismatch");
  }
  Eigen::VectorXd r(mu.size());
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    r(i) = recover_variance(mu(i), spec.d, spec.sigma(i, i), static_cast<std::size_t>(i));
  }
  return r;
}

double p_feasible_bound(double p0i, double p0j) {
  if (!(p0i > 0.0) || !(p0j > 0.0)) throw DomainError("p_feasible_bound: powers must be > 0");
  return std::min(p0i, p0j);
}

Box feasible_box(double p0i, double p0j) {
  const double pm = p_feasible_bound(p0i, p0j);
  const double eps = 1e-9 * pm;
  return {-pm + eps, pm - eps};
}

double log_criterion(double residual) noexcept {
  return std::log(std::max(residual * residual, kResidualFloor));
}

double gl_integral(const PairParams& p, const numerics::GaussLegendreRule& rule) {
  p.validate();
  const double x = arcsine::chi(p);
  const double first = arcsine::closed_form_first_part(p);
  if (p.d == 0.0) return x * first - 1.0;
  constexpr double quarter = std::numbers::pi / 4.0;
  const auto nodes = rule.nodes();
  const auto weights = rule.weights();
  double s = 0.0;
  for (std::size_t e = 0; e < rule.size(); ++e) {
    s += weights[e] * arcsine::detail::weighted_difference(quarter * (nodes[e] + 1.0), p);
  }
  return x * first + quarter * s - 1.0;
}

double gl_integral(const PairParams& p, std::size_t n_q) {
  return gl_integral(p, numerics::GaussLegendreRule(n_q));
}

std::vector<double> mc_nodes(std::size_t n_m, std::uint64_t seed) {
  if (n_m < 1) throw DomainError("mc_nodes: n_m must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, arcsine::kHalfPi);
  std::vector<double> t(n_m);
  for (auto& v : t) v = u(rng);
  return t;
}

double mc_integral(const PairParams& p, std::span<const double> thetas) {
  p.validate();
  if (thetas.empty()) throw DomainError("mc_integral: no nodes");
  const double x = arcsine::chi(p);
  const double first = arcsine::closed_form_first_part(p);
  if (p.d == 0.0) return x * first - 1.0;
  double s = 0.0;
  for (double t : thetas) s += arcsine::detail::weighted_difference(t, p);
  const double w = std::numbers::pi / (2.0 * static_cast<double>(thetas.size()));
  return x * first + w * s - 1.0;
}

double mc_integral(const PairParams& p, std::size_t n_m, std::uint64_t seed) {
  const auto t = mc_nodes(n_m, seed);
  return mc_integral(p, t);
}

double mc_standard_error(const PairParams& p, std::span<const double> thetas) {
  p.validate();
  const std::size_t n = thetas.size();
  if (n < 2) throw DomainError("mc_standard_error: need at least two nodes");
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t k = 0;
  for (double t : thetas) {
    const double v = arcsine::kHalfPi * arcsine::detail::weighted_difference(t, p);
    ++k;
    const double delta = v - mean;
    mean += delta / static_cast<double>(k);
    m2 += delta * (v - mean);
  }
  return std::sqrt(m2 / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n));
}

double criterion_pade(double r_y, const PairContext& ctx, double pij, arcsine::QVariant q) {
  return guarded([&] { return log_criterion(r_y - pade::pade_integral(ctx.at(pij), q)); });
}

double criterion_gl(double r_y, const PairContext& ctx, double pij, std::size_t n_q) {
  return guarded([&] { return log_criterion(r_y - gl_integral(ctx.at(pij), n_q)); });
}

double criterion_mc(double r_y, const PairContext& ctx, double pij, std::size_t n_m,
                    std::uint64_t seed) {
  return guarded([&] { return log_criterion(r_y - mc_integral(ctx.at(pij), n_m, seed)); });
}

EntrySolution minimize_on_box(const numerics::ScalarFunction& criterion, const Box& box,
                              double x_tol, std::size_t grid_points) {
  if (!(box.lo < box.hi)) throw SolverError("minimize_on_box: empty feasible box");
  if (grid_points < 2) grid_points = 2;
  const auto f = [&criterion](double x) {
    const double v = criterion(x);
    return std::isnan(v) ? kInf : v;
  };

  const auto main = numerics::minimize_golden_parabolic(f, box.lo, box.hi, x_tol);
  EntrySolution out{main.x, main.fx, main.iterations, false};

  const double step = (box.hi - box.lo) / static_cast<double>(grid_points - 1);
  double grid_x = box.lo;
  double grid_f = kInf;
  for (std::size_t k = 0; k < grid_points; ++k) {
    const double x = k + 1 == grid_points ? box.hi : box.lo + step * static_cast<double>(k);
    const double v = f(x);
    if (v < grid_f) {
      grid_f = v;
      grid_x = x;
    }
  }
  if (grid_f < out.criterion) {
    const double lo = std::max(box.lo, grid_x - step);
    const double hi = std::min(box.hi, grid_x + step);
    const auto local = numerics::minimize_golden_parabolic(f, lo, hi, x_tol);
    out.fallback = true;
    out.iterations += local.iterations;
    if (local.fx <= grid_f) {
      out.p_hat = local.x;
      out.criterion = local.fx;
    } else {
      out.p_hat = grid_x;
      out.criterion = grid_f;
    }
  }
  if (!std::isfinite(out.criterion)) {
    throw SolverError("criterion is infinite over the whole feasible box");
  }
  return out;
}

EntrySolution solve_pade(double r_y, const PairContext& ctx, std::size_t n_starts,
                         std::uint64_t seed, arcsine::QVariant q) {
  if (n_starts < 1) throw DomainError("solve_pade: n_starts must be >= 1");
  const Box box = feasible_box(ctx.p0i, ctx.p0j);
  const double pm = p_feasible_bound(ctx.p0i, ctx.p0j);
  const double h = 1e-6 * pm;
  const auto g = [&](double x) { return criterion_pade(r_y, ctx, x, q); };

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> start(box.lo, box.hi);
  EntrySolution best{0.0, kInf, 0, false};
  std::size_t iterations = 0;

  for (std::size_t s = 0; s < n_starts; ++s) {
    double x = start(rng);
    double fx = g(x);
    if (!std::isfinite(fx)) continue;
    for (int it = 0; it < 300; ++it) {
      ++iterations;
      const double xp = clamp_to(box, x + h);
      const double xm = clamp_to(box, x - h);
      const double grad = (g(xp) - g(xm)) / (xp - xm);
      if (!std::isfinite(grad) || grad == 0.0) break;
      double t = 0.25 * pm / std::abs(grad);
      bool moved = false;
      for (int ls = 0; ls < 60; ++ls, t *= 0.5) {
        const double xn = clamp_to(box, x - t * grad);
        if (xn == x) break;
        const double fn = g(xn);
        if (fn <= fx + 1e-4 * grad * (xn - x)) {
          moved = std::abs(xn - x) > 1e-13 * pm;
          x = xn;
          fx = fn;
          break;
        }
      }
      if (!moved) break;
    }
    if (fx < best.criterion) {
      best.p_hat = x;
      best.criterion = fx;
    }
  }
  best.iterations = iterations;
  if (!std::isfinite(best.criterion)) {
    throw SolverError("all " + std::to_string(n_starts) + " Pade descent starts diverged");
  }
  return best;
}

EntrySolution solve_gl(double r_y, const PairContext& ctx, std::size_t n_q) {
  const numerics::GaussLegendreRule rule(n_q);
  return minimize_on_box(
      [&](double x) { return guarded([&] { return log_criterion(r_y - gl_integral(ctx.at(x), rule)); }); },
      feasible_box(ctx.p0i, ctx.p0j));
}

EntrySolution solve_mc(double r_y, const PairContext& ctx, std::size_t n_m, std::uint64_t seed) {
  const auto nodes = mc_nodes(n_m, seed);
  return minimize_on_box(
      [&](double x) { return guarded([&] { return log_criterion(r_y - mc_integral(ctx.at(x), nodes)); }); },
      feasible_box(ctx.p0i, ctx.p0j));
}

EntrySolution solve_oracle(double r_y, const PairContext& ctx, double tol) {
  return minimize_on_box(
      [&](double x) {
        return guarded([&] {
          return log_criterion(r_y - arcsine::output_autocorrelation_oracle(ctx.at(x), tol));
        });
      },
      feasible_box(ctx.p0i, ctx.p0j));
}

EntrySolution solve_entry(double r_y, const PairContext& ctx, const BackendConfig& cfg) {
  switch (cfg.kind) {
    case Backend::Pade: return solve_pade(r_y, ctx, cfg.n_starts, cfg.start_seed, cfg.pade_q);
    case Backend::GaussLegendre: return solve_gl(r_y, ctx, cfg.n_q);
    case Backend::MonteCarlo: return solve_mc(r_y, ctx, cfg.n_m, cfg.mc_seed);
    case Backend::Oracle: return solve_oracle(r_y, ctx, cfg.oracle_tol);
  }
  throw SolverError("unknown backend");
}

std::string_view status_name(EntryStatus s) noexcept {
  switch (s) {
    case EntryStatus::Ok: return "ok";
    case EntryStatus::Fallback: return "fallback";
    case EntryStatus::Saturated: return "saturated";
    case EntryStatus::Diverged: return "diverged";
    case EntryStatus::SolverFailed: return "solver_failed";
    case EntryStatus::Unrecovered: return "unrecovered";
  }
  return "unknown";
}

std::size_t RecoveryReport::unrecovered() const {
  return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [](const auto& e) {
    return e.status != EntryStatus::Ok && e.status != EntryStatus::Fallback;
  }));
}

double nmse(const Eigen::MatrixXd& truth, const Eigen::MatrixXd& estimate) {
  if (truth.rows() != estimate.rows() || truth.cols() != estimate.cols()) {
    throw ValidationError("nmse: dimension mismatch");
  }
  const double denom = truth.squaredNorm();
  if (!(denom > 0.0)) throw DomainError("nmse: truth has zero norm");
  return (truth - estimate).squaredNorm() / denom;
}

RecoveryReport assemble_from_statistics(const Eigen::VectorXd& mu, const Eigen::MatrixXd& r_y,
                                        const sampling::ThresholdSpec& spec,
                                        const BackendConfig& cfg,
                                        const std::optional<Eigen::MatrixXd>& truth) {
  const auto start = std::chrono::steady_clock::now();
  cfg.validate();
  spec.validate();
  const auto n = mu.size();
  if (r_y.rows() != n || r_y.cols() != n || static_cast<std::size_t>(n) != spec.dimension()) {
    throw ValidationError("assemble: dimension mismatch between statistics and threshold spec");
  }
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();

  RecoveryReport report;
  report.backend = cfg.kind;
  report.p_hat = Eigen::MatrixXd::Constant(n, n, nan);
  report.r_hat = Eigen::MatrixXd::Constant(n, n, nan);

  std::vector<EntryStatus> diag_status(static_cast<std::size_t>(n), EntryStatus::Ok);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    try {
      const double r = recover_variance(mu(i), spec.d, spec.sigma(i, i), u);
      report.r_hat(i, i) = r;
      report.p_hat(i, i) = r + spec.sigma(i, i);
    } catch (const SaturationError&) {
      diag_status[u] = EntryStatus::Saturated;
    } catch (const DivergenceError&) {
      diag_status[u] = EntryStatus::Diverged;
    }
  }

  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  std::vector<EntryDiagnostics> off(pairs.size());
  const auto count = static_cast<std::ptrdiff_t>(pairs.size());

#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    const auto [i, j] = pairs[static_cast<std::size_t>(k)];
    EntryDiagnostics& e = off[static_cast<std::size_t>(k)];
    e.i = static_cast<std::size_t>(i);
    e.j = static_cast<std::size_t>(j);
    e.p_hat = nan;
    e.r_hat = nan;
    e.criterion = nan;
    const double p0i = report.p_hat(i, i);
    const double p0j = report.p_hat(j, j);
    if (!(p0i > 0.0) || !(p0j > 0.0)) {
      e.status = EntryStatus::Unrecovered;
      continue;
    }
    try {
      const EntrySolution s = solve_entry(r_y(i, j), PairContext{p0i, p0j, spec.d}, cfg);
      e.p_hat = s.p_hat;
      e.r_hat = s.p_hat - spec.sigma(i, j);
      e.iterations = s.iterations;
      e.criterion = s.criterion;
      e.status = s.fallback ? EntryStatus::Fallback : EntryStatus::Ok;
    } catch (const Error&) {
      e.status = EntryStatus::SolverFailed;
    }
  }

  std::size_t next = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto u = static_cast<std::size_t>(i);
    report.entries.push_back({u, u, report.p_hat(i, i), report.r_hat(i, i), 0, 0.0, diag_status[u]});
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const EntryDiagnostics& e = off[next++];
      report.p_hat(i, j) = report.p_hat(j, i) = e.p_hat;
      report.r_hat(i, j) = report.r_hat(j, i) = e.r_hat;
      report.entries.push_back(e);
    }
  }

  if (truth) report.nmse = nmse(*truth, report.r_hat);
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

RecoveryReport assemble_covariance(const sampling::OneBitDataset& data,
                                   const sampling::ThresholdSpec& spec, const BackendConfig& cfg,
                                   const std::optional<Eigen::MatrixXd>& truth) {
  if (data.n() != spec.dimension()) throw ValidationError("assemble: dataset/threshold dimension mismatch");
  return assemble_from_statistics(sampling::sample_mean(data), sampling::sample_autocorrelation(data),
                                  spec, cfg, truth);
}

}  // namespace onebit::recover
