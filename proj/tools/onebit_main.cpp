#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "onebit/error.hpp"
#include "onebit/experiment.hpp"
#include "onebit/io.hpp"
#include "onebit/kernels.hpp"
#include "onebit/numerics.hpp"
#include "onebit/recover.hpp"
#include "onebit/threshold.hpp"

namespace fs = std::filesystem;
using namespace onebit;

namespace {

struct Common {
  std::string config;
  std::string out = "onebit_out";
  std::optional<std::uint64_t> seed;
  std::optional<std::string> backend;
  std::optional<std::size_t> nx;
  std::string data;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "JSON experiment configuration")->check(CLI::ExistingFile);
  app->add_option("--out", c.out, "output directory")->capture_default_str();
  app->add_option("--seed", c.seed, "override the configuration seed");
  app->add_option("--backend", c.backend, "override the backend list")
      ->check(CLI::IsMember({"pade", "gl", "mc", "oracle"}));
  app->add_option("--nx", c.nx, "override the N_x list with a single size")->check(CLI::PositiveNumber);
}

experiment::ExperimentConfig resolve(const Common& c) {
  experiment::ExperimentConfig cfg = c.config.empty() ? experiment::ExperimentConfig{}
                                                      : experiment::load_config(c.config);
  if (c.seed) cfg.seed = *c.seed;
  if (c.nx) cfg.n_x = {*c.nx};
  if (c.backend) {
    recover::BackendConfig b;
    b.kind = recover::parse_backend(*c.backend);
    cfg.backends = {b};
  }
  cfg.validate();
  return cfg;
}

void emit(const fs::path& out, const experiment::MetricsRecord& rec) {
  fs::create_directories(out);
  experiment::write_metrics(out / "metrics.csv", rec);
  experiment::write_plot_data(out, rec);
}

void write_first_draw(const fs::path& out, const experiment::ExperimentConfig& cfg) {
  const std::size_t nx = *std::max_element(cfg.n_x.begin(), cfg.n_x.end());
  const auto ens = process::sample_ensemble(cfg.process, nx, numerics::derive_seed(cfg.seed, 0));
  const auto data = sampling::quantize(ens, cfg.threshold(ens.n()), numerics::derive_seed(cfg.seed, 1));
  io::write_ensemble(out / "data", ens);
  io::write_dataset(out / "data", data);
}

int run_simulate(const Common& c) {
  const auto cfg = resolve(c);
  const fs::path out = c.out;
  write_first_draw(out, cfg);
  emit(out, experiment::run_variance_experiment(cfg));
  return 0;
}

int run_recover(const Common& c) {
  const auto cfg = resolve(c);
  const fs::path out = c.out;
  if (!c.data.empty()) {
    const auto data = io::read_dataset(c.data);
    std::optional<Eigen::MatrixXd> truth;
    if (fs::exists(fs::path(c.data) / "truth.csv")) truth = io::read_matrix_csv(fs::path(c.data) / "truth.csv").matrix;
    for (const auto& b : cfg.backends) {
      const auto report = recover::assemble_covariance(data, data.spec, b, truth);
      io::write_report(out, "report_" + std::string(recover::backend_name(b.kind)), report);
    }
    return 0;
  }
  if (cfg.write_data) write_first_draw(out, cfg);
  emit(out, experiment::run_covariance_experiment(cfg));
  return 0;
}

int run_bussgang(const Common& c) {
  const auto cfg = resolve(c);
  emit(c.out, experiment::run_bussgang_experiment(cfg));
  return 0;
}

int run_threshold(const Common& c) {
  const auto cfg = resolve(c);
  const fs::path out = c.out;
  if (!c.data.empty()) {
    const auto data = io::read_dataset(c.data);
    const auto est = threshold::estimate_threshold(data);
    io::Table t;
    t.header = {"onebit-threshold-estimate", {}};
    t.columns = {"d_hat", "sigma_tau2_hat", "log_likelihood", "nmse_d", "nmse_sigma_tau2"};
    const bool has_truth = data.spec.is_scalar_diagonal() && data.spec.d != 0.0 && data.spec.sigma_tau2() > 0.0;
    t.rows.push_back({io::format_real(est.d), io::format_real(est.sigma_tau2),
                      io::format_real(est.log_likelihood),
                      has_truth ? io::format_real(threshold::scalar_nmse(data.spec.d, est.d)) : "nan",
                      has_truth ? io::format_real(threshold::scalar_nmse(data.spec.sigma_tau2(), est.sigma_tau2)) : "nan"});
    io::write_table(out / "threshold_estimate.csv", t);
    return 0;
  }
  emit(out, experiment::run_threshold_experiment(cfg));
  return 0;
}

template <class F>
double seconds(F&& f, int reps) {
  const auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / reps;
}

int run_bench(const Common& c) {
  const auto cfg = resolve(c);
  const std::size_t nx = *std::max_element(cfg.n_x.begin(), cfg.n_x.end());
  const auto ens = process::sample_ensemble(cfg.process, nx, numerics::derive_seed(cfg.seed, 0));
  const auto data = sampling::quantize(ens, cfg.threshold(ens.n()), numerics::derive_seed(cfg.seed, 1));
  const Eigen::VectorXd scale = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(data.n()));
  const kernels::RowMatrix x = kernels::to_row_major(ens.samples);

  io::Table t;
  t.header = {"onebit-bench", {{"N", std::to_string(data.n())}, {"N_x", std::to_string(nx)},
                               {"threads", std::to_string(kernels::max_threads())}}};
  t.columns = {"kernel", "serial_seconds", "parallel_seconds"};
  const auto row = [&](const char* name, auto&& s, auto&& p) {
    t.rows.push_back({name, io::format_real(seconds(s, 3)), io::format_real(seconds(p, 3))});
  };
  row("quantize", [&] { (void)kernels::serial::quantize(ens.samples, data.thresholds); },
      [&] { (void)kernels::parallel::quantize(ens.samples, data.thresholds); });
  row("sign_autocorrelation", [&] { (void)kernels::serial::sign_autocorrelation(data.signs); },
      [&] { (void)kernels::parallel::sign_autocorrelation(data.signs); });
  row("sign_cross_correlation", [&] { (void)kernels::serial::sign_cross_correlation(data.signs, x); },
      [&] { (void)kernels::parallel::sign_cross_correlation(data.signs, x); });
  row("row_sum_log_probability",
      [&] { (void)kernels::serial::row_sum_log_probability(data.signs, data.thresholds, scale, 1e-300, nullptr); },
      [&] { (void)kernels::parallel::row_sum_log_probability(data.signs, data.thresholds, scale, 1e-300, nullptr); });
  fs::create_directories(c.out);
  io::write_table(fs::path(c.out) / "bench.csv", t);
  return 0;
}

void error_record(std::string_view kind, const std::string& message) {
  nlohmann::json rec{{"error", kind}, {"message", message}};
  std::cerr << rec.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"One-bit covariance recovery with time-varying thresholds"};
  app.require_subcommand(1);
  Common common;

  auto* simulate = app.add_subcommand("simulate", "generate and quantize data; variance-recovery MSE sweep");
  auto* recover_cmd = app.add_subcommand("recover", "full covariance recovery per backend");
  auto* bussgang_cmd = app.add_subcommand("bussgang", "sign/input cross-correlation recovery");
  auto* threshold_cmd = app.add_subcommand("threshold-mle", "threshold mean and variance MLE");
  auto* bench = app.add_subcommand("bench", "serial vs parallel kernel timings");
  for (auto* s : {simulate, recover_cmd, bussgang_cmd, threshold_cmd, bench}) add_common(s, common);
  recover_cmd->add_option("--data", common.data, "recover from a saved dataset directory");
  threshold_cmd->add_option("--data", common.data, "estimate from a saved dataset directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    error_record("usage", e.what());
    return 2;
  }

  try {
    if (*simulate) return run_simulate(common);
    if (*recover_cmd) return run_recover(common);
    if (*bussgang_cmd) return run_bussgang(common);
    if (*threshold_cmd) return run_threshold(common);
    if (*bench) return run_bench(common);
  } catch (const Error& e) {
    error_record(to_string(e.kind()), e.what());
    return 1;
  } catch (const std::exception& e) {
    error_record("internal", e.what());
    return 3;
  }
  return 0;
}
