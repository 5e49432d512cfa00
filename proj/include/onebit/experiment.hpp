#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "onebit/process.hpp"
#include "onebit/recover.hpp"
#include "onebit/sampling.hpp"

namespace onebit::experiment {

struct ExperimentConfig {
  process::ProcessModel process = process::WienerModel{100, 0.2, 0.8};
  double d = 0.5;
  double sigma_tau2 = 0.2;
  std::vector<recover::BackendConfig> backends{recover::BackendConfig{}};
  std::vector<std::size_t> n_x{1000, 3000, 6000, 10000};
  std::size_t experiments = 5;
  std::uint64_t seed = 1;
  std::vector<std::size_t> indices{2, 8};  // 1-based state indices reported by the variance run
  std::size_t row = 2;                     // 1-based row of the cross-correlation window
  std::size_t window = 13;                 // number of columns in that window
  bool write_data = false;                 // also dump the first ensemble/dataset

  void validate() const;
  sampling::ThresholdSpec threshold(std::size_t n) const;
};

/// Parses a JSON config. Errors carry the offending path, e.g. "threshold.d".
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);

struct VarianceMse {
  std::size_t n_x = 0;
  std::size_t index = 0;  // 1-based
  double mse = 0.0;
  std::size_t successes = 0;
  std::size_t failures = 0;
  bool operator==(const VarianceMse&) const = default;
};

struct MatrixNmse {
  std::string backend;
  std::size_t n_x = 0;
  double nmse = 0.0;
  std::size_t unrecovered = 0;
  bool operator==(const MatrixNmse&) const = default;
};

struct ThresholdNmse {
  std::size_t n_x = 0;
  double nmse_d = 0.0;
  double nmse_sigma_tau2 = 0.0;
  bool operator==(const ThresholdNmse&) const = default;
};

struct CrossPoint {
  std::string backend;
  std::size_t i = 0;  // 1-based
  std::size_t j = 0;  // 1-based
  double truth = 0.0;     // E{y_i x_j} from the true covariance
  double sample = 0.0;    // (1/N_x) sum_k y_i(k) x_j(k)
  double sample_std = 0.0;  // standard error of `sample`
  double estimate = 0.0;  // modified Bussgang law with recovered powers
  bool operator==(const CrossPoint&) const = default;
};

struct MetricsRecord {
  std::vector<VarianceMse> variance;
  std::vector<MatrixNmse> matrix;
  std::vector<ThresholdNmse> threshold;
  std::vector<CrossPoint> cross;
  std::map<std::string, double> stage_seconds;

  bool operator==(const MetricsRecord&) const = default;
};

MetricsRecord run_variance_experiment(const ExperimentConfig& config);
MetricsRecord run_covariance_experiment(const ExperimentConfig& config);
MetricsRecord run_bussgang_experiment(const ExperimentConfig& config);
MetricsRecord run_threshold_experiment(const ExperimentConfig& config);

void write_metrics(const std::filesystem::path& path, const MetricsRecord& record);
MetricsRecord read_metrics(const std::filesystem::path& path);

/// Per-metric plot-data tables (x, series...) next to metrics.csv.
void write_plot_data(const std::filesystem::path& dir, const MetricsRecord& record);

}  // namespace onebit::experiment
