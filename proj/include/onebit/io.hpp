#pragma once

// CSV persistence. Every file starts with one schema line of the form
// `# <schema> key=value ...`, followed by plain comma-separated rows. Reals
// are written with 17 significant digits so that reading back is exact.

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "onebit/process.hpp"
#include "onebit/recover.hpp"
#include "onebit/sampling.hpp"

namespace onebit::io {

using Header = std::map<std::string, std::string>;

struct SchemaLine {
  std::string schema;
  Header fields;
};

std::string format_schema_line(const SchemaLine& line);
SchemaLine parse_schema_line(const std::string& text);

std::string format_real(double v);
double parse_real(const std::string& text);

void write_matrix_csv(const std::filesystem::path& path, const Eigen::MatrixXd& m,
                      const std::string& schema, Header fields = {});

struct MatrixFile {
  SchemaLine header;
  Eigen::MatrixXd matrix;
};

MatrixFile read_matrix_csv(const std::filesystem::path& path);

/// samples.csv and truth.csv inside `dir`.
void write_ensemble(const std::filesystem::path& dir, const process::Ensemble& e);
process::Ensemble read_ensemble(const std::filesystem::path& dir);

/// signs.csv, thresholds.csv and dataset.csv (d, sigma, N, N_x, seed) inside `dir`.
void write_dataset(const std::filesystem::path& dir, const sampling::OneBitDataset& data);
sampling::OneBitDataset read_dataset(const std::filesystem::path& dir);

/// <stem>_entries.csv (i, j, p_hat, r_hat, iterations, criterion_value, status)
/// and <stem>_summary.csv (backend, nmse, wall_seconds, unrecovered).
void write_report(const std::filesystem::path& dir, const std::string& stem,
                  const recover::RecoveryReport& report);
recover::RecoveryReport read_report(const std::filesystem::path& dir, const std::string& stem);

/// Plain table: schema line, a column-name row, then rows of cells.
struct Table {
  SchemaLine header;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

void write_table(const std::filesystem::path& path, const Table& table);
Table read_table(const std::filesystem::path& path);

}  // namespace onebit::io
