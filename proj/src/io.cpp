#include "onebit/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "onebit/error.hpp"

namespace onebit::io {

namespace fs = std::filesystem;

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string());
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

std::string read_schema(std::ifstream& in, const fs::path& path, SchemaLine& header) {
  std::string line;
  if (!std::getline(in, line)) throw IoError(path.string() + ": empty file");
  header = parse_schema_line(line);
  return line;
}

const std::string& field(const Header& h, const std::string& key, const fs::path& path) {
  const auto it = h.find(key);
  if (it == h.end()) throw IoError(path.string() + ": schema line lacks '" + key + "'");
  return it->second;
}

std::size_t parse_size(const std::string& s, const fs::path& path) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  if (s.empty() || *end != '\0') throw IoError(path.string() + ": bad integer '" + s + "'");
  return static_cast<std::size_t>(v);
}

void check_schema(const SchemaLine& h, const std::string& expected, const fs::path& path) {
  if (h.schema != expected) {
    throw IoError(path.string() + ": expected schema '" + expected + "', found '" + h.schema + "'");
  }
}

recover::EntryStatus parse_status(const std::string& s) {
  using recover::EntryStatus;
  for (auto st : {EntryStatus::Ok, EntryStatus::Fallback, EntryStatus::Saturated,
                  EntryStatus::Diverged, EntryStatus::SolverFailed, EntryStatus::Unrecovered}) {
    if (recover::status_name(st) == s) return st;
  }
  throw IoError("unknown entry status '" + s + "'");
}

}  // namespace

std::string format_schema_line(const SchemaLine& line) {
  std::string out = "# " + line.schema;
  for (const auto& [k, v] : line.fields) {
    if (k.find_first_of(" =\n") != std::string::npos || v.find_first_of(" \n") != std::string::npos) {
      throw IoError("schema field '" + k + "' contains whitespace or '='");
    }
    out += " " + k + "=" + v;
  }
  return out;
}

SchemaLine parse_schema_line(const std::string& text) {
  if (text.rfind("# ", 0) != 0) throw IoError("missing schema line (expected '# <schema> ...')");
  std::istringstream in(text.substr(2));
  SchemaLine line;
  if (!(in >> line.schema)) throw IoError("empty schema line");
  std::string token;
  while (in >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos || eq == 0) throw IoError("malformed schema field '" + token + "'");
    line.fields[token.substr(0, eq)] = token.substr(eq + 1);
  }
  return line;
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_real(const std::string& text) {
  if (text == "nan") return std::numeric_limits<double>::quiet_NaN();
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || *end != '\0') throw IoError("bad number '" + text + "'");
  return v;
}

void write_matrix_csv(const fs::path& path, const Eigen::MatrixXd& m, const std::string& schema,
                      Header fields) {
  fields["rows"] = std::to_string(m.rows());
  fields["cols"] = std::to_string(m.cols());
  auto out = open_out(path);
  out << format_schema_line({schema, fields}) << '\n';
  std::string row;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    row.clear();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) row += ',';
      row += format_real(m(i, j));
    }
    out << row << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

MatrixFile read_matrix_csv(const fs::path& path) {
  auto in = open_in(path);
  MatrixFile file;
  read_schema(in, path, file.header);
  const std::size_t rows = parse_size(field(file.header.fields, "rows", path), path);
  const std::size_t cols = parse_size(field(file.header.fields, "cols", path), path);
  file.matrix.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  std::string line;
  for (std::size_t i = 0; i < rows; ++i) {
    if (!std::getline(in, line)) throw IoError(path.string() + ": truncated matrix");
    const auto cells = split(line, ',');
    if (cells.size() != cols) {
      throw IoError(path.string() + ": row " + std::to_string(i + 1) + " has " +
                    std::to_string(cells.size()) + " cells, expected " + std::to_string(cols));
    }
    for (std::size_t j = 0; j < cols; ++j) {
      file.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = parse_real(cells[j]);
    }
  }
  return file;
}

void write_ensemble(const fs::path& dir, const process::Ensemble& e) {
  const Header h{{"N", std::to_string(e.n())}, {"N_x", std::to_string(e.n_x())},
                 {"seed", std::to_string(e.seed)}};
  write_matrix_csv(dir / "samples.csv", e.samples, "onebit-samples", h);
  write_matrix_csv(dir / "truth.csv", e.truth, "onebit-truth", h);
}

process::Ensemble read_ensemble(const fs::path& dir) {
  auto samples = read_matrix_csv(dir / "samples.csv");
  auto truth = read_matrix_csv(dir / "truth.csv");
  check_schema(samples.header, "onebit-samples", dir / "samples.csv");
  check_schema(truth.header, "onebit-truth", dir / "truth.csv");
  process::Ensemble e;
  e.samples = std::move(samples.matrix);
  e.truth = std::move(truth.matrix);
  e.seed = std::stoull(field(samples.header.fields, "seed", dir / "samples.csv"));
  if (e.truth.rows() != e.samples.rows()) throw IoError(dir.string() + ": truth/samples mismatch");
  return e;
}

void write_dataset(const fs::path& dir, const sampling::OneBitDataset& data) {
  const Header h{{"N", std::to_string(data.n())}, {"N_x", std::to_string(data.n_x())},
                 {"seed", std::to_string(data.seed)}};
  write_matrix_csv(dir / "signs.csv", data.signs.cast<double>(), "onebit-signs", h);
  write_matrix_csv(dir / "thresholds.csv", Eigen::MatrixXd(data.thresholds), "onebit-thresholds", h);
  write_matrix_csv(dir / "sigma.csv", data.spec.sigma, "onebit-threshold-covariance", h);
  Table t;
  t.header = {"onebit-dataset", {}};
  t.columns = {"d", "sigma_tau2", "N", "N_x", "seed"};
  const double s2 = data.spec.is_scalar_diagonal() ? data.spec.sigma_tau2()
                                                   : std::numeric_limits<double>::quiet_NaN();
  t.rows.push_back({format_real(data.spec.d), format_real(s2), std::to_string(data.n()),
                    std::to_string(data.n_x()), std::to_string(data.seed)});
  write_table(dir / "dataset.csv", t);
}

sampling::OneBitDataset read_dataset(const fs::path& dir) {
  const Table t = read_table(dir / "dataset.csv");
  check_schema(t.header, "onebit-dataset", dir / "dataset.csv");
  if (t.rows.size() != 1 || t.rows[0].size() != 5) throw IoError(dir.string() + ": malformed dataset.csv");
  const auto& r = t.rows[0];
  const std::size_t n = parse_size(r[2], dir / "dataset.csv");
  const std::size_t nx = parse_size(r[3], dir / "dataset.csv");

  sampling::OneBitDataset data;
  data.spec.d = parse_real(r[0]);
  data.seed = std::stoull(r[4]);
  data.spec.sigma = read_matrix_csv(dir / "sigma.csv").matrix;
  const Eigen::MatrixXd signs = read_matrix_csv(dir / "signs.csv").matrix;
  data.thresholds = read_matrix_csv(dir / "thresholds.csv").matrix;
  if (static_cast<std::size_t>(signs.rows()) != n || static_cast<std::size_t>(signs.cols()) != nx ||
      data.thresholds.rows() != signs.rows() || data.thresholds.cols() != signs.cols() ||
      data.spec.sigma.rows() != signs.rows()) {
    throw IoError(dir.string() + ": dataset files disagree on dimensions");
  }
  if ((signs.array().abs() != 1.0).any()) throw IoError(dir.string() + ": signs must be +-1");
  data.signs = signs.cast<std::int8_t>();
  return data;
}

void write_report(const fs::path& dir, const std::string& stem, const recover::RecoveryReport& report) {
  Table entries;
  entries.header = {"onebit-report-entries", {{"backend", std::string(recover::backend_name(report.backend))}}};
  entries.columns = {"i", "j", "p_hat", "r_hat", "iterations", "criterion_value", "status"};
  for (const auto& e : report.entries) {
    entries.rows.push_back({std::to_string(e.i), std::to_string(e.j), format_real(e.p_hat),
                            format_real(e.r_hat), std::to_string(e.iterations),
                            format_real(e.criterion), std::string(recover::status_name(e.status))});
  }
  write_table(dir / (stem + "_entries.csv"), entries);

  Table summary;
  summary.header = {"onebit-report-summary", {}};
  summary.columns = {"backend", "nmse", "wall_seconds", "unrecovered"};
  summary.rows.push_back({std::string(recover::backend_name(report.backend)),
                          report.nmse ? format_real(*report.nmse) : "none",
                          format_real(report.wall_seconds), std::to_string(report.unrecovered())});
  write_table(dir / (stem + "_summary.csv"), summary);
}

recover::RecoveryReport read_report(const fs::path& dir, const std::string& stem) {
  const Table entries = read_table(dir / (stem + "_entries.csv"));
  const Table summary = read_table(dir / (stem + "_summary.csv"));
  check_schema(entries.header, "onebit-report-entries", dir / (stem + "_entries.csv"));
  check_schema(summary.header, "onebit-report-summary", dir / (stem + "_summary.csv"));
  if (summary.rows.size() != 1 || summary.rows[0].size() != 4) throw IoError("malformed report summary");

  recover::RecoveryReport report;
  report.backend = recover::parse_backend(summary.rows[0][0]);
  if (summary.rows[0][1] != "none") report.nmse = parse_real(summary.rows[0][1]);
  report.wall_seconds = parse_real(summary.rows[0][2]);

  std::size_t n = 0;
  for (const auto& r : entries.rows) {
    if (r.size() != 7) throw IoError("malformed report entry row");
    recover::EntryDiagnostics e;
    e.i = parse_size(r[0], dir);
    e.j = parse_size(r[1], dir);
    e.p_hat = parse_real(r[2]);
    e.r_hat = parse_real(r[3]);
    e.iterations = parse_size(r[4], dir);
    e.criterion = parse_real(r[5]);
    e.status = parse_status(r[6]);
    n = std::max({n, e.i + 1, e.j + 1});
    report.entries.push_back(e);
  }
  const auto nn = static_cast<Eigen::Index>(n);
  report.p_hat = Eigen::MatrixXd::Constant(nn, nn, std::numeric_limits<double>::quiet_NaN());
  report.r_hat = report.p_hat;
  for (const auto& e : report.entries) {
    const auto i = static_cast<Eigen::Index>(e.i);
    const auto j = static_cast<Eigen::Index>(e.j);
    report.p_hat(i, j) = report.p_hat(j, i) = e.p_hat;
    report.r_hat(i, j) = report.r_hat(j, i) = e.r_hat;
  }
  return report;
}

void write_table(const fs::path& path, const Table& table) {
  auto out = open_out(path);
  out << format_schema_line(table.header) << '\n';
  const auto join = [](const std::vector<std::string>& cells) {
    std::string s;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (cells[i].find_first_of(",\n") != std::string::npos) {
        throw IoError("table cell contains a separator: '" + cells[i] + "'");
      }
      if (i) s += ',';
      s += cells[i];
    }
    return s;
  };
  out << join(table.columns) << '\n';
  for (const auto& r : table.rows) {
    if (r.size() != table.columns.size()) throw IoError(path.string() + ": ragged table row");
    out << join(r) << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

Table read_table(const fs::path& path) {
  auto in = open_in(path);
  Table t;
  read_schema(in, path, t.header);
  std::string line;
  if (!std::getline(in, line)) throw IoError(path.string() + ": missing column row");
  t.columns = split(line, ',');
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split(line, ',');
    if (cells.size() != t.columns.size()) throw IoError(path.string() + ": ragged row '" + line + "'");
    t.rows.push_back(std::move(cells));
  }
  return t;
}

}  // namespace onebit::io
