#include "onebit/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <tuple>

#include "onebit/bussgang.hpp"
#include "onebit/error.hpp"
#include "onebit/io.hpp"
#include "onebit/numerics.hpp"
#include "onebit/threshold.hpp"

namespace onebit::experiment {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

class Clock {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

// ---- config parsing ------------------------------------------------------

void only_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
  for (const auto& [k, _] : obj.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; })) {
      throw ConfigError(path.empty() ? k : path + "." + k, "unknown key");
    }
  }
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

double get_real(const json& obj, const std::string& path, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(join(path, key), "expected a number");
  return v.get<double>();
}

std::uint64_t get_uint(const json& obj, const std::string& path, const char* key,
                       std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    throw ConfigError(join(path, key), "expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::vector<std::size_t> get_sizes(const json& obj, const std::string& path, const char* key,
                                   std::vector<std::size_t> fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_array() || v.empty()) throw ConfigError(join(path, key), "expected a non-empty array");
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number_unsigned() && !(v[i].is_number_integer() && v[i].get<std::int64_t>() >= 0)) {
      throw ConfigError(join(path, key) + "[" + std::to_string(i) + "]", "expected a non-negative integer");
    }
    out.push_back(v[i].get<std::size_t>());
  }
  return out;
}

process::ProcessModel parse_process(const json& p) {
  const std::string path = "process";
  if (!p.is_object() || !p.contains("kind") || !p.at("kind").is_string()) {
    throw ConfigError(path + ".kind", "expected one of wiener|garch|explicit|reference5");
  }
  const std::string kind = p.at("kind").get<std::string>();
  if (kind == "wiener") {
    only_keys(p, path, {"kind", "n", "v_min", "v_max"});
    return process::WienerModel{get_uint(p, path, "n", 100), get_real(p, path, "v_min", 0.2),
                                get_real(p, path, "v_max", 0.8)};
  }
  if (kind == "garch") {
    only_keys(p, path, {"kind", "n", "zeta0", "zeta1", "zeta2", "path_seed"});
    return process::GarchModel{get_uint(p, path, "n", 20), get_real(p, path, "zeta0", 0.1),
                               get_real(p, path, "zeta1", 0.2), get_real(p, path, "zeta2", 0.3),
                               get_uint(p, path, "path_seed", 1)};
  }
  if (kind == "reference5") {
    only_keys(p, path, {"kind"});
    return process::ExplicitCovariance{process::reference_covariance_5x5()};
  }
  if (kind == "explicit") {
    only_keys(p, path, {"kind", "matrix"});
    if (!p.contains("matrix") || !p.at("matrix").is_array() || p.at("matrix").empty()) {
      throw ConfigError(path + ".matrix", "expected a non-empty array of rows");
    }
    const auto& m = p.at("matrix");
    const auto n = static_cast<Eigen::Index>(m.size());
    Eigen::MatrixXd r(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& row = m[static_cast<std::size_t>(i)];
      const std::string rp = path + ".matrix[" + std::to_string(i) + "]";
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
        throw ConfigError(rp, "expected a row of " + std::to_string(n) + " numbers");
      }
      for (Eigen::Index j = 0; j < n; ++j) {
        const auto& v = row[static_cast<std::size_t>(j)];
        if (!v.is_number()) throw ConfigError(rp + "[" + std::to_string(j) + "]", "expected a number");
        r(i, j) = v.get<double>();
      }
    }
    return process::ExplicitCovariance{r};
  }
  throw ConfigError(path + ".kind", "unknown process kind '" + kind + "'");
}

recover::BackendConfig parse_backend_entry(const json& b, const std::string& path) {
  if (b.is_string()) {
    recover::BackendConfig cfg;
    try {
      cfg.kind = recover::parse_backend(b.get<std::string>());
    } catch (const ValidationError& e) {
      throw ConfigError(path, e.what());
    }
    return cfg;
  }
  only_keys(b, path, {"kind", "n_q", "n_m", "seed", "n_starts", "oracle_tol", "q"});
  if (!b.contains("kind") || !b.at("kind").is_string()) throw ConfigError(path + ".kind", "expected a backend name");
  recover::BackendConfig cfg;
  try {
    cfg.kind = recover::parse_backend(b.at("kind").get<std::string>());
  } catch (const ValidationError& e) {
    throw ConfigError(path + ".kind", e.what());
  }
  cfg.n_q = get_uint(b, path, "n_q", cfg.n_q);
  cfg.n_m = get_uint(b, path, "n_m", cfg.n_m);
  cfg.n_starts = get_uint(b, path, "n_starts", cfg.n_starts);
  cfg.oracle_tol = get_real(b, path, "oracle_tol", cfg.oracle_tol);
  if (b.contains("seed")) {
    const auto s = get_uint(b, path, "seed", 0);
    if (cfg.kind == recover::Backend::MonteCarlo) cfg.mc_seed = s; else cfg.start_seed = s;
  }
  if (b.contains("q")) {
    const auto& q = b.at("q");
    if (q == "exact") cfg.pade_q = arcsine::QVariant::Exact;
    else if (q == "approximate") cfg.pade_q = arcsine::QVariant::Approximate;
    else throw ConfigError(path + ".q", "expected exact|approximate");
  }
  try {
    cfg.validate();
  } catch (const ValidationError& e) {
    throw ConfigError(path, e.what());
  }
  return cfg;
}

// ---- shared pipeline -----------------------------------------------------

struct Draw {
  process::Ensemble ensemble;
  sampling::OneBitDataset data;
};

Draw draw(const ExperimentConfig& c, std::size_t experiment, std::size_t n_x) {
  Draw out;
  out.ensemble = process::sample_ensemble(c.process, n_x, numerics::derive_seed(c.seed, 2 * experiment));
  out.data = sampling::quantize(out.ensemble, c.threshold(out.ensemble.n()),
                                numerics::derive_seed(c.seed, 2 * experiment + 1));
  return out;
}

std::size_t max_n_x(const ExperimentConfig& c) { return *std::max_element(c.n_x.begin(), c.n_x.end()); }

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return kNaN;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

// ---- metrics serialization -------------------------------------------------

struct Row {
  std::string section;
  std::string label;
  std::size_t n_x = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  std::string field;
  double value = 0.0;
};

}  // namespace

void ExperimentConfig::validate() const {
  try {
    process::validate(process);
  } catch (const ValidationError& e) {
    throw ConfigError("process", e.what());
  }
  if (!std::isfinite(d)) throw ConfigError("threshold.d", "must be finite");
  if (!(sigma_tau2 >= 0.0)) throw ConfigError("threshold.sigma_tau2", "must be >= 0");
  if (backends.empty()) throw ConfigError("backends", "at least one backend is required");
  if (experiments < 1) throw ConfigError("experiments", "must be >= 1");
  if (n_x.empty()) throw ConfigError("n_x", "must be non-empty");
  for (std::size_t k = 0; k < n_x.size(); ++k) {
    if (n_x[k] < 1) throw ConfigError("n_x[" + std::to_string(k) + "]", "must be >= 1");
  }
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] < 1) throw ConfigError("indices[" + std::to_string(k) + "]", "indices are 1-based");
  }
  if (window < 1) throw ConfigError("bussgang.window", "must be >= 1");
  if (row < 1 || row > window) throw ConfigError("bussgang.row", "must lie in 1..window");
}

sampling::ThresholdSpec ExperimentConfig::threshold(std::size_t n) const {
  return sampling::ThresholdSpec::scalar(d, sigma_tau2, n);
}

ExperimentConfig parse_config(const json& doc) {
  only_keys(doc, "", {"process", "threshold", "backends", "n_x", "experiments", "seed", "indices",
                      "bussgang", "write_data"});
  ExperimentConfig c;
  if (doc.contains("process")) c.process = parse_process(doc.at("process"));
  if (doc.contains("threshold")) {
    const auto& t = doc.at("threshold");
    only_keys(t, "threshold", {"d", "sigma_tau2"});
    c.d = get_real(t, "threshold", "d", c.d);
    c.sigma_tau2 = get_real(t, "threshold", "sigma_tau2", c.sigma_tau2);
  }
  if (doc.contains("backends")) {
    const auto& b = doc.at("backends");
    if (!b.is_array() || b.empty()) throw ConfigError("backends", "expected a non-empty array");
    c.backends.clear();
    for (std::size_t k = 0; k < b.size(); ++k) {
      c.backends.push_back(parse_backend_entry(b[k], "backends[" + std::to_string(k) + "]"));
    }
  }
  c.n_x = get_sizes(doc, "", "n_x", c.n_x);
  c.experiments = get_uint(doc, "", "experiments", c.experiments);
  c.seed = get_uint(doc, "", "seed", c.seed);
  c.indices = get_sizes(doc, "", "indices", c.indices);
  if (doc.contains("bussgang")) {
    const auto& b = doc.at("bussgang");
    only_keys(b, "bussgang", {"row", "window"});
    c.row = get_uint(b, "bussgang", "row", c.row);
    c.window = get_uint(b, "bussgang", "window", c.window);
  }
  if (doc.contains("write_data")) {
    if (!doc.at("write_data").is_boolean()) throw ConfigError("write_data", "expected true or false");
    c.write_data = doc.at("write_data").get<bool>();
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string(), std::string("parse error: ") + e.what());
  }
  return parse_config(doc);
}

MetricsRecord run_variance_experiment(const ExperimentConfig& c) {
  c.validate();
  const std::size_t n = process::dimension(c.process);
  for (std::size_t k = 0; k < c.indices.size(); ++k) {
    if (c.indices[k] > n) {
      throw ConfigError("indices[" + std::to_string(k) + "]", "must lie in 1.." + std::to_string(n));
    }
  }
  MetricsRecord rec;
  Clock clock;
  const std::size_t big = max_n_x(c);
  std::vector<Draw> draws;
  for (std::size_t e = 0; e < c.experiments; ++e) draws.push_back(draw(c, e, big));
  rec.stage_seconds["generate"] = clock.lap();

  for (std::size_t nx : c.n_x) {
    for (std::size_t index : c.indices) {
      const auto i = static_cast<Eigen::Index>(index - 1);
      VarianceMse m;
      m.n_x = nx;
      m.index = index;
      std::vector<double> sq;
      for (const auto& dr : draws) {
        const auto& y = dr.data.signs;
        std::int64_t s = 0;
        for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(nx); ++k) s += y(i, k);
        const double mu = static_cast<double>(s) / static_cast<double>(nx);
        try {
          const double r = recover::recover_variance(mu, c.d, c.sigma_tau2, index - 1);
          const double err = r - dr.ensemble.truth(i, i);
          sq.push_back(err * err);
        } catch (const SaturationError&) {
          ++m.failures;
        } catch (const DivergenceError&) {
          ++m.failures;
        }
      }
      m.successes = sq.size();
      m.mse = mean_of(sq);
      rec.variance.push_back(m);
    }
  }
  rec.stage_seconds["recover_variances"] = clock.lap();
  return rec;
}

MetricsRecord run_covariance_experiment(const ExperimentConfig& c) {
  c.validate();
  MetricsRecord rec;
  Clock clock;
  const std::size_t big = max_n_x(c);
  std::vector<Draw> draws;
  for (std::size_t e = 0; e < c.experiments; ++e) draws.push_back(draw(c, e, big));
  rec.stage_seconds["generate"] = clock.lap();

  for (const auto& b : c.backends) {
    for (std::size_t nx : c.n_x) {
      MatrixNmse m;
      m.backend = std::string(recover::backend_name(b.kind));
      m.n_x = nx;
      std::vector<double> values;
      for (const auto& dr : draws) {
        const auto data = sampling::select(dr.data, 0, dr.data.n(), nx);
        const auto report = recover::assemble_covariance(data, data.spec, b, dr.ensemble.truth);
        m.unrecovered += report.unrecovered();
        values.push_back(*report.nmse);
      }
      m.nmse = mean_of(values);
      rec.matrix.push_back(m);
    }
    rec.stage_seconds["recover_" + std::string(recover::backend_name(b.kind))] = clock.lap();
  }
  return rec;
}

MetricsRecord run_bussgang_experiment(const ExperimentConfig& c) {
  c.validate();
  if (c.window > process::dimension(c.process)) {
    throw ConfigError("bussgang.window", "exceeds the process dimension");
  }
  MetricsRecord rec;
  Clock clock;
  const std::size_t nx = max_n_x(c);
  const Draw dr = draw(c, 0, nx);
  const auto data = sampling::select(dr.data, 0, c.window, nx);
  const auto w = static_cast<Eigen::Index>(c.window);
  const Eigen::MatrixXd r_x = dr.ensemble.truth.topLeftCorner(w, w);
  const Eigen::MatrixXd samples = dr.ensemble.samples.topRows(w);
  const Eigen::MatrixXd truth = bussgang::expected_sign_input_correlation(r_x, data.spec);
  const Eigen::MatrixXd sample = sampling::sample_sign_input_correlation(data, samples);
  rec.stage_seconds["generate"] = clock.lap();

  const auto i = static_cast<Eigen::Index>(c.row - 1);
  Eigen::VectorXd sample_std(w);
  for (Eigen::Index j = 0; j < w; ++j) {
    double m = 0.0;
    double m2 = 0.0;
    for (Eigen::Index k = 0; k < samples.cols(); ++k) {
      const double v = data.signs(i, k) * samples(j, k);
      m += v;
      m2 += v * v;
    }
    const double n = static_cast<double>(samples.cols());
    m /= n;
    sample_std(j) = std::sqrt(std::max(0.0, m2 / n - m * m) / n);
  }

  const Eigen::VectorXd mu = sampling::sample_mean(data);
  const Eigen::MatrixXd r_y = sampling::sample_autocorrelation(data);
  for (const auto& b : c.backends) {
    Eigen::MatrixXd p_hat = Eigen::MatrixXd::Constant(w, w, kNaN);
    for (Eigen::Index k = 0; k < w; ++k) {
      try {
        p_hat(k, k) = recover::recover_variance(mu(k), c.d, c.sigma_tau2, static_cast<std::size_t>(k)) +
                      c.sigma_tau2;
      } catch (const Error&) {
      }
    }
    for (Eigen::Index j = 0; j < w; ++j) {
      if (j == i || !(p_hat(i, i) > 0.0) || !(p_hat(j, j) > 0.0)) continue;
      try {
        const auto s = recover::solve_entry(r_y(i, j), {p_hat(i, i), p_hat(j, j), c.d}, b);
        p_hat(i, j) = p_hat(j, i) = s.p_hat;
      } catch (const Error&) {
      }
    }
    const Eigen::MatrixXd est = bussgang::recover_cross_matrix(data, p_hat);
    const std::string name(recover::backend_name(b.kind));
    for (Eigen::Index j = 0; j < w; ++j) {
      rec.cross.push_back({name, c.row, static_cast<std::size_t>(j + 1), truth(i, j), sample(i, j),
                           sample_std(j), est(i, j)});
    }
    rec.stage_seconds["recover_" + name] = clock.lap();
  }
  return rec;
}

MetricsRecord run_threshold_experiment(const ExperimentConfig& c) {
  c.validate();
  MetricsRecord rec;
  Clock clock;
  const std::size_t big = max_n_x(c);
  std::vector<Draw> draws;
  for (std::size_t e = 0; e < c.experiments; ++e) draws.push_back(draw(c, e, big));
  rec.stage_seconds["generate"] = clock.lap();

  for (std::size_t nx : c.n_x) {
    std::vector<double> nd;
    std::vector<double> ns;
    for (const auto& dr : draws) {
      const auto data = sampling::select(dr.data, 0, dr.data.n(), nx);
      const auto est = onebit::threshold::estimate_threshold(data);
      nd.push_back(onebit::threshold::scalar_nmse(c.d, est.d));
      ns.push_back(onebit::threshold::scalar_nmse(c.sigma_tau2, est.sigma_tau2));
    }
    rec.threshold.push_back({nx, mean_of(nd), mean_of(ns)});
  }
  rec.stage_seconds["estimate_threshold"] = clock.lap();
  return rec;
}

void write_metrics(const std::filesystem::path& path, const MetricsRecord& r) {
  io::Table t;
  t.header = {"onebit-metrics", {{"version", "1"}}};
  t.columns = {"section", "label", "n_x", "i", "j", "field", "value"};
  const auto add = [&t](const std::string& section, const std::string& label, std::size_t nx,
                        std::size_t i, std::size_t j, const char* field, double v) {
    t.rows.push_back({section, label.empty() ? "-" : label, std::to_string(nx), std::to_string(i),
                      std::to_string(j), field, io::format_real(v)});
  };
  for (const auto& m : r.variance) {
    add("variance", "", m.n_x, m.index, 0, "mse", m.mse);
    add("variance", "", m.n_x, m.index, 0, "successes", static_cast<double>(m.successes));
    add("variance", "", m.n_x, m.index, 0, "failures", static_cast<double>(m.failures));
  }
  for (const auto& m : r.matrix) {
    add("matrix", m.backend, m.n_x, 0, 0, "nmse", m.nmse);
    add("matrix", m.backend, m.n_x, 0, 0, "unrecovered", static_cast<double>(m.unrecovered));
  }
  for (const auto& m : r.threshold) {
    add("threshold", "", m.n_x, 0, 0, "nmse_d", m.nmse_d);
    add("threshold", "", m.n_x, 0, 0, "nmse_sigma_tau2", m.nmse_sigma_tau2);
  }
  for (const auto& m : r.cross) {
    add("cross", m.backend, 0, m.i, m.j, "truth", m.truth);
    add("cross", m.backend, 0, m.i, m.j, "sample", m.sample);
    add("cross", m.backend, 0, m.i, m.j, "sample_std", m.sample_std);
    add("cross", m.backend, 0, m.i, m.j, "estimate", m.estimate);
  }
  for (const auto& [name, s] : r.stage_seconds) add("stage", name, 0, 0, 0, "seconds", s);
  io::write_table(path, t);
}

MetricsRecord read_metrics(const std::filesystem::path& path) {
  const io::Table t = io::read_table(path);
  if (t.header.schema != "onebit-metrics") throw IoError(path.string() + ": not a metrics file");
  MetricsRecord r;
  std::tuple<std::string, std::string, std::size_t, std::size_t, std::size_t> last;
  bool have_last = false;
  for (const auto& row : t.rows) {
    if (row.size() != 7) throw IoError(path.string() + ": malformed metrics row");
    const std::string& section = row[0];
    const std::string label = row[1] == "-" ? "" : row[1];
    const std::size_t nx = std::stoull(row[2]);
    const std::size_t i = std::stoull(row[3]);
    const std::size_t j = std::stoull(row[4]);
    const std::string& field = row[5];
    const double v = io::parse_real(row[6]);
    const auto key = std::make_tuple(section, label, nx, i, j);
    const bool fresh = !have_last || key != last;
    last = key;
    have_last = true;

    if (section == "variance") {
      if (fresh) r.variance.push_back({nx, i, 0.0, 0, 0});
      auto& m = r.variance.back();
      if (field == "mse") m.mse = v;
      else if (field == "successes") m.successes = static_cast<std::size_t>(v);
      else if (field == "failures") m.failures = static_cast<std::size_t>(v);
      else throw IoError("unknown variance field '" + field + "'");
    } else if (section == "matrix") {
      if (fresh) r.matrix.push_back({label, nx, 0.0, 0});
      auto& m = r.matrix.back();
      if (field == "nmse") m.nmse = v;
      else if (field == "unrecovered") m.unrecovered = static_cast<std::size_t>(v);
      else throw IoError("unknown matrix field '" + field + "'");
    } else if (section == "threshold") {
      if (fresh) r.threshold.push_back({nx, 0.0, 0.0});
      auto& m = r.threshold.back();
      if (field == "nmse_d") m.nmse_d = v;
      else if (field == "nmse_sigma_tau2") m.nmse_sigma_tau2 = v;
      else throw IoError("unknown threshold field '" + field + "'");
    } else if (section == "cross") {
      if (fresh) r.cross.push_back({label, i, j, 0.0, 0.0, 0.0, 0.0});
      auto& m = r.cross.back();
      if (field == "truth") m.truth = v;
      else if (field == "sample") m.sample = v;
      else if (field == "sample_std") m.sample_std = v;
      else if (field == "estimate") m.estimate = v;
      else throw IoError("unknown cross field '" + field + "'");
    } else if (section == "stage") {
      r.stage_seconds[label] = v;
    } else {
      throw IoError(path.string() + ": unknown section '" + section + "'");
    }
  }
  return r;
}

void write_plot_data(const std::filesystem::path& dir, const MetricsRecord& r) {
  if (!r.variance.empty()) {
    std::set<std::size_t> nxs;
    std::set<std::size_t> idx;
    for (const auto& m : r.variance) {
      nxs.insert(m.n_x);
      idx.insert(m.index);
    }
    io::Table t;
    t.header = {"onebit-plot", {{"figure", "variance_mse"}}};
    t.columns = {"n_x"};
    for (auto i : idx) t.columns.push_back("mse_r0_" + std::to_string(i));
    for (auto nx : nxs) {
      std::vector<std::string> row{std::to_string(nx)};
      for (auto i : idx) {
        double v = kNaN;
        for (const auto& m : r.variance) {
          if (m.n_x == nx && m.index == i) v = m.mse;
        }
        row.push_back(io::format_real(v));
      }
      t.rows.push_back(row);
    }
    io::write_table(dir / "plot_variance_mse.csv", t);
  }
  if (!r.matrix.empty()) {
    std::vector<std::string> names;
    std::set<std::size_t> nxs;
    for (const auto& m : r.matrix) {
      if (std::find(names.begin(), names.end(), m.backend) == names.end()) names.push_back(m.backend);
      nxs.insert(m.n_x);
    }
    io::Table t;
    t.header = {"onebit-plot", {{"figure", "matrix_nmse"}}};
    t.columns = {"n_x"};
    for (const auto& n : names) t.columns.push_back("nmse_" + n);
    for (auto nx : nxs) {
      std::vector<std::string> row{std::to_string(nx)};
      for (const auto& n : names) {
        double v = kNaN;
        for (const auto& m : r.matrix) {
          if (m.n_x == nx && m.backend == n) v = m.nmse;
        }
        row.push_back(io::format_real(v));
      }
      t.rows.push_back(row);
    }
    io::write_table(dir / "plot_matrix_nmse.csv", t);
  }
  if (!r.threshold.empty()) {
    io::Table t;
    t.header = {"onebit-plot", {{"figure", "threshold_nmse"}}};
    t.columns = {"n_x", "nmse_d", "nmse_sigma_tau2"};
    for (const auto& m : r.threshold) {
      t.rows.push_back({std::to_string(m.n_x), io::format_real(m.nmse_d), io::format_real(m.nmse_sigma_tau2)});
    }
    io::write_table(dir / "plot_threshold_nmse.csv", t);
  }
  if (!r.cross.empty()) {
    std::vector<std::string> names;
    for (const auto& m : r.cross) {
      if (std::find(names.begin(), names.end(), m.backend) == names.end()) names.push_back(m.backend);
    }
    for (const auto& n : names) {
      io::Table t;
      t.header = {"onebit-plot", {{"figure", "cross_correlation"}, {"backend", n}}};
      t.columns = {"j", "truth", "sample", "sample_std", "estimate"};
      for (const auto& m : r.cross) {
        if (m.backend != n) continue;
        t.rows.push_back({std::to_string(m.j), io::format_real(m.truth), io::format_real(m.sample),
                          io::format_real(m.sample_std), io::format_real(m.estimate)});
      }
      io::write_table(dir / ("plot_cross_" + n + ".csv"), t);
    }
  }
}

}  // namespace onebit::experiment
