#include "t2x/app.hpp"

#include <chrono>
#include <memory>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <system_error>

#include "json.hpp"
#include "t2x/errors.hpp"
#include "t2x/gaussmodel.hpp"
#include "t2x/parallel.hpp"
#include "t2x/pdc.hpp"

namespace t2x {

namespace {

namespace fs = std::filesystem;

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Collects output files so a failed run can remove them.
class Writer {
public:
  explicit Writer(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_))
      throw IoError("cannot create output directory '" + dir_.string() + "'");
  }
  void write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    files_.push_back(p);
    write_text_file(p, text);
  }
  void rollback() noexcept {
    for (const auto& p : files_) {
      std::error_code ec;
      fs::remove(p, ec);
    }
    files_.clear();
  }
  const std::vector<fs::path>& files() const noexcept { return files_; }

private:
  fs::path dir_;
  std::vector<fs::path> files_;
};

Metadata sidecar(const std::string& subcommand, const RunConfig& cfg, const RunOptions& opt) {
  Metadata m;
  m.set("subcommand", subcommand);
  m.set("grid_scale", opt.grid_scale);
  m.set("path", to_string(opt.path));
  m.merge(describe_config(cfg));
  return m;
}

std::string finish(Metadata m) {
  m.set("nondeterministic.generated_at_utc", utc_now());
  return m.to_string();
}

struct Pipeline {
  Biphoton biphoton;
  SpectralGrid grid;
};

Pipeline prepare(const RunConfig& cfg, const RunOptions& opt) {
  Biphoton b = build_biphoton(cfg, opt.config_dir);
  SpectralGrid g = make_grid(b, cfg.grid.scaled(opt.grid_scale));
  return {std::move(b), std::move(g)};
}

void run_phimap(const RunConfig& cfg, const RunOptions& opt, Writer& w) {
  const Biphoton b = build_biphoton(cfg, opt.config_dir);
  if (cfg.phimap_n_q < 2)
    throw ConfigError("phimap.n_q", "phimap.n_q must be >= 2");
  if (cfg.phimap_n_omega < 2)
    throw ConfigError("phimap.n_omega", "phimap.n_omega must be >= 2");
  const auto axes = default_phi_axes(b, cfg.phimap_n_q, cfg.phimap_n_omega);
  const auto map = phi_degenerate_map(b, axes.q, axes.omega, opt.threads);
  auto meta = sidecar("phimap", cfg, opt);
  meta.merge(map.meta);
  w.write("phimap.csv", map.to_csv());
  w.write("phimap.meta", finish(meta));
}

void run_correlate(const RunConfig& cfg, const RunOptions& opt, Writer& w) {
  const auto p = prepare(cfg, opt);
  const auto map = correlation_map(p.biphoton, p.grid, opt.path, opt.threads);
  const auto metrics = extract_metrics(map);
  auto meta = sidecar("correlate", cfg, opt);
  meta.merge(map.meta);
  meta.merge(metrics.describe(), "metrics.");
  w.write("cmap.csv", map.to_csv());
  w.write("metrics.csv", metrics.to_csv());
  if (cfg.matrix)
    w.write("cmap_matrix.csv", map.to_matrix_csv());
  w.write("cmap.meta", finish(meta));
}

void run_gauss(const RunConfig& cfg, const RunOptions& opt, Writer& w) {
  const auto p = prepare(cfg, opt);
  const GaussianModel model(p.biphoton, cfg.sigma_s);
  std::vector<double> t2 = p.grid.tau_axis();
  for (auto& t : t2)
    t += p.biphoton.filter().t_test_fs;
  const auto map = model.evaluate(p.grid.x1, t2);
  const auto res = resolution_time(model.params(), model.Omega0());
  auto meta = sidecar("gauss", cfg, opt);
  meta.merge(map.meta, "model.");
  meta.set("resolution_time_fs", res.full_fs);
  meta.set("resolution_time_approx_fs", res.approx_fs);
  meta.set("resolution_time_ratio", res.ratio);
  w.write("gmap.csv", map.to_csv());
  if (cfg.matrix)
    w.write("gmap_matrix.csv", map.to_matrix_csv());
  w.write("gauss.meta", finish(meta));
}

void run_compare(const RunConfig& cfg, const RunOptions& opt, Writer& w) {
  const auto p = prepare(cfg, opt);
  const auto map = correlation_map(p.biphoton, p.grid, opt.path, opt.threads);
  const GaussianModel model(p.biphoton, cfg.sigma_s);
  const auto report = compare(map, model);
  auto meta = sidecar("compare", cfg, opt);
  meta.merge(report.describe());
  meta.set("raw_peak", map.raw_peak);
  w.write("fwhm_compare.csv", report.fwhm_csv());
  w.write("report.txt", finish(meta));
}

void run_image(const RunConfig& cfg, const RunOptions& opt, Writer& w) {
  if (opt.object.empty())
    throw ConfigError("object", "image needs --object <file>");
  const auto p = prepare(cfg, opt);
  const auto map = correlation_map(p.biphoton, p.grid, opt.path, opt.threads);
  const auto T = load_object(opt.object, map.t2);
  const auto img = ghost_image(map, T);
  auto meta = sidecar("image", cfg, opt);
  meta.set("object_file", opt.object.string());
  meta.set("no_signal", img.no_signal);
  meta.merge(map.meta, "map.");
  w.write("image.csv", img.to_csv());
  w.write("image.meta", finish(meta));
}

struct SweepRow {
  double value = 0.0;
  RidgeFit fit;
  double fwhm_center = 0.0;
  double fwhm_min = 0.0;
  double fwhm_max = 0.0;
  GaussianModelParams params;
  ResolutionTime res;
};

void run_sweep(const RunConfig& cfg, const RunOptions& opt, Writer& w) {
  const std::string key = opt.sweep_key.empty() ? cfg.sweep_key : opt.sweep_key;
  const auto values = opt.sweep_values.empty() ? cfg.sweep_values : opt.sweep_values;
  if (key.empty())
    throw ConfigError("sweep.key", "sweep needs a key (sweep.key or --key)");
  if (values.empty())
    throw ConfigError("sweep.values", "sweep needs at least one value (sweep.values or --values)");
  if (key.rfind("sweep.", 0) == 0)
    throw ConfigError("sweep.key", "cannot sweep a sweep.* key");

  std::vector<RunConfig> points(values.size(), cfg);
  for (std::size_t i = 0; i < values.size(); ++i) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", values[i]);
    set_config_value(points[i], key, buf);
  }
  // Validate every point before any compute.
  std::vector<Pipeline> pipes;
  for (const auto& pc : points)
    pipes.push_back(prepare(pc, opt));

  std::vector<SweepRow> rows(values.size());
  parallel_for(values.size(), opt.threads, [&](std::size_t i, int) {
    const auto& p = pipes[i];
    const auto map = correlation_map(p.biphoton, p.grid, opt.path, 1);
    const auto metrics = extract_metrics(map);
    const GaussianModel model(p.biphoton, points[i].sigma_s);
    SweepRow& r = rows[i];
    r.value = values[i];
    r.fit = metrics.fit;
    const auto d = metrics.describe();
    r.fwhm_min = std::stod(*d.find("fwhm_min_fs"));
    r.fwhm_max = std::stod(*d.find("fwhm_max_fs"));
    std::size_t c = 0;
    for (std::size_t k = 1; k < map.x1.size(); ++k)
      if (std::abs(map.x1[k] - model.peak_x1()) < std::abs(map.x1[c] - model.peak_x1()))
        c = k;
    r.fwhm_center = metrics.slices[c].fwhm;
    r.params = model.params();
    r.res = resolution_time(r.params, model.Omega0());
  });

  std::string csv = "value,ridge_slope_fs_per_um,ridge_r2,fwhm_center_fs,fwhm_min_fs,fwhm_max_fs,Sigma_tau,"
                    "resolution_time_fs,regime_constant\n";
  for (const auto& r : rows) {
    csv += csv_number(r.value) + "," + csv_number(r.fit.slope) + "," + csv_number(r.fit.r2) + "," +
           (std::isnan(r.fwhm_center) ? "nan" : csv_number(r.fwhm_center)) + "," + csv_number(r.fwhm_min) + "," +
           csv_number(r.fwhm_max) + "," + csv_number(r.params.Sigma_tau) + "," + csv_number(r.res.full_fs) + "," +
           csv_number(r.params.regime_constant()) + "\n";
  }
  auto meta = sidecar("sweep", cfg, opt);
  meta.set("sweep_key", key);
  std::string vs;
  for (double v : values)
    vs += (vs.empty() ? "" : " ") + csv_number(v);
  meta.set("sweep_values", vs);
  w.write("sweep.csv", csv);
  w.write("sweep.meta", finish(meta));
}

std::string json_error(const char* kind, const std::string& key, const std::string& message, int code) {
  nlohmann::json j;
  j["error"] = kind;
  if (!key.empty())
    j["key"] = key;
  j["message"] = message;
  j["exit_code"] = code;
  return j.dump();
}

} // namespace

std::vector<std::string> subcommands() { return {"phimap", "correlate", "gauss", "compare", "image", "sweep"}; }

RunResult error_result(std::exception_ptr e) {
  RunResult r;
  try {
    std::rethrow_exception(e);
  } catch (const ConfigError& x) {
    r.exit_code = exit_config;
    r.error = json_error("config", x.key(), x.what(), r.exit_code);
  } catch (const DomainError& x) {
    r.exit_code = exit_domain;
    r.error = json_error("domain", {}, x.what(), r.exit_code);
  } catch (const IoError& x) {
    r.exit_code = exit_io;
    r.error = json_error("io", {}, x.what(), r.exit_code);
  } catch (const std::filesystem::filesystem_error& x) {
    r.exit_code = exit_io;
    r.error = json_error("io", {}, x.what(), r.exit_code);
  } catch (const std::exception& x) {
    r.exit_code = exit_domain;
    r.error = json_error("internal", {}, x.what(), r.exit_code);
  }
  return r;
}

RunResult run(const std::string& subcommand, const RunConfig& cfg, const std::filesystem::path& out_dir,
              const RunOptions& options) {
  using Fn = void (*)(const RunConfig&, const RunOptions&, Writer&);
  Fn fn = nullptr;
  if (subcommand == "phimap")
    fn = run_phimap;
  else if (subcommand == "correlate")
    fn = run_correlate;
  else if (subcommand == "gauss")
    fn = run_gauss;
  else if (subcommand == "compare")
    fn = run_compare;
  else if (subcommand == "image")
    fn = run_image;
  else if (subcommand == "sweep")
    fn = run_sweep;
  if (!fn) {
    RunResult r;
    r.exit_code = exit_config;
    r.error = json_error("usage", {}, "unknown subcommand '" + subcommand + "'", r.exit_code);
    return r;
  }

  std::unique_ptr<Writer> writer;
  try {
    writer = std::make_unique<Writer>(out_dir);
    fn(cfg, options, *writer);
    return {exit_ok, {}, writer->files()};
  } catch (...) {
    if (writer)
      writer->rollback();
    return error_result(std::current_exception());
  }
}

} // namespace t2x
