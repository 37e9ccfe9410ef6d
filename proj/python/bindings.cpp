#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "t2x/app.hpp"
#include "t2x/config.hpp"
#include "t2x/correlate.hpp"
#include "t2x/errors.hpp"
#include "t2x/gaussmodel.hpp"
#include "t2x/units.hpp"

namespace py = pybind11;

namespace {

py::dict meta_dict(const t2x::Metadata& m) {
  py::dict d;
  for (const auto& [k, v] : m.entries())
    d[py::str(k)] = v;
  return d;
}

py::array_t<double> to_array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

py::array_t<double> to_array2(const std::vector<double>& v, std::size_t rows, std::size_t cols) {
  py::array_t<double> a({rows, cols});
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

py::dict map_dict(const t2x::CorrelationMap& m) {
  py::dict d;
  d["x1_um"] = to_array(m.x1);
  d["t2_fs"] = to_array(m.t2);
  d["values"] = to_array2(m.values, m.x1.size(), m.t2.size());
  d["raw_peak"] = m.raw_peak;
  d["max_imag_residue"] = m.max_imag_residue;
  d["meta"] = meta_dict(m.meta);
  return d;
}

t2x::Biphoton biphoton(const t2x::RunConfig& c) { return t2x::build_biphoton(c); }

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Time-to-space correlation maps of type-I PDC biphotons";

  py::register_exception<t2x::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<t2x::DomainError>(m, "DomainError", PyExc_ArithmeticError);
  py::register_exception<t2x::IoError>(m, "IoError", PyExc_OSError);

  py::class_<t2x::RunConfig>(m, "Config")
      .def(py::init<>())
      .def_static("parse", &t2x::parse_config, py::arg("text"))
      .def_static("load", [](const std::string& p) { return t2x::load_config(p); }, py::arg("path"))
      .def("set", &t2x::set_config_value, py::arg("key"), py::arg("value"))
      .def("emit", &t2x::emit_config)
      .def_static("keys", &t2x::config_keys)
      .def("__eq__", [](const t2x::RunConfig& a, const t2x::RunConfig& b) { return a == b; })
      .def("__repr__", [](const t2x::RunConfig& c) { return t2x::emit_config(c); });

  m.def("dispersion", [](const t2x::RunConfig& c) {
    const auto b = biphoton(c);
    const auto& d = b.dispersion();
    py::dict r;
    r["k0"] = d.k0;
    r["k0_prime"] = d.k0_prime;
    r["k0_double_prime"] = d.k0_double_prime;
    r["q0"] = d.q0;
    r["Omega0"] = d.Omega0;
    r["pump_k_prime"] = d.pump_k_prime;
    r["cut_angle_deg"] = t2x::units::deg(b.crystal().cut_angle_rad());
    r["collinear_residual"] = b.crystal().collinear_residual();
    return r;
  }, py::arg("config"), "Dispersion summary in µm, fs and rad units.");

  m.def("passbands", [](const t2x::RunConfig& c) {
    const auto p = t2x::passbands(biphoton(c));
    py::dict r;
    r["ref_lambda_um"] = py::make_tuple(p.ref_lambda_min_um, p.ref_lambda_max_um);
    r["test_lambda_um"] = py::make_tuple(p.test_lambda_min_um, p.test_lambda_max_um);
    return r;
  }, py::arg("config"));

  m.def("gaussian_params", [](const t2x::RunConfig& c) {
    return meta_dict(t2x::gaussian_params(biphoton(c), c.sigma_s).describe());
  }, py::arg("config"));

  m.def("sigma_tau", &t2x::sigma_tau, py::arg("sigma_nu"), py::arg("sigma_p"), py::arg("D"));

  m.def("phi_map", [](const t2x::RunConfig& c, int threads) {
    const auto b = biphoton(c);
    const auto axes = t2x::default_phi_axes(b, c.phimap_n_q, c.phimap_n_omega);
    t2x::ComplexField2D f;
    {
      py::gil_scoped_release release;
      f = t2x::phi_degenerate_map(b, axes.q, axes.omega, threads);
    }
    py::array_t<std::complex<double>> v({axes.q.size(), axes.omega.size()});
    std::copy(f.values.begin(), f.values.end(), v.mutable_data());
    py::dict r;
    r["q"] = to_array(axes.q);
    r["omega"] = to_array(axes.omega);
    r["values"] = v;
    r["meta"] = meta_dict(f.meta);
    return r;
  }, py::arg("config"), py::arg("threads") = 0);

  m.def("correlation_map", [](const t2x::RunConfig& c, const std::string& path, double grid_scale, int threads) {
    const auto b = biphoton(c);
    const auto g = t2x::make_grid(b, c.grid.scaled(grid_scale));
    t2x::CorrelationMap map;
    t2x::CorrelationMetrics metrics;
    {
      py::gil_scoped_release release;
      map = t2x::correlation_map(b, g, t2x::parse_path(path), threads);
      metrics = t2x::extract_metrics(map);
    }
    py::dict r = map_dict(map);
    r["metrics"] = meta_dict(metrics.describe());
    return r;
  }, py::arg("config"), py::arg("path") = "fast", py::arg("grid_scale") = 1.0, py::arg("threads") = 0,
     "Peak-normalized C(x1, t2) as a dict of numpy arrays plus ridge metrics.");

  m.def("gauss_map", [](const t2x::RunConfig& c) {
    const auto b = biphoton(c);
    const auto g = t2x::make_grid(b, c.grid);
    const t2x::GaussianModel model(b, c.sigma_s);
    auto t2 = g.tau_axis();
    for (auto& t : t2)
      t += b.filter().t_test_fs;
    return map_dict(model.evaluate(g.x1, t2));
  }, py::arg("config"));

  m.def("compare", [](const t2x::RunConfig& c, int threads) {
    const auto b = biphoton(c);
    const auto g = t2x::make_grid(b, c.grid);
    t2x::ComparisonReport rep;
    {
      py::gil_scoped_release release;
      const auto map = t2x::correlation_map(b, g, t2x::CorrelationPath::fast, threads);
      rep = t2x::compare(map, t2x::GaussianModel(b, c.sigma_s));
    }
    return meta_dict(rep.describe());
  }, py::arg("config"), py::arg("threads") = 0);

  m.def("run", [](const std::string& sub, const t2x::RunConfig& c, const std::filesystem::path& out,
                  const std::string& path, double grid_scale, int threads, const std::filesystem::path& object) {
    t2x::RunOptions opt;
    opt.path = t2x::parse_path(path);
    opt.grid_scale = grid_scale;
    opt.threads = threads;
    opt.object = object;
    t2x::RunResult r;
    {
      py::gil_scoped_release release;
      r = t2x::run(sub, c, out, opt);
    }
    return py::make_tuple(r.exit_code, r.error, r.files);
  }, py::arg("subcommand"), py::arg("config"), py::arg("out_dir"), py::arg("path") = "fast",
     py::arg("grid_scale") = 1.0, py::arg("threads") = 0, py::arg("object") = std::filesystem::path{},
     "Same file set as the CLI; returns (exit_code, error_json, files).");
}
