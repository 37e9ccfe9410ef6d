#include "t2x/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>

#include "t2x/dispersion.hpp"
#include "t2x/errors.hpp"
#include "t2x/units.hpp"
#include "text_util.hpp"

namespace t2x {

namespace {

std::string exact(double v) {
  if (std::isinf(v))
    return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double to_double(const std::string& key, const std::string& s) {
  const std::string t = detail::trim(s);
  if (t.empty())
    throw ConfigError(key, key + ": empty value");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (end != t.c_str() + t.size() || errno == ERANGE || std::isnan(v))
    throw ConfigError(key, key + ": '" + t + "' is not a number");
  return v;
}

int to_int(const std::string& key, const std::string& s) {
  const double v = to_double(key, s);
  if (v != std::floor(v) || std::abs(v) > 1e9)
    throw ConfigError(key, key + ": '" + detail::trim(s) + "' is not an integer");
  return static_cast<int>(v);
}

bool to_bool(const std::string& key, const std::string& s) {
  const std::string t = detail::lower(detail::trim(s));
  if (t == "true" || t == "1" || t == "yes")
    return true;
  if (t == "false" || t == "0" || t == "no")
    return false;
  throw ConfigError(key, key + ": '" + t + "' is not a boolean");
}

std::vector<double> to_list(const std::string& key, const std::string& s) {
  std::string t = detail::trim(s);
  if (!t.empty() && t.front() == '[') {
    if (t.back() != ']')
      throw ConfigError(key, key + ": unterminated list");
    t = t.substr(1, t.size() - 2);
  }
  std::vector<double> out;
  if (detail::trim(t).empty())
    return out;
  for (const auto& item : detail::split(t, ','))
    out.push_back(to_double(key, item));
  return out;
}

std::string list_text(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i)
    out += (i ? ", " : "") + exact(v[i]);
  return out + "]";
}

struct Key {
  std::string name;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define T2X_DOUBLE(key, field)                                                                                 \
  Key {                                                                                                        \
    key, [](RunConfig& c, const std::string& v) { c.field = to_double(key, v); },                              \
        [](const RunConfig& c) { return exact(c.field); }                                                      \
  }
#define T2X_INT(key, field)                                                                                    \
  Key {                                                                                                        \
    key, [](RunConfig& c, const std::string& v) { c.field = to_int(key, v); },                                 \
        [](const RunConfig& c) { return std::to_string(c.field); }                                             \
  }

const std::vector<Key>& key_table() {
  static const std::vector<Key> keys = {
      {"crystal.material", [](RunConfig& c, const std::string& v) { c.material = detail::trim(v); },
       [](const RunConfig& c) { return c.material; }},
      {"crystal.material_file", [](RunConfig& c, const std::string& v) { c.material_file = detail::trim(v); },
       [](const RunConfig& c) { return c.material_file; }},
      T2X_DOUBLE("crystal.length_mm", length_mm),
      T2X_DOUBLE("crystal.pump_wavelength_nm", pump_wavelength_nm),
      {"crystal.cut_angle_deg",
       [](RunConfig& c, const std::string& v) {
         if (detail::lower(detail::trim(v)) == "auto")
           c.cut_angle_deg.reset();
         else
           c.cut_angle_deg = to_double("crystal.cut_angle_deg", v);
       },
       [](const RunConfig& c) { return c.cut_angle_deg ? exact(*c.cut_angle_deg) : std::string("auto"); }},
      T2X_DOUBLE("pump.tau_p_fs", tau_p_fs),
      T2X_DOUBLE("pump.waist_mm", waist_mm),
      T2X_DOUBLE("pump.amplitude", amplitude),
      T2X_DOUBLE("filter.q_c_q0", q_c_q0),
      T2X_DOUBLE("filter.delta_q_q0", delta_q_q0),
      T2X_DOUBLE("filter.omega_c_omega0", omega_c_omega0),
      T2X_DOUBLE("filter.focal_length_mm", focal_length_mm),
      T2X_DOUBLE("filter.gdd_fs2", gdd_fs2),
      T2X_DOUBLE("filter.t_test_fs", t_test_fs),
      T2X_DOUBLE("filter.t_ref_fs", t_ref_fs),
      T2X_INT("grid.n_x1", grid.n_x1),
      T2X_INT("grid.n_omega1", grid.n_omega1),
      T2X_INT("grid.n_omega_plus", grid.n_omega_plus),
      T2X_INT("grid.n_fft", grid.n_fft),
      T2X_DOUBLE("grid.x1_margin", grid.x1_margin),
      T2X_DOUBLE("grid.strip_lobes", grid.strip_lobes),
      T2X_DOUBLE("grid.pump_margin", grid.pump_margin),
      T2X_INT("phimap.n_q", phimap_n_q),
      T2X_INT("phimap.n_omega", phimap_n_omega),
      T2X_DOUBLE("model.sigma_s", sigma_s),
      {"output.matrix", [](RunConfig& c, const std::string& v) { c.matrix = to_bool("output.matrix", v); },
       [](const RunConfig& c) { return std::string(c.matrix ? "true" : "false"); }},
      {"sweep.key", [](RunConfig& c, const std::string& v) { c.sweep_key = detail::trim(v); },
       [](const RunConfig& c) { return c.sweep_key; }},
      {"sweep.values", [](RunConfig& c, const std::string& v) { c.sweep_values = to_list("sweep.values", v); },
       [](const RunConfig& c) { return list_text(c.sweep_values); }},
  };
  return keys;
}

#undef T2X_DOUBLE
#undef T2X_INT

const Key* find_key(const std::string& name) {
  for (const auto& k : key_table())
    if (k.name == name)
      return &k;
  return nullptr;
}

} // namespace

void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value) {
  const Key* k = find_key(key);
  if (!k)
    throw ConfigError(key, "unknown config key '" + key + "'");
  k->set(cfg, value);
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& k : key_table())
    out.push_back(k.name);
  return out;
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::string section;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    const std::string raw = text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
    pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    const std::string line = detail::trim(detail::strip_comment(raw));
    if (line.empty())
      continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config", where + "malformed section header '" + line + "'");
      section = detail::trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config", where + "expected 'key = value', got '" + line + "'");
    std::string key = detail::trim(line.substr(0, eq));
    const std::string value = line.substr(eq + 1);
    if (key.find('.') == std::string::npos) {
      if (section.empty())
        throw ConfigError(key, where + "key '" + key + "' outside any section");
      key = section + "." + key;
    }
    const Key* k = find_key(key);
    if (!k)
      throw ConfigError(key, where + "unknown config key '" + key + "'");
    try {
      k->set(cfg, value);
    } catch (const ConfigError& e) {
      throw ConfigError(e.key(), where + e.what());
    }
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) { return parse_config(read_text_file(path)); }

std::string emit_config(const RunConfig& cfg) {
  std::string out;
  std::string section;
  for (const auto& k : key_table()) {
    const auto dot = k.name.find('.');
    const std::string s = k.name.substr(0, dot);
    if (s != section) {
      out += (section.empty() ? "[" : "\n[") + s + "]\n";
      section = s;
    }
    out += k.name.substr(dot + 1) + " = " + k.get(cfg) + "\n";
  }
  return out;
}

Metadata describe_config(const RunConfig& cfg) {
  Metadata m;
  for (const auto& k : key_table())
    m.set("config." + k.name, k.get(cfg));
  return m;
}

Crystal build_crystal(const RunConfig& cfg, const std::filesystem::path& base_dir) {
  CrystalConfig cc;
  if (!cfg.material_file.empty()) {
    std::filesystem::path p = cfg.material_file;
    if (p.is_relative() && !base_dir.empty())
      p = base_dir / p;
    cc.material = load_material(p);
  } else {
    auto m = materials::builtin(cfg.material);
    if (!m)
      throw ConfigError("crystal.material", "unknown built-in material '" + cfg.material + "'");
    cc.material = *m;
  }
  cc.length_um = cfg.length_mm * units::um_per_mm;
  cc.pump_wavelength_um = cfg.pump_wavelength_nm * units::um_per_nm;
  if (cfg.cut_angle_deg)
    cc.cut_angle_rad = units::rad(*cfg.cut_angle_deg);
  return Crystal(cc);
}

Biphoton build_biphoton(const RunConfig& cfg, const std::filesystem::path& base_dir) {
  Crystal crystal = build_crystal(cfg, base_dir);
  const auto scales = characteristic_scales(crystal);

  PumpConfig pump;
  pump.tau_fwhm_fs = cfg.tau_p_fs;
  pump.waist_um = cfg.waist_mm * units::um_per_mm;
  pump.amplitude = cfg.amplitude;

  FilterGeometryConfig f;
  f.q_c = cfg.q_c_q0 * scales.q0;
  f.delta_q = cfg.delta_q_q0 * scales.q0;
  f.Omega_c = cfg.omega_c_omega0 * scales.Omega0;
  f.focal_length_um = cfg.focal_length_mm * units::um_per_mm;
  f.gdd_fs2 = cfg.gdd_fs2;
  f.t_test_fs = cfg.t_test_fs;
  f.t_ref_fs = cfg.t_ref_fs;
  if (!(cfg.delta_q_q0 > 0.0))
    throw ConfigError("filter.delta_q_q0", "filter.delta_q_q0 must be > 0");
  if (!(cfg.q_c_q0 > cfg.delta_q_q0))
    throw ConfigError("filter.q_c_q0", "filter.q_c_q0 must exceed filter.delta_q_q0");
  return Biphoton(std::move(crystal), pump, f);
}

std::vector<double> parse_object(const std::string& text, const std::vector<double>& t2) {
  std::vector<double> ts;
  std::vector<double> vs;
  std::size_t lineno = 0;
  for (const auto& raw : detail::split(text, '\n')) {
    ++lineno;
    const std::string line = detail::trim(detail::strip_comment(raw));
    if (line.empty())
      continue;
    const auto cols = detail::split(line, ',');
    if (cols.size() != 2)
      throw ConfigError("object", "object line " + std::to_string(lineno) + ": expected two columns 't_fs,T'");
    if (ts.empty() && vs.empty() && detail::lower(detail::trim(cols[0])) == "t_fs")
      continue;
    const std::string where = "object line " + std::to_string(lineno);
    const double t = to_double("object", cols[0]);
    const double v = to_double("object", cols[1]);
    if (!std::isfinite(t))
      throw ConfigError("object", where + ": time must be finite");
    if (!(v >= 0.0 && v <= 1.0))
      throw ConfigError("object", where + ": T = " + detail::trim(cols[1]) + " outside [0, 1]");
    if (!ts.empty() && !(t > ts.back()))
      throw ConfigError("object", where + ": times must be strictly increasing");
    ts.push_back(t);
    vs.push_back(v);
  }
  if (ts.empty())
    throw ConfigError("object", "object file has no samples");

  std::vector<double> out(t2.size());
  for (std::size_t k = 0; k < t2.size(); ++k) {
    const double t = t2[k];
    double v;
    if (t <= ts.front()) {
      v = vs.front();
    } else if (t >= ts.back()) {
      v = vs.back();
    } else {
      const auto it = std::upper_bound(ts.begin(), ts.end(), t);
      const auto i = static_cast<std::size_t>(it - ts.begin());
      const double a = (t - ts[i - 1]) / (ts[i] - ts[i - 1]);
      v = vs[i - 1] + a * (vs[i] - vs[i - 1]);
    }
    out[k] = std::clamp(v, 0.0, 1.0);
  }
  return out;
}

std::vector<double> load_object(const std::filesystem::path& path, const std::vector<double>& t2) {
  return parse_object(read_text_file(path), t2);
}

} // namespace t2x
