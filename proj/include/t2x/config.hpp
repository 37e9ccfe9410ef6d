#pragma once

#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "t2x/correlate.hpp"
#include "t2x/io.hpp"
#include "t2x/pdc.hpp"

namespace t2x {

/// Every run setting, in the units named by its key suffix.
///
///   [crystal]  material, material_file, length_mm, pump_wavelength_nm, cut_angle_deg
///   [pump]     tau_p_fs, waist_mm, amplitude
///   [filter]   q_c_q0, delta_q_q0, omega_c_omega0, focal_length_mm, gdd_fs2, t_test_fs, t_ref_fs
///   [grid]     n_x1, n_omega1, n_omega_plus, n_fft, x1_margin, strip_lobes, pump_margin
///   [phimap]   n_q, n_omega
///   [model]    sigma_s
///   [output]   matrix
///   [sweep]    key, values
struct RunConfig {
  std::string material = "bbo";
  std::string material_file; ///< overrides `material` when set
  double length_mm = 5.0;
  double pump_wavelength_nm = 532.0;
  std::optional<double> cut_angle_deg; ///< empty: solve for collinear matching

  double tau_p_fs = 200.0;
  double waist_mm = std::numeric_limits<double>::infinity();
  double amplitude = 1.0;

  double q_c_q0 = 6.0;
  double delta_q_q0 = 4.0;
  double omega_c_omega0 = 15.0;
  double focal_length_mm = 50.0;
  double gdd_fs2 = 5233.0;
  double t_test_fs = 0.0;
  double t_ref_fs = 0.0;

  GridConfig grid;
  int phimap_n_q = 241;
  int phimap_n_omega = 301;
  double sigma_s = 1.61;
  bool matrix = false;

  std::string sweep_key;
  std::vector<double> sweep_values;

  bool operator==(const RunConfig&) const = default;
};

/// Sectioned `key = value` text; `#` starts a comment. A key containing a dot
/// is fully qualified and may appear outside any section.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Full config (defaults included) in the same format; parse_config inverts it.
std::string emit_config(const RunConfig& cfg);

/// Set one fully qualified key from its text form.
void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value);
/// Every recognized fully qualified key, in emit order.
std::vector<std::string> config_keys();

/// Resolved pipeline objects in canonical units (µm, fs, rad).
Crystal build_crystal(const RunConfig& cfg, const std::filesystem::path& base_dir = {});
Biphoton build_biphoton(const RunConfig& cfg, const std::filesystem::path& base_dir = {});

/// Config echo for metadata sidecars (keys prefixed `config.`).
Metadata describe_config(const RunConfig& cfg);

/// Two-column `t_fs,T` CSV resampled onto `t2` by linear interpolation and
/// clamped to the end values outside its span.
std::vector<double> parse_object(const std::string& text, const std::vector<double>& t2);
std::vector<double> load_object(const std::filesystem::path& path, const std::vector<double>& t2);

} // namespace t2x
